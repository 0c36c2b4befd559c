"""Evaluation contract and concrete benchmarks.

A benchmark maps a native-domain configuration to a validation error in
[0, 1], an optional test error, and a training cost in seconds. Three
families are provided:

* :class:`TabularBenchmark` -- a lookup table over a finite discrete space,
  loadable from a JSON Lines file; configurations absent from the table are
  invalid (the optimizers penalize them with error 1 at zero cost).
* :func:`make_synthetic` -- a seeded, exhaustively enumerated table with an
  additive-plus-pairwise score model, so nearby configurations have similar
  errors and the global optimum is known by construction.
* :func:`continuous_function` -- sphere/rastrigin over a box, with the raw
  objective squashed into [0, 1).

All benchmarks are immutable after construction and their ``evaluate`` is a
pure function, safe for any number of concurrent callers.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from .space import Configuration, ParameterSpec, SearchSpace

# configurations at most this large may be enumerated exhaustively
MAX_SYNTHETIC_CONFIGS = 10**6


class BenchmarkLoadError(ValueError):
    """A tabular benchmark file failed validation; the message names the row."""


@dataclass(frozen=True)
class EvaluationResult:
    """Outcome of evaluating one configuration.

    For invalid configurations the optimizer substitutes a validation error
    of 1.0 and zero cost regardless of what the benchmark filled in here.
    """

    valid: bool
    validation_error: float
    test_error: float | None = None
    cost_seconds: float = 0.0

    @classmethod
    def invalid(cls) -> "EvaluationResult":
        return cls(valid=False, validation_error=1.0, test_error=None, cost_seconds=0.0)


@runtime_checkable
class Benchmark(Protocol):
    """What optimizers and the harness need from an objective."""

    space: SearchSpace
    benchmark_id: str
    best_validation_error: float
    best_test_error: float | None

    def evaluate(self, config: Configuration) -> EvaluationResult: ...


@dataclass(frozen=True)
class TabularBenchmark:
    """Finite lookup benchmark; keys are native-value configuration tuples.

    Only categorical/ordinal/integer parameters are allowed (float-keyed
    lookup is ill-defined). Best-known errors are recomputed from the table
    at construction, never trusted from a file. Missing keys are invalid.
    """

    space: SearchSpace
    table: dict[Configuration, tuple[float, float | None, float]]
    benchmark_id: str
    best_validation_error: float = field(init=False)
    best_test_error: float | None = field(init=False)

    def __post_init__(self):
        for p in self.space.params:
            if p.kind == "float":
                raise ValueError(
                    f"tabular benchmarks require discrete parameters; {p.name!r} is float"
                )
        if not self.table:
            raise ValueError("tabular benchmark needs at least one listed configuration")
        for key, (val, test, cost) in self.table.items():
            _check_row(self.space, key, val, test, cost, where=repr(key))
        best_val = min(val for val, _, _ in self.table.values())
        tests = [t for _, t, _ in self.table.values() if t is not None]
        object.__setattr__(self, "best_validation_error", best_val)
        object.__setattr__(self, "best_test_error", min(tests) if tests else None)

    @property
    def size(self) -> int:
        return len(self.table)

    def evaluate(self, config: Configuration) -> EvaluationResult:
        row = self.table.get(tuple(config))
        if row is None:
            return EvaluationResult.invalid()
        val, test, cost = row
        return EvaluationResult(valid=True, validation_error=val, test_error=test, cost_seconds=cost)


def _check_row(space, key, val, test, cost, where: str):
    if not space.contains(key):
        raise BenchmarkLoadError(f"{where}: key {key!r} outside the declared space")
    if not 0.0 <= val <= 1.0:
        raise BenchmarkLoadError(f"{where}: validation error {val} outside [0, 1]")
    if test is not None and not 0.0 <= test <= 1.0:
        raise BenchmarkLoadError(f"{where}: test error {test} outside [0, 1]")
    if not cost >= 0.0:
        raise BenchmarkLoadError(f"{where}: negative cost {cost}")


def _canonical_key(space: SearchSpace, raw) -> Configuration:
    if not isinstance(raw, list) or len(raw) != space.dimension:
        raise BenchmarkLoadError(f"key {raw!r} is not a {space.dimension}-element list")
    key = []
    for p, v in zip(space.params, raw):
        if p.kind == "integer":
            if isinstance(v, bool) or not isinstance(v, int):
                raise BenchmarkLoadError(f"key component {v!r} for {p.name!r} is not an integer")
        elif not isinstance(v, str):
            raise BenchmarkLoadError(f"key component {v!r} for {p.name!r} is not a token")
        key.append(v)
    return tuple(key)


def load_tabular(path: str | Path) -> TabularBenchmark:
    """Load a JSON Lines tabular benchmark.

    Line 1 is a header holding the search-space document (and optionally a
    ``benchmark_id``); every further line is one configuration record
    ``{"key": [...], "val_err": ..., "test_err": ..., "cost": ...}``.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise BenchmarkLoadError(f"{path}: empty benchmark file")

    def fail(lineno: int, msg: str):
        raise BenchmarkLoadError(f"{path}:{lineno}: {msg}")

    try:
        header = json.loads(lines[0])
        space = SearchSpace.from_json_dict(header)
    except (json.JSONDecodeError, ValueError) as exc:
        raise BenchmarkLoadError(f"{path}:1: bad header: {exc}") from exc
    benchmark_id = header.get("benchmark_id", f"tabular:{path.stem}")

    table: dict[Configuration, tuple[float, float | None, float]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            fail(lineno, f"bad JSON: {exc}")
        missing = {"key", "val_err", "cost"} - set(row)
        if missing:
            fail(lineno, f"record lacks fields {sorted(missing)}")
        try:
            key = _canonical_key(space, row["key"])
            _check_row(space, key, row["val_err"], row.get("test_err"), row["cost"],
                       where=f"line {lineno}")
        except BenchmarkLoadError as exc:
            fail(lineno, str(exc))
        if key in table:
            fail(lineno, f"duplicate configuration key {list(key)!r}")
        table[key] = (row["val_err"], row.get("test_err"), row["cost"])

    if not table:
        raise BenchmarkLoadError(f"{path}: no configuration records")
    return TabularBenchmark(space=space, table=table, benchmark_id=benchmark_id)


def write_tabular(bench: TabularBenchmark, path: str | Path):
    """Write a tabular benchmark in the format :func:`load_tabular` reads.

    Rows are sorted by key, so identical benchmarks serialize to identical
    bytes.
    """
    path = Path(path)
    header = bench.space.to_json_dict()
    header["benchmark_id"] = bench.benchmark_id
    out = [json.dumps(header, separators=(",", ":"))]
    for key in sorted(bench.table):
        val, test, cost = bench.table[key]
        out.append(json.dumps(
            {"key": list(key), "val_err": val, "test_err": test, "cost": cost},
            separators=(",", ":"),
        ))
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(out) + "\n")
    tmp.replace(path)


COST_MODELS = ("unit", "lognormal")


def make_synthetic(
    num_params: int,
    choices_per_param: int,
    invalid_fraction: float = 0.0,
    cost_model: str = "lognormal",
    seed: int = 0,
) -> TabularBenchmark:
    """Build a seeded synthetic tabular benchmark with a known optimum.

    The space is ``num_params`` categorical parameters with
    ``choices_per_param`` tokens each. Every configuration gets a validation
    error from per-choice main effects plus weaker pairwise interactions
    (min-max rescaled into [0.05, 0.95]), so configurations sharing choices
    have similar errors. Test errors are the validation errors plus small
    clipped noise. Exactly ``floor(total * invalid_fraction)`` seeded
    configurations are dropped from the table, which marks them invalid.
    """
    if num_params < 1 or choices_per_param < 1:
        raise ValueError("need at least one parameter and one choice")
    if not 0.0 <= invalid_fraction < 1.0:
        raise ValueError(f"invalid_fraction must be in [0, 1), got {invalid_fraction}")
    if cost_model not in COST_MODELS:
        raise ValueError(f"unknown cost model {cost_model!r}; pick one of {COST_MODELS}")
    total = choices_per_param**num_params
    if total > MAX_SYNTHETIC_CONFIGS:
        raise ValueError(
            f"{num_params} params x {choices_per_param} choices enumerates to "
            f"{total} configurations, above the limit of {MAX_SYNTHETIC_CONFIGS}"
        )

    tokens = tuple(f"c{i}" for i in range(choices_per_param))
    space = SearchSpace(params=tuple(
        ParameterSpec(name=f"p{i}", kind="categorical", choices=tokens)
        for i in range(num_params)
    ))

    rng = np.random.default_rng(seed)
    main = rng.normal(0.0, 1.0, size=(num_params, choices_per_param))
    pairs = list(itertools.combinations(range(num_params), 2))
    inter = rng.normal(0.0, 0.5, size=(len(pairs), choices_per_param, choices_per_param))

    idx = np.array(list(itertools.product(range(choices_per_param), repeat=num_params)),
                   dtype=np.intp)
    raw = np.zeros(total)
    for p in range(num_params):
        raw += main[p, idx[:, p]]
    for k, (p, q) in enumerate(pairs):
        raw += inter[k, idx[:, p], idx[:, q]]

    span = raw.max() - raw.min()
    if span > 0:
        val_err = 0.05 + 0.9 * (raw - raw.min()) / span
    else:
        val_err = np.full(total, 0.5)
    test_err = np.clip(val_err + rng.normal(0.0, 0.02, size=total), 0.0, 1.0)
    if cost_model == "unit":
        cost = np.ones(total)
    else:
        cost = rng.lognormal(mean=0.0, sigma=0.5, size=total)

    n_invalid = int(math.floor(total * invalid_fraction))
    invalid = set(rng.choice(total, size=n_invalid, replace=False).tolist())

    table = {}
    for row, combo in enumerate(idx):
        if row in invalid:
            continue
        key = tuple(tokens[c] for c in combo)
        table[key] = (float(val_err[row]), float(test_err[row]), float(cost[row]))

    benchmark_id = (
        f"synthetic:{num_params}x{choices_per_param}"
        f":invalid={invalid_fraction:g}:cost={cost_model}:seed={seed}"
    )
    return TabularBenchmark(space=space, table=table, benchmark_id=benchmark_id)


def _sphere(x: np.ndarray) -> float:
    return float(np.sum(x * x))


def _rastrigin(x: np.ndarray) -> float:
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


_FUNCTIONS = {"sphere": _sphere, "rastrigin": _rastrigin}


@dataclass(frozen=True)
class FunctionBenchmark:
    """Continuous test function over a box, squashed into the error scale.

    The raw objective ``f >= 0`` (minimum 0 at the origin) is mapped to
    ``f / (1 + f)``, a strictly increasing squash onto [0, 1), so the
    benchmark's best validation error is exactly 0. Every evaluation costs
    one second. There is no test metric.
    """

    name: str
    dimension: int
    lo: float = -5.0
    hi: float = 5.0
    space: SearchSpace = field(init=False)
    benchmark_id: str = field(init=False)
    best_validation_error: float = field(init=False, default=0.0)
    best_test_error: None = field(init=False, default=None)

    def __post_init__(self):
        if self.name not in _FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}; pick one of {sorted(_FUNCTIONS)}")
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if not self.lo < self.hi:
            raise ValueError(f"requires lo < hi, got [{self.lo}, {self.hi}]")
        if not self.lo <= 0.0 <= self.hi:
            # the advertised optimum is the origin, so it must be feasible
            raise ValueError(f"bounds [{self.lo}, {self.hi}] must contain 0")
        object.__setattr__(self, "space", SearchSpace(params=tuple(
            ParameterSpec(name=f"x{i}", kind="float", lo=self.lo, hi=self.hi)
            for i in range(self.dimension)
        )))
        object.__setattr__(
            self, "benchmark_id",
            f"{self.name}:{self.dimension}:lo={self.lo:g}:hi={self.hi:g}",
        )

    def evaluate(self, config: Configuration) -> EvaluationResult:
        x = np.asarray(config, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(f"expected {self.dimension} coordinates, got {x.shape}")
        f = _FUNCTIONS[self.name](x)
        return EvaluationResult(
            valid=True,
            validation_error=f / (1.0 + f),
            test_error=None,
            cost_seconds=1.0,
        )


def continuous_function(name: str, dimension: int, lo: float = -5.0, hi: float = 5.0) -> FunctionBenchmark:
    return FunctionBenchmark(name=name, dimension=dimension, lo=lo, hi=hi)
