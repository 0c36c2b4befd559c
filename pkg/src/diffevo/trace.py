"""Run traces: the unit of all analysis.

Every optimizer run produces a :class:`RunTrace`, an ordered list of
evaluation events with cumulative cost and the best-so-far (incumbent)
objective. The :class:`RunRecorder` centralizes the shared run mechanics:
the budget check before each evaluation, discretizing a copy of the
genotype, the invalid-configuration penalty (error 1.0 at zero cost), and
incumbent tracking.

Traces persist as JSON Lines: one header line per run followed by one line
per event. The header carries the benchmark's best-known errors so trace
files can be re-aggregated without reloading the benchmark.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .benchmarks import Benchmark
from .space import SearchSpace


@dataclass(frozen=True)
class Budget:
    """Evaluation and/or cost limit; a run stops at whichever hits first."""

    max_evaluations: int | None = None
    max_cost: float | None = None

    def __post_init__(self):
        if self.max_evaluations is None and self.max_cost is None:
            raise ValueError("budget needs max_evaluations and/or max_cost")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ValueError(f"max_evaluations must be positive, got {self.max_evaluations}")
        if self.max_cost is not None and self.max_cost <= 0:
            raise ValueError(f"max_cost must be positive, got {self.max_cost}")


@dataclass(frozen=True)
class TraceEvent:
    eval_index: int
    cumulative_cost: float
    objective: float
    incumbent_objective: float
    incumbent_test_error: float | None
    valid: bool


@dataclass(frozen=True)
class RunTrace:
    """One optimizer run: identity, benchmark reference points, events."""

    seed: int
    optimizer_id: str
    benchmark_id: str
    best_validation_error: float
    best_test_error: float | None
    events: tuple[TraceEvent, ...]
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def final_event(self) -> TraceEvent:
        return self.events[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([e.cumulative_cost for e in self.events])


class BudgetExhausted(Exception):
    """Internal control flow: raised by the recorder when the budget is hit."""


class RunRecorder:
    """Accumulates trace events for a single sequential run.

    ``evaluate`` checks the budget first and raises :class:`BudgetExhausted`
    once a limit is reached, so optimizer loops need no explicit budget
    bookkeeping and may stop mid-generation.
    """

    def __init__(self, bench: Benchmark, budget: Budget):
        self.bench = bench
        self.budget = budget
        self.events: list[TraceEvent] = []
        self.cumulative_cost = 0.0
        self._inc_objective = math.inf
        self._inc_test: float | None = None
        self._inc_valid = False

    def exhausted(self) -> bool:
        if (self.budget.max_evaluations is not None
                and len(self.events) >= self.budget.max_evaluations):
            return True
        if self.budget.max_cost is not None and self.cumulative_cost >= self.budget.max_cost:
            return True
        return False

    def evaluate(self, genotype: np.ndarray, space: SearchSpace) -> float:
        """Discretize a copy of ``genotype``, evaluate it, record the event.

        Returns the fitness the optimizer should use: the validation error
        for valid configurations, 1.0 for invalid ones (at zero cost).
        """
        if self.exhausted():
            raise BudgetExhausted
        result = self.bench.evaluate(space.discretize(genotype))
        if result.valid:
            objective = result.validation_error
            cost = result.cost_seconds
            test = result.test_error
        else:
            objective, cost, test = 1.0, 0.0, None
        self.cumulative_cost += cost

        # a valid configuration displaces an invalid incumbent even on ties,
        # so an invalid point never stays incumbent once a valid one is seen
        better = objective < self._inc_objective or (
            result.valid and not self._inc_valid and objective <= self._inc_objective
        )
        if better:
            self._inc_objective = objective
            self._inc_test = test
            self._inc_valid = result.valid

        self.events.append(TraceEvent(
            eval_index=len(self.events),
            cumulative_cost=self.cumulative_cost,
            objective=objective,
            incumbent_objective=self._inc_objective,
            incumbent_test_error=self._inc_test,
            valid=result.valid,
        ))
        return objective

    def finish(self, seed: int, optimizer_id: str, config: dict | None = None) -> RunTrace:
        trace = RunTrace(
            seed=seed,
            optimizer_id=optimizer_id,
            benchmark_id=self.bench.benchmark_id,
            best_validation_error=self.bench.best_validation_error,
            best_test_error=self.bench.best_test_error,
            events=tuple(self.events),
            config=dict(config or {}),
        )
        check_trace_invariants(trace)
        return trace


def check_trace_invariants(trace: RunTrace):
    """Raise ValueError when a trace violates the recorded-run contract.

    Checked for every produced trace: contiguous event indices, objectives
    in [0, 1], non-decreasing cumulative cost with zero increments on
    invalid evaluations, a non-increasing incumbent, and non-negative
    regret against the benchmark's best validation error.
    """
    if not trace.events:
        raise ValueError("trace has no events")
    prev_cost = 0.0
    prev_incumbent = math.inf
    for i, e in enumerate(trace.events):
        where = f"event {i} of {trace.optimizer_id} run (seed {trace.seed})"
        if e.eval_index != i:
            raise ValueError(f"{where}: eval_index {e.eval_index} != position {i}")
        if not 0.0 <= e.objective <= 1.0:
            raise ValueError(f"{where}: objective {e.objective} outside [0, 1]")
        if e.cumulative_cost < prev_cost:
            raise ValueError(f"{where}: cumulative cost decreased")
        if not e.valid and e.cumulative_cost != prev_cost:
            raise ValueError(f"{where}: invalid evaluation accrued cost")
        if e.incumbent_objective > prev_incumbent:
            raise ValueError(f"{where}: incumbent objective increased")
        if e.incumbent_objective < trace.best_validation_error:
            raise ValueError(f"{where}: incumbent beats the benchmark's best (negative regret)")
        prev_cost = e.cumulative_cost
        prev_incumbent = e.incumbent_objective


def _header_line(trace: RunTrace) -> str:
    return json.dumps({"run": {
        "seed": trace.seed,
        "optimizer": trace.optimizer_id,
        "benchmark": trace.benchmark_id,
        "best_validation_error": trace.best_validation_error,
        "best_test_error": trace.best_test_error,
        "config": trace.config,
    }}, separators=(",", ":"), sort_keys=True)


def _event_line(e: TraceEvent) -> str:
    return json.dumps({
        "eval_index": e.eval_index,
        "cumulative_cost": e.cumulative_cost,
        "objective": e.objective,
        "incumbent_objective": e.incumbent_objective,
        "incumbent_test_error": e.incumbent_test_error,
        "valid": e.valid,
    }, separators=(",", ":"), sort_keys=True)


def write_traces(traces: list[RunTrace], path: str | Path):
    """Write traces as JSON Lines, atomically (temp file then rename)."""
    path = Path(path)
    lines = []
    for trace in traces:
        lines.append(_header_line(trace))
        lines.extend(_event_line(e) for e in trace.events)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def read_traces(path: str | Path) -> list[RunTrace]:
    path = Path(path)
    traces: list[RunTrace] = []
    header: dict | None = None
    events: list[TraceEvent] = []

    def flush():
        if header is None:
            return
        if not events:
            raise ValueError(f"{path}: run (seed {header['seed']}) has no events")
        traces.append(RunTrace(
            seed=header["seed"],
            optimizer_id=header["optimizer"],
            benchmark_id=header["benchmark"],
            best_validation_error=header["best_validation_error"],
            best_test_error=header["best_test_error"],
            events=tuple(events),
            config=header.get("config", {}),
        ))

    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{lineno}: bad JSON: {exc}") from exc
        if "run" in doc:
            flush()
            header = doc["run"]
            events = []
        elif "eval_index" in doc:
            if header is None:
                raise ValueError(f"{path}:{lineno}: event before any run header")
            events.append(TraceEvent(
                eval_index=doc["eval_index"],
                cumulative_cost=doc["cumulative_cost"],
                objective=doc["objective"],
                incumbent_objective=doc["incumbent_objective"],
                incumbent_test_error=doc["incumbent_test_error"],
                valid=doc["valid"],
            ))
        else:
            raise ValueError(f"{path}:{lineno}: unrecognized line")
    flush()
    if not traces:
        raise ValueError(f"{path}: no runs found")
    return traces
