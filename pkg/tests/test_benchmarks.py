import itertools
import json
import math

import numpy as np
import pytest

from diffevo import (
    BenchmarkLoadError,
    EvaluationResult,
    ParameterSpec,
    SearchSpace,
    TabularBenchmark,
    continuous_function,
    load_tabular,
    make_synthetic,
    write_tabular,
)


def tiny_space():
    return SearchSpace(params=(
        ParameterSpec(name="op", kind="categorical", choices=("a", "b")),
        ParameterSpec(name="depth", kind="integer", lo=1, hi=3),
    ))


def tiny_table():
    return {
        ("a", 1): (0.30, 0.35, 2.0),
        ("a", 2): (0.05, 0.06, 3.0),
        ("b", 3): (0.50, None, 1.0),
    }


class TestTabularBenchmark:
    def test_best_values_recomputed_from_table(self):
        bench = TabularBenchmark(space=tiny_space(), table=tiny_table(), benchmark_id="t")
        assert bench.best_validation_error == 0.05
        assert bench.best_test_error == 0.06

    def test_lookup_and_missing_key(self):
        bench = TabularBenchmark(space=tiny_space(), table=tiny_table(), benchmark_id="t")
        hit = bench.evaluate(("a", 2))
        assert hit == EvaluationResult(valid=True, validation_error=0.05,
                                       test_error=0.06, cost_seconds=3.0)
        miss = bench.evaluate(("b", 1))
        assert not miss.valid

    def test_repeated_lookup_is_pure(self):
        bench = TabularBenchmark(space=tiny_space(), table=tiny_table(), benchmark_id="t")
        first = bench.evaluate(("a", 1))
        assert all(bench.evaluate(("a", 1)) == first for _ in range(100_000))

    def test_rejects_float_parameters(self):
        space = SearchSpace(params=(
            ParameterSpec(name="x", kind="float", lo=0.0, hi=1.0),
        ))
        with pytest.raises(ValueError, match="float"):
            TabularBenchmark(space=space, table={(0.5,): (0.1, None, 1.0)}, benchmark_id="t")

    def test_rejects_out_of_range_error(self):
        table = {("a", 1): (1.5, None, 1.0)}
        with pytest.raises(BenchmarkLoadError):
            TabularBenchmark(space=tiny_space(), table=table, benchmark_id="t")


class TestTabularFile:
    def test_round_trip_identical_behavior(self, tmp_path):
        bench = make_synthetic(3, 3, invalid_fraction=0.2, seed=5)
        path = tmp_path / "bench.jsonl"
        write_tabular(bench, path)
        loaded = load_tabular(path)
        assert loaded.benchmark_id == bench.benchmark_id
        assert loaded.space == bench.space
        assert loaded.best_validation_error == bench.best_validation_error
        assert loaded.best_test_error == bench.best_test_error
        tokens = bench.space.params[0].choices
        for key in itertools.product(tokens, repeat=3):
            assert loaded.evaluate(key) == bench.evaluate(key)

    def test_write_is_deterministic(self, tmp_path):
        bench = make_synthetic(3, 3, seed=5)
        write_tabular(bench, tmp_path / "a.jsonl")
        write_tabular(bench, tmp_path / "b.jsonl")
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()

    def write_file(self, tmp_path, rows):
        header = json.dumps(tiny_space().to_json_dict())
        path = tmp_path / "bench.jsonl"
        path.write_text("\n".join([header] + rows) + "\n")
        return path

    def test_minimum_is_recomputed_not_trusted(self, tmp_path):
        path = self.write_file(tmp_path, [
            json.dumps({"key": ["a", 1], "val_err": 0.3, "test_err": None, "cost": 1.0}),
            json.dumps({"key": ["a", 2], "val_err": 0.05, "test_err": None, "cost": 1.0}),
            json.dumps({"key": ["b", 1], "val_err": 0.4, "test_err": None, "cost": 1.0}),
        ])
        assert load_tabular(path).best_validation_error == 0.05

    def test_duplicate_key_fails_naming_the_line(self, tmp_path):
        path = self.write_file(tmp_path, [
            json.dumps({"key": ["a", 1], "val_err": 0.3, "cost": 1.0}),
            json.dumps({"key": ["a", 1], "val_err": 0.2, "cost": 1.0}),
        ])
        with pytest.raises(BenchmarkLoadError, match=":3"):
            load_tabular(path)

    def test_error_out_of_range_fails(self, tmp_path):
        path = self.write_file(tmp_path, [
            json.dumps({"key": ["a", 1], "val_err": 1.2, "cost": 1.0}),
        ])
        with pytest.raises(BenchmarkLoadError, match=":2"):
            load_tabular(path)

    def test_negative_cost_fails(self, tmp_path):
        path = self.write_file(tmp_path, [
            json.dumps({"key": ["a", 1], "val_err": 0.2, "cost": -1.0}),
        ])
        with pytest.raises(BenchmarkLoadError, match="cost"):
            load_tabular(path)

    def test_key_outside_space_fails(self, tmp_path):
        path = self.write_file(tmp_path, [
            json.dumps({"key": ["z", 1], "val_err": 0.2, "cost": 1.0}),
        ])
        with pytest.raises(BenchmarkLoadError):
            load_tabular(path)

    def test_bad_json_fails(self, tmp_path):
        path = self.write_file(tmp_path, ["{not json"])
        with pytest.raises(BenchmarkLoadError, match="JSON"):
            load_tabular(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_tabular(tmp_path / "nope.jsonl")


class TestSynthetic:
    def test_enumerates_full_space(self):
        bench = make_synthetic(5, 4, invalid_fraction=0.0, seed=0)
        assert bench.size == 4**5 == 1024

    @pytest.mark.parametrize("fraction", [0.1, 0.25, 0.5])
    def test_exact_invalid_count(self, fraction):
        bench = make_synthetic(5, 4, invalid_fraction=fraction, seed=0)
        assert bench.size == 1024 - math.floor(1024 * fraction)

    def test_best_matches_exhaustive_scan(self):
        # oracle: query every configuration through the public interface
        bench = make_synthetic(4, 3, invalid_fraction=0.0, seed=3)
        tokens = bench.space.params[0].choices
        results = [bench.evaluate(key) for key in itertools.product(tokens, repeat=4)]
        assert all(r.valid for r in results)
        assert bench.best_validation_error == min(r.validation_error for r in results)
        assert bench.best_test_error == min(r.test_error for r in results)

    def test_same_spec_and_seed_identical(self):
        a = make_synthetic(4, 3, invalid_fraction=0.3, seed=11)
        b = make_synthetic(4, 3, invalid_fraction=0.3, seed=11)
        assert a.table == b.table

    def test_different_seed_differs(self):
        a = make_synthetic(4, 3, seed=1)
        b = make_synthetic(4, 3, seed=2)
        assert a.table != b.table

    def test_errors_and_costs_in_contract_ranges(self):
        bench = make_synthetic(4, 4, invalid_fraction=0.2, seed=9)
        for val, test, cost in bench.table.values():
            assert 0.0 <= val <= 1.0
            assert 0.0 <= test <= 1.0
            assert cost > 0.0

    def test_unit_cost_model(self):
        bench = make_synthetic(3, 3, cost_model="unit", seed=0)
        assert all(cost == 1.0 for _, _, cost in bench.table.values())

    def test_unknown_cost_model(self):
        with pytest.raises(ValueError, match="cost model"):
            make_synthetic(3, 3, cost_model="quadratic")

    def test_refuses_oversized_spaces(self):
        with pytest.raises(ValueError, match="1048576"):
            make_synthetic(10, 4)

    def test_rejects_full_invalid_fraction(self):
        with pytest.raises(ValueError):
            make_synthetic(3, 3, invalid_fraction=1.0)


class TestContinuous:
    def test_sphere_optimum_hits_best(self):
        bench = continuous_function("sphere", 3)
        res = bench.evaluate((0.0, 0.0, 0.0))
        assert res.validation_error == bench.best_validation_error == 0.0
        assert res.cost_seconds == 1.0
        assert res.test_error is None and bench.best_test_error is None

    def test_sphere_increases_with_axis_distance(self):
        bench = continuous_function("sphere", 3)
        errs = [bench.evaluate((x, 0.0, 0.0)).validation_error for x in (0.0, 0.5, 1.0, 2.0, 5.0)]
        assert errs == sorted(errs)
        assert len(set(errs)) == len(errs)

    def test_rastrigin_closed_form(self):
        bench = continuous_function("rastrigin", 2)
        assert bench.evaluate((0.0, 0.0)).validation_error == 0.0
        x = (0.5, 0.0)
        raw = 10 * 2 + sum(v * v - 10 * math.cos(2 * math.pi * v) for v in x)
        assert raw == pytest.approx(20.25)
        got = bench.evaluate(x).validation_error
        assert got == pytest.approx(raw / (1 + raw))

    def test_squash_stays_below_one(self):
        bench = continuous_function("sphere", 2)
        assert bench.evaluate((5.0, 5.0)).validation_error < 1.0

    def test_space_matches_bounds(self):
        bench = continuous_function("sphere", 2, lo=-1.0, hi=2.0)
        assert all(p.kind == "float" and p.lo == -1.0 and p.hi == 2.0
                   for p in bench.space.params)

    def test_unknown_function(self):
        with pytest.raises(ValueError, match="unknown function"):
            continuous_function("ackley", 2)

    def test_bounds_must_contain_origin(self):
        with pytest.raises(ValueError, match="contain 0"):
            continuous_function("sphere", 2, lo=1.0, hi=2.0)

    def test_dimension_mismatch(self):
        bench = continuous_function("sphere", 3)
        with pytest.raises(ValueError):
            bench.evaluate((0.0, 0.0))
