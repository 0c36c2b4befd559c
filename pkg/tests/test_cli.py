import csv
import json

import pytest

from diffevo import make_synthetic, read_traces, regret_series, write_tabular
from diffevo.cli import main, parse_benchmark


def run_cli(*argv):
    return main(list(argv))


class TestParseBenchmark:
    def test_synthetic_shorthand(self):
        bench = parse_benchmark("synthetic:5x4")
        assert bench.size == 1024
        assert bench.benchmark_id == "synthetic:5x4:invalid=0:cost=lognormal:seed=0"

    def test_synthetic_with_options(self):
        bench = parse_benchmark("synthetic:3x3:invalid=0.5:seed=7:cost=unit")
        assert bench.size == 27 - 13
        assert "invalid=0.5" in bench.benchmark_id and "seed=7" in bench.benchmark_id

    def test_continuous_shorthand(self):
        bench = parse_benchmark("sphere:3")
        assert bench.space.dimension == 3
        assert bench.space.params[0].lo == -5.0

    def test_continuous_with_bounds(self):
        bench = parse_benchmark("rastrigin:2:lo=-1:hi=2")
        assert bench.space.params[0].lo == -1.0
        assert bench.space.params[1].hi == 2.0

    def test_tabular_path(self, tmp_path):
        path = tmp_path / "bench.jsonl"
        write_tabular(make_synthetic(3, 3, seed=0), path)
        assert parse_benchmark(f"tabular:{path}").size == 27
        assert parse_benchmark(str(path)).size == 27

    def test_unknown_option_rejected(self):
        with pytest.raises(ValueError, match="bad benchmark option"):
            parse_benchmark("synthetic:3x3:frac=0.5")


class TestRun:
    def test_writes_trace_file_and_summary(self, tmp_path, capsys):
        out = tmp_path / "t.jsonl"
        code = run_cli("run", "--optimizer", "de", "--np", "8",
                       "--benchmark", "synthetic:3x3", "--evals", "50",
                       "--runs", "2", "--seed", "0", "--out", str(out))
        assert code == 0
        traces = read_traces(out)
        assert len(traces) == 2 and all(len(t.events) == 50 for t in traces)
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("optimizer=de benchmark=synthetic:3x3")
        assert "final_mean_regret=" in lines[0]
        assert "mean_cumulative_cost=" in lines[0]

    def test_canonical_hyperparameter_invocation(self, tmp_path):
        out = tmp_path / "t.jsonl"
        code = run_cli("run", "--optimizer", "de", "--np", "20", "--f", "0.5",
                       "--cr", "0.5", "--benchmark", "synthetic:5x4",
                       "--evals", "2000", "--runs", "5", "--seed", "0",
                       "--out", str(out))
        assert code == 0
        traces = read_traces(out)
        assert len(traces) == 5
        assert all(t.config == {"population_size": 20, "scaling_factor": 0.5,
                                "crossover_rate": 0.5} for t in traces)

    def test_missing_benchmark_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run_cli("run", "--out", str(tmp_path / "t.jsonl"), "--evals", "10")
        assert err.value.code == 2

    def test_missing_budget_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run_cli("run", "--benchmark", "synthetic:3x3",
                    "--out", str(tmp_path / "t.jsonl"))
        assert err.value.code == 2

    def test_bad_benchmark_spec_fails_cleanly(self, tmp_path, capsys):
        code = run_cli("run", "--benchmark", "synthetic:9", "--evals", "5",
                       "--out", str(tmp_path / "t.jsonl"))
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_tabular_file_fails_cleanly(self, tmp_path, capsys):
        code = run_cli("run", "--benchmark", str(tmp_path / "nope.jsonl"),
                       "--evals", "5", "--out", str(tmp_path / "t.jsonl"))
        assert code == 1

    @pytest.mark.parametrize("optimizer,flags", [
        ("de", ("--np", "8")),
        ("rs", ()),
        ("re", ("--pop", "10", "--sample", "3")),
    ])
    def test_identical_invocations_identical_bytes(self, tmp_path, optimizer, flags):
        args = ("run", "--optimizer", optimizer, *flags,
                "--benchmark", "synthetic:3x3:invalid=0.2", "--evals", "40",
                "--runs", "2", "--seed", "1")
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run_cli(*args, "--out", str(a)) == 0
        assert run_cli(*args, "--out", str(b)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_jobs_flag_does_not_change_output(self, tmp_path):
        args = ("run", "--optimizer", "rs", "--benchmark", "synthetic:3x3",
                "--evals", "30", "--runs", "4", "--seed", "0")
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_cli(*args, "--jobs", "1", "--out", str(a))
        run_cli(*args, "--jobs", "3", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_config_file_provides_defaults_flags_override(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "optimizer": "rs", "benchmark": "synthetic:3x3",
            "evals": 25, "runs": 2, "seed": 0,
            "out": str(tmp_path / "from_file.jsonl"),
        }))
        assert run_cli("run", "--config", str(cfg)) == 0
        assert (tmp_path / "from_file.jsonl").exists()
        override = tmp_path / "override.jsonl"
        assert run_cli("run", "--config", str(cfg), "--runs", "3",
                       "--out", str(override)) == 0
        assert len(read_traces(override)) == 3

    def test_unknown_config_field_is_usage_error(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"benchmark": "synthetic:3x3", "evlas": 10}))
        with pytest.raises(SystemExit) as err:
            run_cli("run", "--config", str(cfg), "--out", str(tmp_path / "t.jsonl"))
        assert err.value.code == 2


class TestCompare:
    def test_emits_csv_per_optimizer_and_summary(self, tmp_path, capsys):
        out_dir = tmp_path / "curves"
        code = run_cli("compare", "--optimizers", "de,rs", "--np", "8",
                       "--benchmark", "synthetic:3x3", "--evals", "60",
                       "--runs", "3", "--seed", "0", "--out-dir", str(out_dir))
        assert code == 0
        assert (out_dir / "de.csv").exists() and (out_dir / "rs.csv").exists()
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("optimizer=de final_regret_mean=")
        assert lines[1].startswith("optimizer=rs final_regret_mean=")
        assert "final_regret_std=" in lines[0]

    def test_optimizer_order_does_not_change_csvs(self, tmp_path):
        common = ("--benchmark", "synthetic:3x3", "--evals", "40",
                  "--runs", "2", "--seed", "0", "--np", "8")
        run_cli("compare", "--optimizers", "de,rs", *common,
                "--out-dir", str(tmp_path / "fwd"))
        run_cli("compare", "--optimizers", "rs,de", *common,
                "--out-dir", str(tmp_path / "rev"))
        for name in ("de.csv", "rs.csv"):
            assert (tmp_path / "fwd" / name).read_bytes() == \
                   (tmp_path / "rev" / name).read_bytes()

    def test_single_optimizer_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run_cli("compare", "--optimizers", "de",
                    "--benchmark", "synthetic:3x3", "--evals", "10",
                    "--out-dir", str(tmp_path))
        assert err.value.code == 2


class TestAggregateCommand:
    def write_run(self, tmp_path, name, benchmark="synthetic:3x3", seed=0):
        out = tmp_path / name
        run_cli("run", "--optimizer", "rs", "--benchmark", benchmark,
                "--evals", "20", "--runs", "1", "--seed", str(seed),
                "--out", str(out))
        return out

    def test_single_run_union_grid_reproduces_regret_steps(self, tmp_path):
        trace_file = self.write_run(tmp_path, "t.jsonl")
        out = tmp_path / "curve.csv"
        assert run_cli("aggregate", str(trace_file), "--grid", "union",
                       "--out", str(out)) == 0
        trace = read_traces(trace_file)[0]
        validation, _ = regret_series(trace)
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        # union of one run's event times: the curve is its own regret steps
        got = {float(r["time"]): float(r["mean_regret"]) for r in rows}
        want = {}
        for t, v in zip(trace.times, validation):
            want[float(t)] = float(v)  # zero-cost events collapse to the last
        assert got == want

    def test_mixed_benchmark_ids_refused(self, tmp_path, capsys):
        a = self.write_run(tmp_path, "a.jsonl", benchmark="synthetic:3x3")
        b = self.write_run(tmp_path, "b.jsonl", benchmark="synthetic:3x3:seed=1")
        code = run_cli("aggregate", str(a), str(b), "--out", str(tmp_path / "c.csv"))
        assert code == 1
        assert "multiple benchmarks" in capsys.readouterr().err

    def test_multiple_files_aggregate(self, tmp_path):
        a = self.write_run(tmp_path, "a.jsonl", seed=0)
        b = self.write_run(tmp_path, "b.jsonl", seed=1)
        out = tmp_path / "c.csv"
        assert run_cli("aggregate", str(a), str(b), "--grid", "log",
                       "--points", "32", "--out", str(out)) == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 32
        assert all(r["n_runs"] in {"1", "2"} for r in rows)
