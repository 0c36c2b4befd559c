import numpy as np
import pytest

from diffevo import EvaluationResult, ParameterSpec, SearchSpace


class RecordingBenchmark:
    """Wraps a benchmark and logs every configuration it is asked to score."""

    def __init__(self, base):
        self.base = base
        self.space = base.space
        self.benchmark_id = base.benchmark_id
        self.best_validation_error = base.best_validation_error
        self.best_test_error = base.best_test_error
        self.configs = []

    def evaluate(self, config):
        self.configs.append(config)
        return self.base.evaluate(config)


class TransformedBenchmark:
    """Applies a strictly increasing map to the base validation errors."""

    def __init__(self, base, transform):
        self.base = base
        self.transform = transform
        self.space = base.space
        self.benchmark_id = base.benchmark_id + ":transformed"
        self.best_validation_error = transform(base.best_validation_error)
        self.best_test_error = base.best_test_error

    def evaluate(self, config):
        res = self.base.evaluate(config)
        if not res.valid:
            return res
        return EvaluationResult(
            valid=True,
            validation_error=self.transform(res.validation_error),
            test_error=res.test_error,
            cost_seconds=res.cost_seconds,
        )


@pytest.fixture
def mixed_space():
    return SearchSpace(params=(
        ParameterSpec(name="lr", kind="float", lo=-5.0, hi=5.0),
        ParameterSpec(name="layers", kind="integer", lo=0, hi=10),
        ParameterSpec(name="width", kind="ordinal", values=("narrow", "medium", "wide")),
        ParameterSpec(name="op", kind="categorical", choices=("1x1 conv", "skip", "3x3 conv")),
    ))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
