"""Random-search and regularized-evolution baselines.

Both run over the same search-space/benchmark/trace contract as the DE
optimizer, so their traces are directly comparable: same genotype encoding,
same invalid-configuration penalty, same budget semantics (checked before
every evaluation).

Regularized evolution keeps a fixed-capacity population with strictly
oldest-first removal: each step draws a tournament of ``sample_size``
members uniformly with replacement, mutates the fittest entrant by
resampling exactly one genotype coordinate, evaluates the child, appends
it, and evicts the oldest member.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .benchmarks import Benchmark
from .de import Individual
from .space import SearchSpace, random_genotype
from .trace import Budget, BudgetExhausted, RunRecorder, RunTrace


def run_random_search(space: SearchSpace, bench: Benchmark, budget: Budget, seed: int) -> RunTrace:
    """Evaluate independent uniform genotypes until the budget is exhausted."""
    rng = np.random.default_rng(seed)
    recorder = RunRecorder(bench, budget)
    try:
        while True:
            recorder.evaluate(random_genotype(space.dimension, rng), space)
    except BudgetExhausted:
        pass
    return recorder.finish(seed=seed, optimizer_id="rs", config={})


@dataclass(frozen=True)
class REConfig:
    population_size: int = 100
    sample_size: int = 10
    budget: Budget = field(default_factory=lambda: Budget(max_evaluations=1000))

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError(f"population size must be >= 1, got {self.population_size}")
        if not 1 <= self.sample_size <= self.population_size:
            raise ValueError(
                f"sample size must be in [1, {self.population_size}], got {self.sample_size}"
            )


class AgingPopulation:
    """Fixed-capacity population with strictly FIFO eviction.

    Removal is by age alone, never by fitness; ``append`` returns the
    evicted member (the oldest) once the population is full.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._members: deque[Individual] = deque()

    def __len__(self) -> int:
        return len(self._members)

    @property
    def members(self) -> list[Individual]:
        return list(self._members)

    def append(self, member: Individual) -> Individual | None:
        self._members.append(member)
        if len(self._members) > self.capacity:
            return self._members.popleft()
        return None


def tournament_select(members: list[Individual], sample_size: int,
                      rng: np.random.Generator) -> int:
    """Index of the fittest of ``sample_size`` entrants drawn with replacement.

    Fitness ties go to the entrant with the lowest population index.
    """
    entrants = rng.integers(0, len(members), size=sample_size)
    return int(min(sorted(entrants), key=lambda i: members[i].fitness))


def mutate_one_dimension(genotype: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Resample one uniformly chosen coordinate uniformly on [0, 1)."""
    child = genotype.copy()
    child[int(rng.integers(len(genotype)))] = rng.random()
    return child


def run_regularized_evolution(space: SearchSpace, bench: Benchmark, cfg: REConfig,
                              seed: int) -> RunTrace:
    """One regularized-evolution run; returns the full evaluation trace."""
    rng = np.random.default_rng(seed)
    recorder = RunRecorder(bench, cfg.budget)
    pop = AgingPopulation(cfg.population_size)
    try:
        for _ in range(cfg.population_size):
            genotype = random_genotype(space.dimension, rng)
            pop.append(Individual(genotype=genotype, fitness=recorder.evaluate(genotype, space)))
        while True:
            parent = pop.members[tournament_select(pop.members, cfg.sample_size, rng)]
            child_genotype = mutate_one_dimension(parent.genotype, rng)
            fitness = recorder.evaluate(child_genotype, space)
            pop.append(Individual(genotype=child_genotype, fitness=fitness))
    except BudgetExhausted:
        pass
    return recorder.finish(seed=seed, optimizer_id="re", config={
        "population_size": cfg.population_size,
        "sample_size": cfg.sample_size,
    })
