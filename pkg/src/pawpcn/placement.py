"""Antenna placement optimizers for a fixed resource allocation.

Two algorithms over the ordered antenna position vector x (length N, on
[0, span] with minimum spacing): a sequential per-antenna grid search and a
differential evolution variant whose scale factor and crossover rate are
redrawn uniformly at random on every use.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class InfeasibleGeometryError(ValueError):
    """The spacing/span constraints admit no position vector."""


@dataclass(frozen=True)
class PlacementProblem:
    """Fitness takes a (M, N) batch of position vectors, returns (M,) values."""

    fitness: Callable[[np.ndarray], np.ndarray]
    span_m: float
    min_spacing_m: float
    n_antennas: int

    def __post_init__(self):
        if self.n_antennas * self.min_spacing_m > self.span_m:
            raise InfeasibleGeometryError(
                f"{self.n_antennas} antennas at spacing {self.min_spacing_m} "
                f"do not fit in span {self.span_m}")


@dataclass(frozen=True)
class EwConfig:
    grid_points: int = 2000
    max_sweeps: int = 10
    improvement_tol: float = 1e-6

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")


@dataclass(frozen=True)
class SpdeConfig:
    population: int = 30
    max_generations: int = 200
    rng_seed: int = 0

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be >= 4 (mutation needs three "
                             "distinct non-target members)")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")


@dataclass(frozen=True)
class PlacementResult:
    x: np.ndarray
    value: float
    iterations: int       # sweeps (EW) or generations (SPDE)
    evaluations: int      # fitness evaluations, counting batch rows


def repair(x: np.ndarray, span_m: float, spacing_m: float) -> np.ndarray:
    """Project a position vector onto the feasible set.

    Clamps to [0, span], then pushes each antenna right of its predecessor
    by the spacing floor; a final backward pass pulls predecessors left so
    the last antenna stays on the waveguide. Idempotent.
    """
    x = np.array(x, dtype=float)
    n = x.size
    if n * spacing_m > span_m:
        raise InfeasibleGeometryError(
            f"{n} antennas at spacing {spacing_m} do not fit in span {span_m}")
    np.clip(x, 0.0, span_m, out=x)
    for i in range(1, n):
        if x[i] < x[i - 1] + spacing_m:
            x[i] = x[i - 1] + spacing_m
    if x[-1] > span_m:
        x[-1] = span_m
    for i in range(n - 1, 0, -1):
        if x[i - 1] > x[i] - spacing_m:
            x[i - 1] = x[i] - spacing_m
    return x


def uniform_spread(n_antennas: int, span_m: float) -> np.ndarray:
    """Symmetric feasible starting layout: x_n = (n - 1/2) * span / N."""
    return (np.arange(n_antennas) + 0.5) * span_m / n_antennas


def is_feasible(x: np.ndarray, span_m: float, spacing_m: float,
                atol: float = 1e-12) -> bool:
    x = np.asarray(x, dtype=float)
    if np.any(x < -atol) or np.any(x > span_m + atol):
        return False
    return x.size < 2 or bool(np.all(np.diff(x) >= spacing_m - atol))


def ew_optimize(problem: PlacementProblem, config: EwConfig,
                x_init: np.ndarray) -> PlacementResult:
    """Cyclic per-antenna 1-D grid search.

    Each antenna in turn is moved to the best point of a uniform grid over
    its feasible interval (bounded by the current neighbors), the incumbent
    position included so the objective never decreases. Sweeps repeat until
    the per-sweep improvement drops to ``improvement_tol``.
    """
    x = np.asarray(x_init, dtype=float).copy()
    n = problem.n_antennas
    if not is_feasible(x, problem.span_m, problem.min_spacing_m):
        raise ValueError("x_init must be feasible")
    value = float(problem.fitness(x[None, :])[0])
    evaluations = 1
    sweeps = 0
    for _ in range(config.max_sweeps):
        sweeps += 1
        sweep_start = value
        for i in range(n):
            lo = x[i - 1] + problem.min_spacing_m if i > 0 else 0.0
            hi = x[i + 1] - problem.min_spacing_m if i < n - 1 else problem.span_m
            grid = np.linspace(lo, hi, config.grid_points)
            candidates = np.tile(x, (config.grid_points + 1, 1))
            candidates[:-1, i] = grid
            values = problem.fitness(candidates)
            evaluations += candidates.shape[0]
            best = int(np.argmax(values))
            if values[best] > value:
                x[i] = candidates[best, i]
                value = float(values[best])
        if value - sweep_start <= config.improvement_tol:
            break
    return PlacementResult(x=x, value=value, iterations=sweeps,
                           evaluations=evaluations)


def spde_optimize(problem: PlacementProblem,
                  config: SpdeConfig) -> PlacementResult:
    """Differential evolution with per-use random scale factor and
    crossover rate, greedy (>=) selection, and repair of trial vectors.

    Deterministic for a given ``rng_seed``; performs exactly
    ``population * (1 + max_generations)`` fitness evaluations.
    """
    n = problem.n_antennas
    q = config.population
    rng = np.random.default_rng(config.rng_seed)
    pop = np.sort(rng.uniform(0.0, problem.span_m, size=(q, n)), axis=1)
    pop = np.array([repair(v, problem.span_m, problem.min_spacing_m) for v in pop])
    fit = np.asarray(problem.fitness(pop), dtype=float)
    evaluations = q
    for _ in range(config.max_generations):
        trials = np.empty_like(pop)
        for i in range(q):
            others = [j for j in range(q) if j != i]
            r1, r2, r3 = rng.choice(others, size=3, replace=False)
            scale = rng.uniform()
            mutant = pop[r1] + scale * (pop[r2] - pop[r3])
            cross_rate = rng.uniform()
            mask = rng.uniform(size=n) <= cross_rate
            mask[rng.integers(n)] = True
            trial = np.where(mask, mutant, pop[i])
            trials[i] = repair(trial, problem.span_m, problem.min_spacing_m)
        trial_fit = np.asarray(problem.fitness(trials), dtype=float)
        evaluations += q
        accept = trial_fit >= fit
        pop[accept] = trials[accept]
        fit[accept] = trial_fit[accept]
    best = int(np.argmax(fit))
    return PlacementResult(x=pop[best].copy(), value=float(fit[best]),
                           iterations=config.max_generations,
                           evaluations=evaluations)
