"""Alternating optimization of resource allocation and antenna placement,
random scenario generation, the fixed-antenna baseline, and parameter sweeps.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import allocator, model, placement
from .allocator import (InfeasibleAllocationError, NomaAllocation,
                        TdmaAllocation, solve_noma, solve_tdma)
from .model import EhParams, Scenario, SystemConfig
from .placement import EwConfig, SpdeConfig

PROTOCOLS = ("tdma", "noma")
ALGORITHMS = ("ew", "spde")


@dataclass(frozen=True)
class AoReport:
    objective_trace: list[float]
    final_positions: np.ndarray
    final_allocation: TdmaAllocation | NomaAllocation
    ao_iterations: int
    fitness_evaluations: int
    wall_time_s: float

    @property
    def value_bits(self) -> float:
        return self.final_allocation.value_bits


def generate_scenario(seed: int, k_devices: int, n_antennas: int,
                      config: SystemConfig, dx: float, dy: float,
                      eh: EhParams = EhParams(),
                      circuit_power_w: float = 1e-7) -> Scenario:
    """Random device drop: x ~ U[0, dx], y ~ U[-dy/2, dy/2], waveguide on y=0.

    Antennas start on the uniform spread; deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, dx, size=k_devices)
    ys = rng.uniform(-dy / 2.0, dy / 2.0, size=k_devices) if dy > 0 \
        else np.zeros(k_devices)
    return Scenario(
        pa_positions_m=tuple(placement.uniform_spread(n_antennas,
                                                      config.waveguide_span_m)),
        device_positions_m=tuple(zip(xs, ys)),
        eh=(eh,) * k_devices,
        circuit_power_w=(circuit_power_w,) * k_devices,
    )


def _solve_allocation(protocol: str, gains, phi, pc, noise):
    if protocol == "tdma":
        return solve_tdma(gains, phi, pc, noise)
    if protocol == "noma":
        return solve_noma(gains, phi, pc, noise)
    raise ValueError(f"unknown protocol {protocol!r}")


def _allocation_at(x: np.ndarray, scenario: Scenario, config: SystemConfig,
                   protocol: str):
    devices = np.asarray(scenario.device_positions_m)
    gains = model.gains_for_positions(np.asarray(x), devices, config)
    phi = model.harvested_powers(gains, scenario, config)
    return _solve_allocation(protocol, gains, phi,
                             np.asarray(scenario.circuit_power_w),
                             config.noise_power_w)


def _fitness_for_allocation(alloc, scenario: Scenario, config: SystemConfig,
                            protocol: str):
    """Sum rate as a function of antenna positions with (t, p) held fixed."""
    devices = np.asarray(scenario.device_positions_m)
    noise = config.noise_power_w
    if protocol == "tdma":
        t = np.asarray(alloc.t)
        p = np.asarray(alloc.p)

        def fitness(xs: np.ndarray) -> np.ndarray:
            g = model.gains_for_positions(xs, devices, config)
            return np.sum(t * np.log2(1.0 + p * g / noise), axis=-1)
    else:
        t1 = alloc.t1
        p = np.asarray(alloc.p)

        def fitness(xs: np.ndarray) -> np.ndarray:
            g = model.gains_for_positions(xs, devices, config)
            return t1 * np.log2(1.0 + g @ p / noise)
    return fitness


def ao_solve(scenario: Scenario, config: SystemConfig, protocol: str = "tdma",
             algo: str = "ew", max_ao_iters: int = 30, tol: float = 1e-4,
             ew_config: EwConfig | None = None,
             spde_config: SpdeConfig | None = None) -> AoReport:
    """Alternate allocation and placement until the sum rate stops improving.

    A placement step is committed only if re-solving the allocation at the
    proposed positions does not lose sum rate, which keeps the objective
    trace nondecreasing even when a move breaks the energy constraint under
    the frozen allocation. A rejected EW proposal ends the loop (the search
    is deterministic, retrying cannot help); a rejected SPDE proposal keeps
    the incumbent and draws a fresh population on the next iteration.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown placement algorithm {algo!r}")
    scenario.validate_geometry(config)
    ew_config = ew_config or EwConfig()
    spde_config = spde_config or SpdeConfig()
    started = time.perf_counter()
    x = np.asarray(scenario.pa_positions_m, dtype=float)
    alloc = _allocation_at(x, scenario, config, protocol)
    trace = [alloc.value_bits]
    evaluations = 0
    iterations = 0
    for it in range(max_ao_iters):
        fitness = _fitness_for_allocation(alloc, scenario, config, protocol)
        problem = placement.PlacementProblem(
            fitness=fitness, span_m=config.waveguide_span_m,
            min_spacing_m=config.min_spacing_m, n_antennas=scenario.n_antennas)
        if algo == "ew":
            result = placement.ew_optimize(problem, ew_config, x)
        else:
            per_iter = replace(spde_config, rng_seed=spde_config.rng_seed + it)
            result = placement.spde_optimize(problem, per_iter)
        evaluations += result.evaluations
        new_alloc = _allocation_at(result.x, scenario, config, protocol)
        iterations = it + 1
        if new_alloc.value_bits >= trace[-1] - 1e-12:
            x = result.x
            alloc = new_alloc
            trace.append(max(new_alloc.value_bits, trace[-1]))
            if trace[-1] - trace[-2] <= tol * max(trace[-2], 1e-12):
                break
        elif algo == "ew":
            break
    return AoReport(objective_trace=trace, final_positions=x,
                    final_allocation=alloc, ao_iterations=iterations,
                    fitness_evaluations=evaluations,
                    wall_time_s=time.perf_counter() - started)


def baseline_fixed_antenna(scenario: Scenario, config: SystemConfig,
                           protocol: str = "tdma") -> AoReport:
    """Conventional single fixed antenna at the feed point: free-space
    channel only (no power splitting, waveguide loss, or guide phase),
    followed by a pure allocation solve."""
    started = time.perf_counter()
    devices = np.asarray(scenario.device_positions_m)
    d = config.waveguide_height_m
    dist_sq = (devices[:, 0] - config.feed_x_m) ** 2 + devices[:, 1] ** 2 + d ** 2
    gains = config.eta_sqrt ** 2 / dist_sq
    phi = model.harvested_powers(gains, scenario, config)
    alloc = _solve_allocation(protocol, gains, phi,
                              np.asarray(scenario.circuit_power_w),
                              config.noise_power_w)
    return AoReport(objective_trace=[alloc.value_bits],
                    final_positions=np.array([config.feed_x_m]),
                    final_allocation=alloc, ao_iterations=0,
                    fitness_evaluations=0,
                    wall_time_s=time.perf_counter() - started)


SWEEP_PARAMETERS = ("n_antennas", "delta", "circuit_power", "protocol",
                    "placement_algorithm")


@dataclass(frozen=True)
class SweepSpec:
    """Cartesian sweep of one parameter over values x seeds x protocols x algos."""

    varied_parameter: str
    values: tuple
    seeds: tuple[int, ...]
    config: SystemConfig = SystemConfig()
    k_devices: int = 10
    n_antennas: int = 6
    dx_m: float = 10.0
    dy_m: float = 6.0
    eh: EhParams = EhParams()
    circuit_power_w: float = 1e-7
    protocols: tuple[str, ...] = PROTOCOLS
    algos: tuple[str, ...] = ALGORITHMS
    ew_config: EwConfig = EwConfig()
    spde_config: SpdeConfig = SpdeConfig()
    max_ao_iters: int = 30
    ao_tol: float = 1e-4

    def __post_init__(self):
        if self.varied_parameter not in SWEEP_PARAMETERS:
            raise ValueError(f"unknown sweep parameter {self.varied_parameter!r}")
        if not self.values or not self.seeds:
            raise ValueError("values and seeds must be nonempty")

    def rows(self) -> list[dict]:
        """Row descriptors in the emitted order: values, seeds, protocols, algos."""
        protocols, algos = self.protocols, self.algos
        out = []
        for value in self.values:
            row_protocols = (value,) if self.varied_parameter == "protocol" else protocols
            row_algos = (value,) if self.varied_parameter == "placement_algorithm" else algos
            for seed in self.seeds:
                for protocol in row_protocols:
                    for algo in row_algos:
                        out.append({"run_id": len(out),
                                    "parameter": self.varied_parameter,
                                    "value": value, "seed": seed,
                                    "protocol": protocol, "algo": algo})
        return out


def _run_row(args) -> dict:
    spec, row = args
    config = spec.config
    n_antennas = spec.n_antennas
    circuit_power = spec.circuit_power_w
    param, value = row["parameter"], row["value"]
    if param == "n_antennas":
        n_antennas = int(value)
    elif param == "delta":
        config = replace(config, delta=float(value))
    elif param == "circuit_power":
        circuit_power = float(value)
    record = dict(row)
    try:
        scenario = generate_scenario(row["seed"], spec.k_devices, n_antennas,
                                     config, spec.dx_m, spec.dy_m,
                                     eh=spec.eh, circuit_power_w=circuit_power)
        spde = replace(spec.spde_config,
                       rng_seed=spec.spde_config.rng_seed + row["seed"])
        report = ao_solve(scenario, config, protocol=row["protocol"],
                          algo=row["algo"], max_ao_iters=spec.max_ao_iters,
                          tol=spec.ao_tol, ew_config=spec.ew_config,
                          spde_config=spde)
        record.update(status="ok", error="",
                      sum_rate_bits=report.value_bits,
                      ao_iterations=report.ao_iterations,
                      fitness_evaluations=report.fitness_evaluations,
                      wall_time_s=report.wall_time_s,
                      trace=list(report.objective_trace))
    except (InfeasibleAllocationError, placement.InfeasibleGeometryError,
            ValueError) as exc:
        record.update(status="failed", error=str(exc), sum_rate_bits=np.nan,
                      ao_iterations=0, fitness_evaluations=0,
                      wall_time_s=0.0, trace=[])
    return record


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[dict]:
    """Run every sweep row; failures are flagged, not raised.

    Results are deterministic given the seed list and independent of
    ``jobs``; rows are returned in the order of :meth:`SweepSpec.rows`.
    """
    rows = spec.rows()
    tasks = [(spec, row) for row in rows]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_row, tasks))
    return [_run_row(task) for task in tasks]
