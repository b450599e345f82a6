"""Batch command-line front end.

Subcommands: ``solve`` (one AO run, CSV on stdout), ``sweep`` (parameter
sweep writing results.csv / trace.csv / manifest.json), ``validate``
(config check). Config is a flat JSON file with unit-suffixed keys; dBm
values are converted to watts here and nowhere else.

Exit codes: 0 success, 2 config error, 3 infeasible, 4 internal error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .allocator import InfeasibleAllocationError
from .model import EhParams, SystemConfig, dbm_to_watts
from .orchestrator import SweepSpec, ao_solve, generate_scenario, run_sweep
from .placement import EwConfig, InfeasibleGeometryError, SpdeConfig

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4

# key -> (default, type); defaults reproduce the reference parameter set
CONFIG_SCHEMA = {
    "carrier_frequency_ghz": (28.0, float),
    "effective_index": (1.4, float),
    "delta": (0.6, float),
    "mu_db_per_m": (0.2, float),
    "hap_power_dbm": (40.0, float),
    "noise_dbm": (-120.0, float),
    "min_spacing_m": (None, float),      # None -> half a wavelength
    "waveguide_span_m": (10.0, float),
    "waveguide_height_m": (3.0, float),
    "feed_x_m": (0.0, float),
    "period_s": (1.0, float),
    "n_antennas": (6, int),
    "k_devices": (10, int),
    "device_area_x_m": (10.0, float),
    "device_area_y_m": (6.0, float),
    "circuit_power_w": (1e-7, float),
    "eh_a": (150.0, float),
    "eh_b_w": (0.014, float),
    "eh_z_w": (0.024, float),
    "ew_grid_points": (2000, int),
    "ew_max_sweeps": (10, int),
    "ew_improvement_tol": (1e-6, float),
    "spde_population": (30, int),
    "spde_generations": (200, int),
    "max_ao_iters": (30, int),
    "ao_tol": (1e-4, float),
}

RESULT_COLUMNS = ["run_id", "parameter", "value", "seed", "protocol", "algo",
                  "status", "sum_rate_bits", "ao_iterations",
                  "fitness_evaluations", "error"]
SOLVE_COLUMNS = ["protocol", "algo", "seed", "status", "sum_rate_bits",
                 "ao_iterations", "fitness_evaluations"]
SWEEP_KEYS = ("n_antennas", "delta", "circuit_power", "protocol",
              "placement_algorithm")


class ConfigError(ValueError):
    pass


def load_config(path: str | Path | None) -> dict:
    """Merge a JSON config file over the schema defaults."""
    resolved = {key: default for key, (default, _) in CONFIG_SCHEMA.items()}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            raw = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {p} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"config file {p} must hold a JSON object")
        for key, value in raw.items():
            if key not in CONFIG_SCHEMA:
                raise ConfigError(f"unknown config key: {key!r}")
            _, typ = CONFIG_SCHEMA[key]
            if value is None and key == "min_spacing_m":
                resolved[key] = None
                continue
            try:
                resolved[key] = typ(value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"config key {key!r}: expected "
                                  f"{typ.__name__}, got {value!r}") from exc
    return resolved


def build_run_setup(cfg: dict):
    """Translate a resolved config dict into domain objects."""
    try:
        system = SystemConfig(
            carrier_frequency_hz=cfg["carrier_frequency_ghz"] * 1e9,
            effective_index=cfg["effective_index"],
            delta=cfg["delta"],
            mu_db_per_m=cfg["mu_db_per_m"],
            hap_power_w=dbm_to_watts(cfg["hap_power_dbm"]),
            noise_power_w=dbm_to_watts(cfg["noise_dbm"]),
            min_spacing_m=cfg["min_spacing_m"],
            waveguide_span_m=cfg["waveguide_span_m"],
            waveguide_height_m=cfg["waveguide_height_m"],
            feed_x_m=cfg["feed_x_m"],
            period_s=cfg["period_s"],
        )
        eh = EhParams(a=cfg["eh_a"], b=cfg["eh_b_w"], z=cfg["eh_z_w"])
        ew = EwConfig(grid_points=cfg["ew_grid_points"],
                      max_sweeps=cfg["ew_max_sweeps"],
                      improvement_tol=cfg["ew_improvement_tol"])
        spde = SpdeConfig(population=cfg["spde_population"],
                          max_generations=cfg["spde_generations"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return system, eh, ew, spde


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_seeds(args) -> list[int]:
    if args.seeds:
        try:
            first, last = args.seeds.split("..")
            return list(range(int(first), int(last) + 1))
        except ValueError as exc:
            raise ConfigError(f"--seeds expects N..M, got {args.seeds!r}") from exc
    return [args.seed]


def _expand(option: str, both: tuple[str, str]) -> tuple[str, ...]:
    return both if option == "both" else (option,)


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    system, eh, ew, spde = build_run_setup(cfg)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(SOLVE_COLUMNS)
    for protocol in _expand(args.protocol, ("tdma", "noma")):
        for algo in _expand(args.algo, ("ew", "spde")):
            scenario = generate_scenario(
                args.seed, cfg["k_devices"], cfg["n_antennas"], system,
                cfg["device_area_x_m"], cfg["device_area_y_m"],
                eh=eh, circuit_power_w=cfg["circuit_power_w"])
            try:
                report = ao_solve(scenario, system, protocol=protocol,
                                  algo=algo, max_ao_iters=cfg["max_ao_iters"],
                                  tol=cfg["ao_tol"], ew_config=ew,
                                  spde_config=spde)
            except InfeasibleAllocationError as exc:
                print(f"infeasible instance ({protocol}/{algo}): {exc}",
                      file=sys.stderr)
                return EXIT_INFEASIBLE
            writer.writerow([protocol, algo, args.seed, "ok",
                             _fmt(report.value_bits),
                             report.ao_iterations,
                             report.fitness_evaluations])
    return EXIT_OK


def _parse_sweep_flag(flag: str) -> tuple[str, list]:
    if "=" not in flag:
        raise ConfigError(f"--sweep expects KEY=v1,v2,..., got {flag!r}")
    key, _, raw = flag.partition("=")
    if key not in SWEEP_KEYS:
        raise ConfigError(f"unknown sweep key {key!r}; choose from {SWEEP_KEYS}")
    items = [v for v in raw.split(",") if v]
    if not items:
        raise ConfigError(f"--sweep {key!r} needs at least one value")
    if key == "n_antennas":
        values = [int(v) for v in items]
    elif key in ("delta", "circuit_power"):
        values = [float(v) for v in items]
    else:
        values = items
    return key, values


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    system, eh, ew, spde = build_run_setup(cfg)
    key, values = _parse_sweep_flag(args.sweep)
    seeds = _parse_seeds(args)
    spec = SweepSpec(
        varied_parameter=key, values=tuple(values), seeds=tuple(seeds),
        config=system, k_devices=cfg["k_devices"],
        n_antennas=cfg["n_antennas"], dx_m=cfg["device_area_x_m"],
        dy_m=cfg["device_area_y_m"], eh=eh,
        circuit_power_w=cfg["circuit_power_w"],
        protocols=_expand(args.protocol, ("tdma", "noma")),
        algos=_expand(args.algo, ("ew", "spde")),
        ew_config=ew, spde_config=spde,
        max_ao_iters=cfg["max_ao_iters"], ao_tol=cfg["ao_tol"])
    started = time.perf_counter()
    rows = run_sweep(spec, jobs=args.jobs)
    wall = time.perf_counter() - started

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "results.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[col]) for col in RESULT_COLUMNS])
    with open(out / "trace.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["run_id", "ao_iter", "sum_rate_bits"])
        for row in rows:
            for i, value in enumerate(row["trace"]):
                writer.writerow([row["run_id"], i, _fmt(value)])
    manifest = {
        "version": __version__,
        "config": cfg,
        "sweep": {"parameter": key, "values": values},
        "seeds": seeds,
        "protocols": list(spec.protocols),
        "algos": list(spec.algos),
        "jobs": args.jobs,
        "rows": [{"run_id": r["run_id"], "status": r["status"],
                  "error": r["error"]} for r in rows],
        "total_wall_time_s": wall,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    n_ok = sum(1 for r in rows if r["status"] == "ok")
    print(f"sweep complete: {n_ok}/{len(rows)} rows ok, output in {out}",
          file=sys.stderr)
    return EXIT_OK if n_ok >= 1 else EXIT_INFEASIBLE


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    system, eh, _, _ = build_run_setup(cfg)
    print(f"config ok: N={cfg['n_antennas']} K={cfg['k_devices']} "
          f"delta={system.delta} P0={system.hap_power_w} W "
          f"noise={system.noise_power_w} W spacing={system.min_spacing_m:.6g} m "
          f"EH(a={eh.a}, b={eh.b} W, z={eh.z} W)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pawpcn",
        description="Pinching-antenna WPCN sum-rate simulator and optimizer")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--protocol", default="tdma",
                       choices=["tdma", "noma", "both"])
        p.add_argument("--algo", default="ew", choices=["ew", "spde", "both"])
        p.add_argument("--seed", type=int, default=0)

    solve = sub.add_parser("solve", help="run one scenario")
    common(solve)
    solve.set_defaults(func=cmd_solve)

    sweep = sub.add_parser("sweep", help="run a parameter sweep")
    common(sweep)
    sweep.add_argument("--seeds", default=None, metavar="N..M",
                       help="inclusive seed range, e.g. 0..49")
    sweep.add_argument("--sweep", required=True, metavar="KEY=v1,v2,...",
                       help=f"swept parameter, KEY in {SWEEP_KEYS}")
    sweep.add_argument("--out", required=True, help="output directory")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.set_defaults(func=cmd_sweep)

    validate = sub.add_parser("validate", help="check a config file")
    validate.add_argument("--config", default=None)
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InfeasibleAllocationError, InfeasibleGeometryError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
