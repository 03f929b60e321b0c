"""Command-line front end: simulate, revive, schedule, transform, check.

Exit codes: 0 success, 2 configuration error, 3 wall collision, 4 numerical
failure, 5 unreachable revival fraction.  `--sweep key=a,b,c` runs simulate
once per value concurrently; MOVINGWELL_THREADS caps the worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import io_formats
from .config import RunBundle, RunConfig, apply_overrides, build_bundle, parse_config
from .core import COMOVING, LAB, ComplexField, Linear, SpatialGrid, l2_norm
from .errors import (ConfigError, MovingWellError, OutOfRange, UnreachableTau,
                     WallCollision)
from .revivals import RevivalSpec, revival_schedule, revive_psi, theta_rational
from .solver import carpet, gaussian_packet
from .transforms import (TauMap, comoving_forward, comoving_inverse,
                         greenberger_forward, greenberger_inverse,
                         slow_accel_check, tau_prime_limit)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COLLISION = 3
EXIT_NUMERICAL = 4
EXIT_UNREACHABLE = 5


def preset_path(name: str) -> Path:
    """Path of a bundled preset config such as 'fig4.cfg'."""
    return Path(str(resources.files("movingwell").joinpath("presets", name)))


def _load_config(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    overridden = {item.partition("=")[0].strip() for item in (args.set or [])}
    if args.set:
        cfg = apply_overrides(cfg, args.set)
    if args.units:
        explicit = args.config is not None and "units" not in overridden
        if explicit and cfg.units != args.units:
            raise ConfigError(
                f"--units {args.units} conflicts with config units {cfg.units}; "
                "mixed-unit runs are refused")
        cfg = replace(cfg, units=args.units)
    return cfg


def _load_bundle(args) -> RunBundle:
    return build_bundle(_load_config(args))


def _initial_packet(bundle: RunBundle):
    s0 = bundle.traj.state(0.0)
    grid = SpatialGrid(s0.w1, s0.w2, bundle.solver.n_points)
    return gaussian_packet(bundle.packet_center, bundle.packet_width,
                           bundle.packet_momentum, grid, bundle.params)


def _si_field(field: ComplexField, bundle: RunBundle) -> ComplexField:
    grid = SpatialGrid(float(bundle.scales.from_natural_length(field.grid.lo)),
                       float(bundle.scales.from_natural_length(field.grid.hi)),
                       field.grid.n_points)
    return ComplexField(grid, field.values / math.sqrt(bundle.scales.length),
                        field.frame)


def _run_one_simulation(bundle: RunBundle, out_prefix: str) -> None:
    psi0 = _initial_packet(bundle)
    meta = {"units": bundle.units, "config": bundle.config.source,
            "packet_center": bundle.config.packet_center,
            "packet_width": bundle.config.packet_width,
            "packet_momentum": bundle.config.packet_momentum}
    rec = carpet(psi0, bundle.traj, bundle.t_max, bundle.n_t,
                 bundle.solver, bundle.params, metadata=meta)
    if bundle.scales is not None:
        # export in SI: stretch grid and time back, keep each slice normalized
        rec.ts = bundle.scales.from_natural_time(rec.ts)
        rec.grid = SpatialGrid(float(bundle.scales.from_natural_length(rec.grid.lo)),
                               float(bundle.scales.from_natural_length(rec.grid.hi)),
                               rec.grid.n_points)
        rec.densities = rec.densities / bundle.scales.length
        rec.values = rec.values / math.sqrt(bundle.scales.length)
    io_formats.write_carpet_csv(f"{out_prefix}.csv", rec)
    io_formats.write_carpet_binary(f"{out_prefix}.qwcp", rec)
    io_formats.write_carpet_meta(f"{out_prefix}.meta", rec)
    worst = float(np.max(np.abs(rec.norms - 1.0)))
    for t, nrm in zip(rec.ts, rec.norms):
        print(f"slice t={t:.9g}  norm={nrm:.9f}")
    print(f"norm check: worst |norm-1| = {worst:.3e} over {len(rec.ts)} slices")
    print(f"wrote {out_prefix}.csv, {out_prefix}.qwcp, {out_prefix}.meta")


def _sweep_job(payload):
    cfg, out_prefix = payload
    _run_one_simulation(build_bundle(cfg), out_prefix)
    return out_prefix


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    if not args.sweep:
        bundle = build_bundle(cfg)
        _run_one_simulation(bundle, bundle.out)
        return EXIT_OK
    key, _, raw_vals = args.sweep.partition("=")
    if not raw_vals:
        raise ConfigError("--sweep expects key=v1,v2,...")
    jobs = []
    for raw in raw_vals.split(","):
        swept = apply_overrides(cfg, [f"{key}={raw}"])
        build_bundle(swept)  # validate before forking workers
        jobs.append((swept, f"{swept.out}_{key}{raw}"))
    max_workers = int(os.environ.get("MOVINGWELL_THREADS", os.cpu_count() or 1))
    with ProcessPoolExecutor(max_workers=max(1, max_workers)) as pool:
        for prefix in pool.map(_sweep_job, jobs):
            print(f"sweep run complete: {prefix}")
    return EXIT_OK


def cmd_revive(args) -> int:
    bundle = _load_bundle(args)
    spec = RevivalSpec(args.p, args.q)
    psi0 = _initial_packet(bundle)
    try:
        psi, t_rev = revive_psi(psi0, bundle.traj, spec, bundle.params)
    except UnreachableTau as exc:
        sup = tau_prime_limit(TauMap(bundle.traj, bundle.params)).forward_bound
        print(f"unreachable: {exc}", file=sys.stderr)
        print(f"tau' supremum for this trajectory: {sup:.12g}", file=sys.stderr)
        return EXIT_UNREACHABLE
    t_out = bundle.to_si_time(t_rev)
    out = args.out or f"{bundle.out}_revival.csv"
    if bundle.scales is not None:
        psi = _si_field(psi, bundle)
    io_formats.write_field_csv(out, psi, t_out)
    comb = theta_rational(spec.p, spec.q)
    print(f"tau' = {spec.p}/{spec.q}")
    print(f"t_rev = {t_out:.12g}")
    print("gauss coefficients c_s(p, 2q):")
    for s, c in zip(comb.s_values, comb.coefficients):
        print(f"  s={s:3d}  {c.real:+.12f} {c.imag:+.12f}i  |c|={abs(c):.12f}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_schedule(args) -> int:
    bundle = _load_bundle(args)
    t_max = args.t_max / (bundle.scales.time if bundle.scales else 1.0)
    rows = revival_schedule(bundle.traj, args.q_max, t_max, bundle.params)
    print("p/q     t_rev")
    for spec, t_rev in rows:
        print(f"{spec.p}/{spec.q}     {bundle.to_si_time(t_rev):.12g}")
    return EXIT_OK


def cmd_transform(args) -> int:
    bundle = _load_bundle(args)
    field, t_file = io_formats.read_field_csv(args.field)
    t = args.time if args.time is not None else t_file
    t_nat = t / (bundle.scales.time if bundle.scales else 1.0)
    linear = isinstance(bundle.traj, Linear)
    if bundle.scales is not None and args.direction == "forward":
        grid = SpatialGrid(float(bundle.scales.to_natural_length(field.grid.lo)),
                           float(bundle.scales.to_natural_length(field.grid.hi)),
                           field.grid.n_points)
        field = ComplexField(grid,
                             field.values * math.sqrt(bundle.scales.length),
                             field.frame)
    if args.direction == "forward":
        field = ComplexField(field.grid, field.values, LAB)
        out_field = (greenberger_forward(field, bundle.traj, t_nat, bundle.params)
                     if linear else
                     comoving_forward(field, bundle.traj, t_nat, bundle.params))
    else:
        field = ComplexField(field.grid, field.values, COMOVING)
        out_field = (greenberger_inverse(field, bundle.traj, t_nat, bundle.params)
                     if linear else
                     comoving_inverse(field, bundle.traj, t_nat, bundle.params))
        if bundle.scales is not None:
            out_field = _si_field(out_field, bundle)
    out = args.out or f"{Path(args.field).stem}_{args.direction}.csv"
    io_formats.write_field_csv(out, out_field, t)
    print(f"norm = {l2_norm(out_field):.12g}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_check(args) -> int:
    bundle = _load_bundle(args)
    scale = bundle.scales.time if bundle.scales else 1.0
    report = slow_accel_check(bundle.traj, (args.t0 / scale, args.t1 / scale),
                              bundle.params)
    verdict = "pass" if report.passed else "warn"
    print(f"max slow-acceleration margin r = {report.max_ratio:.6g} "
          f"at t = {bundle.to_si_time(report.t_worst):.6g}")
    print(f"threshold r < {report.threshold} -> {verdict}")
    return EXIT_OK


def _common_flags(sub):
    sub.add_argument("--config", help="path to a key = value config file")
    sub.add_argument("--units", choices=["natural", "si"],
                     help="unit system; must agree with the config file")
    sub.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override a config value (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="movingwell",
        description="Quantum infinite well with moving walls: simulation, "
                    "revival prediction, frame transforms")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("simulate", help="run a carpet simulation and export it")
    _common_flags(p)
    p.add_argument("--sweep", metavar="KEY=V1,V2,...",
                   help="run one simulation per value, concurrently")
    p.set_defaults(handler=cmd_simulate)

    p = subs.add_parser("revive", help="predict the field at tau' = p/q")
    _common_flags(p)
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--out", help="output CSV path")
    p.set_defaults(handler=cmd_revive)

    p = subs.add_parser("schedule", help="list revival times up to t_max")
    _common_flags(p)
    p.add_argument("q_max", type=int)
    p.add_argument("t_max", type=float)
    p.set_defaults(handler=cmd_schedule)

    p = subs.add_parser("transform", help="move a field file between frames")
    _common_flags(p)
    p.add_argument("--direction", choices=["forward", "inverse"], required=True)
    p.add_argument("--field", required=True, help="input field CSV")
    p.add_argument("--time", type=float, help="lab time (default: from the file)")
    p.add_argument("--out", help="output CSV path")
    p.set_defaults(handler=cmd_transform)

    p = subs.add_parser("check", help="slow-acceleration margin over [t0, t1]")
    _common_flags(p)
    p.add_argument("t0", type=float)
    p.add_argument("t1", type=float)
    p.set_defaults(handler=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WallCollision as exc:
        print(f"wall collision: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    except UnreachableTau as exc:
        print(f"unreachable revival: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (OutOfRange, MovingWellError, ValueError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
