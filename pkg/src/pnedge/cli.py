"""Command-line interface.

Subcommands: solve-static, extend, energy, dynamics, validate.
Exit codes: 0 success, 1 validation failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .config import RunConfig, box_radii, parse_config, snapshot_times
from .dynamics import DynamicsState, RunOptions, run_dynamics
from .energy import (
    BoxQuadrature,
    elastic_energy_box,
    energy_breakdown,
    log_divergence_fit,
    seeded_perturbations,
)
from .errors import TimeStepUnderflowError
from .extension import YLevels, dtn_traction, extend_to_half_planes, stress_field
from .grid import build_grid
from .io import prepare_output_dir, write_csv, write_field_csv, write_manifest
from .potential import frenkel, from_csv
from .profile import Profile, analytic_profile, background, tanh_profile
from .static import (
    SolveOptions,
    burgers_density,
    center_profile,
    decay_coefficients,
    residual,
    solve_static,
)
from .validation import report_dict, run_validation


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pnedge",
        description="Spectral solver for the static and dynamic core structure "
                    "of an edge dislocation",
    )
    ap.add_argument("--config", help="key = value configuration file")
    ap.add_argument("--output", help="output directory (overrides config)")
    ap.add_argument("--overwrite", action="store_true",
                    help="allow writing into a directory that already holds results")
    ap.add_argument("--seed", type=int, help="override the run seed")
    ap.add_argument("--N", type=int, help="override the grid sample count")
    ap.add_argument("--potential", help="frenkel or table:<path>")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override any config key (repeatable)")
    ap.add_argument("command",
                    choices=["solve-static", "extend", "energy", "dynamics", "validate"])
    return ap


def _config_from_args(args) -> RunConfig:
    overrides: dict = {}
    for item in args.set:
        if "=" not in item:
            raise ValueError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.output is not None:
        overrides["output"] = args.output
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.N is not None:
        overrides["N"] = str(args.N)
    if args.potential is not None:
        overrides["potential"] = args.potential
    if args.overwrite:
        overrides["overwrite"] = "true"
    return parse_config(args.config, overrides)


def _setup(cfg: RunConfig):
    params = cfg.params
    grid = build_grid(cfg.L_over_zeta * params.zeta, cfg.N)
    if cfg.potential == "frenkel":
        spec = frenkel(params)
    else:
        spec = from_csv(params, cfg.potential.split(":", 1)[1])
    return params, grid, spec


def _initial_profile(cfg: RunConfig, grid, params) -> Profile:
    choice = cfg.static_init
    if choice == "tanh":
        return tanh_profile(grid, params)
    if choice == "analytic":
        return analytic_profile(grid, params)
    if choice.startswith("background:"):
        width = float(choice.split(":", 1)[1]) * params.zeta
        return Profile(grid=grid, params=params, zeta_bg=width)
    raise ValueError(f"unknown static_init {choice!r}")


def _solve(cfg: RunConfig, grid, params, spec):
    opts = SolveOptions(dt0=cfg.static_dt0, res_tol=cfg.static_res_tol,
                        max_iters=cfg.static_max_iters, newton=cfg.static_newton)
    return solve_static(_initial_profile(cfg, grid, params), spec, opts)


def cmd_solve_static(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    params, grid, spec = _setup(cfg)
    result = _solve(cfg, grid, params, spec)
    shift, centered = center_profile(result.profile)
    cp, cm = decay_coefficients(centered)
    rho, total = burgers_density(centered)
    rf = residual(centered, spec)
    out = prepare_output_dir(cfg.output, cfg.overwrite)
    write_csv(out / "profile.csv", {
        "x": grid.x, "u1": centered.u1, "v": centered.v,
        "rho": rho, "residual": rf.samples,
    })
    summary = {
        "residual_linf": rf.linf, "residual_l2": rf.l2,
        "shift": shift, "decay_plus": cp, "decay_minus": cm,
        "burgers_total": total, "iterations": result.iterations,
        "newton_steps": result.newton_steps, "monotone": result.monotone,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    write_manifest(out / "manifest.json", cfg.echo(), "solve-static",
                   {"total": time.perf_counter() - t0})
    return 0


def cmd_extend(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    params, grid, spec = _setup(cfg)
    profile = _solve(cfg, grid, params, spec).profile
    z = params.zeta
    yl = YLevels.geometric(cfg.ylevels_y_min_over_zeta * z,
                           cfg.ylevels_y_max_over_zeta * z,
                           cfg.ylevels_count, mirrored=cfg.ylevels_mirrored)
    hp = extend_to_half_planes(profile, yl)
    sf = stress_field(profile, yl)
    s12_gamma, s22_gamma = dtn_traction(profile)
    out = prepare_output_dir(cfg.output, cfg.overwrite)
    ys = yl.values
    pairs = {
        "u1": (hp.u1_plus, hp.u1_minus), "u2": (hp.u2_plus, hp.u2_minus),
        "sigma11": (sf.s11_plus, sf.s11_minus), "sigma12": (sf.s12_plus, sf.s12_minus),
        "sigma22": (sf.s22_plus, sf.s22_minus), "sigma33": (sf.s33_plus, sf.s33_minus),
    }
    for name, (plus, minus) in pairs.items():
        if yl.mirrored:
            values = np.vstack([minus[::-1], plus])
            levels = np.concatenate([-ys[::-1], ys])
        else:
            values, levels = plus, ys
        write_field_csv(out / f"{name}.csv", grid.x, levels, values)
    write_csv(out / "traction.csv", {"x": grid.x, "sigma12": s12_gamma,
                                     "sigma22": s22_gamma})
    write_manifest(out / "manifest.json", cfg.echo(), "extend",
                   {"total": time.perf_counter() - t0},
                   extra={"gauges": {"u2_zero_mode": 0.0,
                                     "note": "u2 defined up to an additive constant"},
                          "grid": {"L": grid.L, "N": grid.N, "h": grid.h}})
    return 0


def cmd_energy(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    params, grid, spec = _setup(cfg)
    profile = _solve(cfg, grid, params, spec).profile
    quad = BoxQuadrature.for_params(params, y_max_factor=cfg.energy_y_max_over_zeta,
                                    n_levels=cfg.energy_quad_levels)
    perts = seeded_perturbations(grid, params, cfg.energy_n_perturbations,
                                 seed=cfg.energy_pert_seed)
    radii = box_radii(cfg)
    breakdowns = [energy_breakdown(ph, profile, spec, quad, box_radius=radii[-1])
                  for ph in perts]
    slope, intercept, r2 = log_divergence_fit(profile, radii)
    out = prepare_output_dir(cfg.output, cfg.overwrite)
    from dataclasses import asdict

    payload = {
        "perturbations": [asdict(bd) for bd in breakdowns],
        "log_divergence": {"slope": slope, "intercept": intercept, "r_squared": r2},
    }
    (out / "energy.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    write_csv(out / "energy_box.csv", {
        "R": np.asarray(radii),
        "E": np.array([elastic_energy_box(profile, R) for R in radii]),
    })
    write_manifest(out / "manifest.json", cfg.echo(), "energy",
                   {"total": time.perf_counter() - t0})
    return 0


def cmd_dynamics(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    params, grid, spec = _setup(cfg)
    ref = analytic_profile(grid, params)
    z = params.zeta
    v0 = cfg.dynamics_bump_amp * params.b * np.exp(
        -(grid.x**2) / (cfg.dynamics_bump_width_over_zeta * z) ** 2
    )
    s0 = DynamicsState(t=0.0, p=ref.with_correction(v0), spec=spec, reference=ref)
    opts = RunOptions(dt=cfg.dynamics_dt, adapt=cfg.dynamics_adapt,
                      method=cfg.dynamics_method)
    out = prepare_output_dir(cfg.output, cfg.overwrite)
    snaps = snapshot_times(cfg)
    snapshots = {}
    try:
        if snaps:
            s = s0
            times = sorted(set(snaps) | {cfg.dynamics_T_end})
            merged = None
            for t_target in times:
                s, trace = run_dynamics(s, t_target, opts)
                snapshots[t_target] = s.p.u1.copy()
                arrs = trace.as_arrays()
                if merged is None:
                    merged = arrs
                else:
                    merged = {k: np.concatenate([merged[k], arrs[k][1:]])
                              for k in merged}
            arr = merged
        else:
            _, trace = run_dynamics(s0, cfg.dynamics_T_end, opts)
            arr = trace.as_arrays()
    except TimeStepUnderflowError as exc:
        arr = exc.trace.as_arrays() if exc.trace is not None else {}
        if arr:
            write_csv(out / "trace.csv", {"t": arr["times"], "F": arr["F_values"],
                                          "Q": arr["Q_values"],
                                          "residual": arr["residual_norms"],
                                          "dt": arr["dt_history"]})
        write_manifest(out / "manifest.json", cfg.echo(), "dynamics",
                       {"total": time.perf_counter() - t0},
                       extra={"aborted": str(exc)})
        raise
    write_csv(out / "trace.csv", {"t": arr["times"], "F": arr["F_values"],
                                  "Q": arr["Q_values"],
                                  "residual": arr["residual_norms"],
                                  "dt": arr["dt_history"]})
    for t_snap, u1 in snapshots.items():
        write_csv(out / f"snapshot_t{t_snap:g}.csv", {"x": grid.x, "u1": u1})
    write_manifest(out / "manifest.json", cfg.echo(), "dynamics",
                   {"total": time.perf_counter() - t0})
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    results = run_validation(cfg)
    for r in results:
        print(r.line())
    out = prepare_output_dir(cfg.output, cfg.overwrite)
    report = report_dict(results)
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    write_manifest(out / "manifest.json", cfg.echo(), "validate",
                   {"total": time.perf_counter() - t0})
    return 0 if report["all_pass"] else 1


_COMMANDS = {
    "solve-static": cmd_solve_static,
    "extend": cmd_extend,
    "energy": cmd_energy,
    "dynamics": cmd_dynamics,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[args.command](cfg)
    except (ValueError, OSError, RuntimeError) as exc:
        # runtime failures (incl. TimeStepUnderflowError, ConvergenceError)
        print(json.dumps({"error": str(exc), "type": type(exc).__name__}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
