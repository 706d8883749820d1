"""Command-line frontend.

Subcommands: ``curve`` sweeps one parameter and writes analytic (optionally
also Monte Carlo) probabilities per K; ``heatmap`` grids LEO count against
MEO count; ``validate`` runs the analytic-vs-simulation campaign and exits
nonzero if any row is out of tolerance; ``sample`` dumps one drawn
constellation. All output is CSV with 12-significant-digit values and
newline endings, written in deterministic sweep order.

Exit codes: 0 success, 1 validation failures, 2 configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import QuadratureSpec
from .config import (
    ConfigError,
    build_mc_settings,
    build_system_config,
    emit_settings,
    load_settings,
)
from .constellation import derive_rng, sample_bpp, sample_dsbpp
from .mc import McSpec, run_validation, simulate, simulate_availability, validation_csv

# Sweepable parameter names and how they land in the settings dict.
# n_meo sets the total MEO count; the closed forms depend only on the total.
_SWEEP_PARAMS = {
    "n_leo": ("leo.n_sats", int, "leo"),
    "n_meo": (None, int, "meo"),
    "n_orbits": ("meo.n_orbits", int, "meo"),
    "sats_per_orbit": ("meo.sats_per_orbit", int, "meo"),
    "h_leo": ("leo.altitude_km", float, "leo"),
    "h_meo": ("meo.altitude_km", float, "meo"),
    "phi_leo_deg": ("leo.beam_angle", float, "leo"),
    "phi_meo_deg": ("meo.beam_angle", float, "meo"),
    "phi_3db_deg": ("rx.phi_3db", float, None),
}


@dataclass
class SweepAxis:
    name: str
    values: list


def _parse_sweep(text: str) -> SweepAxis:
    if "=" not in text:
        raise ConfigError(f"sweep must look like name=min:max:step, got '{text}'")
    name, spec = (part.strip() for part in text.split("=", 1))
    if name not in _SWEEP_PARAMS:
        raise ConfigError(f"unknown sweep parameter '{name}' (known: {', '.join(sorted(_SWEEP_PARAMS))})")
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"sweep range must be min:max:step, got '{spec}'")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0:
        raise ConfigError("sweep step must be positive")
    if hi < lo:
        raise ConfigError("sweep max must not be below min")
    caster = _SWEEP_PARAMS[name][1]
    values = []
    v = lo
    while v <= hi + 1e-9 * max(1.0, abs(hi)):
        values.append(caster(round(v, 12)))
        v += step
    return SweepAxis(name=name, values=values)


def _apply_axis(settings: dict, name: str, value) -> dict:
    out = dict(settings)
    key, caster, _layer = _SWEEP_PARAMS[name]
    if name == "n_meo":
        out["meo.n_orbits"] = int(value)
        out["meo.sats_per_orbit"] = 1
    elif name.startswith("phi_"):
        import math
        out[key] = math.radians(float(value))
    else:
        out[key] = caster(value)
    return out


def _check_axis_system(name: str, system: str):
    layer = _SWEEP_PARAMS[name][2]
    if layer == "leo" and system == "meo":
        raise ConfigError(f"sweep parameter '{name}' does not affect the meo system")
    if layer == "meo" and system == "leo":
        raise ConfigError(f"sweep parameter '{name}' does not affect the leo system")


def _parse_k_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        ks = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad K list '{text}'") from exc
    if any(k < 1 for k in ks):
        raise ConfigError("K values must be at least 1")
    return ks


_ANALYTIC = {
    ("availability", "meo"): analytic.meo_availability,
    ("availability", "hybrid"): analytic.hybrid_availability,
    ("localizability", "meo"): analytic.meo_localizability,
    ("localizability", "hybrid"): analytic.hybrid_localizability,
}


def _analytic_values(settings, metric, system, ks, quad_spec):
    cfg = build_system_config(settings)
    if not ks:
        return []
    if metric == "localizability" and system == "leo":
        k_eff = min(max(ks), cfg.leo.n_sats)
        if k_eff >= 1:
            probs = analytic.leo_rank_coverage_probs(cfg, k_eff, quad_spec)
            products = np.cumprod(probs)
        else:
            products = np.array([])
        return [float(products[k - 1]) if k <= len(products) else 0.0 for k in ks]
    if metric == "availability" and system == "leo":
        return [analytic.leo_availability(cfg, k) for k in ks]
    fn = _ANALYTIC[(metric, system)]
    return [float(fn(cfg, k, quad_spec)) for k in ks]


def _mc_values(settings, metric, system, ks, mc_spec):
    cfg = build_system_config(settings)
    spec = McSpec(
        n_trials=mc_spec.n_trials,
        master_seed=mc_spec.master_seed,
        k_max=max(ks),
        sum_all_interferers=mc_spec.sum_all_interferers,
    )
    if metric == "availability":
        summary = simulate_availability(cfg, spec)
        table = {"leo": (summary.leo_avail, summary.leo_avail_se),
                 "meo": (summary.meo_avail, summary.meo_avail_se),
                 "hybrid": (summary.hybrid_avail, summary.hybrid_avail_se)}
    else:
        summary = simulate(cfg, spec)
        table = {"leo": (summary.leo_loc, summary.leo_loc_se),
                 "meo": (summary.meo_loc, summary.meo_loc_se),
                 "hybrid": (summary.hybrid_loc, summary.hybrid_loc_se)}
    values, errors = table[system]
    return [(float(values[k - 1]), float(errors[k - 1])) for k in ks]


def _format_row(values) -> str:
    return ",".join(format(v, ".12g") for v in values)


def _curve_point(args):
    settings, metric, system, ks, quad_spec, with_mc, mc_spec = args
    row = _analytic_values(settings, metric, system, ks, quad_spec)
    if with_mc and ks:
        for value, se in _mc_values(settings, metric, system, ks, mc_spec):
            row.extend([value, se])
    return row


def cmd_curve(opts) -> int:
    settings = load_settings(opts.config, _overrides(opts))
    axes = [_parse_sweep(s) for s in opts.sweep]
    if len(axes) != 1:
        raise ConfigError("curve needs exactly one --sweep axis")
    axis = axes[0]
    _check_axis_system(axis.name, opts.system)
    ks = _parse_k_list(opts.k_values)
    quad_spec = QuadratureSpec(relative_tolerance=opts.rtol, absolute_tolerance=opts.rtol * 1e-4)
    mc_spec = build_mc_settings(settings)

    header = ["x"] + [f"{opts.metric}_K{k}" for k in ks]
    if opts.mc:
        for k in ks:
            header.extend([f"{opts.metric}_K{k}_mc", f"{opts.metric}_K{k}_se"])
    tasks = [
        (_apply_axis(settings, axis.name, value), opts.metric, opts.system, ks, quad_spec, opts.mc, mc_spec)
        for value in axis.values
    ]
    if opts.jobs > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            rows = list(pool.map(_curve_point, tasks))
    else:
        rows = [_curve_point(t) for t in tasks]
    lines = [",".join(header)]
    for value, row in zip(axis.values, rows):
        lines.append(_format_row([value] + row))
    _write(opts.out, "\n".join(lines) + "\n")
    return 0


def cmd_heatmap(opts) -> int:
    settings = load_settings(opts.config, _overrides(opts))
    axes = [_parse_sweep(s) for s in opts.sweep]
    if len(axes) != 2:
        raise ConfigError("heatmap needs exactly two --sweep axes")
    names = {a.name for a in axes}
    if names != {"n_leo", "n_meo"}:
        raise ConfigError("heatmap axes must be n_leo and n_meo")
    leo_axis = next(a for a in axes if a.name == "n_leo")
    meo_axis = next(a for a in axes if a.name == "n_meo")
    ks = _parse_k_list(opts.k_values)
    if len(ks) != 1:
        raise ConfigError("heatmap needs exactly one K value")
    k = ks[0]
    quad_spec = QuadratureSpec(relative_tolerance=opts.rtol, absolute_tolerance=opts.rtol * 1e-4)

    tasks = []
    for n_leo in leo_axis.values:
        for n_meo in meo_axis.values:
            point = _apply_axis(_apply_axis(settings, "n_leo", n_leo), "n_meo", n_meo)
            tasks.append((point, opts.metric, "hybrid", [k], quad_spec, False, None))
    if opts.jobs > 1:
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            values = list(pool.map(_curve_point, tasks))
    else:
        values = [_curve_point(t) for t in tasks]
    lines = ["n_leo,n_meo,value"]
    idx = 0
    for n_leo in leo_axis.values:
        for n_meo in meo_axis.values:
            lines.append(_format_row([n_leo, n_meo, values[idx][0]]))
            idx += 1
    _write(opts.out, "\n".join(lines) + "\n")
    return 0


def cmd_validate(opts) -> int:
    settings = load_settings(opts.config, _overrides(opts))
    cfg = build_system_config(settings)
    mc_settings = build_mc_settings(settings)
    ks = _parse_k_list(opts.k_values)
    spec = McSpec(
        n_trials=mc_settings.n_trials,
        master_seed=mc_settings.master_seed,
        k_max=max(ks) if ks else 6,
        sum_all_interferers=mc_settings.sum_all_interferers,
    )
    quad_spec = QuadratureSpec(relative_tolerance=opts.rtol, absolute_tolerance=opts.rtol * 1e-4)
    metrics = tuple(opts.metrics.split(",")) if opts.metrics else ("availability", "localizability")
    for metric in metrics:
        if metric not in ("availability", "localizability"):
            raise ConfigError(f"unknown metric '{metric}'")
    rows = run_validation(cfg, spec, quad_spec, metrics=metrics)
    if ks:
        rows = [r for r in rows if r.k in ks]
    _write(opts.out, validation_csv(rows))
    failures = sum(1 for r in rows if not r.passed)
    if failures:
        print(f"{failures} of {len(rows)} validation rows out of tolerance", file=sys.stderr)
        return 1
    return 0


def cmd_sample(opts) -> int:
    settings = load_settings(opts.config, _overrides(opts))
    cfg = build_system_config(settings)
    rng = derive_rng(int(settings["mc.master_seed"]), 0)
    leo_pos = sample_bpp(cfg.leo, rng)
    meo_pos = sample_dsbpp(cfg.meo, rng)
    lines = ["layer,orbit_index,sat_index,x_km,y_km,z_km"]
    for i, pos in enumerate(leo_pos):
        lines.append(f"leo,-1,{i}," + _format_row(pos))
    per_orbit = cfg.meo.sats_per_orbit
    for i, pos in enumerate(meo_pos):
        orbit, sat = divmod(i, per_orbit)
        lines.append(f"meo,{orbit},{sat}," + _format_row(pos))
    _write(opts.out, "\n".join(lines) + "\n")
    return 0


def cmd_emit_config(opts) -> int:
    settings = load_settings(opts.config, _overrides(opts))
    _write(opts.out, emit_settings(settings))
    return 0


def _overrides(opts) -> dict:
    out = {}
    for item in opts.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got '{item}'")
        key, value = (part.strip() for part in item.split("=", 1))
        out[key] = value
    if opts.seed is not None:
        out["mc.master_seed"] = str(opts.seed)
    if opts.trials is not None:
        out["mc.n_trials"] = str(opts.trials)
    return out


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _add_common(sub):
    sub.add_argument("--config", default=None, help="configuration file (key = value lines)")
    sub.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one configuration key")
    sub.add_argument("--seed", type=int, default=None, help="Monte Carlo master seed")
    sub.add_argument("--trials", type=int, default=None, help="Monte Carlo trial count")
    sub.add_argument("--out", default="-", help="output path, '-' for stdout")
    sub.add_argument("--rtol", type=float, default=1e-8, help="quadrature relative tolerance")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="constelsim",
        description="Availability and localizability of LEO/MEO satellite constellations",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    curve = subs.add_parser("curve", help="sweep one parameter, one CSV column per K")
    _add_common(curve)
    curve.add_argument("--sweep", action="append", required=True, metavar="NAME=MIN:MAX:STEP")
    curve.add_argument("--metric", choices=("availability", "localizability"), default="availability")
    curve.add_argument("--system", choices=("leo", "meo", "hybrid"), default="hybrid")
    curve.add_argument("--K", dest="k_values", default="1,2,3,4,5,6", help="comma-separated K list")
    curve.add_argument("--mc", action="store_true", help="append Monte Carlo columns")
    curve.set_defaults(fn=cmd_curve)

    heat = subs.add_parser("heatmap", help="grid LEO count against total MEO count")
    _add_common(heat)
    heat.add_argument("--sweep", action="append", required=True, metavar="NAME=MIN:MAX:STEP")
    heat.add_argument("--metric", choices=("availability", "localizability"), default="availability")
    heat.add_argument("--K", dest="k_values", default="6")
    heat.set_defaults(fn=cmd_heatmap)

    val = subs.add_parser("validate", help="analytic vs Monte Carlo validation report")
    _add_common(val)
    val.add_argument("--metrics", default="availability,localizability")
    val.add_argument("--K", dest="k_values", default="", help="restrict report to these K (default all)")
    val.set_defaults(fn=cmd_validate)

    samp = subs.add_parser("sample", help="dump one sampled constellation as CSV")
    _add_common(samp)
    samp.set_defaults(fn=cmd_sample)

    emit = subs.add_parser("emit-config", help="print the effective configuration")
    _add_common(emit)
    emit.set_defaults(fn=cmd_emit_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    opts = parser.parse_args(argv)
    try:
        return opts.fn(opts)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
