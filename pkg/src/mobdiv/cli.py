"""Command-line front end.

    mobdiv optimize --config exp.json          optimized path JSON + knots CSV
    mobdiv simulate --config exp.json          per-trial CSV + summary JSON
    mobdiv sweep --config exp.json --axis d_radius --values 0.3,0.3828
    mobdiv validate-config --config exp.json   canonical config on stdout

Exit codes: 0 success, 2 configuration error, 1 runtime failure.
"""
import argparse
import csv
import io
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import pathio
from .config import ConfigError, ExperimentConfig, load_config
from .errors import NumericalError, ParameterError
from .geometry import fit_spline
from .pathopt import collinear_cost, is_straight_line_regime, optimize_path
from .rng import derive_seed
from .sim import SWEEP_AXES, apply_axis, build_trial_config, monte_carlo, simulate_trials, summarize

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def _resolve(args):
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        if args.command == "optimize":
            cfg = replace(cfg, annealing=replace(cfg.annealing, seed=args.seed))
        else:
            cfg = replace(cfg, master_seed=args.seed)
    if getattr(args, "trials", None) is not None:
        cfg = replace(cfg, trials=args.trials)
    if getattr(args, "out", None) is not None:
        cfg = replace(cfg, output_dir=args.out)
    if cfg.path.family == "file" and not os.path.isfile(cfg.path.file):
        raise ConfigError(f"path file not found: {cfg.path.file}")
    return cfg


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_optimize(cfg, workers=1):
    lam = cfg.wavelength_m
    L = cfg.path.L_p * lam
    D, report = optimize_path(cfg.path.N, L, lam, cfg.annealing, workers=workers)
    sp = fit_spline(D)
    regime = "analytic: straight line" if is_straight_line_regime(L, lam) else "annealed"
    os.makedirs(cfg.output_dir, exist_ok=True)
    rec = pathio.path_record(sp, L, lam, report.cost, regime)
    rec["straight_line_cost"] = collinear_cost(cfg.path.N, L, lam)
    pathio.save_path_json(os.path.join(cfg.output_dir, "path.json"), rec)
    pathio.save_knots_csv(os.path.join(cfg.output_dir, "knots.csv"), sp.knots)
    print(f"regime: {regime}")
    print(f"cost: {report.cost:.10g} (straight line {rec['straight_line_cost']:.10g})")
    print(f"L_p: {L:.10g} m ({cfg.path.L_p:g} lambda)")
    print(f"L_p': {sp.length:.10g} m ({sp.length / lam:.6g} lambda)")
    return rec


def _trial_csv(batch):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "q_opt_x", "q_opt_y", "true_power", "energy", "positioning_distance"])
    for i in range(batch.true_power.size):
        x, y = batch.q_opt[i]
        w.writerow([i, repr(float(x)), repr(float(y)), repr(float(batch.true_power[i])),
                    repr(float(batch.energy[i])), repr(float(batch.positioning_distance[i]))])
    return buf.getvalue()


def _summary_record(cfg, stats, extra=None):
    rec = {"family": cfg.path.family, "wavelength_m": cfg.wavelength_m, "master_seed": cfg.master_seed}
    rec.update(stats.as_dict())
    rec["path_length_lambda"] = stats.path_length / cfg.wavelength_m
    if extra:
        rec.update(extra)
    # output_dir is left out so results do not depend on where they are written
    rec["config"] = {k: v for k, v in cfg.to_dict().items() if k != "output_dir"}
    return rec


def cmd_simulate(cfg, workers=1):
    trial_cfg = build_trial_config(cfg)
    batch = simulate_trials(trial_cfg, cfg.trials, cfg.master_seed, workers)
    stats = summarize(batch)
    os.makedirs(cfg.output_dir, exist_ok=True)
    _write(os.path.join(cfg.output_dir, "trials.csv"), _trial_csv(batch))
    _write(os.path.join(cfg.output_dir, "summary.json"), _dump(_summary_record(cfg, stats)))
    print(f"mean_power: {stats.mean_power:.6f} +/- {stats.stderr_power:.6f}")
    print(f"mean_energy: {stats.mean_energy:.6f} +/- {stats.stderr_energy:.6f} J")
    print(f"M: {stats.M}  L_p': {stats.path_length / cfg.wavelength_m:.6g} lambda  trials: {stats.trials}")
    return stats


def parse_values(axis, text):
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    items = [v.strip() for v in (text or "").split(",") if v.strip()]
    if not items:
        raise ConfigError("--values must list at least one value")
    if axis == "path_family":
        return items
    out = []
    for v in items:
        if axis == "snr_db" and v.lower() in ("inf", "noiseless"):
            out.append(float("inf"))
            continue
        try:
            out.append(float(v))
        except ValueError:
            raise ConfigError(f"bad value {v!r} for axis {axis}") from None
    return out


def cmd_sweep(cfg, axis, values, workers=1, common_random_numbers=True):
    # replace() re-validates, so every point is checked before anything runs
    points = [apply_axis(cfg, axis, v) for v in values]
    os.makedirs(cfg.output_dir, exist_ok=True)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["axis", "value", "metric", "estimate", "stderr", "trials", "M", "path_length_lambda"])
    for i, (v, exp) in enumerate(zip(values, points)):
        seed = cfg.master_seed if common_random_numbers else derive_seed(cfg.master_seed, "sweep", i)
        stats = monte_carlo(build_trial_config(exp), exp.trials, seed, workers)
        L = stats.path_length / cfg.wavelength_m
        label = "noiseless" if isinstance(v, float) and np.isinf(v) else v
        w.writerow([axis, label, "mean_power", repr(stats.mean_power), repr(stats.stderr_power), stats.trials, stats.M, repr(L)])
        w.writerow([axis, label, "mean_energy", repr(stats.mean_energy), repr(stats.stderr_energy), stats.trials, stats.M, repr(L)])
        rec = _summary_record(exp, stats, {"axis": axis, "value": label, "seed": seed})
        _write(os.path.join(cfg.output_dir, f"summary_{i:03d}.json"), _dump(rec))
        print(f"{axis}={v}: power {stats.mean_power:.4f} +/- {stats.stderr_power:.4f}, "
              f"energy {stats.mean_energy:.4f} J, M={stats.M}")
    _write(os.path.join(cfg.output_dir, "sweep.csv"), buf.getvalue())


def build_parser():
    p = argparse.ArgumentParser(prog="mobdiv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sim=True):
        sp.add_argument("--config", help="experiment config JSON (defaults if omitted)")
        sp.add_argument("--out", help="output directory (overrides output_dir)")
        sp.add_argument("--seed", type=int, help="master seed (annealing seed for optimize)")
        if sim:
            sp.add_argument("--trials", type=int, help="number of Monte Carlo trials")
        sp.add_argument("--workers", type=int, default=1, help="worker threads; outputs do not depend on it")

    common(sub.add_parser("optimize", help="optimize a minimum-correlation path"), sim=False)
    common(sub.add_parser("simulate", help="Monte Carlo run of one configuration"))
    sw = sub.add_parser("sweep", help="Monte Carlo runs along one parameter axis")
    common(sw)
    sw.add_argument("--axis", required=True, help=", ".join(SWEEP_AXES))
    sw.add_argument("--values", required=True, help="comma-separated values")
    sw.add_argument("--no-crn", action="store_true", help="independent seeds per value instead of common random numbers")
    v = sub.add_parser("validate-config", help="check a config and print its canonical form")
    v.add_argument("--config", required=True)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = _resolve(args)
        if args.command == "validate-config":
            sys.stdout.write(cfg.to_json())
            return EXIT_OK
        if args.command == "sweep":
            values = parse_values(args.axis, args.values)
            # fail on bad axis values before touching the filesystem
            for val in values:
                apply_axis(cfg, args.axis, val)
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "optimize":
            cmd_optimize(cfg, args.workers)
        elif args.command == "simulate":
            cmd_simulate(cfg, args.workers)
        else:
            cmd_sweep(cfg, args.axis, values, args.workers, not args.no_crn)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ParameterError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
