"""Command-line front end.

    qflmc run            one config -> one CSV row
    qflmc sweep-snr      --grid 10,17.5,25
    qflmc sweep-epsilon  --grid 1,5,7.5,15
    qflmc sweep-quantizer --grid 0.01,0.05
    qflmc solve-gain     prints the power gain and the binding constraint
    qflmc dp-check       --gain A prints the estimated delta
"""

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .channel import snr_db_to_p0
from .config import config_to_dict, parse_config
from .errors import ConfigurationError, DivergenceError, InfeasibleError
from .harness import ExperimentConfig, Scheme, Sweep, SweepResult, SweepRow, run_replications, run_sweep, solve_gain
from .privacy import MODES, analog_delta_mc, analog_loss_mean, analog_T, digital_noise, estimate_delta_digital
from .report import emit_csv, format_csv
from .rng import substream

SWEEPS = {"sweep-snr": "snr_db", "sweep-epsilon": "epsilon", "sweep-quantizer": "a"}
DEFAULT_SCHEMES = {"sweep-snr": "digital,analog", "sweep-epsilon": "digital,analog", "sweep-quantizer": "digital"}


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", type=Path, help="JSON experiment config (defaults used if omitted)")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", type=Path, help="output CSV path (stdout if omitted)")
    g.add_argument("--replications", type=int)
    g.add_argument("--mode", choices=MODES)
    g.add_argument("--jobs", type=int, default=1, help="worker processes for replications")
    g.add_argument("--scheme", choices=[s.value for s in Scheme])
    g.add_argument("--epsilon", type=float)
    g.add_argument("--delta", type=float)
    g.add_argument("--snr-db", type=float)
    g.add_argument("--a", type=float, help="quantizer sharpness")

    parser = argparse.ArgumentParser(prog="qflmc", description="Quantized federated Langevin Monte Carlo simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run replications for one config")
    for name in SWEEPS:
        p = sub.add_parser(name, parents=[common], help=f"sweep {SWEEPS[name]}")
        p.add_argument("--grid", type=_floats, required=True)
        p.add_argument("--schemes", default=DEFAULT_SCHEMES[name])
    sub.add_parser("solve-gain", parents=[common], help="print the solved power gain")
    p = sub.add_parser("dp-check", parents=[common], help="estimate delta for a given gain")
    p.add_argument("--gain", type=float, required=True)
    p.add_argument("--n-mc", type=int, default=100_000)
    return parser


def resolve_config(args):
    cfg = parse_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.replications is not None:
        cfg = replace(cfg, replications=args.replications)
    if args.mode is not None:
        cfg = replace(cfg, mode=args.mode)
    if args.scheme is not None:
        cfg = replace(cfg, scheme=args.scheme)
    if args.epsilon is not None or args.delta is not None:
        cfg = replace(cfg, budget=replace(
            cfg.budget,
            epsilon=cfg.budget.epsilon if args.epsilon is None else args.epsilon,
            delta=cfg.budget.delta if args.delta is None else args.delta,
        ))
    if args.snr_db is not None:
        cfg = replace(cfg, channel=replace(cfg.channel, p0=snr_db_to_p0(args.snr_db, cfg.channel.n0)))
    if args.a is not None:
        cfg = replace(cfg, quantizer=replace(cfg.quantizer, a=args.a))
    return cfg


def _manifest(args, cfg):
    record = {
        "config_path": None if args.config is None else str(args.config),
        "output_path": None if args.out is None else str(args.out),
        "config": config_to_dict(cfg),
        "version": __version__,
    }
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def _write(result, args):
    if args.out is None:
        sys.stdout.write(format_csv(result))
    else:
        emit_csv(result, args.out)


def _cmd_run(args, cfg):
    summary = run_replications(cfg, n_jobs=args.jobs)
    row = SweepRow(math.nan, cfg.scheme.value, summary.mean_mse, summary.stderr_mse, summary.gain_used, cfg.replications)
    _write(SweepResult("none", cfg.seed, [row]), args)


def _cmd_sweep(args, cfg):
    cfg = replace(cfg, sweep=Sweep(SWEEPS[args.command], args.grid))
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    _write(run_sweep(cfg, schemes=schemes, n_jobs=args.jobs), args)


def _cmd_solve_gain(args, cfg):
    solution = solve_gain(cfg)
    if solution is None:
        raise ConfigurationError("centralized_lmc has no power gain", key="scheme")
    caps = " ".join(f"{k}={v:.10g}" for k, v in solution.caps.items())
    print(f"scheme={cfg.scheme.value} A={solution.gain:.12g} binding={solution.binding} {caps}")


def _cmd_dp_check(args, cfg):
    gain, b = args.gain, cfg.budget
    m, n0 = cfg.model.m, cfg.channel.n0
    rng = substream(cfg.seed, "privacy")
    if cfg.scheme.is_analog:
        est = analog_delta_mc(gain, m, n0, cfg.ell, b.epsilon, args.n_mc, rng)
        extra = ""
        if gain > 0:
            x = analog_loss_mean(gain, m, n0, cfg.ell)
            extra = f" closed_form={1.0 - analog_T(x, b.epsilon, 'corrected'):.10g}"
        print(f"scheme={cfg.scheme.value} A={gain:.12g} epsilon={b.epsilon:g} delta_hat={est.delta:.10g} stderr={est.stderr:.3g}{extra}")
        return
    noise = digital_noise(args.n_mc, m, n0, rng)
    est = estimate_delta_digital(gain, cfg.model.K, m, n0, cfg.ell, cfg.quantizer, b, noise=noise)
    print(f"scheme={cfg.scheme.value} A={gain:.12g} epsilon={b.epsilon:g} delta_hat={est.delta:.10g} stderr={est.stderr:.3g}")


COMMANDS = {"run": _cmd_run, "solve-gain": _cmd_solve_gain, "dp-check": _cmd_dp_check}
COMMANDS.update({name: _cmd_sweep for name in SWEEPS})


def dispatch(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        _manifest(args, cfg)
        COMMANDS[args.command](args, cfg)
    except (ConfigurationError, InfeasibleError, DivergenceError, OSError) as exc:
        print(f"qflmc: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
