"""JSON experiment configs: strict parsing, defaults and lossless serialization."""

import json
from pathlib import Path

import numpy as np

from .channel import ChannelConfig, snr_db_to_p0
from .errors import ConfigurationError
from .harness import ExperimentConfig, Sweep
from .model import ModelSpec
from .power import PowerSolverConfig
from .privacy import PrivacyBudget
from .quantizer import QuantizerSpec

TOP_KEYS = {
    "scheme", "eta", "ell", "s_total", "s_burnin", "replications", "seed", "mode", "freeze_dataset",
    "model", "channel", "quantizer", "privacy", "solver", "sweep",
}
SECTION_KEYS = {
    "model": {"m", "theta_star", "n_total", "K", "partition_sizes"},
    "channel": {"h", "n0", "p0", "snr_db"},
    "quantizer": {"a", "family"},
    "privacy": {"epsilon", "delta"},
    "solver": {"n_mc", "bisection_tol", "max_iters"},
    "sweep": {"axis", "grid"},
}


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigurationError(f"expected an object, got {type(obj).__name__}", key=where or "config")
    for key in obj:
        if key not in allowed:
            path = f"{where}.{key}" if where else key
            raise ConfigurationError(f"unknown key (allowed: {', '.join(sorted(allowed))})", key=path)


def config_from_dict(raw):
    _check_keys(raw, TOP_KEYS, "")
    for name, allowed in SECTION_KEYS.items():
        if raw.get(name) is not None:
            _check_keys(raw[name], allowed, name)

    model = ModelSpec(**(raw.get("model") or {}))
    chan = dict(raw.get("channel") or {})
    if "p0" in chan and "snr_db" in chan:
        raise ConfigurationError("give either p0 or snr_db, not both", key="channel.snr_db")
    n0 = float(chan.get("n0", 1.0))
    p0 = chan["p0"] if "p0" in chan else snr_db_to_p0(chan.get("snr_db", 25.0), n0)
    h = chan.get("h", 0.04)
    if isinstance(h, list):
        h = np.asarray(h, dtype=float)
    channel = ChannelConfig(h=h, n0=n0, p0=float(p0), m=model.m)

    sweep = raw.get("sweep")
    top = {k: v for k, v in raw.items() if k not in SECTION_KEYS}
    return ExperimentConfig(
        model=model,
        channel=channel,
        quantizer=QuantizerSpec(**(raw.get("quantizer") or {})),
        budget=PrivacyBudget(**(raw.get("privacy") or {})),
        solver=PowerSolverConfig(**(raw.get("solver") or {})),
        sweep=Sweep(**sweep) if sweep else None,
        **top,
    )


def config_to_dict(cfg):
    h = cfg.channel.h
    return {
        "scheme": cfg.scheme.value,
        "eta": cfg.eta,
        "ell": cfg.ell,
        "s_total": cfg.s_total,
        "s_burnin": cfg.s_burnin,
        "replications": cfg.replications,
        "seed": cfg.seed,
        "mode": cfg.mode,
        "freeze_dataset": cfg.freeze_dataset,
        "model": {
            "m": cfg.model.m,
            "theta_star": list(cfg.model.theta_star),
            "n_total": cfg.model.n_total,
            "K": cfg.model.K,
            "partition_sizes": list(cfg.model.partition_sizes),
        },
        "channel": {
            "h": np.asarray(h).tolist() if np.ndim(h) else float(h),
            "n0": cfg.channel.n0,
            "p0": cfg.channel.p0,
        },
        "quantizer": {"a": cfg.quantizer.a, "family": cfg.quantizer.family.value},
        "privacy": {"epsilon": cfg.budget.epsilon, "delta": cfg.budget.delta},
        "solver": {
            "n_mc": cfg.solver.n_mc,
            "bisection_tol": cfg.solver.bisection_tol,
            "max_iters": cfg.solver.max_iters,
        },
        "sweep": None if cfg.sweep is None else {"axis": cfg.sweep.axis, "grid": list(cfg.sweep.grid)},
    }


def parse_config(path):
    """Read a JSON config; unknown keys and invariant violations raise ``ConfigurationError``."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file not found: {path}", key="config_path")
    try:
        raw = json.loads(path.read_text(encoding="utf-8") or "{}")
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON ({exc})", key="config_path") from exc
    try:
        return config_from_dict(raw)
    except TypeError as exc:
        raise ConfigurationError(str(exc), key="config") from exc


def dumps_config(cfg):
    return json.dumps(config_to_dict(cfg), sort_keys=True)
