"""Power-gain selection under transmit-power, LMC-noise and DP constraints.

All solvers assume homogeneous channel gains and return one scalar gain ``A``
applied to every symbol.
"""

import math
import warnings
from dataclasses import dataclass

from .errors import ConfigurationError
from .privacy import PAPER, analog_T_inverse, digital_noise, estimate_delta_digital
from .search import bisect_feasible

POWER = "power"
LMC_NOISE = "lmc-noise"
DP = "dp"


@dataclass(frozen=True)
class PowerSolverConfig:
    n_mc: int = 100_000
    bisection_tol: float = 1e-7
    max_iters: int = 60

    def __post_init__(self):
        if self.n_mc < 1000:
            raise ConfigurationError("at least 1000 draws required", key="n_mc")
        if not self.bisection_tol > 0:
            raise ConfigurationError("must be positive", key="bisection_tol")
        if self.max_iters < 1:
            raise ConfigurationError("must be >= 1", key="max_iters")


@dataclass(frozen=True)
class GainSolution:
    gain: float
    binding: str
    caps: dict
    delta_hat: float = None
    delta_stderr: float = None

    def __float__(self):
        return self.gain


def lmc_noise_cap(eta, n0):
    """Largest gain whose injected noise ``eta^2 N0 / A^2`` still covers ``2 eta``."""
    return math.sqrt(eta * n0 / 2.0)


def _homogeneous_h(h):
    try:
        h = float(h)
    except TypeError:
        raise ConfigurationError("power solvers need a scalar (homogeneous) channel gain", key="h") from None
    if h == 0:
        raise ZeroDivisionError("singular channel: h = 0")
    return h


def digital_power_cap(h, p0):
    return abs(_homogeneous_h(h)) * math.sqrt(p0)


def analog_power_cap(h, p0, ell):
    if not ell > 0:
        raise ConfigurationError("must be positive", key="ell")
    return digital_power_cap(h, p0) / ell


def _binding(caps):
    return min(caps, key=caps.get)


def digital_gain_solution(cfg, eta, k_devices, m, ell, qspec, budget, solver=None, rng=None, use_dp=True):
    solver = solver or PowerSolverConfig()
    caps = {POWER: digital_power_cap(cfg.h, cfg.p0), LMC_NOISE: lmc_noise_cap(eta, cfg.n0)}
    cap = min(caps.values())
    if not use_dp:
        return GainSolution(cap, _binding(caps), caps)

    noise = digital_noise(solver.n_mc, m, cfg.n0, rng)

    def estimate(a_gain):
        return estimate_delta_digital(a_gain, k_devices, m, cfg.n0, ell, qspec, budget, noise=noise)

    at_cap = estimate(cap)
    if at_cap.delta <= budget.delta:
        return GainSolution(cap, _binding(caps), caps, at_cap.delta, at_cap.stderr)

    gain = bisect_feasible(
        lambda a: estimate(a).delta <= budget.delta, 0.0, cap, xtol=solver.bisection_tol, max_iter=solver.max_iters
    )
    if gain < solver.bisection_tol:
        warnings.warn(f"digital gain starved by the DP constraint: A={gain:.3g}", RuntimeWarning, stacklevel=2)
    final = estimate(gain)
    return GainSolution(gain, DP, caps, final.delta, final.stderr)


def solve_digital_gain(cfg, eta, k_devices, m, ell, qspec, budget, solver=None, rng=None):
    """Largest ``A <= min(|h| sqrt(P0), sqrt(eta N0 / 2))`` whose estimated delta stays within budget.

    The estimate reuses one noise matrix for every candidate gain, which makes
    the bisection deterministic for a given ``rng``.
    """
    return digital_gain_solution(cfg, eta, k_devices, m, ell, qspec, budget, solver, rng).gain


def analog_dp_cap(n0, m, ell, budget, mode=PAPER):
    x = analog_T_inverse(1.0 - budget.delta, budget.epsilon, mode)
    return math.sqrt(n0 * x / (2.0 * m * ell**2))


def analog_gain_solution(cfg, eta, m, ell, budget, mode=PAPER, use_dp=True):
    caps = {POWER: analog_power_cap(cfg.h, cfg.p0, ell), LMC_NOISE: lmc_noise_cap(eta, cfg.n0)}
    if use_dp:
        caps[DP] = analog_dp_cap(cfg.n0, m, ell, budget, mode)
    binding = _binding(caps)
    return GainSolution(caps[binding], binding, caps)


def solve_analog_gain(cfg, eta, m, ell, budget, mode=PAPER):
    """``min(|h| sqrt(P0) / ell, sqrt(eta N0 / 2), sqrt(N0 T^-1(1 - delta) / (2 m ell^2)))``."""
    return analog_gain_solution(cfg, eta, m, ell, budget, mode).gain
