"""Noisy multiple-access uplink with channel-inversion power control.

Device ``k`` pre-scales symbol ``i`` by ``P_{k,i} = A_i / h_{k,i}`` so that the
server receives ``y_i = A_i * sum_k x_{k,i} + z_i`` with ``z_i ~ N(0, N0)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ContractViolation
from .rng import as_generator


def snr_db_to_p0(snr_db, n0=1.0):
    """Full-power SNR is ``P0 / N0``."""
    return float(n0) * 10.0 ** (float(snr_db) / 10.0)


@dataclass(frozen=True)
class ChannelConfig:
    """One uplink block.

    ``h`` is a scalar (homogeneous) or a ``(K, m)`` array of per-device,
    per-symbol gains. ``noiseless=True`` suppresses the noise draw and is meant
    for algebraic checks only.
    """

    h: object = 0.04
    n0: float = 1.0
    p0: float = snr_db_to_p0(25.0)
    m: int = 5
    noiseless: bool = False

    def __post_init__(self):
        if not self.n0 > 0:
            raise ConfigurationError("noise power must be positive", key="n0")
        if not self.p0 > 0:
            raise ConfigurationError("power budget must be positive", key="p0")
        if self.m < 1:
            raise ConfigurationError("block length must be >= 1", key="m")
        h = np.asarray(self.h, dtype=float)
        if np.any(h == 0):
            raise ConfigurationError("channel gains must be nonzero for inversion", key="h")
        if h.ndim not in (0, 2) or (h.ndim == 2 and h.shape[1] != self.m):
            raise ConfigurationError("h must be a scalar or a (K, m) array", key="h")

    @classmethod
    def from_snr_db(cls, snr_db, h=0.04, n0=1.0, m=5, noiseless=False):
        return cls(h=h, n0=n0, p0=snr_db_to_p0(snr_db, n0), m=m, noiseless=noiseless)

    @property
    def snr_max(self):
        return self.p0 / self.n0

    @property
    def snr_db(self):
        return 10.0 * np.log10(self.snr_max)

    @property
    def homogeneous(self):
        return np.ndim(self.h) == 0

    def gains_for(self, K):
        """Channel gains broadcast to shape ``(K, m)``."""
        return np.broadcast_to(np.asarray(self.h, dtype=float), (K, self.m))


def as_gains(gains, m):
    """Power gains ``A`` as a length-``m`` float array."""
    a = np.asarray(gains, dtype=float)
    if a.ndim == 0:
        a = np.full(m, float(a))
    if a.shape != (m,):
        raise ConfigurationError(f"expected {m} power gains, got shape {a.shape}", key="gains")
    if np.any(a < 0):
        raise ConfigurationError("power gains must be nonnegative", key="gains")
    return a


def _superpose(x, gains, cfg, rng):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[1] != cfg.m:
        raise ConfigurationError(f"symbol block length {x.shape[1]} != m={cfg.m}", key="m")
    A = as_gains(gains, cfg.m)
    h = cfg.gains_for(x.shape[0])
    precoder = A / h
    y = np.sum(h * precoder * x, axis=0)
    if not cfg.noiseless:
        y = y + as_generator(rng).normal(0.0, np.sqrt(cfg.n0), cfg.m)
    return y


def transmit_digital(symbols, gains, cfg, rng):
    """Received block for ``(K, m)`` BPSK symbols in ``{-1, +1}``."""
    return _superpose(symbols, gains, cfg, rng)


def transmit_analog(clipped_gradients, gains, cfg, rng, ell):
    """Received block for ``(K, m)`` real gradients already clipped to ``[-ell, ell]``."""
    g = np.asarray(clipped_gradients, dtype=float)
    excess = np.max(np.abs(g)) - ell if g.size else -np.inf
    if excess > 1e-9:
        raise ContractViolation(f"gradient entry exceeds clip bound {ell} by {excess:.3g}")
    return _superpose(g, gains, cfg, rng)


def server_update(theta, y, gains, eta):
    """``theta - eta * y / A``: the normalized aggregate acts as the LMC drift plus noise."""
    theta = np.asarray(theta, dtype=float)
    A = as_gains(gains, theta.size)
    if np.any(A == 0):
        raise ZeroDivisionError("server normalization needs strictly positive gains")
    return theta - eta * (np.asarray(y, dtype=float) / A)


def injected_noise_variance(gains, eta, n0):
    """Per-coordinate variance ``eta^2 N0 / A_i^2`` added by :func:`server_update`."""
    A = np.asarray(gains, dtype=float)
    return eta**2 * n0 / A**2


def check_power_constraint(x, gains, cfg):
    """True iff every device meets ``(1/m) sum_i (A_i x_i / h_i)^2 <= P0``."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    A = as_gains(gains, cfg.m)
    h = np.asarray(cfg.h, dtype=float)
    if h.ndim == 2 and x.shape[0] == 1:
        x = np.broadcast_to(x, h.shape)
    h = np.broadcast_to(h, x.shape)
    power = np.mean((A * x / h) ** 2, axis=1)
    return bool(np.all(power <= cfg.p0 * (1 + 1e-9)))
