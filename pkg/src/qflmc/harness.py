"""Chain simulation, replication averaging and one-axis parameter sweeps."""

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import channel as ch
from .errors import ConfigurationError, DivergenceError, InfeasibleError
from .model import GaussianDist, ModelSpec, device_statistics, exact_posterior, generate_dataset
from .power import PowerSolverConfig, analog_gain_solution, digital_gain_solution
from .privacy import MODES, PAPER, PrivacyBudget
from .quantizer import QuantizerSpec, quantize
from .rng import as_generator, substream

ETA_DIGITAL = 8.28e-3
ETA_ANALOG = 1.28e-4


class Scheme(str, enum.Enum):
    DIGITAL = "digital"
    ANALOG = "analog"
    DIGITAL_NO_DP = "digital_no_dp"
    ANALOG_NO_DP = "analog_no_dp"
    CENTRALIZED_LMC = "centralized_lmc"

    @property
    def is_digital(self):
        return self in (Scheme.DIGITAL, Scheme.DIGITAL_NO_DP)

    @property
    def is_analog(self):
        return self in (Scheme.ANALOG, Scheme.ANALOG_NO_DP)

    @property
    def uses_dp(self):
        return self in (Scheme.DIGITAL, Scheme.ANALOG)

    @property
    def default_eta(self):
        return ETA_DIGITAL if self.is_digital else ETA_ANALOG


SWEEP_AXES = ("snr_db", "epsilon", "a")


@dataclass(frozen=True)
class Sweep:
    axis: str
    grid: tuple

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigurationError(f"unknown axis {self.axis!r}; expected one of {SWEEP_AXES}", key="sweep.axis")
        grid = tuple(float(v) for v in self.grid)
        if not grid:
            raise ConfigurationError("grid is empty", key="sweep.grid")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigurationError("grid values must be strictly increasing", key="sweep.grid")
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: Scheme = Scheme.DIGITAL
    model: ModelSpec = field(default_factory=ModelSpec)
    channel: ch.ChannelConfig = field(default_factory=ch.ChannelConfig)
    quantizer: QuantizerSpec = field(default_factory=QuantizerSpec)
    budget: PrivacyBudget = field(default_factory=PrivacyBudget)
    ell: float = 30.0
    eta: float = None
    s_total: int = 300
    s_burnin: int = 200
    replications: int = 1000
    seed: int = 0
    mode: str = PAPER
    solver: PowerSolverConfig = field(default_factory=PowerSolverConfig)
    freeze_dataset: bool = False
    sweep: Sweep = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "scheme", Scheme(self.scheme))
        except ValueError:
            raise ConfigurationError(
                f"unknown scheme {self.scheme!r}; expected one of {[s.value for s in Scheme]}", key="scheme"
            ) from None
        if self.s_total < 1:
            raise ConfigurationError("must be >= 1", key="s_total")
        if not 0 <= self.s_burnin < self.s_total:
            raise ConfigurationError(f"must satisfy 0 <= s_burnin < s_total={self.s_total}", key="s_burnin")
        if self.replications < 1:
            raise ConfigurationError("must be >= 1", key="replications")
        if not self.ell > 0:
            raise ConfigurationError("must be positive", key="ell")
        if self.eta is not None and self.eta < 0:
            raise ConfigurationError("must be nonnegative", key="eta")
        if self.mode not in MODES:
            raise ConfigurationError(f"must be one of {MODES}", key="mode")
        if self.channel.m != self.model.m:
            raise ConfigurationError(f"block length {self.channel.m} != model dimension {self.model.m}", key="channel.m")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("must be a 64-bit unsigned integer", key="seed")

    @property
    def step_size(self):
        return self.scheme.default_eta if self.eta is None else float(self.eta)

    @property
    def s_used(self):
        return self.s_total - self.s_burnin

    def at(self, axis, value):
        """Copy with one sweep axis set to ``value``."""
        if axis == "snr_db":
            return replace(self, channel=replace(self.channel, p0=ch.snr_db_to_p0(value, self.channel.n0)))
        if axis == "epsilon":
            return replace(self, budget=replace(self.budget, epsilon=float(value)))
        if axis == "a":
            return replace(self, quantizer=replace(self.quantizer, a=float(value)))
        raise ConfigurationError(f"unknown axis {axis!r}", key="sweep.axis")


@dataclass
class ChainResult:
    samples: np.ndarray
    mse: float
    gain_used: float
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    scheme: str
    mean_mse: float
    stderr_mse: float
    gain_used: float
    replications: int

    @property
    def feasible(self):
        return self.replications > 0


@dataclass
class SweepResult:
    axis: str
    seed: int
    rows: list = field(default_factory=list)

    def row(self, sweep_value, scheme):
        scheme = Scheme(scheme).value
        for r in self.rows:
            if r.scheme == scheme and r.sweep_value == sweep_value:
                return r
        raise KeyError((sweep_value, scheme))


def compute_mse(samples, mu):
    """Average squared distance of the samples from ``mu``."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("compute_mse needs at least one sample")
    samples = np.atleast_2d(samples)
    return float(np.mean(np.sum((samples - np.asarray(mu)) ** 2, axis=1)))


def batch_means_stderr(samples, n_batches=20):
    """Per-coordinate standard error of the chain mean from non-overlapping batch means."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    size = samples.shape[0] // n_batches
    if size < 1:
        raise ValueError("not enough samples for the requested batch count")
    means = samples[: size * n_batches].reshape(n_batches, size, -1).mean(axis=1)
    return means.std(axis=0, ddof=1) / math.sqrt(n_batches)


def _streams(rng):
    if isinstance(rng, dict):
        return rng["init"], rng["quantizer"], rng["channel"]
    rng = as_generator(rng)
    return rng, rng, rng


def run_chain(cfg, data, posterior, gain, rng):
    """Run one chain of ``cfg.s_total`` rounds and keep the post-burn-in samples.

    ``rng`` is a Generator (shared by all draws) or a dict of generators keyed
    ``init``, ``quantizer`` and ``channel``. ``gain`` is ignored by the
    centralized scheme.
    """
    init_rng, q_rng, c_rng = _streams(rng)
    scheme, eta, K, ell = cfg.scheme, cfg.step_size, data.K, cfg.ell
    grams, moments = device_statistics(data)
    shift = np.eye(data.m) / K
    grams = grams + shift

    theta = GaussianDist.standard(data.m).sample(init_rng)
    kept = np.empty((cfg.s_used, data.m))
    clipped = 0
    noise_scale = math.sqrt(2.0 * eta)
    for s in range(1, cfg.s_total + 1):
        g = np.einsum("kij,j->ki", grams, theta) - moments
        if scheme is Scheme.CENTRALIZED_LMC:
            theta = theta - eta * g.sum(axis=0) + noise_scale * c_rng.standard_normal(data.m)
        else:
            over = np.abs(g) > ell
            clipped += int(np.count_nonzero(over))
            g = np.clip(g, -ell, ell)
            if scheme.is_digital:
                y = ch.transmit_digital(quantize(g, cfg.quantizer, q_rng), gain, cfg.channel, c_rng)
            else:
                y = ch.transmit_analog(g, gain, cfg.channel, c_rng, ell)
            theta = ch.server_update(theta, y, gain, eta)
        if not np.all(np.isfinite(theta)):
            raise DivergenceError(s)
        if s > cfg.s_burnin:
            kept[s - cfg.s_burnin - 1] = theta
    diagnostics = {"rounds": cfg.s_total, "clipped_entries": clipped}
    gain_used = float("nan") if scheme is Scheme.CENTRALIZED_LMC else float(gain)
    return ChainResult(kept, compute_mse(kept, posterior.mean), gain_used, diagnostics)


def solve_gain(cfg):
    """Gain solution for the config's scheme, or ``None`` for centralized LMC."""
    scheme = cfg.scheme
    if scheme is Scheme.CENTRALIZED_LMC:
        return None
    if scheme.is_digital:
        return digital_gain_solution(
            cfg.channel, cfg.step_size, cfg.model.K, cfg.model.m, cfg.ell, cfg.quantizer, cfg.budget,
            cfg.solver, substream(cfg.seed, "solver"), use_dp=scheme.uses_dp,
        )
    return analog_gain_solution(
        cfg.channel, cfg.step_size, cfg.model.m, cfg.ell, cfg.budget, cfg.mode, use_dp=scheme.uses_dp
    )


def replication_streams(seed, replication):
    return {name: substream(seed, name, replication) for name in ("init", "quantizer", "channel")}


def run_replication(cfg, replication, gain):
    data_rep = 0 if cfg.freeze_dataset else replication
    data = generate_dataset(cfg.model, substream(cfg.seed, "data", data_rep))
    posterior = exact_posterior(data)
    try:
        return run_chain(cfg, data, posterior, gain, replication_streams(cfg.seed, replication)).mse
    except DivergenceError as exc:
        raise DivergenceError(exc.round_index, f"{exc} (replication {replication}, scheme {cfg.scheme.value})") from exc


def _run_block(args):
    cfg, reps, gain = args
    return [run_replication(cfg, r, gain) for r in reps]


def _map_replications(cfg, gain, n_jobs):
    reps = range(cfg.replications)
    if n_jobs is None or n_jobs <= 1:
        return np.array(_run_block((cfg, reps, gain)))
    chunks = [list(reps[i::n_jobs]) for i in range(n_jobs)]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        parts = list(pool.map(_run_block, [(cfg, c, gain) for c in chunks]))
    out = np.empty(cfg.replications)
    for c, p in zip(chunks, parts):
        out[c] = p
    return out


@dataclass(frozen=True)
class ReplicationSummary:
    mean_mse: float
    stderr_mse: float
    gain_used: float
    mses: np.ndarray = field(repr=False, default=None)


def run_replications(cfg, gain=None, n_jobs=1):
    """Mean and standard error of the MSE over ``cfg.replications`` independent chains.

    Replication ``r`` draws its dataset, initial point, quantizer bits and
    channel noise from substreams ``(cfg.seed, r)``, so results do not depend
    on ``n_jobs``. ``stderr_mse`` is NaN for a single replication.
    """
    if gain is None:
        solution = solve_gain(cfg)
        gain = float("nan") if solution is None else solution.gain
    mses = _map_replications(cfg, gain, n_jobs)
    n = mses.size
    stderr = float(mses.std(ddof=1) / math.sqrt(n)) if n > 1 else float("nan")
    return ReplicationSummary(float(mses.mean()), stderr, float(gain), mses)


def run_sweep(cfg, schemes=None, n_jobs=1):
    """One row per (grid value, scheme); infeasible gains give a row with zero replications."""
    if cfg.sweep is None:
        raise ConfigurationError("no sweep axis configured", key="sweep")
    schemes = [Scheme(s) for s in (schemes or (cfg.scheme,))]
    result = SweepResult(cfg.sweep.axis, cfg.seed)
    for value in cfg.sweep.grid:
        for scheme in schemes:
            point = replace(cfg.at(cfg.sweep.axis, value), scheme=scheme, sweep=None)
            try:
                solution = solve_gain(point)
            except InfeasibleError:
                result.rows.append(SweepRow(value, scheme.value, math.nan, math.nan, math.nan, 0))
                continue
            gain = math.nan if solution is None else solution.gain
            summary = run_replications(point, gain=gain, n_jobs=n_jobs)
            result.rows.append(
                SweepRow(value, scheme.value, summary.mean_mse, summary.stderr_mse, summary.gain_used, point.replications)
            )
    return result
