# %% [markdown]
# # One-bit quantization and the noisy uplink
#
# Each device clips its gradient, sends one stochastic bit per entry, and the
# server normalizes the superposed signal. With the gain at the LMC-noise cap the
# channel noise alone supplies the Langevin noise.

# %%
import numpy as np

from qflmc.channel import ChannelConfig, injected_noise_variance, server_update, transmit_digital
from qflmc.power import lmc_noise_cap
from qflmc.quantizer import QuantizerSpec, phi, quantize

q = QuantizerSpec(a=0.05)
for g in (-30, -10, 0, 10, 30):
    print(f"g={g:+4d}  P(+1)={phi(g, q):.4f}  E[bit]={2 * phi(g, q) - 1:+.4f}")

# %% [markdown]
# The expected bit is roughly `a * g / 2` for small gradients, so the digital
# drift is a shrunken gradient.

# %%
rng = np.random.default_rng(0)
bits = quantize(np.full((100_000,), 30.0), q, rng)
print("empirical E[bit] at g=30:", bits.mean())

# %%
eta = 8.28e-3
cfg = ChannelConfig.from_snr_db(25.0)
gain = lmc_noise_cap(eta, cfg.n0)
print("gain", gain, "injected variance", injected_noise_variance(gain, eta, cfg.n0), "2*eta", 2 * eta)

symbols = np.ones((20, 5))
theta = np.zeros(5)
draws = np.array([server_update(theta, transmit_digital(symbols, gain, cfg, rng), gain, eta) for _ in range(20_000)])
print("empirical variance", draws.var(axis=0).round(5))
