# %% [markdown]
# # Power-gain selection
#
# The gain is the largest value allowed by the transmit budget, the LMC noise
# requirement and the DP constraint. Print which one binds across SNR and
# privacy level.

# %%
from qflmc.channel import ChannelConfig
from qflmc.power import PowerSolverConfig, analog_gain_solution, digital_gain_solution
from qflmc.privacy import PrivacyBudget
from qflmc.quantizer import QuantizerSpec

solver = PowerSolverConfig(n_mc=20_000)
print(f"{'snr':>5} {'eps':>5} | {'digital A':>10} {'binds':>9} | {'analog A':>10} {'binds':>9}")
for snr in (10.0, 17.5, 25.0):
    cfg = ChannelConfig.from_snr_db(snr)
    for eps in (0.5, 1.0, 5.0, 15.0):
        b = PrivacyBudget(eps, 0.01)
        d = digital_gain_solution(cfg, 8.28e-3, 20, 5, 30.0, QuantizerSpec(0.05), b, solver, 0)
        a = analog_gain_solution(cfg, 1.28e-4, 5, 30.0, b)
        print(f"{snr:5.1f} {eps:5.1f} | {d.gain:10.5f} {d.binding:>9} | {a.gain:10.5f} {a.binding:>9}")
