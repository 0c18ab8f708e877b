import math
from dataclasses import replace

import numpy as np
import pytest

from qflmc.channel import ChannelConfig
from qflmc.errors import ConfigurationError
from qflmc.power import (
    DP,
    LMC_NOISE,
    POWER,
    PowerSolverConfig,
    analog_gain_solution,
    analog_power_cap,
    digital_gain_solution,
    digital_power_cap,
    lmc_noise_cap,
    solve_analog_gain,
    solve_digital_gain,
)
from qflmc.privacy import PrivacyBudget, analog_delta_mc, digital_noise, estimate_delta_digital
from qflmc.quantizer import QuantizerSpec

Q = QuantizerSpec(0.05)
CH25 = ChannelConfig.from_snr_db(25.0)
ETA_D, ETA_A = 8.28e-3, 1.28e-4
FAST = PowerSolverConfig(n_mc=20_000)


def test_lmc_noise_cap():
    assert lmc_noise_cap(1.28e-4, 1.0) == pytest.approx(0.008, rel=1e-14)
    assert lmc_noise_cap(2.0, 1.0) == 1.0
    assert lmc_noise_cap(4 * 3e-3, 0.7) / lmc_noise_cap(3e-3, 0.7) == pytest.approx(2.0, abs=1e-12)


def test_power_caps():
    p0 = 10**2.5
    assert digital_power_cap(0.04, p0) == pytest.approx(0.711311764015569135, rel=1e-14)
    assert analog_power_cap(0.04, p0, 30.0) == pytest.approx(0.0237103921338523045, rel=1e-14)
    assert digital_power_cap(1.0, 1.0) == 1.0
    assert digital_power_cap(-0.3, 2.0) == digital_power_cap(0.3, 2.0)
    assert analog_power_cap(0.3, 2.0, 1.0) == digital_power_cap(0.3, 2.0)
    assert analog_power_cap(0.3, 2.0, 8.0) == pytest.approx(analog_power_cap(0.3, 2.0, 4.0) / 2, rel=1e-15)
    with pytest.raises(ZeroDivisionError):
        digital_power_cap(0.0, 1.0)


def test_solver_config_validation():
    with pytest.raises(ConfigurationError):
        PowerSolverConfig(n_mc=10)
    with pytest.raises(ConfigurationError):
        PowerSolverConfig(bisection_tol=0.0)


def test_heterogeneous_channel_rejected():
    cfg = ChannelConfig(h=np.full((2, 5), 0.04), m=5)
    with pytest.raises(ConfigurationError):
        solve_digital_gain(cfg, ETA_D, 2, 5, 30.0, Q, PrivacyBudget(), FAST, 0)


@pytest.mark.parametrize("budget", [PrivacyBudget(8.0, 0.01), PrivacyBudget(0.5, 0.999999)])
def test_digital_dp_inactive(budget):
    sol = digital_gain_solution(CH25, ETA_D, 20, 5, 30.0, Q, budget, FAST, 1)
    assert sol.gain == min(digital_power_cap(0.04, CH25.p0), lmc_noise_cap(ETA_D, 1.0))
    assert sol.binding == LMC_NOISE


def test_digital_power_becomes_binding():
    budget = PrivacyBudget(8.0, 0.01)
    lmc = lmc_noise_cap(ETA_D, 1.0)
    seen = set()
    for p0 in np.logspace(-2, 2, 9):
        cfg = replace(CH25, p0=p0)
        sol = digital_gain_solution(cfg, ETA_D, 20, 5, 30.0, Q, budget, FAST, 1)
        expected = min(0.04 * math.sqrt(p0), lmc)
        assert sol.gain == expected
        seen.add(sol.binding)
        if 0.04 * math.sqrt(p0) < lmc:
            assert sol.binding == POWER
    assert seen == {POWER, LMC_NOISE}


def test_digital_dp_binding_respects_budget():
    budget = PrivacyBudget(0.3, 0.01)
    solver = PowerSolverConfig(n_mc=50_000)
    sol = digital_gain_solution(CH25, ETA_D, 20, 5, 30.0, Q, budget, solver, np.random.default_rng(4))
    assert sol.binding == DP
    assert 0 < sol.gain < lmc_noise_cap(ETA_D, 1.0)
    own = estimate_delta_digital(sol.gain, 20, 5, 1.0, 30.0, Q, budget, 50_000, np.random.default_rng(4))
    assert own.delta <= budget.delta + 2 * own.stderr
    fresh = estimate_delta_digital(sol.gain, 20, 5, 1.0, 30.0, Q, budget, 200_000, np.random.default_rng(99))
    se = math.sqrt(budget.delta * (1 - budget.delta) / 50_000)
    assert abs(fresh.delta - budget.delta) <= 3 * se
    # just above the returned gain the budget is violated on the solver's noise
    noise = digital_noise(50_000, 5, 1.0, np.random.default_rng(4))
    above = estimate_delta_digital(sol.gain + 2 * solver.bisection_tol, 20, 5, 1.0, 30.0, Q, budget, noise=noise)
    assert above.delta > budget.delta


def test_digital_gain_monotone_in_budget():
    solver = PowerSolverConfig(n_mc=20_000)
    gains_eps = [solve_digital_gain(CH25, ETA_D, 20, 5, 30.0, Q, PrivacyBudget(e, 0.01), solver, 3)
                 for e in (0.1, 0.2, 0.4, 0.8, 1.6)]
    gains_delta = [solve_digital_gain(CH25, ETA_D, 20, 5, 30.0, Q, PrivacyBudget(0.3, d), solver, 3)
                   for d in (0.001, 0.01, 0.05, 0.2)]
    assert all(b >= a for a, b in zip(gains_eps, gains_eps[1:]))
    assert all(b >= a for a, b in zip(gains_delta, gains_delta[1:]))
    for g in gains_eps + gains_delta:
        assert g <= min(digital_power_cap(0.04, CH25.p0), lmc_noise_cap(ETA_D, 1.0))


def test_analog_vacuous_dp():
    sol = analog_gain_solution(CH25, ETA_A, 5, 30.0, PrivacyBudget(5.0, 1 - 1e-12), "corrected")
    assert sol.gain == min(analog_power_cap(0.04, CH25.p0, 30.0), lmc_noise_cap(ETA_A, 1.0))


@pytest.mark.parametrize("mode", ["paper", "corrected"])
def test_analog_is_analytic_minimum(mode):
    for snr in (0.0, 10.0, 25.0):
        for eps in (0.5, 1.0, 5.0, 15.0):
            cfg = ChannelConfig.from_snr_db(snr)
            sol = analog_gain_solution(cfg, ETA_A, 5, 30.0, PrivacyBudget(eps, 0.01), mode)
            assert sol.gain == pytest.approx(min(sol.caps.values()), rel=1e-9)
            assert sol.gain <= analog_power_cap(0.04, cfg.p0, 30.0)
            assert sol.gain <= lmc_noise_cap(ETA_A, 1.0)


def test_analog_dp_term_scales_with_ell():
    cfg = ChannelConfig.from_snr_db(60.0)
    b = PrivacyBudget(0.5, 0.01)
    big_eta = 10.0
    g1 = analog_gain_solution(cfg, big_eta, 5, 30.0, b, "corrected")
    g2 = analog_gain_solution(cfg, big_eta, 5, 60.0, b, "corrected")
    assert g1.binding == g2.binding == DP
    assert g2.gain == pytest.approx(g1.gain / 2, rel=1e-12)


def test_analog_dp_gain_meets_delta_by_monte_carlo():
    # isolate the DP term by relaxing the other two caps
    cfg = ChannelConfig.from_snr_db(60.0)
    b = PrivacyBudget(5.0, 0.01)
    sol = analog_gain_solution(cfg, 10.0, 5, 30.0, b, "corrected")
    assert sol.binding == DP
    est = analog_delta_mc(sol.gain, 5, 1.0, 30.0, 5.0, 200_000, np.random.default_rng(5))
    se = math.sqrt(0.01 * 0.99 / est.n_mc)
    assert abs(est.delta - 0.01) <= 3 * se
    assert solve_analog_gain(cfg, 10.0, 5, 30.0, b, "corrected") == sol.gain
