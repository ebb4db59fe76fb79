import math
from dataclasses import replace

import numpy as np
import pytest

from spinotto.cycle import (
    CycleConfig,
    adiabatic_limit_cycle,
    carnot_efficiency,
    cycle_bounds,
    max_efficiency,
    positive_work_condition,
    run_cycle,
    sudden_limit_cycle,
)
from spinotto.propagator import IntegratorConfig, adiabatic_target, friction_work_energy
from spinotto.pulses import PulseShape, hamiltonian_at
from spinotto.spin_algebra import spin_operators
from spinotto.states import gibbs_state

from conftest import SPINS

FAST = IntegratorConfig(initial_steps=64, convergence_tol=1e-8, max_doublings=14)


def qubit_quasistatic_work(b0, b1, b2, t1, t2):
    d1, d2 = math.hypot(b0, b1), math.hypot(b0, b2)
    return (d1 - d2) / 2 * (math.tanh(d2 / (2 * t2)) - math.tanh(d1 / (2 * t1)))


def qubit_sudden_work(b0, b1, b2, t1, t2):
    d1, d2 = math.hypot(b0, b1), math.hypot(b0, b2)
    th1, th2 = math.tanh(d1 / (2 * t1)), math.tanh(d2 / (2 * t2))
    overlap = b0**2 + b1 * b2
    w_exp = -d1 * th1 / 2 + th1 * overlap / (2 * d1)
    w_comp = -d2 * th2 / 2 + th2 * overlap / (2 * d2)
    return w_exp + w_comp


def test_qubit_oracles_frozen():
    assert qubit_quasistatic_work(0.5, 0.5, 0.05, 2, 1) == pytest.approx(7.2773e-3, abs=1e-7)
    assert qubit_sudden_work(0.5, 0.5, 0.05, 2, 1) == pytest.approx(-2.2326e-2, abs=1e-6)


def test_adiabatic_limit_reference(base_cfg):
    res = adiabatic_limit_cycle(base_cfg)
    assert res.net_work == pytest.approx(qubit_quasistatic_work(0.5, 0.5, 0.05, 2, 1), abs=1e-10)
    assert res.net_work / base_cfg.t_cold == pytest.approx(7.277e-3, abs=1e-5)
    assert res.efficiency == pytest.approx(1 - math.sqrt(0.2525 / 0.5), abs=1e-12)
    assert res.delta_s_e == 0.0 and res.w_fric_total == 0.0
    assert res.regime == "engine"


def test_sudden_limit_reference(base_cfg):
    res = sudden_limit_cycle(base_cfg)
    assert res.net_work == pytest.approx(qubit_sudden_work(0.5, 0.5, 0.05, 2, 1), abs=1e-10)
    assert res.net_work / base_cfg.t_cold == pytest.approx(-2.233e-2, abs=1e-4)
    assert res.regime == "dud"
    assert res.delta_s_e > 0 and res.w_fric_total > 0


def test_qubit_oracles_random(rng):
    for _ in range(50):
        b0, b1, b2 = rng.uniform(0.05, 1.5, size=3)
        t2 = rng.uniform(0.2, 2)
        t1 = t2 * rng.uniform(1, 4)
        cfg = CycleConfig(b0=b0, b1=b1, b2=b2, t_hot=t1, t_cold=t2)
        assert adiabatic_limit_cycle(cfg).net_work == pytest.approx(qubit_quasistatic_work(b0, b1, b2, t1, t2), abs=1e-10)
        assert sudden_limit_cycle(cfg).net_work == pytest.approx(qubit_sudden_work(b0, b1, b2, t1, t2), abs=1e-10)


@pytest.mark.parametrize("limit", [adiabatic_limit_cycle, sudden_limit_cycle, lambda c: run_cycle(c.with_tau(7.0))])
def test_degenerate_cycle(limit):
    # nothing is driven: no work, no friction; heat passes straight from hot to cold
    cfg = CycleConfig(b1=0.3, b2=0.3)
    res = limit(cfg)
    for value in (res.net_work, res.delta_s_e, res.w_fric_total):
        assert value == pytest.approx(0, abs=1e-12)
    h = hamiltonian_at(cfg.b0, 0.3, spin_operators(1))
    through = float(np.real(np.trace(h.matrix @ (gibbs_state(h, 2.0) - gibbs_state(h, 1.0)))))
    assert res.q_hot == pytest.approx(through, abs=1e-12)
    assert res.q_cold == pytest.approx(-through, abs=1e-12)
    assert res.efficiency == pytest.approx(0, abs=1e-10)
    same_bath = limit(replace(cfg, t_hot=1.0))
    assert same_bath.q_hot == pytest.approx(0, abs=1e-12) and same_bath.q_cold == pytest.approx(0, abs=1e-12)
    assert same_bath.efficiency is None


@pytest.mark.parametrize("two_i", SPINS)
def test_sudden_below_adiabatic(two_i, rng):
    for _ in range(10):
        b0, b1, b2 = rng.uniform(0.05, 1.5, size=3)
        cfg = CycleConfig(b0=b0, b1=b1, b2=b2, t_hot=rng.uniform(0.5, 3), t_cold=rng.uniform(0.2, 2), two_i=two_i)
        assert sudden_limit_cycle(cfg).net_work <= adiabatic_limit_cycle(cfg).net_work + 1e-12


def test_max_efficiency():
    assert max_efficiency(0.5, 0.5, 0.05) == pytest.approx(0.2894, abs=5e-4)
    assert max_efficiency(0.5, 0.3, 0.3) == 0.0
    assert max_efficiency(1e-300, 1.0, 0.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        max_efficiency(0.0, 0.0, 1.0)
    assert carnot_efficiency(2.0, 1.0) == 0.5


def test_positive_work_condition(base_cfg):
    assert positive_work_condition(base_cfg)
    assert not positive_work_condition(replace(base_cfg, t_hot=1.0))
    assert positive_work_condition(CycleConfig(b1=0.2, b2=0.2, t_hot=1.1, t_cold=1.0))
    # the condition is exactly the sign of the quasi-static work
    threshold = base_cfg.gap_hot / base_cfg.gap_cold * base_cfg.t_cold
    assert adiabatic_limit_cycle(replace(base_cfg, t_hot=threshold * 1.01)).net_work > 0
    assert adiabatic_limit_cycle(replace(base_cfg, t_hot=threshold * 0.99)).net_work < 0


def test_bounds_record(base_cfg):
    b = cycle_bounds(base_cfg)
    assert b.w_lb < 0 < b.w_up
    assert b.eta_m < b.eta_c == 0.5
    assert b.positive_work
    d = b.as_dict()
    assert d["w_up_over_t_cold"] == pytest.approx(b.w_up)


def test_run_cycle_first_law_and_fields(base_cfg):
    res = run_cycle(base_cfg.with_tau(20.0))
    assert res.net_work == pytest.approx(res.w_expansion + res.w_compression, abs=1e-10)
    assert res.net_work == pytest.approx(res.q_hot + res.q_cold, abs=1e-8)
    assert res.delta_s_e == pytest.approx(res.delta_s_e_expansion + res.delta_s_e_compression, abs=1e-15)
    assert res.converged and res.steps >= 1024
    assert res.coherence_expansion > 0
    keys = res.as_dict()
    assert {"net_work", "net_work_over_t_cold", "efficiency", "regime"} <= set(keys)


def test_first_law_random_ensemble(rng):
    # 100 random configs across spins, pulses and times
    shapes = [PulseShape.sinusoidal(), PulseShape.power(0.5), PulseShape.power(1), PulseShape.power(2)]
    worst = 0.0
    for k in range(100):
        b0, b1, b2 = rng.uniform(0.05, 1.0, size=3)
        cfg = CycleConfig(
            b0=b0, b1=b1, b2=b2,
            t_hot=rng.uniform(0.5, 4), t_cold=rng.uniform(0.2, 2),
            two_i=SPINS[k % 4], shape=shapes[k % 4],
            total_tau=rng.uniform(0.1, 30), integrator=FAST,
        )
        res = run_cycle(cfg)
        worst = max(worst, abs(res.net_work - res.q_hot - res.q_cold))
        assert res.delta_s_e >= -1e-8
        assert res.w_fric_total >= -1e-10
    assert worst <= 1e-8


def test_friction_accounting_two_routes(base_cfg):
    for shape in (PulseShape.sinusoidal(), PulseShape.power(0.5)):
        cfg = replace(base_cfg, shape=shape, total_tau=15.0)
        res = run_cycle(cfg)
        ops = spin_operators(1)
        h1, h2 = hamiltonian_at(0.5, 0.5, ops), hamiltonian_at(0.5, 0.05, ops)
        rho_t1, rho_t2 = gibbs_state(h1, 2.0), gibbs_state(h2, 1.0)
        # U_tau - U_a per stroke from the cycle energies: U_tau(exp) = U(rho_t1) - W_I
        u_tau_exp = float(np.real(np.trace(h1.matrix @ rho_t1))) - res.w_expansion
        u_tau_comp = float(np.real(np.trace(h2.matrix @ rho_t2))) - res.w_compression
        t_exp = adiabatic_target(rho_t1, h1, h2, beta=0.5)
        t_comp = adiabatic_target(rho_t2, h2, h1, beta=1.0)
        u_a_exp = float(np.real(np.trace(h2.matrix @ t_exp.rho_a)))
        u_a_comp = float(np.real(np.trace(h1.matrix @ t_comp.rho_a)))
        assert res.w_fric_total == pytest.approx((u_tau_exp - u_a_exp) + (u_tau_comp - u_a_comp), abs=1e-6)


def test_reversed_baths_flagged():
    cfg = CycleConfig(t_hot=1.0, t_cold=2.0)
    assert cfg.reversed_baths
    assert adiabatic_limit_cycle(cfg).net_work < 0


def test_config_validation():
    with pytest.raises(ValueError):
        CycleConfig(t_cold=0)
    with pytest.raises(ValueError):
        CycleConfig(two_i=0)
    with pytest.raises(ValueError):
        CycleConfig(total_tau=-1)
    with pytest.raises(ValueError):
        CycleConfig(b0=0, b1=0)
