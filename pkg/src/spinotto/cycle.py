"""Four-stroke quantum Otto cycle of a driven spin-I.

Sign convention: work is counted positive when done *by* the spin, heat
positive when absorbed by it, so W = W_I + W_II = Q1 + Q2.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .propagator import (
    AdiabaticTarget,
    IntegratorConfig,
    adiabatic_target,
    evolve_stroke,
    friction_work,
    sudden_target,
)
from .pulses import FieldProtocol, Hamiltonian, PulseShape, hamiltonian_at
from .spin_algebra import check_two_i, spin_operators
from .states import coherence, energy_entropy, gibbs_state, internal_energy


@dataclass(frozen=True)
class CycleConfig:
    b0: float = 0.5
    b1: float = 0.5
    b2: float = 0.05
    t_hot: float = 2.0
    t_cold: float = 1.0
    two_i: int = 1
    shape: PulseShape = PulseShape()
    total_tau: float = 1.0
    integrator: IntegratorConfig = IntegratorConfig()

    def __post_init__(self):
        object.__setattr__(self, "two_i", check_two_i(self.two_i))
        for name in ("t_hot", "t_cold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.total_tau > 0:
            raise ValueError(f"total_tau must be positive, got {self.total_tau!r}")
        if np.hypot(self.b0, self.b1) == 0 or np.hypot(self.b0, self.b2) == 0:
            raise ValueError("both isochore Hamiltonians need a non-zero field")

    @property
    def gap_hot(self) -> float:
        return float(np.hypot(self.b0, self.b1))

    @property
    def gap_cold(self) -> float:
        return float(np.hypot(self.b0, self.b2))

    @property
    def reversed_baths(self) -> bool:
        """True when the "hot" bath is not hotter; such cycles are computed but flagged."""
        return not self.t_hot > self.t_cold

    def with_tau(self, tau: float) -> "CycleConfig":
        return replace(self, total_tau=float(tau))


@dataclass(frozen=True)
class CycleResult:
    w_expansion: float
    w_compression: float
    q_hot: float
    q_cold: float
    net_work: float
    efficiency: Optional[float]
    delta_s_e: float
    w_fric_total: float
    coherence_expansion: float
    t_cold: float
    delta_s_e_expansion: float = 0.0
    delta_s_e_compression: float = 0.0
    w_fric_expansion: float = 0.0
    w_fric_compression: float = 0.0
    steps: int = 0
    converged: bool = True
    regime: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "regime", "engine" if self.net_work > 0 else "dud")

    def as_dict(self) -> dict:
        out = asdict(self)
        for key in ("w_expansion", "w_compression", "q_hot", "q_cold", "net_work", "w_fric_total"):
            out[f"{key}_over_t_cold"] = out[key] / self.t_cold
        return out


def _efficiency(w: float, q_hot: float) -> Optional[float]:
    return w / q_hot if q_hot > 0 else None


def _isochore_hamiltonians(cfg: CycleConfig):
    ops = spin_operators(cfg.two_i)
    return ops, hamiltonian_at(cfg.b0, cfg.b1, ops), hamiltonian_at(cfg.b0, cfg.b2, ops)


def _assemble(cfg, h1, h2, rho_t1, rho_2, rho_t2, rho_1, ds_exp, ds_comp, fric_exp, fric_comp, steps=0, converged=True):
    w_exp = internal_energy(rho_t1, h1) - internal_energy(rho_2, h2)
    q_cold = internal_energy(rho_t2, h2) - internal_energy(rho_2, h2)
    w_comp = internal_energy(rho_t2, h2) - internal_energy(rho_1, h1)
    q_hot = internal_energy(rho_t1, h1) - internal_energy(rho_1, h1)
    w = w_exp + w_comp
    return CycleResult(
        w_expansion=w_exp,
        w_compression=w_comp,
        q_hot=q_hot,
        q_cold=q_cold,
        net_work=w,
        efficiency=_efficiency(w, q_hot),
        delta_s_e=ds_exp + ds_comp,
        w_fric_total=fric_exp + fric_comp,
        coherence_expansion=coherence(rho_2, h2, 0, 1),
        t_cold=cfg.t_cold,
        delta_s_e_expansion=ds_exp,
        delta_s_e_compression=ds_comp,
        w_fric_expansion=fric_exp,
        w_fric_compression=fric_comp,
        steps=steps,
        converged=converged,
    )


def _entropy_increase(rho_start, h_start: Hamiltonian, rho_end, h_end: Hamiltonian) -> float:
    return energy_entropy(rho_end, h_end) - energy_entropy(rho_start, h_start)


def run_cycle(cfg: CycleConfig, strict: bool = True, backend=None) -> CycleResult:
    """Finite-time cycle: thermalise at T_hot, expand over tau/2, thermalise at
    T_cold, compress over tau/2.

    ``strict=False`` keeps going when a stroke fails to converge and marks the
    result ``converged=False``.
    """
    ops, h1, h2 = _isochore_hamiltonians(cfg)
    expansion = FieldProtocol(cfg.b0, cfg.b1, cfg.b2, cfg.total_tau, cfg.shape)

    rho_t1 = gibbs_state(h1, cfg.t_hot)
    exp_run = evolve_stroke(rho_t1, expansion, ops, cfg.integrator, strict=strict, backend=backend)
    rho_2 = exp_run.rho

    rho_t2 = gibbs_state(h2, cfg.t_cold)
    comp_run = evolve_stroke(rho_t2, expansion.reversed(), ops, cfg.integrator, strict=strict, backend=backend)
    rho_1 = comp_run.rho

    target_exp = adiabatic_target(rho_t1, h1, h2, beta=1.0 / cfg.t_hot)
    target_comp = adiabatic_target(rho_t2, h2, h1, beta=1.0 / cfg.t_cold)

    return _assemble(
        cfg, h1, h2, rho_t1, rho_2, rho_t2, rho_1,
        _entropy_increase(rho_t1, h1, rho_2, h2),
        _entropy_increase(rho_t2, h2, rho_1, h1),
        friction_work(rho_2, target_exp),
        friction_work(rho_1, target_comp),
        steps=max(exp_run.steps, comp_run.steps),
        converged=exp_run.converged and comp_run.converged,
    )


def adiabatic_limit_cycle(cfg: CycleConfig) -> CycleResult:
    """tau -> infinity: both strokes preserve level populations.

    Entropy production and friction vanish identically because the final
    populations are the initial ones.
    """
    _, h1, h2 = _isochore_hamiltonians(cfg)
    rho_t1 = gibbs_state(h1, cfg.t_hot)
    rho_t2 = gibbs_state(h2, cfg.t_cold)
    target_exp: AdiabaticTarget = adiabatic_target(rho_t1, h1, h2, beta=1.0 / cfg.t_hot)
    target_comp: AdiabaticTarget = adiabatic_target(rho_t2, h2, h1, beta=1.0 / cfg.t_cold)
    return _assemble(cfg, h1, h2, rho_t1, target_exp.rho_a, rho_t2, target_comp.rho_a, 0.0, 0.0, 0.0, 0.0)


def sudden_limit_cycle(cfg: CycleConfig) -> CycleResult:
    """tau -> 0: the state is frozen while the Hamiltonian jumps."""
    _, h1, h2 = _isochore_hamiltonians(cfg)
    rho_t1 = gibbs_state(h1, cfg.t_hot)
    rho_t2 = gibbs_state(h2, cfg.t_cold)
    rho_2 = sudden_target(rho_t1)
    rho_1 = sudden_target(rho_t2)
    target_exp = adiabatic_target(rho_t1, h1, h2, beta=1.0 / cfg.t_hot)
    target_comp = adiabatic_target(rho_t2, h2, h1, beta=1.0 / cfg.t_cold)
    return _assemble(
        cfg, h1, h2, rho_t1, rho_2, rho_t2, rho_1,
        _entropy_increase(rho_t1, h1, rho_2, h2),
        _entropy_increase(rho_t2, h2, rho_1, h1),
        friction_work(rho_2, target_exp),
        friction_work(rho_1, target_comp),
    )


def max_efficiency(b0: float, b1: float, b2: float) -> float:
    """Quasi-static efficiency 1 - delta_2 / delta_1."""
    gap_hot = np.hypot(b0, b1)
    if gap_hot == 0:
        raise ValueError("hot-isochore gap is zero; efficiency undefined")
    return float(1.0 - np.hypot(b0, b2) / gap_hot)


def carnot_efficiency(t_hot: float, t_cold: float) -> float:
    if not (t_hot > 0 and t_cold > 0):
        raise ValueError("temperatures must be positive")
    return 1.0 - t_cold / t_hot


def positive_work_condition(cfg: CycleConfig) -> bool:
    """Quasi-static engine condition T_hot > (delta_1 / delta_2) T_cold."""
    return bool(cfg.t_hot > cfg.gap_hot / cfg.gap_cold * cfg.t_cold)


@dataclass(frozen=True)
class CycleBounds:
    w_lb: float
    w_up: float
    eta_m: float
    eta_c: float
    positive_work: bool
    t_cold: float

    def as_dict(self) -> dict:
        out = asdict(self)
        out["w_lb_over_t_cold"] = self.w_lb / self.t_cold
        out["w_up_over_t_cold"] = self.w_up / self.t_cold
        return out


def cycle_bounds(cfg: CycleConfig) -> CycleBounds:
    return CycleBounds(
        w_lb=sudden_limit_cycle(cfg).net_work,
        w_up=adiabatic_limit_cycle(cfg).net_work,
        eta_m=max_efficiency(cfg.b0, cfg.b1, cfg.b2),
        eta_c=carnot_efficiency(cfg.t_hot, cfg.t_cold),
        positive_work=positive_work_condition(cfg),
        t_cold=cfg.t_cold,
    )
