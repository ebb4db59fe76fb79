"""Unitary adiabatic strokes and their quasi-static and sudden limits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .pulses import FieldProtocol, Hamiltonian
from .spin_algebra import SpinOperators
from .states import (
    check_density_matrix,
    eigensystem,
    gibbs_state,
    internal_energy,
    populations,
    relative_entropy,
)
from .tolerances import TOL


class ConvergenceError(RuntimeError):
    """Step doubling did not reach the requested trace-norm tolerance."""

    def __init__(self, distance: float, steps: int, rho: np.ndarray):
        super().__init__(
            f"propagator not converged after {steps} steps: last trace-norm change {distance:.3e}"
        )
        self.distance = distance
        self.steps = steps
        self.rho = rho


@dataclass(frozen=True)
class IntegratorConfig:
    initial_steps: int = 512
    convergence_tol: float = 1e-9
    max_doublings: int = 12
    field_rule: str = "average"

    def __post_init__(self):
        if self.field_rule not in ("average", "midpoint"):
            raise ValueError(f"field_rule must be 'average' or 'midpoint', got {self.field_rule!r}")
        if int(self.initial_steps) != self.initial_steps or self.initial_steps < 2:
            raise ValueError(f"initial_steps must be an integer >= 2, got {self.initial_steps!r}")
        if not self.convergence_tol > 0:
            raise ValueError(f"convergence_tol must be positive, got {self.convergence_tol!r}")
        if int(self.max_doublings) != self.max_doublings or self.max_doublings < 1:
            raise ValueError(f"max_doublings must be a positive integer, got {self.max_doublings!r}")


@dataclass(frozen=True)
class StrokeResult:
    rho: np.ndarray
    steps: int
    distance: float
    converged: bool


def trace_distance(a, b) -> float:
    """Trace norm ||a - b||_1 of a Hermitian difference."""
    return float(np.abs(np.linalg.eigvalsh(np.asarray(a) - np.asarray(b))).sum())


def stroke_unitary(proto: FieldProtocol, ops: SpinOperators, n_steps: int, rule="average", backend=None) -> np.ndarray:
    return _kernels.stroke_unitary(
        proto.b0, proto.b_start, proto.b_end, proto.duration,
        proto.shape.code, proto.shape.exponent or 0.0, ops, n_steps, rule, backend,
    )


def _conjugate(u, rho):
    out = u @ rho @ u.conj().T
    # strip the anti-Hermitian round-off so downstream eigh sees an exact Hermitian matrix
    return 0.5 * (out + out.conj().T)


def evolve_stroke(
    rho0,
    proto: FieldProtocol,
    ops: SpinOperators,
    cfg: IntegratorConfig = IntegratorConfig(),
    strict: bool = True,
    backend=None,
) -> StrokeResult:
    """Evolve rho0 over [0, tau/2], doubling the step count until successive
    final states agree to ``cfg.convergence_tol`` in trace norm.

    With ``strict=False`` an unconverged run returns its last iterate flagged
    ``converged=False`` instead of raising.
    """
    rho0 = check_density_matrix(rho0)
    if rho0.shape[0] != ops.dim:
        raise ValueError(f"state dimension {rho0.shape[0]} does not match spin dimension {ops.dim}")
    if proto.b_start == proto.b_end:
        # time-independent H: a single exponential is exact
        u = stroke_unitary(proto, ops, 1, cfg.field_rule, backend)
        return StrokeResult(_conjugate(u, rho0), 1, 0.0, True)

    n = cfg.initial_steps
    prev = _conjugate(stroke_unitary(proto, ops, n, cfg.field_rule, backend), rho0)
    distance = np.inf
    for _ in range(cfg.max_doublings):
        n *= 2
        rho = _conjugate(stroke_unitary(proto, ops, n, cfg.field_rule, backend), rho0)
        distance = trace_distance(rho, prev)
        if distance < cfg.convergence_tol:
            return StrokeResult(rho, n, distance, True)
        prev = rho
    if strict:
        raise ConvergenceError(distance, n, prev)
    return StrokeResult(prev, n, distance, False)


def evolve(rho0, proto: FieldProtocol, ops: SpinOperators, cfg: IntegratorConfig = IntegratorConfig()) -> np.ndarray:
    return evolve_stroke(rho0, proto, ops, cfg).rho


@dataclass(frozen=True)
class AdiabaticTarget:
    """Final state of an infinitely slow stroke: the initial level populations
    carried onto the eigenvectors of the final Hamiltonian."""

    rho_a: np.ndarray
    beta_a: float
    populations: np.ndarray
    h_final: Hamiltonian


def _fit_beta(p: np.ndarray, energies: np.ndarray) -> float:
    if np.any(p <= 0):
        raise ValueError("cannot infer a temperature from a state with empty levels")
    slope = np.polyfit(energies, np.log(p), 1)[0]
    return float(-slope)


def adiabatic_target(rho0, h_i: Hamiltonian, h_f: Hamiltonian, beta: Optional[float] = None) -> AdiabaticTarget:
    """Quasi-static image of rho0 under H_i -> H_f.

    ``beta`` is the inverse temperature of rho0; if omitted it is fitted from
    the level populations (rho0 must then be a Gibbs state of h_i). The target
    is thermal at beta_a = beta * delta_i / delta_f because every spin-I
    spectrum is equally spaced.
    """
    rho0 = check_density_matrix(rho0)
    for h in (h_i, h_f):
        if h.gap < TOL.min_gap:
            raise ValueError("adiabatic target needs non-degenerate initial and final Hamiltonians")
    w_i, v_i = eigensystem(h_i)
    in_basis = v_i.conj().T @ rho0 @ v_i
    off = in_basis - np.diag(np.diag(in_basis))
    if np.abs(off).max(initial=0.0) > TOL.diagonal:
        raise ValueError("initial state is not diagonal in the eigenbasis of the initial Hamiltonian")
    p = np.real(np.diag(in_basis)).copy()
    if beta is None:
        beta = _fit_beta(p, w_i)
    _, v_f = eigensystem(h_f)
    rho_a = (v_f * p) @ v_f.conj().T
    p.setflags(write=False)
    return AdiabaticTarget(rho_a, beta * h_i.gap / h_f.gap, p, h_f)


def sudden_target(rho0) -> np.ndarray:
    """Infinitely fast stroke: the state does not change."""
    return check_density_matrix(rho0)


def friction_work(rho_tau, target: AdiabaticTarget) -> float:
    """Excess work of a finite-time stroke, S(rho_tau || rho_a) / beta_a."""
    return relative_entropy(rho_tau, target.rho_a) / target.beta_a


def friction_work_energy(rho_tau, target: AdiabaticTarget) -> float:
    """Same excess work from the energy difference Tr[H_f (rho_tau - rho_a)]."""
    return internal_energy(rho_tau, target.h_final) - internal_energy(target.rho_a, target.h_final)


def target_is_thermal(target: AdiabaticTarget, tol: float = 1e-8) -> bool:
    ref = gibbs_state(target.h_final, 1.0 / target.beta_a)
    return bool(np.abs(ref - target.rho_a).max() <= tol)


def target_populations_match(target: AdiabaticTarget) -> bool:
    return bool(np.allclose(populations(target.rho_a, target.h_final), target.populations, atol=TOL.spectral))
