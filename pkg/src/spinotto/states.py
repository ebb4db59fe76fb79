"""Thermal states and state functionals (energies and entropies in nats, k_B = 1)."""

from __future__ import annotations

import numpy as np

from .pulses import Hamiltonian
from .tolerances import TOL


class InvalidStateError(ValueError):
    pass


class SingularReferenceError(ValueError):
    """Relative entropy against a rank-deficient reference state is unbounded."""


def _matrix(h) -> np.ndarray:
    return np.asarray(h.matrix if isinstance(h, Hamiltonian) else h)


def _require_gap(h, what: str):
    if isinstance(h, Hamiltonian) and h.gap < TOL.min_gap:
        raise ValueError(f"{what}: level spacing {h.gap:g} is too small for an ordered eigenbasis")


def _same_dim(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def eigensystem(h):
    """Ascending eigenvalues and orthonormal eigenvectors (columns).

    Each eigenvector is rephased so its largest-magnitude component is real
    and positive, which makes basis-dependent quantities reproducible.
    """
    w, v = np.linalg.eigh(_matrix(h))
    idx = np.argmax(np.abs(v), axis=0)
    pivot = v[idx, np.arange(v.shape[1])]
    v = v * (np.abs(pivot) / pivot)
    return w, v


def check_density_matrix(rho, tol: float = TOL.spectral) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, rtol=0, atol=tol):
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise InvalidStateError(f"density matrix trace is {tr:.12g}, expected 1")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {lam_min:g}")
    return rho


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def gibbs_state(h, temperature: float) -> np.ndarray:
    """exp(-H/T) / Z, built in the eigenbasis of H.

    Energies are shifted by the ground level before exponentiating so that
    low temperatures do not underflow; Z cancels the shift.
    """
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    w, v = eigensystem(h)
    boltz = np.exp(-(w - w[0]) / temperature)
    p = boltz / boltz.sum()
    return (v * p) @ v.conj().T


def partition_function(h, temperature: float) -> float:
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    w = np.linalg.eigvalsh(_matrix(h))
    return float(np.exp(-w / temperature).sum())


def internal_energy(rho, h) -> float:
    rho = np.asarray(rho)
    hm = _matrix(h)
    _same_dim(rho, hm)
    return float(np.real(np.einsum("ij,ji->", rho, hm)))


def _shannon(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > TOL.zero_log]
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(rho) -> float:
    lam = np.linalg.eigvalsh(np.asarray(rho))
    return _shannon(lam)


def populations(rho, h) -> np.ndarray:
    """Diagonal of rho in the ascending eigenbasis of h."""
    rho = np.asarray(rho)
    hm = _matrix(h)
    _same_dim(rho, hm)
    _, v = eigensystem(hm)
    return np.real(np.einsum("ji,jk,ki->i", v.conj(), rho, v))


def energy_entropy(rho, h) -> float:
    """Shannon entropy of the energy-level occupations of rho."""
    return _shannon(populations(rho, h))


def relative_entropy(rho, sigma) -> float:
    """S(rho || sigma) = Tr[rho ln rho] - Tr[rho ln sigma]."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    _same_dim(rho, sigma)
    s_w, s_v = np.linalg.eigh(sigma)
    if s_w[0] <= TOL.min_sigma_eig:
        raise SingularReferenceError(
            f"reference state has eigenvalue {s_w[0]:g}; relative entropy is ill-defined"
        )
    log_sigma = (s_v * np.log(s_w)) @ s_v.conj().T
    r_w = np.linalg.eigvalsh(rho)
    r_w = r_w[r_w > TOL.zero_log]
    rho_log_rho = float(np.sum(r_w * np.log(r_w)))
    cross = float(np.real(np.einsum("ij,ji->", rho, log_sigma)))
    return rho_log_rho - cross


def coherence(rho, h, i: int, j: int) -> float:
    """|<e_i| rho |e_j>| with e_k the ascending eigenvectors of h (0-based)."""
    rho = np.asarray(rho)
    hm = _matrix(h)
    _same_dim(rho, hm)
    _require_gap(h, "coherence")
    d = hm.shape[0]
    if i == j:
        raise ValueError("coherence needs two distinct levels")
    if not (0 <= i < d and 0 <= j < d):
        raise IndexError(f"level indices ({i}, {j}) out of range for dimension {d}")
    _, v = eigensystem(hm)
    return float(abs(v[:, i].conj() @ rho @ v[:, j]))
