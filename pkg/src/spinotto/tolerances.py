"""Numerical tolerance constants shared across the package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-12  # operator identities, Hermiticity of built matrices
    spectral: float = 1e-10  # eigenvalue checks, density-matrix invariants
    diagonal: float = 1e-8  # "diagonal in energy basis" test for thermal states
    zero_log: float = 1e-15  # eigenvalues below this contribute 0 * ln 0 = 0
    min_sigma_eig: float = 1e-14  # relative entropy needs a full-rank reference
    min_gap: float = 1e-12  # level spacing below this has no ordered eigenbasis


TOL = Tolerances()
