"""Angular-momentum matrices for a single spin-I (hbar = 1).

The spin is always given as the integer ``two_i = 2I`` so half-integer
spins are exact; the Hilbert space dimension is ``two_i + 1``.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .tolerances import TOL


@dataclass(frozen=True)
class SpinOperators:
    """Cartesian spin components in the |I, m> basis, m = I, I-1, ..., -I."""

    two_i: int
    ix: np.ndarray
    iy: np.ndarray
    iz: np.ndarray

    @property
    def dim(self) -> int:
        return self.two_i + 1

    @property
    def spin(self) -> Fraction:
        return Fraction(self.two_i, 2)

    @property
    def m_values(self) -> np.ndarray:
        return np.real(np.diag(self.iz)).copy()


def check_two_i(two_i) -> int:
    if isinstance(two_i, bool) or int(two_i) != two_i:
        raise ValueError(f"two_i must be an integer, got {two_i!r}")
    two_i = int(two_i)
    if two_i < 1:
        raise ValueError(f"two_i must be >= 1 (spin I >= 1/2), got {two_i}")
    return two_i


def spin_operators(two_i: int) -> SpinOperators:
    """Build I_x, I_y, I_z for spin I = two_i / 2 from the ladder elements.

    <m+1|I_+|m> = sqrt(I(I+1) - m(m+1)); I_x = (I_+ + I_-)/2 and
    I_y = (I_+ - I_-)/(2i).
    """
    two_i = check_two_i(two_i)
    spin = two_i / 2
    m = spin - np.arange(two_i + 1)
    # row k holds m[k]; I_+ maps m[k+1] -> m[k], i.e. the first superdiagonal
    raise_elems = np.sqrt(spin * (spin + 1) - m[1:] * (m[1:] + 1))
    i_plus = np.diag(raise_elems, k=1).astype(complex)
    i_minus = i_plus.conj().T
    ix = 0.5 * (i_plus + i_minus)
    iy = (i_plus - i_minus) / 2j
    iz = np.diag(m).astype(complex)
    for a in (ix, iy, iz):
        a.setflags(write=False)
    return SpinOperators(two_i, ix, iy, iz)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(f"commutator needs equal square matrices, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def is_hermitian(a: np.ndarray, tol: float = TOL.structural) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.allclose(a, a.conj().T, rtol=0, atol=tol)
