import numpy as np
import pytest

from spinotto.spin_algebra import commutator, is_hermitian, spin_operators
from spinotto.pulses import hamiltonian_at

from conftest import SPINS, random_hermitian

TOL = 1e-12


def test_spin_half_is_half_pauli():
    ops = spin_operators(1)
    np.testing.assert_allclose(ops.ix, [[0, 0.5], [0.5, 0]], atol=TOL)
    np.testing.assert_allclose(ops.iy, [[0, -0.5j], [0.5j, 0]], atol=TOL)
    np.testing.assert_allclose(ops.iz, [[0.5, 0], [0, -0.5]], atol=TOL)


def test_spin_one_iz():
    np.testing.assert_allclose(spin_operators(2).iz, np.diag([1.0, 0.0, -1.0]), atol=TOL)


def test_spin_three_halves_ladder():
    # <m+1|I_+|m> = sqrt(15/4 - m(m+1)) for m = 1/2, -1/2, -3/2, halved in I_x
    expected = [np.sqrt(3) / 2, 1.0, np.sqrt(3) / 2]
    np.testing.assert_allclose(np.diag(spin_operators(3).ix, 1), expected, atol=TOL)


@pytest.mark.parametrize("bad", [0, -1, 1.5, True])
def test_rejects_invalid_spin(bad):
    with pytest.raises(ValueError):
        spin_operators(bad)


@pytest.mark.parametrize("two_i", SPINS + [5, 7])
def test_structural_identities(two_i):
    ops = spin_operators(two_i)
    spin = two_i / 2
    d = two_i + 1
    for a in (ops.ix, ops.iy, ops.iz):
        assert is_hermitian(a, TOL)
        assert abs(np.trace(a)) < TOL
    np.testing.assert_allclose(np.diag(ops.iz).real, spin - np.arange(d), atol=TOL)
    casimir = ops.ix @ ops.ix + ops.iy @ ops.iy + ops.iz @ ops.iz
    np.testing.assert_allclose(casimir, spin * (spin + 1) * np.eye(d), atol=TOL)
    np.testing.assert_allclose(commutator(ops.ix, ops.iz), -1j * ops.iy, atol=TOL)
    np.testing.assert_allclose(commutator(ops.ix, ops.iy), 1j * ops.iz, atol=TOL)
    np.testing.assert_allclose(commutator(ops.iy, ops.iz), 1j * ops.ix, atol=TOL)


def test_self_commutator_vanishes(rng):
    a = random_hermitian(rng, 4)
    np.testing.assert_allclose(commutator(a, a), 0, atol=TOL)


def test_commutator_dimension_mismatch():
    with pytest.raises(ValueError):
        commutator(np.eye(2), np.eye(3))


@pytest.mark.parametrize("two_i", SPINS)
def test_hamiltonian_commutator_identity(two_i, rng):
    # [H(t1), H(t2)] = -i b0 (B1 - B2) I_y
    ops = spin_operators(two_i)
    for _ in range(20):
        b0, b_1, b_2 = rng.uniform(-2, 2, size=3)
        h1 = hamiltonian_at(b0, b_1, ops).matrix
        h2 = hamiltonian_at(b0, b_2, ops).matrix
        np.testing.assert_allclose(commutator(h1, h2), -1j * b0 * (b_1 - b_2) * ops.iy, atol=TOL)


@pytest.mark.parametrize("two_i", SPINS)
def test_linear_spectrum(two_i, rng):
    ops = spin_operators(two_i)
    m = np.sort(ops.m_values)
    for _ in range(20):
        a, b = rng.uniform(-3, 3, size=2)
        w = np.linalg.eigvalsh(a * ops.iz + b * ops.ix)
        np.testing.assert_allclose(w, m * np.hypot(a, b), atol=1e-10)
