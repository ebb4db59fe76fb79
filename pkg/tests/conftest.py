import numpy as np
import pytest

from spinotto import CycleConfig

SPINS = [1, 2, 3, 4]  # 2I for I = 1/2, 1, 3/2, 2


@pytest.fixture
def base_cfg():
    """B0 = B1 = 0.5, B2 = 0.05, T1 = 2, T2 = 1, spin-1/2."""
    return CycleConfig(b0=0.5, b1=0.5, b2=0.05, t_hot=2.0, t_cold=1.0, two_i=1)


@pytest.fixture
def rng():
    return np.random.default_rng(20161017)


def random_density_matrix(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (g + g.conj().T)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
