import numpy as np
import pytest

from jarlskog import MassPairInput, SeededRng, haar_unitary, random_spectrum


def seeded_input(n, seed):
    """One mixing matrix plus two spectra from a single stream."""
    rng = SeededRng(seed)
    v = haar_unitary(n, rng)
    a = random_spectrum(n, rng)
    b = random_spectrum(n, rng)
    return MassPairInput(a=a, b=b, v=v)


def givens(n, p, q, theta, phi=0.0):
    """Complex rotation in the (p, q) plane, for building structured unitaries."""
    m = np.eye(n, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    m[p, p] = c
    m[q, q] = c
    m[p, q] = s * np.exp(1j * phi)
    m[q, p] = -s * np.exp(-1j * phi)
    return m


@pytest.fixture
def rng():
    return SeededRng(20240817)
