import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jarlskog import (
    DegenerateSpectrumError,
    DimensionError,
    Spectrum,
    UnitaryMatrix,
    adjoint,
    commutator,
    det,
    haar_unitary,
    hermitian_from_spectrum,
    jacobi_eig,
    matmul,
    random_spectrum,
)


def random_complex_matrix(n, rng):
    m = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            m[i, j] = complex(rng.uniform_symmetric(), rng.uniform_symmetric())
    return m


def random_hermitian(n, rng):
    m = random_complex_matrix(n, rng)
    return (m + np.conj(m.T)) / 2.0


# ---------------------------------------------------------------- matmul

def test_matmul_identity_is_noop(rng):
    m = random_complex_matrix(4, rng)
    assert np.array_equal(matmul(np.eye(4), m), m)


def test_matmul_diagonals_multiply_elementwise():
    a = np.diag([1.0 + 2.0j, -0.5j, 3.0])
    b = np.diag([2.0, 1.0 + 1.0j, -1.0])
    expected = np.diag([(1.0 + 2.0j) * 2.0, -0.5j * (1.0 + 1.0j), -3.0])
    assert np.array_equal(matmul(a, b), expected)


def test_matmul_matches_pure_python_triple_loop_exactly(rng):
    # independent oracle: plain Python complex arithmetic, same index order
    a = random_complex_matrix(4, rng)
    b = random_complex_matrix(4, rng)
    expected = np.empty((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            acc = complex(0.0, 0.0)
            for k in range(4):
                acc += complex(a[i, k]) * complex(b[k, j])
            expected[i, j] = acc
    assert np.array_equal(matmul(a, b), expected)


def test_matmul_dimension_mismatch_names_both_sizes():
    with pytest.raises(DimensionError, match="3x3.*4x4"):
        matmul(np.eye(3), np.eye(4))


# ---------------------------------------------------------------- adjoint

def test_adjoint_of_identity():
    assert np.array_equal(adjoint(np.eye(3)), np.eye(3))


def test_adjoint_fixes_real_symmetric():
    m = np.array([[1.0, 2.0], [2.0, -3.0]])
    assert np.array_equal(adjoint(m), m.astype(complex))


def test_adjoint_is_involution(rng):
    m = random_complex_matrix(5, rng)
    assert np.array_equal(adjoint(adjoint(m)), m)


# ---------------------------------------------------------------- det

def _cofactor_det(m):
    """Independent oracle: recursive cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = complex(0.0, 0.0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _cofactor_det(minor)
        total += term if j % 2 == 0 else -term
    return total


def test_det_identity():
    assert det(np.eye(4)) == 1.0 + 0.0j


def test_det_diagonal_is_product():
    d = [1.5, -2.0 + 1.0j, 0.25j, 3.0]
    expected = d[0] * d[1] * d[2] * d[3]
    assert abs(det(np.diag(d)) - expected) <= 1e-15 * abs(expected)


def test_det_matches_cofactor_expansion(rng):
    for _ in range(25):
        m = random_complex_matrix(4, rng)
        expected = _cofactor_det([[complex(z) for z in row] for row in m])
        assert abs(det(m) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_det_singular_matrix_is_zero():
    m = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
    assert det(m) == 0j


def test_det_is_multiplicative(rng):
    for n in (2, 3, 4):
        a = random_complex_matrix(n, rng)
        b = random_complex_matrix(n, rng)
        lhs = det(matmul(a, b))
        rhs = det(a) * det(b)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


# ---------------------------------------------------------------- commutator

def test_commutator_with_self_vanishes(rng):
    m = random_complex_matrix(3, rng)
    assert np.all(commutator(m, m) == 0)


def test_commutator_of_diagonals_vanishes():
    a = np.diag([1.0, 2.0, 3.0])
    b = np.diag([-1.0, 0.5, 2.0])
    assert np.all(commutator(a, b) == 0)


def test_commutator_of_hermitians_is_anti_hermitian(rng):
    h = random_hermitian(4, rng)
    hp = random_hermitian(4, rng)
    x = commutator(h, hp)
    assert np.max(np.abs(x + adjoint(x))) <= 1e-13


def test_commutator_det_parity(rng):
    # real for even n, purely imaginary for odd n
    for n, part in ((3, "real"), (4, "imag")):
        h = random_hermitian(n, rng)
        hp = random_hermitian(n, rng)
        d = det(commutator(h, hp))
        wrong = getattr(d, part)
        assert abs(wrong) <= 1e-9 * abs(d) + 1e-12


# ---------------------------------------------------------------- Spectrum

def test_spectrum_rejects_repeats():
    with pytest.raises(DegenerateSpectrumError):
        Spectrum((1.0, 1.0, 2.0))


def test_spectrum_records_min_gap():
    s = Spectrum((0.0, 0.25, 1.0))
    assert s.min_gap == 0.25
    assert s.n == 3


@given(st.lists(st.integers(min_value=-50, max_value=50), min_size=3, max_size=5))
def test_spectrum_accepts_distinct_and_rejects_repeats(values):
    distinct = len(set(values)) == len(values)
    if distinct:
        s = Spectrum(tuple(float(v) for v in values))
        assert s.min_gap > 0
    else:
        with pytest.raises(DegenerateSpectrumError):
            Spectrum(tuple(float(v) for v in values))


# ---------------------------------------------------------------- UnitaryMatrix

def test_unitary_accepts_identity_and_rejects_nonunitary():
    u = UnitaryMatrix(np.eye(3))
    assert u.unitarity_defect == 0.0
    with pytest.raises(ValueError, match="not unitary"):
        UnitaryMatrix(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_unitary_matrix_is_frozen():
    u = UnitaryMatrix(np.eye(3))
    with pytest.raises(ValueError):
        u.matrix[0, 0] = 2.0


# ---------------------------------------------------------------- hermitian/jacobi

def test_hermitian_from_spectrum_identity_basis():
    u = UnitaryMatrix(np.eye(3))
    d = Spectrum((1.0, 2.0, 3.0))
    assert np.array_equal(hermitian_from_spectrum(u, d), np.diag([1.0, 2.0, 3.0]))


def test_hermitian_from_spectrum_is_exactly_hermitian(rng):
    u = haar_unitary(4, rng)
    d = random_spectrum(4, rng)
    h = hermitian_from_spectrum(u, d)
    assert np.array_equal(h, adjoint(h))


def test_jacobi_on_diagonal_input_is_a_permutation():
    u, s = jacobi_eig(np.diag([3.0, 1.0, 2.0]).astype(complex))
    assert s.values == (1.0, 2.0, 3.0)
    perm = np.abs(u.matrix)
    assert np.array_equal(perm, perm.astype(int))
    assert np.all(perm.sum(axis=0) == 1) and np.all(perm.sum(axis=1) == 1)


def test_jacobi_rejects_identity_as_degenerate():
    with pytest.raises(DegenerateSpectrumError, match="multiplicities"):
        jacobi_eig(np.eye(3, dtype=complex))


def test_jacobi_rejects_non_hermitian_with_defect():
    with pytest.raises(ValueError, match=r"not Hermitian: max\|H - H\+\| = 1\.0"):
        jacobi_eig(np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex))


def test_jacobi_round_trip_recovers_spectrum_and_basis(rng):
    for n in (3, 4):
        for _ in range(40):
            u0 = haar_unitary(n, rng)
            d0 = random_spectrum(n, rng)
            h = hermitian_from_spectrum(u0, d0)
            u1, d1 = jacobi_eig(h)
            assert max(abs(x - y) for x, y in zip(d0.values, d1.values)) <= 1e-10
            # residual of the reconstructed decomposition
            h2 = matmul(matmul(u1.matrix, np.diag(d1.values).astype(complex)),
                        adjoint(u1.matrix))
            assert np.max(np.abs(h - h2)) <= 1e-10
            # columns agree with the generating basis up to one phase each
            for col in range(n):
                overlap = np.vdot(u0.matrix[:, col], u1.matrix[:, col])
                phase = overlap / abs(overlap)
                assert np.max(np.abs(u1.matrix[:, col] - phase * u0.matrix[:, col])) <= 1e-10


def test_jacobi_eigenvalues_match_numpy(rng):
    # cross-check against an entirely different eigensolver
    u0 = haar_unitary(4, rng)
    d0 = random_spectrum(4, rng)
    h = hermitian_from_spectrum(u0, d0)
    _, ours = jacobi_eig(h)
    theirs = np.linalg.eigvalsh(h)
    assert np.max(np.abs(np.array(ours.values) - theirs)) <= 1e-12
