"""Dilation descriptor and matrix-power behavior."""

import numpy as np
import pytest

from wavelattice.errors import NumericError, TruncationRangeError
from wavelattice.linalg import (
    DilationDescriptor,
    as_dilation,
    classify_dilation,
    matrix_power,
    preserves_integer_lattice,
)

QUINCUNX = [[1.0, 1.0], [1.0, -1.0]]


def random_well_conditioned(rng, d, spread=(1.3, 2.5)):
    # diagonalizable with moduli away from 1, conjugated by a mild random basis
    evals = rng.uniform(*spread, size=d) * rng.choice([-1.0, 1.0], size=d)
    m = rng.normal(size=(d, d))
    q, _ = np.linalg.qr(m)
    basis = q + 0.1 * rng.normal(size=(d, d))
    return basis @ np.diag(evals) @ np.linalg.inv(basis), evals


def test_power_examples():
    assert np.allclose(matrix_power([[2.0]], 3), [[8.0]])
    # quincunx squares to twice the identity
    assert np.allclose(matrix_power(QUINCUNX, 2), 2.0 * np.eye(2))
    assert np.allclose(matrix_power(QUINCUNX, 0), np.eye(2))


def test_power_inverse_roundtrip():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m, _ = random_well_conditioned(rng, 3)
        A = as_dilation(m)
        for j in (-30, -7, -1, 1, 13, 30):
            resid = np.max(np.abs(A.power(j) @ A.power(-j) - np.eye(3)))
            assert resid < 1e-8


def test_power_cap_error():
    A = as_dilation([[2.0]])
    with pytest.raises(TruncationRangeError):
        A.power(65)
    with pytest.raises(TruncationRangeError):
        matrix_power([[2.0]], -65)


def test_det_of_powers():
    rng = np.random.default_rng(11)
    for _ in range(10):
        m, _ = random_well_conditioned(rng, 2, spread=(1.1, 1.6))
        A = as_dilation(m)
        for j in range(-30, 31):
            expected = A.det**j
            got = np.linalg.det(A.power(j))
            assert abs(got - expected) <= 1e-8 * abs(expected)


def test_classify_examples():
    assert classify_dilation([[2.0]]) == "expansive"
    assert classify_dilation([[0.5]]) == "contractive"
    assert classify_dilation(np.diag([2.0, 0.5])) == "mixed"
    assert classify_dilation([[1.0]]) == "boundary"
    th = 0.7
    rot = [[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]]
    assert classify_dilation(rot) == "boundary"


def test_classify_quincunx_via_char_poly_oracle():
    # oracle: lambda^2 - tr*lambda + det = 0 with tr = 0, det = -2
    moduli = np.abs(np.roots([1.0, 0.0, -2.0]))
    assert moduli == pytest.approx([np.sqrt(2.0)] * 2)
    A = as_dilation(QUINCUNX)
    assert A.eig_moduli == pytest.approx(np.sort(moduli)[::-1], abs=1e-12)
    assert classify_dilation(QUINCUNX) == "expansive"


def test_classification_similarity_invariant():
    rng = np.random.default_rng(3)
    for _ in range(25):
        m, _ = random_well_conditioned(rng, 2)
        cls = classify_dilation(m)
        basis = np.eye(2) + 0.2 * rng.normal(size=(2, 2))
        conj = basis @ m @ np.linalg.inv(basis)
        assert classify_dilation(conj) == cls


def test_eig_moduli_product_matches_det():
    rng = np.random.default_rng(5)
    for d in (1, 2, 3, 4, 5):
        for _ in range(8):
            m, _ = random_well_conditioned(rng, d, spread=(1.2, 2.0))
            A = as_dilation(m)
            prod = np.prod(A.eig_moduli)
            assert abs(prod - abs(A.det)) <= 1e-8 * abs(A.det)
            assert np.all(np.diff(A.eig_moduli) <= 1e-12)  # sorted descending


def test_eig_moduli_known_4d():
    # block diagonal: moduli known exactly, exercises the d >= 4 path
    m = np.zeros((4, 4))
    m[:2, :2] = QUINCUNX
    m[2, 2] = 3.0
    m[3, 3] = -0.25
    A = as_dilation(m)
    assert A.eig_moduli == pytest.approx([3.0, np.sqrt(2), np.sqrt(2), 0.25], abs=1e-10)


def test_preserves_integer_lattice():
    assert preserves_integer_lattice(QUINCUNX)
    assert preserves_integer_lattice(np.eye(3))
    assert not preserves_integer_lattice([[1.5]])
    assert preserves_integer_lattice([[2.0 + 5e-10]])


def test_descriptor_invariants():
    A = as_dilation(QUINCUNX)
    assert np.max(np.abs(A.matrix @ A.inv - np.eye(2))) < 1e-10
    assert A.det == pytest.approx(-2.0)
    # immutable: stored arrays reject writes
    with pytest.raises(ValueError):
        A.matrix[0, 0] = 5.0


def test_singular_matrix_rejected():
    with pytest.raises(NumericError):
        DilationDescriptor.from_matrix([[1.0, 2.0], [2.0, 4.0]])


def test_nonsquare_rejected():
    with pytest.raises(ValueError):
        DilationDescriptor.from_matrix([[1.0, 2.0]])
