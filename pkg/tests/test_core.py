import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kreintools import (
    DimensionError,
    FundamentalSymmetry,
    KreinOperator,
    StructureError,
    gram_restriction,
    inner,
    is_selfadjoint,
    krein_adjoint,
    selfadjoint_from_hermitian,
)
from kreintools import _linalg as la

J2 = np.diag([1.0, -1.0])
FLIP = np.array([[0.0, 1.0], [1.0, 0.0]])


def test_adjoint_with_flip_symmetry():
    A = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.array_equal(krein_adjoint(A, FLIP), A)


def test_adjoint_diag_symmetry():
    A = np.array([[1, 2j], [3, 4]], dtype=complex)
    expected = J2 @ A.conj().T @ J2
    assert np.allclose(krein_adjoint(A, J2), expected)


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (-3.0, 0.5), (0.0, 0.0)])
def test_selfadjoint_real_family(a, b):
    ok, res = is_selfadjoint(np.array([[a, b], [-b, -a]]), J2)
    assert ok and res == 0.0


def test_selfadjoint_rejects():
    ok, res = is_selfadjoint(np.array([[1.0, 1.0], [1.0, 1.0]]), J2)
    assert not ok and res > 1.0


def test_symmetry_validation():
    with pytest.raises(StructureError):
        FundamentalSymmetry(np.diag([1.0, 2.0]))
    with pytest.raises(StructureError):
        FundamentalSymmetry(np.array([[1.0, 1.0], [0.0, -1.0]]))
    with pytest.raises(DimensionError):
        KreinOperator(np.eye(3), FundamentalSymmetry(J2))


def test_signature_coercion():
    J = FundamentalSymmetry.coerce((2, 1))
    assert np.array_equal(J.matrix.real, np.diag([1.0, 1.0, -1.0]))
    W, p, q = FundamentalSymmetry(FLIP).diagonalizer()
    assert (p, q) == (1, 1)
    assert np.allclose(W @ np.diag([1, -1]) @ W.conj().T, FLIP)


def test_neutral_gram():
    G = gram_restriction(FLIP, np.array([1.0, 0.0]))
    assert G.shape == (1, 1) and G[0, 0] == 0


def test_gram_requires_orthonormal():
    with pytest.raises(StructureError):
        gram_restriction(J2, np.array([[2.0], [0.0]]))


def test_require_selfadjoint():
    A = KreinOperator(np.ones((2, 2)), FundamentalSymmetry(J2))
    assert not A.selfadjoint_certified
    with pytest.raises(StructureError):
        A.require_selfadjoint()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 5), st.integers(0, 2**32 - 1))
def test_adjoint_involution_and_product(p, q, seed):
    rng = np.random.default_rng(seed)
    n = p + q
    W = la.random_unitary(n, rng)
    J = la.herm(W @ np.diag([1.0] * p + [-1.0] * q) @ W.conj().T)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    Ap = krein_adjoint(A, J)
    assert np.allclose(krein_adjoint(Ap, J), A)
    # [Ax, y] = [x, A+ y]
    assert np.isclose(inner(A @ x, y, J), inner(x, Ap @ y, J))
    H = la.random_hermitian(n, rng)
    S = selfadjoint_from_hermitian(J, H)
    assert S.selfadjoint_certified
    assert np.allclose(S.gram, H)
