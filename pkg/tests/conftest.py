import numpy as np
import pytest

from kreintools import FundamentalSymmetry, KreinOperator

HAND_A = np.array([[5.0, 4.0], [-4.0, -5.0]]) / 3.0
"""Eigenvalues +-1 with eigenvectors (2, -1) and (1, -2); A^2 = I."""


def op(A, J):
    return KreinOperator(np.asarray(A, dtype=complex), FundamentalSymmetry(np.asarray(J, dtype=complex)))


@pytest.fixture
def canonical():
    """The nilpotent pair A = [[0,1],[0,0]], J = [[0,1],[1,0]]: non-negative, Jordan block at 0."""
    return op([[0, 1], [0, 0]], [[0, 1], [1, 0]])


@pytest.fixture
def flipped():
    return op([[0, -1], [0, 0]], [[0, 1], [1, 0]])


@pytest.fixture
def hand():
    return op(HAND_A, np.diag([1.0, -1.0]))


@pytest.fixture
def diag22():
    return op(np.diag([2.0, -2.0]), np.diag([1.0, -1.0]))


def rot(v, J=np.diag([1.0, -1.0])):
    return op([[0, v], [-v, 0]], J)


def block_example():
    """diag(2, -2) joined with the negative nilpotent block at 0."""
    J = np.zeros((4, 4))
    J[:2, :2] = np.diag([1.0, -1.0])
    J[2:, 2:] = [[0, 1], [1, 0]]
    A = np.zeros((4, 4))
    A[:2, :2] = np.diag([2.0, -2.0])
    A[2:, 2:] = [[0, -1], [0, 0]]
    return op(A, J)


@pytest.fixture(params=["python", "cython"])
def backend(request):
    from kreintools import _backend

    try:
        return _backend.get(request.param)
    except ImportError:
        pytest.skip("compiled kernels not built")


# -- acceptance summary ------------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    """Register one acceptance line and fail the calling test when ``ok`` is false."""
    ACCEPTANCE[criterion] = (bool(ok), detail)
    assert ok, f"criterion {criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
