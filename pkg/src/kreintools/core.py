"""Fundamental symmetries, the indefinite inner product and J-self-adjoint operators.

A Krein space here is ``C^n`` with ``[x, y] = (Jx, y) = y* J x`` for a fundamental
symmetry ``J`` (Hermitian and involutive).  The Hilbert product ``(x, y)`` is the
Euclidean one, so every norm in this package is the Euclidean norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .errors import DimensionError, StructureError
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class FundamentalSymmetry:
    matrix: np.ndarray
    signature: tuple[int, int] | None = None
    tol: Tolerances = field(default=DEFAULT, compare=False, repr=False)

    def __post_init__(self):
        J = la.as_complex_matrix(self.matrix, "J")
        slack = self.tol.struct_abs(la.opnorm(J))
        herm_res = la.hermitian_residual(J)
        inv_res = la.opnorm(J @ J - np.eye(J.shape[0]))
        if herm_res > slack:
            raise StructureError(f"J is not Hermitian (residual {herm_res:.3e} > {slack:.3e})")
        if inv_res > slack:
            raise StructureError(f"J is not involutive (residual {inv_res:.3e} > {slack:.3e})")
        object.__setattr__(self, "matrix", la.frozen(J))

    @classmethod
    def from_signature(cls, p: int, q: int, tol: Tolerances = DEFAULT) -> "FundamentalSymmetry":
        if p < 0 or q < 0 or p + q == 0:
            raise DimensionError(f"invalid signature ({p}, {q})")
        return cls(np.diag([1.0] * p + [-1.0] * q).astype(complex), (p, q), tol)

    @classmethod
    def coerce(cls, J, tol: Tolerances = DEFAULT) -> "FundamentalSymmetry":
        """Accept a FundamentalSymmetry, a ``(p, q)`` signature or an explicit matrix."""
        if isinstance(J, FundamentalSymmetry):
            return J
        if isinstance(J, tuple) and len(J) == 2 and all(isinstance(v, (int, np.integer)) for v in J):
            return cls.from_signature(int(J[0]), int(J[1]), tol)
        return cls(np.asarray(J), None, tol)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def diagonalizer(self) -> tuple[np.ndarray, int, int]:
        """Unitary ``W`` and ``(p, q)`` with ``J = W diag(I_p, -I_q) W*``."""
        if self.signature is not None:
            p, q = self.signature
            return np.eye(self.n, dtype=complex), p, q
        w, U = np.linalg.eigh(la.herm(self.matrix))
        order = np.argsort(-w, kind="stable")
        w, U = w[order], U[:, order]
        p = int(np.sum(w > 0))
        if np.max(np.abs(np.abs(w) - 1.0)) > self.tol.struct_abs(1.0) * 10:
            raise StructureError("J eigenvalues are not +-1 within tolerance")
        return U, p, self.n - p

    def inner(self, x, y) -> complex:
        return inner(x, y, self)


@dataclass(frozen=True)
class KreinOperator:
    matrix: np.ndarray
    symmetry: FundamentalSymmetry
    selfadjoint_certified: bool = field(init=False)
    residual: float = field(init=False)

    def __post_init__(self):
        A = la.as_complex_matrix(self.matrix, "A")
        J = FundamentalSymmetry.coerce(self.symmetry)
        if A.shape[0] != J.n:
            raise DimensionError(f"A is {A.shape[0]}x{A.shape[0]} but J is {J.n}x{J.n}")
        object.__setattr__(self, "matrix", la.frozen(A))
        object.__setattr__(self, "symmetry", J)
        ok, res = is_selfadjoint(A, J, J.tol.struct)
        object.__setattr__(self, "selfadjoint_certified", ok)
        object.__setattr__(self, "residual", res)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def J(self) -> np.ndarray:
        return self.symmetry.matrix

    @property
    def tol(self) -> Tolerances:
        return self.symmetry.tol

    @property
    def norm(self) -> float:
        return la.opnorm(self.matrix)

    @property
    def gram(self) -> np.ndarray:
        """The Hermitian matrix ``JA`` of the form ``f -> [Af, f]``."""
        return la.herm(self.J @ self.matrix)

    def require_selfadjoint(self) -> "KreinOperator":
        if not self.selfadjoint_certified:
            raise StructureError(f"operator is not J-self-adjoint (residual {self.residual:.3e})")
        return self

    def with_matrix(self, M) -> "KreinOperator":
        return KreinOperator(M, self.symmetry)

    def __add__(self, other: "KreinOperator") -> "KreinOperator":
        if not isinstance(other, KreinOperator):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError("dimension mismatch in operator sum")
        return KreinOperator(self.matrix + other.matrix, self.symmetry)


def _matrix_of(A) -> np.ndarray:
    return A.matrix if isinstance(A, KreinOperator) else la.as_complex_matrix(A, "A")


def krein_adjoint(A, J=None) -> np.ndarray:
    """Return the Krein-space adjoint ``J A* J``."""
    if J is None:
        if not isinstance(A, KreinOperator):
            raise TypeError("J is required unless A is a KreinOperator")
        J = A.symmetry
    Jm = FundamentalSymmetry.coerce(J).matrix
    M = _matrix_of(A)
    if M.shape != Jm.shape:
        raise DimensionError(f"A has shape {M.shape}, J has shape {Jm.shape}")
    return Jm @ M.conj().T @ Jm


def is_selfadjoint(A, J=None, tol: float | None = None) -> tuple[bool, float]:
    """J-self-adjointness test; returns ``(passed, ||JA - (JA)*||)``.

    ``tol`` is relative: the test passes iff the residual is at most ``tol * (1 + ||A||)``.
    """
    if J is None:
        if not isinstance(A, KreinOperator):
            raise TypeError("J is required unless A is a KreinOperator")
        J = A.symmetry
    Jfs = FundamentalSymmetry.coerce(J)
    M = _matrix_of(A)
    if M.shape != Jfs.matrix.shape:
        raise DimensionError(f"A has shape {M.shape}, J has shape {Jfs.matrix.shape}")
    rel = Jfs.tol.struct if tol is None else tol
    res = la.hermitian_residual(Jfs.matrix @ M)
    return res <= rel * (1.0 + la.opnorm(M)), res


def inner(x, y, J) -> complex:
    """Indefinite inner product ``[x, y] = (Jx, y) = y* J x``."""
    Jm = FundamentalSymmetry.coerce(J).matrix
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != (Jm.shape[0],) or y.shape != (Jm.shape[0],):
        raise DimensionError(f"vectors of shape {x.shape}, {y.shape} do not match n={Jm.shape[0]}")
    return complex(np.vdot(y, Jm @ x))


def gram_restriction(J, Q, tol: float | None = None) -> np.ndarray:
    """Gram matrix ``Q* J Q`` of the indefinite product on range(Q).

    ``Q`` must have Euclidean-orthonormal columns.
    """
    Jfs = FundamentalSymmetry.coerce(J)
    Q = np.asarray(Q, dtype=complex)
    if Q.ndim == 1:
        Q = Q[:, None]
    if Q.shape[0] != Jfs.n:
        raise DimensionError(f"basis has {Q.shape[0]} rows, J is {Jfs.n}x{Jfs.n}")
    k = Q.shape[1]
    slack = Jfs.tol.struct_abs(1.0) if tol is None else tol
    res = la.opnorm(Q.conj().T @ Q - np.eye(k)) if k else 0.0
    if res > slack:
        raise StructureError(f"basis is not orthonormal (residual {res:.3e})")
    return la.herm(Q.conj().T @ Jfs.matrix @ Q)


def selfadjoint_from_hermitian(J, H) -> KreinOperator:
    """Build ``A = J H``; then ``JA = H`` is Hermitian, so A is J-self-adjoint by construction."""
    Jfs = FundamentalSymmetry.coerce(J)
    H = la.herm(la.as_complex_matrix(H, "H"))
    return KreinOperator(Jfs.matrix @ H, Jfs)
