"""Small dense linear-algebra helpers shared across modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

EPS = float(np.finfo(float).eps)


def as_complex_matrix(M, name: str = "matrix") -> np.ndarray:
    arr = np.array(M, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        from .errors import DimensionError

        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def opnorm(M: np.ndarray) -> float:
    """Euclidean operator norm (largest singular value)."""
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def herm(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def hermitian_residual(M: np.ndarray) -> float:
    return opnorm(M - M.conj().T)


def eigvalsh(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh(herm(M))


def min_eig(M: np.ndarray) -> float:
    w = eigvalsh(M)
    return float(w[0]) if w.size else float("inf")


def max_eig(M: np.ndarray) -> float:
    w = eigvalsh(M)
    return float(w[-1]) if w.size else float("-inf")


def rank_threshold(M: np.ndarray, factor: float, s1: float | None = None) -> float:
    n = max(M.shape) if M.size else 1
    if s1 is None:
        s1 = opnorm(M)
    return n * EPS * s1 * factor


@dataclass(frozen=True)
class NullSpace:
    basis: np.ndarray
    """Orthonormal columns spanning the numerical null space."""
    singular_values: np.ndarray
    threshold: float
    ill_conditioned: bool
    """A singular value lies within a factor 10 of the threshold."""

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def null_space(M: np.ndarray, threshold: float) -> NullSpace:
    """Null space of ``M`` using an explicit absolute singular-value threshold."""
    n = M.shape[1]
    if M.shape[0] == 0:
        return NullSpace(np.eye(n, dtype=complex), np.zeros(0), threshold, False)
    _, s, vh = np.linalg.svd(M)
    full = np.zeros(n)
    full[: s.size] = s
    keep = full <= threshold
    near = np.any((full > threshold / 10.0) & (full < threshold * 10.0))
    basis = vh.conj().T[:, keep]
    return NullSpace(basis, full, threshold, bool(near))


def orth(M: np.ndarray, threshold: float | None = None) -> np.ndarray:
    """Orthonormal basis of the column space of ``M``."""
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if threshold is None:
        threshold = rank_threshold(M, 1e3, s[0] if s.size else 0.0)
    return u[:, s > threshold]


def projection_range(P: np.ndarray, rank: int | None = None) -> np.ndarray:
    """Orthonormal basis of range(P); ``rank`` (if known) overrides the SVD decision."""
    u, s, _ = np.linalg.svd(P)
    if rank is None:
        rank = int(np.sum(s > 0.5))
    return u[:, :rank]


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    return herm(Z)


def sqrtm_psd(H: np.ndarray) -> np.ndarray:
    w, U = np.linalg.eigh(herm(H))
    return (U * np.sqrt(np.clip(w, 0.0, None))) @ U.conj().T


def abs_hermitian(G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (|G|, sign(G)) for a Hermitian matrix via its eigendecomposition."""
    w, U = np.linalg.eigh(herm(G))
    s = np.where(w >= 0.0, 1.0, -1.0)
    return (U * np.abs(w)) @ U.conj().T, (U * s) @ U.conj().T


def solve(M: np.ndarray, B: np.ndarray) -> np.ndarray:
    return sla.solve(M, B)
