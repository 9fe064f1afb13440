"""Reproducible J-self-adjoint test instances.

Every generator is a pure function of ``(kind, seed, dimension, params)``: the same
spec always produces bit-identical matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _linalg as la
from .core import FundamentalSymmetry, KreinOperator


class Kind(str, enum.Enum):
    RANDOM_NONNEGATIVE = "RandomNonnegative"
    RANDOM_GENERIC = "RandomGeneric"
    JORDAN_AT_ZERO = "JordanAtZero"
    BLOCK_DIAGONAL_PAIR = "BlockDiagonalPair"
    STURM_LIOUVILLE = "SturmLiouville"


@dataclass(frozen=True)
class InstanceSpec:
    kind: Kind | str
    seed: int
    dimension: int
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")

    def as_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "seed": int(self.seed), "dimension": self.dimension, "params": self.params}


@dataclass(frozen=True)
class Instance:
    spec: InstanceSpec
    J: np.ndarray
    A: np.ndarray
    V: np.ndarray | None = None

    @property
    def symmetry(self) -> FundamentalSymmetry:
        return FundamentalSymmetry(self.J)

    @property
    def operator(self) -> KreinOperator:
        return KreinOperator(self.A, self.symmetry)

    @property
    def perturbation(self) -> KreinOperator | None:
        return None if self.V is None else KreinOperator(self.V, self.symmetry)


def _signature(n: int, rng: np.random.Generator, p: int | None) -> np.ndarray:
    if p is None:
        p = int(rng.integers(1, n))
    if not 0 <= p <= n:
        raise ValueError(f"invalid number of positive directions {p} for n = {n}")
    return np.concatenate([np.ones(p), -np.ones(n - p)])


def _mixed(J: np.ndarray, mats: list[np.ndarray], rng: np.random.Generator, mix: bool):
    if not mix:
        return [J.astype(complex)] + [m.astype(complex) for m in mats]
    W = la.random_unitary(J.shape[0], rng)
    Wh = W.conj().T
    return [la.herm(W @ J @ Wh)] + [W @ m @ Wh for m in mats]


def _random_psd(n: int, rng: np.random.Generator, rank: int, floor: float) -> np.ndarray:
    B = (rng.standard_normal((rank, n)) + 1j * rng.standard_normal((rank, n))) / np.sqrt(2.0 * n)
    return la.herm(B.conj().T @ B) + floor * np.eye(n)


def random_perturbation(J: np.ndarray, norm: float, rng: np.random.Generator) -> np.ndarray:
    """J-self-adjoint ``V = J H`` with ``||V|| = norm``."""
    n = J.shape[0]
    H = la.random_hermitian(n, rng)
    V = J @ H
    s = la.opnorm(V)
    return V * (norm / s) if s > 0 else V


def _random_nonnegative(spec: InstanceSpec, rng: np.random.Generator) -> Instance:
    n = spec.dimension
    p = spec.params
    rank = int(p.get("rank", n))
    if not 0 <= rank <= n:
        raise ValueError(f"rank must lie in [0, {n}]")
    floor = float(p.get("floor", 0.0))
    d = _signature(n, rng, p.get("positive"))
    H = _random_psd(n, rng, rank, floor)
    J = np.diag(d)
    J, H = _mixed(J, [H], rng, bool(p.get("mix", True)))
    A = J @ H
    V = None
    if "v_norm" in p:
        V = random_perturbation(J, float(p["v_norm"]), rng)
    return Instance(spec, J, A, V)


def _random_generic(spec: InstanceSpec, rng: np.random.Generator) -> Instance:
    n = spec.dimension
    d = _signature(n, rng, spec.params.get("positive"))
    H = la.random_hermitian(n, rng)
    J, H = _mixed(np.diag(d), [H], rng, bool(spec.params.get("mix", True)))
    return Instance(spec, J, J @ H)


def nilpotent_pair(k: int, sign: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """``(J, A)`` with A a single k x k Jordan block at 0 and J the flip matrix.

    ``J A`` is the real symmetric matrix with ones on the anti-diagonal below the main
    one, so A is J-self-adjoint; ``J A`` is positive semidefinite only for ``k <= 2``.
    """
    J = np.fliplr(np.eye(k))
    A = sign * np.eye(k, k=1)
    return J, A


def _jordan_at_zero(spec: InstanceSpec, rng: np.random.Generator) -> Instance:
    n = spec.dimension
    p = spec.params
    k = int(p.get("block_size", 2))
    if not 1 <= k <= n:
        raise ValueError(f"block_size must lie in [1, {n}]")
    Jk, Ak = nilpotent_pair(k, float(p.get("sign", 1.0)))
    m = n - k
    J = np.zeros((n, n))
    A = np.zeros((n, n))
    J[:k, :k] = Jk
    A[:k, :k] = Ak
    if m:
        # the rest: eigenvalues of definite type, positive ones with J = +1
        gap = float(p.get("gap", 0.5))
        vals = gap + rng.random(m) * 2.0
        s = rng.choice([-1.0, 1.0], size=m)
        J[k:, k:] = np.diag(s)
        A[k:, k:] = np.diag(s * vals)
    J, A = _mixed(J, [A], rng, bool(p.get("mix", m > 0)))
    return Instance(spec, J, A)


def _block_diagonal_pair(spec: InstanceSpec, rng: np.random.Generator) -> Instance:
    n = spec.dimension
    p = spec.params
    q_pos = int(p.get("positive", rng.integers(1, n)))
    q_neg = n - q_pos
    Ap = _random_psd(q_pos, rng, int(p.get("rank_plus", q_pos)), float(p.get("floor", 0.0)))
    Am = -_random_psd(q_neg, rng, int(p.get("rank_minus", q_neg)), float(p.get("floor", 0.0)))
    J = np.diag(np.concatenate([np.ones(q_pos), -np.ones(q_neg)])).astype(complex)
    A = np.zeros((n, n), dtype=complex)
    A[:q_pos, :q_pos] = Ap
    A[q_pos:, q_pos:] = Am
    scale = float(p.get("v_scale", 1.0))
    Vp = la.random_hermitian(q_pos, rng)
    Vm = la.random_hermitian(q_neg, rng)
    V0 = (rng.standard_normal((q_pos, q_neg)) + 1j * rng.standard_normal((q_pos, q_neg))) / np.sqrt(2.0)
    Vp *= scale * rng.random() / max(la.opnorm(Vp), 1e-300)
    Vm *= scale * rng.random() / max(la.opnorm(Vm), 1e-300)
    v0 = float(p.get("v0_norm", scale * rng.random()))
    V0 *= v0 / max(la.opnorm(V0), 1e-300)
    V = np.block([[Vp, V0], [-V0.conj().T, Vm]])
    return Instance(spec, J, A, V)


def sturm_liouville(n: int, switch: float = 0.0, potential=None) -> tuple[np.ndarray, np.ndarray]:
    """Finite differences for ``-f'' + q f = lam w f`` on (-1, 1), Dirichlet ends, ``w = sign(x - switch)``.

    Returns ``(J, A)`` with ``J = diag(sign w(x_i))`` and ``A = J (T + diag(q))``.
    """
    if n < 2:
        raise ValueError("mesh needs at least 2 interior points")
    if not -1.0 < switch < 1.0:
        raise ValueError("sign-change point must lie in (-1, 1)")
    h = 2.0 / (n + 1)
    x = -1.0 + h * np.arange(1, n + 1)
    if potential is None:
        q = np.zeros(n)
    elif callable(potential):
        q = np.asarray(potential(x), dtype=float)
    else:
        q = np.asarray(potential, dtype=float)
        if q.shape != (n,):
            raise ValueError(f"potential samples must have length {n}")
    T = (2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)) / h**2
    s = np.where(x - switch >= 0.0, 1.0, -1.0)
    J = np.diag(s)
    return J.astype(complex), (J @ (T + np.diag(q))).astype(complex)


def _sturm(spec: InstanceSpec, rng: np.random.Generator) -> Instance:
    p = spec.params
    pot = p.get("potential")
    J, A = sturm_liouville(spec.dimension, float(p.get("switch", 0.0)), pot)
    return Instance(spec, J, A)


_GENERATORS = {
    Kind.RANDOM_NONNEGATIVE: _random_nonnegative,
    Kind.RANDOM_GENERIC: _random_generic,
    Kind.JORDAN_AT_ZERO: _jordan_at_zero,
    Kind.BLOCK_DIAGONAL_PAIR: _block_diagonal_pair,
    Kind.STURM_LIOUVILLE: _sturm,
}


def generate(spec: InstanceSpec) -> Instance:
    rng = np.random.default_rng(int(spec.seed))
    inst = _GENERATORS[spec.kind](spec, rng)
    J = la.frozen(np.asarray(inst.J, dtype=complex))
    A = la.frozen(np.asarray(inst.A, dtype=complex))
    V = None if inst.V is None else la.frozen(np.asarray(inst.V, dtype=complex))
    return Instance(spec, J, A, V)
