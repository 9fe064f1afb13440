"""Enclosure regions for perturbations ``A + V`` of non-negative operators.

Block-diagonal unperturbed operators give a capsule from the block norms of V.  For a
general non-negative invertible A the skew between the fundamental decomposition of A
and the reference one enters through ``tau = ||J~||``, where ``J~ = E(R+) - E(R-)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _linalg as la
from .characterization import Verdict, check_theorem_4_5, is_nonnegative_direct
from .core import FundamentalSymmetry, KreinOperator
from .errors import PreconditionError, QuadratureError, StructureError
from .regions import BallUnion, Capsule, Empty, EnclosureRegion
from .spectral import INFINITY, RealSet, SignType, SpectralDecomposition, decompose


class Theorem(str, enum.Enum):
    T5_1 = "5.1"
    T5_3 = "5.3"
    T5_4 = "5.4"
    T5_4_REFINED = "5.4r"


# -- block structure --------------------------------------------------------------------


@dataclass(frozen=True)
class BlockPerturbation:
    V_plus: np.ndarray
    V_minus: np.ndarray
    V_zero: np.ndarray
    """Maps the negative block into the positive one."""
    diagonalizer: np.ndarray
    """Unitary W with ``J = W diag(I_p, -I_q) W*``; blocks are read off ``W* V W``."""

    @property
    def norms(self) -> tuple[float, float, float]:
        return la.opnorm(self.V_plus), la.opnorm(self.V_minus), la.opnorm(self.V_zero)

    def assemble(self) -> np.ndarray:
        W = self.diagonalizer
        M = np.block([[self.V_plus, self.V_zero], [-self.V_zero.conj().T, self.V_minus]])
        return W @ M @ W.conj().T


def _blocks(M: np.ndarray, J: FundamentalSymmetry):
    W, p, _ = J.diagonalizer()
    Mw = W.conj().T @ M @ W
    return W, p, Mw[:p, :p], Mw[p:, p:], Mw[:p, p:], Mw[p:, :p]


def split_blocks(V: KreinOperator) -> BlockPerturbation:
    V.require_selfadjoint()
    W, _, Vp, Vm, V0, V1 = _blocks(V.matrix, V.symmetry)
    return BlockPerturbation(Vp, Vm, V0, W)


def _off_diagonal_norm(A: KreinOperator) -> float:
    _, _, _, _, A01, A10 = _blocks(A.matrix, A.symmetry)
    return max(la.opnorm(A01), la.opnorm(A10))


# -- certificates -----------------------------------------------------------------------


@dataclass(frozen=True)
class EigenStatus:
    value: complex
    location: str
    """``inside``, ``outside`` or ``band`` (within the margin of the boundary)."""
    sign: str
    signed_distance: float


@dataclass(frozen=True)
class EnclosureCertificate:
    theorem: str
    region: EnclosureRegion
    verified: bool
    """No violations were found (indeterminate eigenvalues are not violations)."""
    status: Verdict
    violations: tuple[tuple[complex, str], ...]
    indeterminate: tuple[tuple[complex, str], ...]
    eigenvalues: tuple[EigenStatus, ...]
    boundary_gap: float
    """Smallest ``|signed distance|`` of an eigenvalue to the region boundary."""
    margin: float
    infinity_regular_note: str
    theorem_4_5: str | None = None
    notes: tuple[str, ...] = ()
    parameters: dict = field(default_factory=dict)


_INF_NOTE = (
    "infinity is not a singular critical point (finite dimension); "
    "projection norms of E(R-bar minus [-r, r]) attached as evidence"
)


def verify_enclosure(
    AV: KreinOperator,
    K: EnclosureRegion,
    theorem: str = "custom",
    D: SpectralDecomposition | None = None,
    run_theorem_4_5: bool = True,
    parameters: dict | None = None,
    notes: Sequence[str] = (),
) -> EnclosureCertificate:
    """Check that A+V is non-negative over the complement of K at the level of its spectrum.

    Non-real eigenvalues must lie in K; real eigenvalues outside K must carry the sign
    type of their half-line.  Eigenvalues within ``margin_factor * cluster_tol`` of the
    boundary are reported as indeterminate instead.
    """
    AV.require_selfadjoint()
    D = D if D is not None else decompose(AV)
    margin = AV.tol.margin_factor * D.cluster_tol
    statuses, viol, ind = [], [], []
    gap = math.inf
    zero = D.zero_cluster()
    for k, cl in enumerate(D.clusters):
        z = cl.center
        s = float(K.signed_distance(z)) if not isinstance(K, Empty) else math.inf
        gap = min(gap, abs(s))
        loc = "inside" if s < -margin else ("outside" if s > margin else "band")
        sign = D.classifications[k].sign
        statuses.append(EigenStatus(z, loc, sign.value, s))
        if loc == "inside":
            continue
        if not cl.is_real:
            (viol if loc == "outside" else ind).append((z, "non-real eigenvalue outside K"))
            continue
        if k == zero:
            # 0 sits between the half-lines; it is judged by the Theorem 4.5 kernel test
            continue
        want = SignType.POSITIVE if z.real > 0 else SignType.NEGATIVE
        if sign is not want:
            (viol if loc == "outside" else ind).append((z, f"{sign.value} eigenvalue outside K"))
    t45 = None
    if run_theorem_4_5:
        lv = check_theorem_4_5(AV, K, D, margin=margin, cross_check=True)
        t45 = lv.verdict.value
        if lv.verdict is Verdict.FAIL:
            for name, c in lv.conditions.items():
                if c.verdict is Verdict.FAIL and name != "spectrum_outside_K":
                    viol.append((0j, f"theorem 4.5 condition {name} fails"))
        elif lv.verdict is Verdict.INDETERMINATE:
            for name, c in lv.conditions.items():
                if c.verdict is Verdict.INDETERMINATE and name != "spectrum_outside_K":
                    ind.append((0j, f"theorem 4.5 condition {name} indeterminate"))
        if not lv.consistent:
            viol.append((0j, "local decomposition disagrees with theorem 4.5 verdict"))
    status = Verdict.FAIL if viol else (Verdict.INDETERMINATE if ind else Verdict.PASS)
    return EnclosureCertificate(
        theorem=theorem,
        region=K,
        verified=not viol,
        status=status,
        violations=tuple(viol),
        indeterminate=tuple(ind),
        eigenvalues=tuple(statuses),
        boundary_gap=float(gap),
        margin=margin,
        infinity_regular_note=_INF_NOTE,
        theorem_4_5=t45,
        notes=tuple(notes),
        parameters=dict(parameters or {}),
    )


def _require_nonnegative(A: KreinOperator, blocking: list[str]) -> None:
    if not is_nonnegative_direct(A).direct_nonnegative:
        blocking.append("A_not_nonnegative")


# -- Theorem 5.1 ------------------------------------------------------------------------


def theorem_5_1_region(A: KreinOperator, V: KreinOperator) -> EnclosureCertificate:
    """Capsule ``dist(z, [-||V+||, ||V-||]) <= ||V0||`` for block-diagonal non-negative A."""
    A.require_selfadjoint()
    blocking: list[str] = []
    if _off_diagonal_norm(A) > A.tol.struct_abs(A.norm):
        blocking.append("A_not_block_diagonal")
    _require_nonnegative(A, blocking)
    if blocking:
        hint = " (use theorem_5_3_region or theorem_5_4_region)" if "A_not_block_diagonal" in blocking else ""
        raise PreconditionError("Theorem 5.1 preconditions fail" + hint, blocking)
    B = split_blocks(V)
    vp, vm, v0 = B.norms
    K = Capsule(-vp, vm, v0)
    params = {"V_plus_norm": vp, "V_minus_norm": vm, "V_zero_norm": v0}
    return verify_enclosure(A + V, K, Theorem.T5_1.value, parameters=params)


# -- tau ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class TauResult:
    tau: float
    J_tilde: np.ndarray
    """Projector-difference route ``E(R+) - E(R-)``."""
    J_tilde_quadrature: np.ndarray
    route: str
    cross_residual: float
    involution_residual: float
    quadrature_nodes: int
    gap: float
    """Distance from 0 to the spectrum of A."""

    @property
    def cross_ok(self) -> bool:
        return self.cross_residual <= 1e-7 * (1.0 + self.tau)


_GL_START = 32
_GL_MAX = 8192


def _resolvent_sum_quadrature(A: np.ndarray, scale: float, nodes: int) -> np.ndarray:
    """``(1/pi) int_0^inf ((A + it)^-1 + (A - it)^-1) dt`` with ``t = scale * tan(theta)``."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = 0.25 * np.pi * (x + 1.0)
    wt = 0.25 * np.pi * w
    t = scale * np.tan(theta)
    jac = scale / np.cos(theta) ** 2
    n = A.shape[0]
    I = np.eye(n)
    Mp = A[None] + 1j * t[:, None, None] * I[None]
    Mm = A[None] - 1j * t[:, None, None] * I[None]
    B = np.broadcast_to(I.astype(complex), Mp.shape)
    R = np.linalg.solve(Mp, B) + np.linalg.solve(Mm, B)
    return np.tensordot(wt * jac, R, axes=(0, 0)) / np.pi


def tau_by_quadrature(A: KreinOperator, tol: float | None = None) -> tuple[np.ndarray, int]:
    """Gauss-Legendre nodes are doubled until ``J~^2 = I`` and successive rules agree."""
    M = A.matrix
    w = np.abs(np.linalg.eigvals(M))
    scale = float(math.sqrt(w.min() * w.max())) if w.min() > 0 else 1.0
    tol = A.tol.tau if tol is None else tol
    N = _GL_START
    prev = _resolvent_sum_quadrature(M, scale, N)
    while N < _GL_MAX:
        N *= 2
        cur = _resolvent_sum_quadrature(M, scale, N)
        nrm = la.opnorm(cur)
        inv = la.opnorm(cur @ cur - np.eye(A.n))
        step = la.opnorm(cur - prev)
        if inv <= 0.1 * tol * (1.0 + nrm) ** 2 and step <= 0.1 * tol * (1.0 + nrm):
            return cur, N
        prev = cur
    raise QuadratureError(f"resolvent quadrature did not converge with {N} nodes")


def compute_tau(A: KreinOperator, D: SpectralDecomposition | None = None) -> TauResult:
    """``tau = ||E(R+) - E(R-)||`` by two independent routes."""
    A.require_selfadjoint()
    blocking: list[str] = []
    _require_nonnegative(A, blocking)
    D = D if D is not None else decompose(A)
    w = D.raw_eigenvalues
    gap = float(np.min(np.abs(w)))
    if D.zero_cluster() is not None or gap <= D.cluster_tol:
        blocking.append("zero_eigenvalue")
    if blocking:
        raise PreconditionError(f"tau requires a non-negative A with 0 not an eigenvalue (gap {gap:.3e})", blocking)
    Jp = D.spectral_function(RealSet.positive()) - D.spectral_function(RealSet.negative())
    Jq, nodes = tau_by_quadrature(A)
    tau = la.opnorm(Jp)
    return TauResult(
        tau=tau,
        J_tilde=Jp,
        J_tilde_quadrature=Jq,
        route="ProjectorDifference",
        cross_residual=la.opnorm(Jp - Jq),
        involution_residual=la.opnorm(Jp @ Jp - np.eye(A.n)),
        quadrature_nodes=nodes,
        gap=gap,
    )


# -- Theorem 5.3 ------------------------------------------------------------------------


def nu(V: KreinOperator) -> float:
    """``inf [Vf, f]`` over unit vectors, i.e. the smallest eigenvalue of ``JV``."""
    return la.min_eig(V.gram)


def _check_5_3_pre(A: KreinOperator, V: KreinOperator) -> None:
    A.require_selfadjoint()
    V.require_selfadjoint()
    blocking: list[str] = []
    _require_nonnegative(A, blocking)
    D = decompose(A)
    if D.zero_cluster() is not None:
        blocking.append("zero_eigenvalue")
    if blocking:
        raise PreconditionError("preconditions fail", blocking)


def theorem_5_3_region(A: KreinOperator, V: KreinOperator, tau: TauResult) -> EnclosureCertificate:
    """Capsule ``dist(z, [-d, d]) <= (1 + tau)/2 ||V||`` with ``d = -(1 + tau)/2 min sigma(JV)``."""
    _check_5_3_pre(A, V)
    m = nu(V)
    AV = A + V
    t = tau.tau
    if m >= -V.tol.sign_abs(V.norm):
        cert = verify_enclosure(AV, Empty(), Theorem.T5_3.value, parameters={"nu": m, "tau": t})
        direct = is_nonnegative_direct(AV)
        return _with_note(cert, f"V non-negative: A+V non-negative directly (min sigma(J(A+V)) = {direct.min_gram_eig:.3e})")
    d = -(1.0 + t) / 2.0 * m
    r = (1.0 + t) / 2.0 * V.norm
    K = Capsule(-d, d, r)
    return verify_enclosure(AV, K, Theorem.T5_3.value, parameters={"nu": m, "tau": t, "d": d, "r": r})


def _with_note(cert: EnclosureCertificate, note: str) -> EnclosureCertificate:
    from dataclasses import replace

    return replace(cert, notes=cert.notes + (note,))


# -- relative bounds and Theorem 5.4 ------------------------------------------------------


@dataclass(frozen=True)
class RelativeBound:
    a: float
    b: float
    feasibility_certificate: float
    """Smallest eigenvalue of ``2a I + b A*A - (1 + tau) tau V*V``."""


def fit_relative_bound(
    A: KreinOperator, V: KreinOperator, tau: TauResult, b_grid: Sequence[float] = (0.0,)
) -> list[RelativeBound]:
    """Smallest ``a`` with ``(1 + tau) tau ||Vf||^2 <= 2a ||f||^2 + b ||Af||^2`` for each ``b``."""
    t = tau.tau
    VV = V.matrix.conj().T @ V.matrix
    AA = A.matrix.conj().T @ A.matrix
    out = []
    for b in b_grid:
        b = float(b)
        if not 0.0 <= b < 1.0:
            raise ValueError(f"b must lie in [0, 1), got {b}")
        a = max(0.0, la.max_eig((1.0 + t) * t * VV - b * AA) / 2.0)
        cert = la.min_eig(2.0 * a * np.eye(A.n) + b * AA - (1.0 + t) * t * VV)
        out.append(RelativeBound(a, b, cert))
    return out


def theorem_5_4_parameters(tau: float, bound: RelativeBound, nu_value: float, refined: bool) -> dict[str, float]:
    a, b = bound.a, bound.b
    gamma = min(math.sqrt((1.0 + tau) * a / (2.0 * tau)), (1.0 + tau) * abs(nu_value) / 2.0)
    if refined:
        f = (1.0 + tau) / (2.0 * tau * (1.0 - b))
        return {"gamma": gamma, "c0": f * a, "c1": f * b}
    return {"gamma": gamma, "c0": a, "c1": b}


def refined_eligible(tau: float, b: float) -> bool:
    return tau > 1.0 and b < (tau - 1.0) / (2.0 * tau)


def theorem_5_4_region(
    A: KreinOperator,
    V: KreinOperator,
    tau: TauResult,
    bound: RelativeBound,
    refined: bool | None = None,
) -> list[EnclosureCertificate]:
    """Ball-union regions ``U_{|t| <= gamma} B(t, sqrt(c0 + c1 t^2))``.

    ``refined=None`` emits the plain region and, when ``b < (tau - 1)/(2 tau)``, the refined
    one as well.  ``refined=True`` requests only the refined region and refuses when the
    condition on ``b`` cannot hold.  In finite dimension ``nu > -inf`` always, so the
    ``nu = -inf`` case is never reached.
    """
    _check_5_3_pre(A, V)
    t = tau.tau
    if bound.feasibility_certificate < -A.tol.sign_abs(A.norm**2 + V.norm**2):
        raise PreconditionError("relative bound is not feasible", ["relative_bound"])
    if not 0.0 <= bound.b < 1.0:
        raise PreconditionError("b must lie in [0, 1)", ["relative_bound"])
    if refined is True and not refined_eligible(t, bound.b):
        raise PreconditionError(
            f"refined region needs b < (tau - 1)/(2 tau) = {(t - 1) / (2 * t):.3g} (tau = {t:.6g}, b = {bound.b:.3g})",
            ["refined_condition"],
        )
    m = nu(V)
    AV = A + V
    D = decompose(AV)
    base = {"tau": t, "nu": m, "a": bound.a, "b": bound.b}
    if m >= -V.tol.sign_abs(V.norm):
        cert = verify_enclosure(AV, Empty(), Theorem.T5_4.value, D=D, parameters=base)
        return [_with_note(cert, "nu >= 0: A+V non-negative")]
    variants = []
    if refined is not True:
        variants.append((False, Theorem.T5_4.value))
    if refined is True or (refined is None and refined_eligible(t, bound.b)):
        variants.append((True, Theorem.T5_4_REFINED.value))
    out = []
    for ref, name in variants:
        p = theorem_5_4_parameters(t, bound, m, ref)
        K = BallUnion(p["gamma"], p["c0"], p["c1"])
        out.append(verify_enclosure(AV, K, name, D=D, parameters={**base, **p}))
    return out
