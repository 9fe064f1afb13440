"""Deciders for non-negativity, similarity and local non-negativity.

Every checker returns structured evidence together with a three-valued verdict.
Growth estimates that cannot be fitted and eigenvalues that sit inside a margin
band make a verdict ``INDETERMINATE``; they never count as a pass.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import _linalg as la
from .core import KreinOperator, gram_restriction
from .errors import BoundaryCollisionError, KreinError, PreconditionError, SampleRangeError
from .regions import Empty, EnclosureRegion, Neighborhood, Thickened
from .spectral import (
    INFINITY,
    RealSet,
    SignType,
    SpectralDecomposition,
    decompose,
    growth_order_at,
    root_subspaces,
)


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"

    @staticmethod
    def combine(verdicts: Sequence["Verdict"]) -> "Verdict":
        if any(v is Verdict.FAIL for v in verdicts):
            return Verdict.FAIL
        if any(v is Verdict.INDETERMINATE for v in verdicts):
            return Verdict.INDETERMINATE
        return Verdict.PASS

    def as_bool(self) -> bool | None:
        return None if self is Verdict.INDETERMINATE else self is Verdict.PASS


@dataclass(frozen=True)
class Condition:
    name: str
    verdict: Verdict
    evidence: dict[str, Any] = field(default_factory=dict)
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class NonnegVerdict:
    theorem: str
    verdict: Verdict
    min_gram_eig: float
    direct_nonnegative: bool
    uniformly_positive: bool
    conditions: dict[str, Condition]
    lower_bound_gamma: float
    """``0`` for a non-negative operator, otherwise ``min sigma(JA)`` (the best uniform lower bound)."""

    @property
    def is_nonnegative(self) -> bool | None:
        return self.verdict.as_bool()

    @property
    def agrees_with_direct(self) -> bool | None:
        v = self.is_nonnegative
        return None if v is None else v == self.direct_nonnegative


def _op(A: KreinOperator) -> KreinOperator:
    return A.require_selfadjoint()


# -- direct test -----------------------------------------------------------------------


def min_gram_eig(A: KreinOperator) -> float:
    return la.min_eig(A.gram)


def is_nonnegative_direct(A: KreinOperator, D: SpectralDecomposition | None = None) -> NonnegVerdict:
    """``[Af, f] >= 0`` for all ``f`` iff the Hermitian matrix ``JA`` is positive semidefinite."""
    _op(A)
    m = min_gram_eig(A)
    thr = A.tol.sign_abs(A.norm)
    nonneg = m >= -thr
    smin = float(np.linalg.svd(A.matrix, compute_uv=False)[-1])
    invertible = smin > A.tol.cluster_abs(A.norm)
    cond = Condition("direct", Verdict.PASS if nonneg else Verdict.FAIL, {"min_gram_eig": m, "threshold": thr})
    return NonnegVerdict(
        theorem="direct",
        verdict=cond.verdict,
        min_gram_eig=m,
        direct_nonnegative=nonneg,
        uniformly_positive=nonneg and invertible,
        conditions={"direct": cond},
        lower_bound_gamma=0.0 if nonneg else m,
    )


# -- shared conditions ----------------------------------------------------------------


def _sign_type_condition(D: SpectralDecomposition, skip=lambda k: False) -> Condition:
    """Condition (i): real spectrum, and the right sign type on each half-line."""
    nonreal = [cl.center for cl in D.clusters if not cl.is_real]
    zero = D.zero_cluster()
    wrong = []
    types = []
    for k, cl in enumerate(D.clusters):
        if not cl.is_real or k == zero or skip(k):
            continue
        c = D.classifications[k]
        want = SignType.POSITIVE if cl.center.real > 0 else SignType.NEGATIVE
        types.append((cl.center.real, c.sign.value, float(c.gram_eigenvalues[0]), float(c.gram_eigenvalues[-1])))
        if c.sign is not want:
            wrong.append((cl.center.real, c.sign.value))
    ev = {"nonreal": [(z.real, z.imag) for z in nonreal], "wrong_sign_type": wrong, "sign_types": types}
    return Condition("spectrum_sign_types", Verdict.PASS if not nonreal and not wrong else Verdict.FAIL, ev)


def _infinity_condition(A: KreinOperator, D: SpectralDecomposition) -> Condition:
    rep = growth_order_at(A, INFINITY, D=D)
    v = {True: Verdict.PASS, False: Verdict.FAIL, None: Verdict.INDETERMINATE}[rep.order2_ok]
    ev = {"estimated_order": rep.estimated_order, "constant_M": rep.constant_M, "direction_M": rep.direction_M}
    return Condition("growth_infinity", v, ev, rep.notes)


def _zero_growth_condition(A: KreinOperator, D: SpectralDecomposition) -> Condition:
    if D.zero_cluster() is None:
        return Condition("growth_zero", Verdict.PASS, {"zero_in_resolvent_set": True})
    try:
        rep = growth_order_at(A, 0.0, D=D)
    except SampleRangeError as exc:
        return Condition("growth_zero", Verdict.INDETERMINATE, {}, (str(exc),))
    v = {True: Verdict.PASS, False: Verdict.FAIL, None: Verdict.INDETERMINATE}[rep.order2_ok]
    ev = {
        "estimated_order": rep.estimated_order,
        "algebraic_order": rep.algebraic_order,
        "constant_M": rep.constant_M,
    }
    return Condition("growth_zero", v, ev, rep.notes)


def _ker_a2_basis(A: KreinOperator, D: SpectralDecomposition) -> tuple[np.ndarray, tuple[int, ...], bool]:
    if D.zero_cluster() is None:
        return np.zeros((A.n, 0), dtype=complex), (0, 0, 0), False
    chain = root_subspaces(A, 0.0, D)
    k1, k2, k3 = chain.first_three
    return k2, (k1.shape[1], k2.shape[1], k3.shape[1]), chain.ill_conditioned


def _kernel_gram_condition(A: KreinOperator, D: SpectralDecomposition) -> Condition:
    """``[Af, f] >= 0`` on ``ker A^2`` via the compressed Gram matrix."""
    Q, dims, flagged = _ker_a2_basis(A, D)
    thr = A.tol.sign_abs(A.norm)
    if Q.shape[1] == 0:
        return Condition("kernel_gram", Verdict.PASS, {"dim_ker_A2": 0})
    H = la.herm(Q.conj().T @ A.gram @ Q)
    g = la.eigvalsh(H)
    ev = {"dims_ker_A_A2_A3": dims, "gram_eigenvalues": g.tolist(), "threshold": thr, "rank_flagged": flagged}
    return Condition("kernel_gram", Verdict.PASS if g[0] >= -thr else Verdict.FAIL, ev)


def sequence_surrogate(A: KreinOperator, deltas: Sequence[float] | None = None) -> list[tuple[float, int, float]]:
    """Infimum of ``[Af, f]`` over unit vectors with ``||A^2 f|| <= delta ||A||^2``.

    Returns ``(delta, dimension, inf)`` along a decreasing ladder; the last rung is the
    numerical kernel of ``A^2``.  This is the finite-dimensional stand-in for sequences
    with ``A^2 f_n / ||f_n|| -> 0``.
    """
    M = A.matrix @ A.matrix
    _, s, vh = np.linalg.svd(M)
    s1 = s[0] if s.size and s[0] > 0 else 1.0
    floor = la.rank_threshold(M, A.tol.rank_factor, s1) / s1
    if deltas is None:
        deltas = [10.0**-k for k in range(1, 16) if 10.0**-k > floor] + [floor]
    out = []
    V = vh.conj().T
    for d in deltas:
        keep = s <= d * s1
        Q = V[:, keep]
        m = la.min_eig(Q.conj().T @ A.gram @ Q) if Q.shape[1] else math.inf
        out.append((float(d), int(Q.shape[1]), float(m)))
    return out


def _finish(theorem: str, A: KreinOperator, conditions: list[Condition]) -> NonnegVerdict:
    direct = is_nonnegative_direct(A)
    verdict = Verdict.combine([c.verdict for c in conditions])
    return NonnegVerdict(
        theorem=theorem,
        verdict=verdict,
        min_gram_eig=direct.min_gram_eig,
        direct_nonnegative=direct.direct_nonnegative,
        uniformly_positive=direct.uniformly_positive,
        conditions={c.name: c for c in conditions},
        lower_bound_gamma=direct.lower_bound_gamma,
    )


def check_theorem_3_2(A: KreinOperator, D: SpectralDecomposition | None = None) -> NonnegVerdict:
    """Non-negativity from (i) sign types, (ii) growth at infinity, (iii) growth at 0 and
    the sequence condition, evaluated on ``ker A^2`` with the approximate-kernel ladder attached."""
    _op(A)
    D = D if D is not None else decompose(A)
    gram = _kernel_gram_condition(A, D)
    ladder = sequence_surrogate(A) if D.zero_cluster() is not None else []
    gram = Condition(gram.name, gram.verdict, {**gram.evidence, "approximate_kernel_ladder": ladder})
    return _finish(
        "3.2", A, [_sign_type_condition(D), _infinity_condition(A, D), _zero_growth_condition(A, D), gram]
    )


def check_theorem_3_4(A: KreinOperator, D: SpectralDecomposition | None = None) -> NonnegVerdict:
    """Non-negativity with 0 regular: condition (iii) is the root-vector Gram test on
    ``ker A^2`` together with order-2 growth at 0.  Regularity of 0 holds automatically;
    the projection-norm profile around 0 is attached as evidence."""
    _op(A)
    D = D if D is not None else decompose(A)
    radii = _profile_radii(D)
    profile = D.projection_norm_profile(0.0, radii) if radii else []
    regular = Condition(
        "zero_regular",
        Verdict.PASS,
        {"projection_norm_profile": profile},
        ("finite dimension: 0 is never a singular critical point",),
    )
    return _finish(
        "3.4",
        A,
        [_sign_type_condition(D), _infinity_condition(A, D), _zero_growth_condition(A, D), _kernel_gram_condition(A, D), regular],
    )


def _profile_radii(D: SpectralDecomposition) -> list[float]:
    """Radii strictly between the distinct moduli of the real spectrum."""
    mods = sorted({round(abs(cl.center.real), 12) for cl in D.clusters if cl.is_real})
    mods = [m for m in mods if m > D.cluster_tol]
    cuts = [0.0] + mods + [mods[-1] * 2 + 1.0 if mods else 1.0]
    return [0.5 * (a + b) for a, b in zip(cuts[:-1], cuts[1:])]


# -- similarity ------------------------------------------------------------------------


@dataclass(frozen=True)
class SimilarityResult:
    J_A: np.ndarray
    G: np.ndarray
    """The metric ``G = J J_A``; ``<x, y> = y* G x`` makes A self-adjoint."""
    min_eig_G: float
    selfadjoint_residual: float
    involution_residual: float


def similarity_blockers(A: KreinOperator, D: SpectralDecomposition | None = None) -> list[str]:
    D = D if D is not None else decompose(A)
    blocking = []
    cond = _sign_type_condition(D)
    if cond.evidence["nonreal"]:
        blocking.append("nonreal_spectrum")
    if cond.evidence["wrong_sign_type"]:
        blocking.append("sign_type")
    if D.zero_cluster() is not None:
        chain = root_subspaces(A, 0.0, D)
        if chain.largest_block > 1:
            blocking.append("kernel_chain")
    if not blocking:
        v = check_theorem_3_2(A, D)
        if v.verdict is not Verdict.PASS:
            blocking.append("not_nonnegative")
    return blocking


def similarity_transform(A: KreinOperator, D: SpectralDecomposition | None = None) -> SimilarityResult:
    """Fundamental symmetry ``J_A = E+ - E- + J0'`` in which A is Hilbert self-adjoint.

    ``J0'`` acts on ``ker A = E({0})H`` as the sign of the kernel Gram matrix, which is the
    canonical fundamental symmetry of that Krein subspace.  Raises PreconditionError
    listing the blocking conditions when A is not similar to a self-adjoint operator.
    """
    _op(A)
    D = D if D is not None else decompose(A)
    blocking = similarity_blockers(A, D)
    if blocking:
        raise PreconditionError("A is not similar to a Hilbert-space self-adjoint operator", blocking)
    n = A.n
    Ep = np.zeros((n, n), dtype=complex)
    Em = np.zeros((n, n), dtype=complex)
    zero = D.zero_cluster()
    for b in D.blocks:
        c = D.clusters[b.clusters[0]].center.real
        if b.clusters[0] == zero:
            continue
        if c > 0:
            Ep += b.projection
        else:
            Em += b.projection
    JA = Ep - Em
    if zero is not None:
        E0 = D.block_of(zero).projection
        Q = la.projection_range(E0, D.clusters[zero].algebraic)
        _, S = la.abs_hermitian(gram_restriction(A.symmetry, Q, tol=1e-6))
        JA = JA + Q @ S @ Q.conj().T @ E0
    G = A.J @ JA
    res_inv = la.opnorm(JA @ JA - np.eye(n))
    Gh = la.herm(G)
    return SimilarityResult(
        J_A=JA,
        G=Gh,
        min_eig_G=la.min_eig(Gh),
        selfadjoint_residual=la.hermitian_residual(Gh @ A.matrix),
        involution_residual=res_inv,
    )


# -- local non-negativity --------------------------------------------------------------


@dataclass(frozen=True)
class LocalDecomposition:
    E_inf: np.ndarray
    A_b: np.ndarray
    """Compression of A to ``(I - E_inf)H`` in the orthonormal basis ``basis_b``."""
    A_inf: np.ndarray
    """Compression of A to ``E_inf H`` in the orthonormal basis ``basis_inf``."""
    basis_b: np.ndarray
    basis_inf: np.ndarray
    neighborhood_U: Neighborhood
    clauses: dict[str, Condition]
    symmetry: Any = field(repr=False, default=None)

    @property
    def verdict(self) -> Verdict:
        return Verdict.combine([c.verdict for c in self.clauses.values()])


def decompose_locally_nonnegative(
    A: KreinOperator, U: Neighborhood, D: SpectralDecomposition | None = None
) -> LocalDecomposition:
    """Split ``A = diag(A_b, A_inf)`` with ``sigma(A_b)`` inside ``U`` and test the clauses
    of non-negativity over the complement of ``U``."""
    _op(A)
    D = D if D is not None else decompose(A)
    ct = D.cluster_tol
    n = A.n
    if abs(float(U.signed_distance(0.0))) <= ct:
        raise BoundaryCollisionError("0 lies on the boundary of U")
    centers = np.array([cl.center for cl in D.clusters])
    sd = np.asarray(U.signed_distance(centers), dtype=float)
    outside = []
    for k, cl in enumerate(D.clusters):
        if abs(sd[k]) <= ct + cl.spread:
            raise BoundaryCollisionError(f"eigenvalue {cl.center:.6g} lies on the boundary of U")
        if sd[k] > 0:
            if not cl.is_real:
                raise PreconditionError(
                    f"non-real eigenvalue {cl.center:.6g} lies outside U", ["nonreal_outside_U"]
                )
            outside.append(k)
    E_inf = np.zeros((n, n), dtype=complex)
    for b in D.blocks:
        if all(k in outside for k in b.clusters):
            E_inf = E_inf + b.projection
    k_inf = sum(D.clusters[k].algebraic for k in outside)
    R_inf = la.projection_range(E_inf, k_inf) if k_inf else np.zeros((n, 0), dtype=complex)
    R_b = la.projection_range(np.eye(n) - E_inf, n - k_inf) if k_inf < n else np.zeros((n, 0), dtype=complex)
    A_inf = R_inf.conj().T @ A.matrix @ R_inf
    A_b = R_b.conj().T @ A.matrix @ R_b

    clauses = {}
    proj_res = max(la.opnorm(E_inf @ E_inf - E_inf), la.hermitian_residual(A.J @ E_inf))
    clauses["projection"] = Condition(
        "projection",
        Verdict.PASS if proj_res <= A.tol.proj * (1 + la.opnorm(E_inf)) ** 2 else Verdict.FAIL,
        {"residual": proj_res},
    )
    wb = np.linalg.eigvals(A_b) if A_b.size else np.zeros(0, dtype=complex)
    sdb = np.asarray(U.signed_distance(wb), dtype=float) if wb.size else np.zeros(0)
    clauses["bounded_part_in_U"] = Condition(
        "bounded_part_in_U",
        Verdict.PASS if np.all(sdb <= ct) else Verdict.FAIL,
        {"eigenvalues": [(z.real, z.imag) for z in wb], "max_signed_distance": float(sdb.max()) if sdb.size else None},
    )
    g = la.eigvalsh(R_inf.conj().T @ A.gram @ R_inf) if k_inf else np.zeros(0)
    thr = A.tol.sign_abs(A.norm)
    clauses["unbounded_part_nonnegative"] = Condition(
        "unbounded_part_nonnegative",
        Verdict.PASS if (g.size == 0 or g[0] >= -thr) else Verdict.FAIL,
        {"min_gram_eig": float(g[0]) if g.size else None, "threshold": thr},
    )
    wi = np.linalg.eigvals(A_inf) if A_inf.size else np.zeros(0, dtype=complex)
    sdi = np.asarray(U.signed_distance(wi), dtype=float) if wi.size else np.zeros(0)
    clauses["U_in_resolvent_of_unbounded_part"] = Condition(
        "U_in_resolvent_of_unbounded_part",
        Verdict.PASS if np.all(sdi >= -ct) else Verdict.FAIL,
        {"min_signed_distance": float(sdi.min()) if sdi.size else None},
    )
    return LocalDecomposition(E_inf, A_b, A_inf, R_b, R_inf, U, clauses, A.symmetry)


@dataclass(frozen=True)
class GammaBound:
    gamma: float
    metric: np.ndarray
    """Gram matrix of the assembled Hilbert product ``||f||_new^2 = f* metric f``."""
    min_slack: float
    """Smallest ``[Af, f] - gamma ||f||_new^2`` over the random samples (should be >= -tol)."""
    samples: int


def _subspace_symmetry(J: np.ndarray, R: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Fundamental symmetry of the Krein subspace ``range(P)`` extended by 0 on ``ker P``."""
    if R.shape[1] == 0:
        return np.zeros_like(P)
    _, S = la.abs_hermitian(R.conj().T @ J @ R)
    return R @ S @ R.conj().T @ P


def lower_bound_gamma(A: KreinOperator, L: LocalDecomposition, samples: int = 256, seed: int = 0) -> GammaBound:
    """``gamma = -||A_b||`` measured in a fundamental decomposition adapted to ``E_inf``."""
    J = A.J
    n = A.n
    E = L.E_inf
    Jnew = _subspace_symmetry(J, L.basis_inf, E) + _subspace_symmetry(J, L.basis_b, np.eye(n) - E)
    G = la.herm(J @ Jnew)
    Rb = L.basis_b
    if Rb.shape[1]:
        Mb = la.herm(Rb.conj().T @ G @ Rb)
        w, U = np.linalg.eigh(Mb)
        half = (U * np.sqrt(w)) @ U.conj().T
        ihalf = (U / np.sqrt(w)) @ U.conj().T
        gamma = -la.opnorm(half @ L.A_b @ ihalf)
    else:
        gamma = 0.0
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((n, samples)) + 1j * rng.standard_normal((n, samples))
    quad = np.real(np.sum(F.conj() * (A.gram @ F), axis=0))
    norm2 = np.real(np.sum(F.conj() * (G @ F), axis=0))
    slack = quad - gamma * norm2
    return GammaBound(float(gamma), G, float(np.min(slack / np.maximum(norm2, 1e-300))), samples)


# -- Theorem 4.5 -----------------------------------------------------------------------


@dataclass(frozen=True)
class LocalVerdict:
    verdict: Verdict
    conditions: dict[str, Condition]
    cross_checks: tuple[dict[str, Any], ...]
    indeterminate: tuple[tuple[complex, str], ...] = ()

    @property
    def consistent(self) -> bool:
        """A pass must be reproduced by every local decomposition that could be built."""
        if self.verdict is not Verdict.PASS:
            return True
        return all(c["verdict"] in (Verdict.PASS.value, "skipped") for c in self.cross_checks)


CROSS_CHECK_FACTORS = (1.5, 1.2, 1.05)


def neighborhood_around(K: EnclosureRegion, factor: float, scale: float) -> Thickened:
    """Open neighbourhood of K: the dilation by ``factor`` padded by ``(factor - 1)`` times its extent."""
    Kd = K.dilate(factor)
    pad = (factor - 1.0) * max(K.extent, 1e-3 * (1.0 + scale))
    return Thickened(Kd, pad)


def check_theorem_4_5(
    A: KreinOperator,
    K: EnclosureRegion,
    D: SpectralDecomposition | None = None,
    margin: float | None = None,
    cross_check: bool = True,
) -> LocalVerdict:
    """Non-negativity over the complement of K: (i) non-real spectrum in K and sign types
    outside K, (ii) growth at infinity, (iii) growth and kernel Gram at 0 when 0 is not in K."""
    _op(A)
    D = D if D is not None else decompose(A)
    margin = D.cluster_tol if margin is None else margin
    zero = D.zero_cluster()
    band: list[tuple[complex, str]] = []
    bad_nonreal, bad_sign = [], []
    for k, cl in enumerate(D.clusters):
        s = float(K.signed_distance(cl.center))
        if not cl.is_real:
            if s > margin:
                bad_nonreal.append((cl.center.real, cl.center.imag, s))
            elif s > -margin:
                band.append((cl.center, "non-real eigenvalue within the margin band of the boundary"))
            continue
        if k == zero or s < -margin:
            continue
        c = D.classifications[k]
        want = SignType.POSITIVE if cl.center.real > 0 else SignType.NEGATIVE
        if c.sign is want:
            continue
        if s > margin:
            bad_sign.append((cl.center.real, c.sign.value, s))
        else:
            band.append((cl.center, f"{c.sign.value} eigenvalue within the margin band of the boundary"))
    ev = {"nonreal_outside_K": bad_nonreal, "wrong_sign_type_outside_K": bad_sign, "margin": margin}
    if bad_nonreal or bad_sign:
        vi = Verdict.FAIL
    elif band:
        vi = Verdict.INDETERMINATE
    else:
        vi = Verdict.PASS
    conds = [Condition("spectrum_outside_K", vi, ev), _infinity_condition(A, D)]
    s0 = float(K.signed_distance(0.0))
    if s0 < -margin:
        conds.append(Condition("zero", Verdict.PASS, {"zero_in_K": True}))
    else:
        g, kg = _zero_growth_condition(A, D), _kernel_gram_condition(A, D)
        v0 = Verdict.combine([g.verdict, kg.verdict])
        if s0 <= margin and v0 is not Verdict.PASS:
            v0 = Verdict.INDETERMINATE
        conds.append(Condition("zero", v0, {"growth": g.evidence, "kernel_gram": kg.evidence}, g.notes + kg.notes))
    verdict = Verdict.combine([c.verdict for c in conds])
    checks = []
    if cross_check:
        for f in CROSS_CHECK_FACTORS:
            U = neighborhood_around(K, f, A.norm) if not isinstance(K, Empty) else Thickened(K, 0.0)
            try:
                L = decompose_locally_nonnegative(A, U, D)
                checks.append({"factor": f, "verdict": L.verdict.value})
            except PreconditionError as exc:
                checks.append({"factor": f, "verdict": Verdict.FAIL.value, "blocking": exc.blocking})
            except BoundaryCollisionError as exc:
                checks.append({"factor": f, "verdict": "skipped", "reason": str(exc)})
    return LocalVerdict(verdict, {c.name: c for c in conds}, tuple(checks), tuple(band))
