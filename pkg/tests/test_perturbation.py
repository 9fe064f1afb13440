import math

import numpy as np
import pytest

from kreintools import PreconditionError
from kreintools import perturbation as pt
from kreintools import regions as rg
from kreintools.characterization import Verdict
from kreintools.instances import InstanceSpec, generate
from kreintools.regions import BallUnion, Capsule, Empty

from conftest import HAND_A, op, rot

J2 = np.diag([1.0, -1.0])


def test_split_blocks_rotation():
    B = pt.split_blocks(rot(2.5))
    assert B.norms == pytest.approx((0.0, 0.0, 2.5))
    assert np.allclose(B.assemble(), rot(2.5).matrix)


def test_theorem_5_1_hand(diag22):
    c = pt.theorem_5_1_region(diag22, rot(1.0))
    assert c.region == Capsule(-0.0, 0.0, 1.0)
    assert c.verified and c.status is Verdict.PASS
    got = sorted((e.value.real, e.location, e.sign) for e in c.eigenvalues)
    s3 = math.sqrt(3.0)
    assert got[0][0] == pytest.approx(-s3) and got[0][1:] == ("outside", "NegativeType")
    assert got[1][0] == pytest.approx(s3) and got[1][1:] == ("outside", "PositiveType")


def test_theorem_5_1_nonreal_inside(diag22):
    c = pt.theorem_5_1_region(diag22, rot(3.0))
    assert c.verified
    for e in c.eigenvalues:
        assert e.location == "inside"
        assert abs(e.value) == pytest.approx(math.sqrt(5.0))


@pytest.mark.parametrize("v", [0.25 * k for k in range(1, 13)])
def test_theorem_5_1_family(diag22, v):
    c = pt.theorem_5_1_region(diag22, rot(v))
    assert c.verified and not c.violations
    # closed form: lambda^2 = 4 - v^2
    lam = np.sqrt(complex(4.0 - v * v))
    vals = np.sort_complex(np.array([e.value for e in c.eigenvalues]))
    if v == 2.0:
        # double eigenvalue at 0 with a Jordan chain: one cluster
        assert np.allclose(vals, 0.0, atol=1e-7)
    else:
        oracle = np.array([lam, -lam])
        assert all(np.min(np.abs(oracle - z)) < 1e-9 for z in vals)
        assert all(np.min(np.abs(vals - z)) < 1e-9 for z in oracle)


def test_theorem_5_1_refusals(hand, canonical):
    with pytest.raises(PreconditionError) as exc:
        pt.theorem_5_1_region(hand, rot(1.0))
    assert exc.value.blocking == ["A_not_block_diagonal"]
    with pytest.raises(PreconditionError) as exc:
        pt.theorem_5_1_region(op(np.diag([-2.0, 2.0]), J2), rot(1.0))
    assert "A_not_nonnegative" in exc.value.blocking


def test_adversarial_shrink_reports_violation(diag22):
    # v = 10: eigenvalues +-i sqrt(96) sit just inside the certified disc of radius 10
    c = pt.theorem_5_1_region(diag22, rot(10.0))
    assert c.verified
    shrunk = Capsule(c.region.p, c.region.q, 0.9 * c.region.r)
    bad = pt.verify_enclosure(diag22 + rot(10.0), shrunk)
    assert not bad.verified and bad.status is Verdict.FAIL
    assert any("non-real" in reason for _, reason in bad.violations)


def test_band_is_indeterminate():
    A = op(np.diag([-2.0, 5.0]), np.eye(2))  # positive type at -2
    c = pt.verify_enclosure(A, Capsule(0.0, 0.0, 2.0), run_theorem_4_5=False)
    assert c.status is Verdict.INDETERMINATE and c.verified and c.indeterminate
    c = pt.verify_enclosure(A, Capsule(0.0, 0.0, 1.0), run_theorem_4_5=False)
    assert c.status is Verdict.FAIL


def test_tau_hand(hand):
    t = pt.compute_tau(hand)
    assert t.tau == pytest.approx(3.0, abs=1e-6)
    assert np.allclose(t.J_tilde, HAND_A, atol=1e-12)
    assert t.cross_ok and t.involution_residual < 1e-10


def test_tau_hilbert(diag22):
    assert abs(pt.compute_tau(diag22).tau - 1.0) <= 1e-10


def test_tau_refuses_kernel(canonical):
    with pytest.raises(PreconditionError) as exc:
        pt.compute_tau(canonical)
    assert "zero_eigenvalue" in exc.value.blocking


@pytest.mark.parametrize("seed", range(10))
def test_nu_identity(seed):
    """nu = inf over unit f of [Vf, f] equals the smallest eigenvalue of JV."""
    rng = np.random.default_rng(seed)
    inst = generate(InstanceSpec("RandomNonnegative", seed, 5, {"floor": 0.2, "v_norm": 1.0}))
    V = inst.perturbation
    m = pt.nu(V)
    F = rng.standard_normal((5, 2000)) + 1j * rng.standard_normal((5, 2000))
    F /= np.linalg.norm(F, axis=0)
    q = np.real(np.sum(F.conj() * (V.J @ V.matrix @ F), axis=0))
    assert q.min() >= m - 1e-12
    w, U = np.linalg.eigh(V.gram)
    f = U[:, 0]
    assert np.real(np.vdot(f, V.J @ V.matrix @ f)) == pytest.approx(m, abs=1e-12)


def test_theorem_5_3_hand(diag22):
    tau = pt.compute_tau(diag22)
    c = pt.theorem_5_3_region(diag22, rot(1.0), tau)
    assert c.region == Capsule(-1.0, 1.0, 1.0)
    assert c.verified


def test_theorem_5_3_nonnegative_v(hand):
    V = op(0.1 * J2, J2)  # JV = 0.1 I
    c = pt.theorem_5_3_region(hand, V, pt.compute_tau(hand))
    assert isinstance(c.region, Empty) and c.verified and c.notes


def test_theorem_5_3_grows_with_tau(hand):
    V = op(0.05 * rot(1.0).matrix, J2)
    tau = pt.compute_tau(hand)
    K3 = pt.theorem_5_3_region(hand, V, tau).region
    m, nv = pt.nu(V), np.linalg.norm(V.matrix, 2)
    K1 = Capsule(m, -m, nv)  # the same formula with tau = 1
    grid = rg.membership_grid(1.0, 100)
    ok, _ = rg.grid_subset(K1, K3, grid)
    assert ok and K3.r > K1.r and K3.q > K1.q


@pytest.mark.parametrize("seed", range(10))
def test_relative_bound_certificates(seed):
    inst = generate(InstanceSpec("RandomNonnegative", seed, 6, {"floor": 0.1, "v_norm": 0.5}))
    A, V = inst.operator, inst.perturbation
    tau = pt.compute_tau(A)
    for rb in pt.fit_relative_bound(A, V, tau, [0.0, 0.1, 0.3, 0.6]):
        assert rb.feasibility_certificate >= -1e-9 * (1 + A.norm**2 + V.norm**2)
        # oracle: the inequality on random vectors
        rng = np.random.default_rng(seed)
        f = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        lhs = (1 + tau.tau) * tau.tau * np.linalg.norm(V.matrix @ f) ** 2
        rhs = 2 * rb.a * np.linalg.norm(f) ** 2 + rb.b * np.linalg.norm(A.matrix @ f) ** 2
        assert lhs <= rhs * (1 + 1e-9)


def test_b_zero_reduces_to_theorem_5_3(hand):
    V = op(0.3 * rot(1.0).matrix, J2)
    tau = pt.compute_tau(hand)
    cap = pt.theorem_5_3_region(hand, V, tau).region
    rb = pt.fit_relative_bound(hand, V, tau, [0.0])[0]
    p = pt.theorem_5_4_parameters(tau.tau, rb, pt.nu(V), refined=True)
    assert p["c1"] == 0.0
    assert p["gamma"] == pytest.approx(cap.q, rel=1e-12)
    assert math.sqrt(p["c0"]) == pytest.approx(cap.r, rel=1e-12)
    plain = pt.theorem_5_4_parameters(tau.tau, rb, pt.nu(V), refined=False)
    assert math.sqrt(plain["c0"]) > cap.r * 1.01  # tau = 3: the plain radius is larger


def test_b_zero_plain_equals_5_3_when_tau_one(diag22):
    V = rot(0.7)
    tau = pt.compute_tau(diag22)
    cap = pt.theorem_5_3_region(diag22, V, tau).region
    rb = pt.fit_relative_bound(diag22, V, tau, [0.0])[0]
    p = pt.theorem_5_4_parameters(tau.tau, rb, pt.nu(V), refined=False)
    assert p["gamma"] == pytest.approx(cap.q, rel=1e-12)
    assert math.sqrt(p["c0"]) == pytest.approx(cap.r, rel=1e-12)


def test_refined_refused_when_tau_one(diag22):
    tau = pt.compute_tau(diag22)
    rb = pt.fit_relative_bound(diag22, rot(0.5), tau, [0.0])[0]
    with pytest.raises(PreconditionError) as exc:
        pt.theorem_5_4_region(diag22, rot(0.5), tau, rb, refined=True)
    assert exc.value.blocking == ["refined_condition"]


def test_refined_inside_plain(hand):
    V = op(0.2 * rot(1.0).matrix, J2)  # JV indefinite: nu < 0
    tau = pt.compute_tau(hand)
    assert pt.nu(V) < 0 and pt.refined_eligible(tau.tau, 0.1)
    rb = pt.fit_relative_bound(hand, V, tau, [0.1])[0]
    certs = pt.theorem_5_4_region(hand, V, tau, rb)
    assert [c.theorem for c in certs] == ["5.4", "5.4r"]
    plain, refined = (c.region for c in certs)
    ok, _ = rg.grid_subset(refined, plain, rg.membership_grid(3.0, 100))
    assert ok
    assert refined.c0 < plain.c0 and refined.c1 < plain.c1
    assert all(c.verified for c in certs)


def test_b_outside_unit_interval(diag22):
    tau = pt.compute_tau(diag22)
    with pytest.raises(ValueError):
        pt.fit_relative_bound(diag22, rot(0.5), tau, [1.0])
