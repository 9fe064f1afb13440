import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from kreintools import regions as rg
from kreintools.regions import BallUnion, Capsule, Empty

finite = dict(allow_nan=False, allow_infinity=False)
coef = st.floats(0.0, 4.0, **finite)
capsules = st.builds(
    lambda a, w, r: Capsule(a, a + w, r), st.floats(-3, 3, **finite), st.floats(0, 4, **finite), coef
)
balls = st.builds(BallUnion, st.floats(0, 3, **finite), st.floats(0.01, 4, **finite), st.floats(0, 0.95, **finite))
points = st.complex_numbers(max_magnitude=8.0, allow_nan=False, allow_infinity=False)


def brute_qmin(K: BallUnion, z: complex, grid: int = 100_000) -> float:
    t = np.linspace(-K.gamma, K.gamma, grid)
    return float(np.min((z.real - t) ** 2 + z.imag**2 - K.c0 - K.c1 * t**2))


def _normal(K, z):
    c = K.nearest_center(z)
    d = z - c
    return d / abs(d)


def test_capsule_examples():
    K = Capsule(0.0, 0.0, 1.0)
    assert K.contains(0.5 + 0.5j) and not K.contains(1.1)


def test_degenerate_ball():
    K = BallUnion(0.0, 0.25, 3.0)
    assert K.contains(0.5) and not K.contains(0.5001)
    assert np.allclose(np.abs(rg.boundary_samples(K, 64)), 0.5)


def test_ballunion_example():
    K = BallUnion(1.0, 0.25, 0.25)
    assert math.isclose(K.qmin(1.3), -0.41, abs_tol=1e-14)
    assert K.contains(1.3)
    assert math.isclose(brute_qmin(K, 1.3 + 0j), -0.41, abs_tol=1e-9)


def test_capsule_circle_samples():
    pts = rg.boundary_samples(Capsule(0.0, 0.0, 1.0), 32)
    assert np.allclose(np.abs(pts), 1.0)
    assert pts[0] == pts[-1]


@pytest.mark.parametrize("K", [Capsule(-1.0, 2.0, 0.5), BallUnion(1.5, 0.4, 0.3), BallUnion(2.0, 0.1, 1.5)])
def test_boundary_samples_on_boundary(K):
    pts = rg.boundary_samples(K, 200)
    eps = 1e-6 * K.diameter
    assert np.max(np.abs(K.signed_distance(pts))) < 1e-9 * K.diameter
    nrm = np.array([_normal(K, z) for z in pts])
    assert np.all(K.contains(pts - eps * nrm))
    # both shapes are star-shaped about the middle of their real segment
    mid = 0.5 * (K.p + K.q) if isinstance(K, Capsule) else 0.0
    ray = (pts - mid) / np.abs(pts - mid)
    assert not np.any(K.contains(pts + eps * ray))
    # counterclockwise: positive shoelace area
    x, y = pts.real, pts.imag
    assert 0.5 * np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]) > 0


def test_boundary_errors():
    with pytest.raises(ValueError):
        rg.boundary_samples(Empty(), 16)
    with pytest.raises(ValueError):
        rg.boundary_samples(Capsule(0, 1, 1), 4)


def test_brute_force_membership():
    """1e3 random (region, z) pairs against a 1e5-point t-grid minimisation."""
    rng = np.random.default_rng(42)
    mismatches = 0
    for _ in range(1000):
        K = BallUnion(rng.uniform(0, 3), rng.uniform(0, 2), rng.uniform(0, 1.5))
        z = complex(rng.uniform(-5, 5), rng.uniform(-3, 3))
        brute = brute_qmin(K, z)
        if (brute <= 0.0) != bool(K.contains(z)) and abs(brute) > 1e-9:
            mismatches += 1
        assert K.qmin(z) <= brute + 1e-12
    assert mismatches == 0


def test_dilate_superset_grid():
    grid = rg.membership_grid(6.0, 100)
    for K in (Capsule(-1, 1.5, 0.7), BallUnion(1.2, 0.3, 0.4), BallUnion(1.0, 0.2, 1.3)):
        ok, bad = rg.grid_subset(K, rg.dilate(K, 1.5), grid)
        assert ok and bad == 0
        assert rg.dilate(K, 1.0) == K
    assert Capsule(0, 1, 1).dilate(2.0).r == 2.0
    with pytest.raises(ValueError):
        Capsule(0, 1, 1).dilate(0.5)


def test_parse_and_dict_roundtrip():
    for spec, K in [("capsule:-1,1,2", Capsule(-1, 1, 2)), ("ballunion:1,0.5,0.2", BallUnion(1, 0.5, 0.2)), ("empty", Empty())]:
        assert rg.parse_region(spec) == K
        assert rg.region_from_dict(rg.region_to_dict(K)) == K
    with pytest.raises(ValueError):
        rg.parse_region("disc:1")


def test_export_csv(tmp_path):
    path = tmp_path / "k.csv"
    rg.export_csv(BallUnion(1, 0.5, 0.2), path, 16)
    lines = path.read_text().splitlines()
    assert lines[0] == "# region=BallUnion params=gamma=1.0,c0=0.5,c1=0.2"
    assert lines[1] == "re,im" and len(lines) == 18


def test_neighbourhoods():
    U = rg.DiscUnion(((0j, 1.0), (3 + 0j, 0.5)))
    assert U.contains(0.5) and U.contains(3.2) and not U.contains(2.0)
    R = rg.RectUnion(((-1, 1, -1, 1),))
    assert R.contains(0.9 + 0.9j) and not R.contains(1.0)
    T = rg.Thickened(Capsule(0, 0, 1), 0.5)
    assert T.contains(1.4) and not T.contains(1.5)


@settings(max_examples=200, deadline=None)
@given(st.one_of(capsules, balls), points)
def test_conjugation_symmetry(K, z):
    assert K.contains(z) == K.contains(z.conjugate())
    assert math.isclose(K.signed_distance(z), K.signed_distance(z.conjugate()), abs_tol=1e-12)


@settings(max_examples=200, deadline=None)
@given(balls, points)
def test_signed_distance_sign_matches_membership(K, z):
    d = K.signed_distance(z)
    assume(abs(d) > 1e-9)
    assert (d < 0) == K.contains(z)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2, **finite), coef, st.floats(0, 0.9, **finite), st.floats(0, 1, **finite), points)
def test_monotone_in_parameters(g, c0, c1, bump, z):
    small = BallUnion(g, c0, c1)
    large = BallUnion(g + bump, c0 + bump, c1 + bump / 10)
    if small.contains(z):
        assert large.contains(z)


@settings(max_examples=100, deadline=None)
@given(st.lists(points, min_size=1, max_size=50), st.one_of(capsules, balls))
def test_backends_agree(zs, K):
    from kreintools import _backend

    try:
        cy = _backend.get("cython")
    except ImportError:
        pytest.skip("compiled kernels not built")
    py = _backend.get("python")
    z = np.asarray(zs, dtype=complex)
    zr, zi = np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag)
    if isinstance(K, Capsule):
        assert np.array_equal(py.capsule_signed_distance(zr, zi, K.p, K.q, K.r), cy.capsule_signed_distance(zr, zi, K.p, K.q, K.r))
    else:
        args = (K.gamma, K.c0, K.c1)
        assert np.allclose(py.ballunion_qmin(zr, zi, *args), cy.ballunion_qmin(zr, zi, *args), rtol=0, atol=1e-14)
        d_py, t_py = py.ballunion_signed_distance(zr, zi, *args)
        d_cy, t_cy = cy.ballunion_signed_distance(zr, zi, *args)
        assert np.allclose(d_py, d_cy, rtol=0, atol=1e-13)


def test_backend_fixture_kernels(backend):
    zr = np.array([0.0, 2.0, -3.0])
    zi = np.array([0.0, 1.0, 0.0])
    assert np.allclose(backend.capsule_signed_distance(zr, zi, -1.0, 1.0, 0.5), [-0.5, math.sqrt(2) - 0.5, 1.5])
    d, t = backend.ballunion_signed_distance(zr, zi, 1.0, 0.25, 0.0)
    assert np.allclose(d, [-0.5, math.sqrt(2) - 0.5, 1.5])
    assert np.allclose(t, [0.0, 1.0, -1.0], atol=1e-9)
