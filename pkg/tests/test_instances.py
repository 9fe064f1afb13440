import numpy as np
import pytest

from kreintools import characterization as ch
from kreintools.instances import InstanceSpec, Kind, generate, nilpotent_pair, sturm_liouville
from kreintools.perturbation import split_blocks
from kreintools.spectral import root_subspaces


def test_canonical_pair_exact():
    inst = generate(InstanceSpec("JordanAtZero", 0, 2, {"block_size": 2}))
    assert np.array_equal(inst.A, np.array([[0, 1], [0, 0]], dtype=complex))
    assert np.array_equal(inst.J, np.array([[0, 1], [1, 0]], dtype=complex))


@pytest.mark.parametrize("kind", list(Kind))
def test_deterministic(kind):
    spec = InstanceSpec(kind, 12345, 6)
    a, b = generate(spec), generate(spec)
    assert a.J.tobytes() == b.J.tobytes() and a.A.tobytes() == b.A.tobytes()
    assert a.operator.selfadjoint_certified
    assert not a.A.flags.writeable


@pytest.mark.parametrize("seed", range(20))
def test_random_nonnegative_passes_direct(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    inst = generate(InstanceSpec("RandomNonnegative", seed, n, {"rank": int(rng.integers(0, n + 1))}))
    assert ch.is_nonnegative_direct(inst.operator).direct_nonnegative


@pytest.mark.parametrize("k,expected", [(1, True), (2, True), (3, False)])
def test_jordan_dichotomy(k, expected):
    inst = generate(InstanceSpec("JordanAtZero", 7, 5, {"block_size": k}))
    assert root_subspaces(inst.operator, 0.0).largest_block == k
    assert ch.is_nonnegative_direct(inst.operator).direct_nonnegative is expected


def test_block_diagonal_pair_structure():
    inst = generate(InstanceSpec("BlockDiagonalPair", 3, 6, {"positive": 4, "v0_norm": 0.7}))
    A = inst.operator
    assert np.allclose(inst.A[:4, 4:], 0) and np.allclose(inst.A[4:, :4], 0)
    assert ch.is_nonnegative_direct(A).direct_nonnegative
    assert split_blocks(inst.perturbation).norms[2] == pytest.approx(0.7)
    assert inst.perturbation.selfadjoint_certified


def test_sturm_liouville_structure():
    J, A = sturm_liouville(16, switch=0.1, potential=lambda x: x**2)
    assert np.allclose(np.diag(J).real, np.where(-1 + (2 / 17) * np.arange(1, 17) >= 0.1, 1, -1))
    H = J @ A
    assert np.allclose(H, H.conj().T) and np.allclose(np.triu(H, 2), 0)


@pytest.mark.parametrize(
    "spec",
    [
        ("JordanAtZero", 0, 3, {"block_size": 4}),
        ("RandomNonnegative", 0, 3, {"rank": 5}),
        ("SturmLiouville", 0, 8, {"switch": 2.0}),
        ("RandomGeneric", 0, 1, {}),
        ("RandomGeneric", -1, 4, {}),
    ],
)
def test_invalid_specs(spec):
    with pytest.raises(ValueError):
        generate(InstanceSpec(*spec))


def test_nilpotent_pair_sign():
    J, A = nilpotent_pair(2, -1.0)
    assert np.array_equal(J @ A, np.diag([0.0, -1.0]))
