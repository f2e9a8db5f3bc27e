import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import partial_traces_loops, random_density, random_mixture, random_unitary
from qic.channel import (
    BipartiteDims,
    BipartiteState,
    CoupledWeights,
    Label,
    classify,
    coupled_mixture,
    induced_index,
    joint_distribution,
    parameter_counting,
    partial_trace_a,
    partial_trace_b,
    ppt_min_eigenvalue,
    subchannel_probs,
    tensor_product,
)
from qic.core import DensityMatrix, ValidationError
from qic.paraqubit import ParaqubitWeights, paraqubit_density
from qic.representation import SpinLabel, coupled_labels

SINGLET = CoupledWeights(SpinLabel(1), SpinLabel(1), {(0, 0): 1.0})


def projector(n, i):
    m = np.zeros((n, n))
    m[i, i] = 1
    return m


def random_weights(two_l, two_s, rng):
    labels = coupled_labels(two_l, two_s)
    w = rng.dirichlet(np.ones(len(labels)) * rng.uniform(0.2, 2))
    return CoupledWeights(SpinLabel(two_l), SpinLabel(two_s), dict(zip(labels, w)))


@pytest.mark.parametrize("m, n, nb, k", [(0, 0, 2, 0), (1, 0, 2, 2), (1, 1, 3, 4)])
def test_induced_index(m, n, nb, k):
    assert induced_index(m, n, BipartiteDims(2, nb)) == k


def test_induced_index_bijective_and_bounds():
    dims = BipartiteDims(3, 4)
    assert sorted(induced_index(m, n, dims) for m in range(3) for n in range(4)) == list(range(12))
    with pytest.raises(IndexError):
        induced_index(3, 0, dims)


def test_dims_validation():
    with pytest.raises(ValidationError):
        BipartiteDims(0, 2)
    with pytest.raises(ValidationError):
        BipartiteState(BipartiteDims(2, 2), DensityMatrix(np.eye(3) / 3))


def test_tensor_product_examples():
    half = DensityMatrix(np.eye(2) / 2)
    np.testing.assert_allclose(tensor_product(half, half).matrix, np.eye(4) / 4)
    s = tensor_product(DensityMatrix(np.diag([1, 0])), DensityMatrix(np.diag([0, 1])))
    np.testing.assert_allclose(s.matrix, projector(4, 1))
    s = tensor_product(DensityMatrix(np.diag([0.6, 0.4])), DensityMatrix(np.diag([0.7, 0.3])))
    np.testing.assert_allclose(np.diag(s.matrix).real, [0.42, 0.18, 0.28, 0.12], atol=1e-15)


def test_partial_trace_examples():
    singlet = coupled_mixture(SINGLET)
    np.testing.assert_allclose(partial_trace_b(singlet).matrix, np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace_a(singlet).matrix, np.eye(2) / 2, atol=1e-15)
    s = BipartiteState(BipartiteDims(2, 2), DensityMatrix(projector(4, 1)))
    np.testing.assert_allclose(partial_trace_b(s).matrix, np.diag([1, 0]))
    np.testing.assert_allclose(partial_trace_a(s).matrix, np.diag([0, 1]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_partial_trace_of_product(na, nb, seed):
    rng = np.random.default_rng(seed)
    ra, rb = DensityMatrix(random_density(na, rng)), DensityMatrix(random_density(nb, rng))
    s = tensor_product(ra, rb)
    assert np.max(np.abs(partial_trace_b(s).matrix - ra.matrix)) < 1e-12
    assert np.max(np.abs(partial_trace_a(s).matrix - rb.matrix)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_partial_trace_matches_loops(na, nb, seed):
    rng = np.random.default_rng(seed)
    s = BipartiteState(BipartiteDims(na, nb), DensityMatrix(random_mixture(na * nb, rng)))
    ra, rb = partial_traces_loops(s.matrix, na, nb)
    np.testing.assert_allclose(partial_trace_b(s).matrix, ra, atol=1e-14)
    np.testing.assert_allclose(partial_trace_a(s).matrix, rb, atol=1e-14)
    for r in (partial_trace_a(s), partial_trace_b(s)):
        assert abs(np.trace(r.matrix) - 1) < 1e-12
        assert np.linalg.eigvalsh(r.matrix)[0] > -1e-12


@pytest.mark.parametrize("two_l, two_s", [(1, 1), (2, 1), (3, 2), (4, 0)])
def test_coupled_mixture_uniform_is_maximally_mixed(two_l, two_s):
    s = coupled_mixture(CoupledWeights.uniform(two_l, two_s))
    n = (two_l + 1) * (two_s + 1)
    np.testing.assert_allclose(s.matrix, np.eye(n) / n, atol=1e-14)


def test_coupled_mixture_singlet_and_stretch():
    s = coupled_mixture(SINGLET).matrix
    assert s[1, 2] == pytest.approx(-0.5) and s[2, 1] == pytest.approx(-0.5)
    np.testing.assert_allclose(np.diag(s).real, [0, 0.5, 0.5, 0], atol=1e-15)
    u = coupled_mixture(CoupledWeights(SpinLabel(1), SpinLabel(1), {(2, 2): 1.0})).matrix
    np.testing.assert_allclose(u, projector(4, 3), atol=1e-15)


def test_coupled_weights_validation():
    with pytest.raises(ValidationError):
        CoupledWeights(SpinLabel(1), SpinLabel(1), {(0, 0): 0.5})
    with pytest.raises(ValidationError):
        CoupledWeights(SpinLabel(1), SpinLabel(1), {(4, 0): 1.0})
    with pytest.raises(ValidationError):
        CoupledWeights(SpinLabel(1), SpinLabel(1), {(0, 0): 1.5, (2, 0): -0.5})


def test_subchannel_probs_examples():
    pa, pb = subchannel_probs(SINGLET)
    np.testing.assert_allclose(pa, [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(pb, [0.5, 0.5], atol=1e-15)
    pa, pb = subchannel_probs(CoupledWeights(SpinLabel(2), SpinLabel(1), {(3, 3): 1.0}))
    np.testing.assert_allclose(pa, [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(pb, [0, 1], atol=1e-15)
    pa, pb = subchannel_probs(CoupledWeights.uniform(3, 2))
    np.testing.assert_allclose(pa, np.full(4, 0.25), atol=1e-15)
    np.testing.assert_allclose(pb, np.full(3, 1 / 3), atol=1e-15)


def test_joint_distribution_examples():
    # rows are m_l = -1/2, +1/2 ; columns m_s = -1/2, +1/2
    np.testing.assert_allclose(joint_distribution(SINGLET).table, [[0, 0.5], [0.5, 0]], atol=1e-15)
    t = joint_distribution(CoupledWeights(SpinLabel(1), SpinLabel(1), {(2, -2): 1.0})).table
    np.testing.assert_allclose(t, [[1, 0], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(joint_distribution(CoupledWeights.uniform(1, 1)).table, np.full((2, 2), 0.25))


@pytest.mark.parametrize("two_l, two_s", [(1, 1), (2, 1), (2, 2), (3, 1), (5, 3)])
def test_marginal_consistency(two_l, two_s):
    rng = np.random.default_rng(two_l * 10 + two_s)
    for _ in range(20):
        cw = random_weights(two_l, two_s, rng)
        jd = joint_distribution(cw)
        pa, pb = subchannel_probs(cw)
        st_ = coupled_mixture(cw)
        np.testing.assert_allclose(jd.row_sums, pa, atol=1e-12)
        np.testing.assert_allclose(jd.col_sums, pb, atol=1e-12)
        np.testing.assert_allclose(np.diag(partial_trace_b(st_).matrix).real, pa, atol=1e-12)
        np.testing.assert_allclose(np.diag(partial_trace_a(st_).matrix).real, pb, atol=1e-12)
        np.testing.assert_allclose(np.diag(st_.matrix).real.reshape(jd.table.shape), jd.table, atol=1e-12)


@pytest.mark.parametrize(
    "na, nb, expected",
    [
        (2, 2, {"pure_full": 3, "pure_product": 1, "missing": 9}),
        (1, 5, {"pure_product": 0}),
        (2, 3, {"pure_full": 5, "pure_product": 2, "missing": 24}),
        (3, 3, {"pure_full": 8, "pure_product": 4, "missing": 64}),
        (1, 1, {"pure_full": 0, "pure_product": 0, "mixed_full": 0, "mixed_product_sum": 0, "missing": 0}),
    ],
)
def test_parameter_counting(na, nb, expected):
    report = parameter_counting(BipartiteDims(na, nb))
    for k, v in expected.items():
        assert report[k] == v


def test_ppt_examples():
    singlet = coupled_mixture(SINGLET)
    assert ppt_min_eigenvalue(singlet) == pytest.approx(-0.5, abs=1e-14)
    assert ppt_min_eigenvalue(BipartiteState(BipartiteDims(2, 2), DensityMatrix(np.eye(4) / 4))) == pytest.approx(0.25)
    rng = np.random.default_rng(5)
    for _ in range(20):
        s = tensor_product(DensityMatrix(random_density(2, rng)), DensityMatrix(random_density(3, rng)))
        assert ppt_min_eigenvalue(s) >= -1e-12


def test_ppt_lower_bound_two_qubits():
    rng = np.random.default_rng(17)
    for _ in range(300):
        s = BipartiteState(BipartiteDims(2, 2), DensityMatrix(random_mixture(4, rng)))
        assert ppt_min_eigenvalue(s) >= -0.5 - 1e-12


def test_classify_examples():
    assert classify(coupled_mixture(SINGLET)).label is Label.ENTANGLED
    mix = paraqubit_density(ParaqubitWeights(0.5, 0.5, 0, 0))
    assert classify(mix).label is Label.SEPARABLE_MIX
    assert classify(BipartiteState(BipartiteDims(2, 2), DensityMatrix(np.eye(4) / 4))).label is Label.PRODUCT


def test_classify_undetermined_for_large_dims():
    # separable but not a product, PPT inconclusive at 3x3
    rho = 0.5 * np.kron(np.diag([1, 0, 0]), np.diag([1, 0, 0])) + 0.5 * np.kron(np.diag([0, 1, 0]), np.diag([0, 1, 0]))
    c = classify(BipartiteState(BipartiteDims(3, 3), DensityMatrix(rho)))
    assert c.label is Label.UNDETERMINED and not c.ppt_conclusive


def test_classify_products():
    rng = np.random.default_rng(23)
    for _ in range(200):
        na, nb = rng.integers(1, 5, size=2)
        s = tensor_product(DensityMatrix(random_density(na, rng)), DensityMatrix(random_density(nb, rng)))
        assert classify(s).label is Label.PRODUCT


@pytest.mark.parametrize(
    "make",
    [
        lambda: coupled_mixture(SINGLET),
        lambda: paraqubit_density(ParaqubitWeights(0.5, 0.5, 0, 0)),
        lambda: paraqubit_density(ParaqubitWeights(0.4, 0.1, 0.25, 0.25)),
        lambda: paraqubit_density(ParaqubitWeights(0.25, 0.25, 0.25, 0.25)),
        lambda: coupled_mixture(CoupledWeights(SpinLabel(2), SpinLabel(1), {(3, 1): 1.0})),
    ],
)
def test_classify_local_unitary_invariance(make):
    state = make()
    label = classify(state).label
    na, nb = state.dims.na, state.dims.nb
    rng = np.random.default_rng(99)
    for _ in range(100):
        u = np.kron(random_unitary(na, rng), random_unitary(nb, rng))
        rotated = BipartiteState(state.dims, DensityMatrix(u @ state.matrix @ u.conj().T))
        assert classify(rotated).label is label
