import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import subspace_angles

from graphslepian import (
    Design,
    GraphSlepianError,
    NodeSubset,
    ParseError,
    concentration_matrix,
    cross_metrics,
    eig_laplacian,
    embedding_concentration_matrix,
    laplacian_cross_metrics,
    load_subset,
    shannon_number,
    slepian_basis,
    slepian_concentration,
    slepian_embedding,
    subset_gram_offdiagonal,
)
from graphslepian.classic1d import DftDesign, slepian_1d
from graphslepian.synthetic import cycle_graph, path_graph, random_connected_graph
from oracles import slepian_pipeline


def random_subset(rng, n, size=None):
    size = size or int(rng.integers(1, n + 1))
    return NodeSubset(tuple(rng.choice(n, size=size, replace=False).tolist()), n)


class TestNodeSubset:
    def test_sorted_and_selector(self):
        s = NodeSubset((3, 0, 2), 5)
        assert s.indices == (0, 2, 3) and s.n_s == 3
        np.testing.assert_array_equal(s.selector(), [1, 0, 1, 1, 0])
        assert s.selector().sum() == s.n_s

    @pytest.mark.parametrize("idx", [(), (1, 1), (5,), (-1,)])
    def test_invalid(self, idx):
        with pytest.raises(GraphSlepianError):
            NodeSubset(idx, 5)

    def test_load(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("# head\n4\n1  # c\n\n2\n")
        assert load_subset(p, 5).indices == (1, 2, 4)

    @pytest.mark.parametrize("text", ["1\n1\n", "9\n", "a\n", "# empty\n"])
    def test_load_errors(self, tmp_path, text):
        p = tmp_path / "s.txt"
        p.write_text(text)
        with pytest.raises(ParseError):
            load_subset(p, 5)


class TestConcentrationMatrix:
    def test_all_nodes_identity(self, random_graph):
        spec = eig_laplacian(random_graph(12), "norm", 7)
        cm = concentration_matrix(spec, 7, NodeSubset.all_nodes(12))
        np.testing.assert_allclose(cm.entries, np.eye(7), atol=1e-12)

    def test_full_bandwidth_projector(self, random_graph, rng):
        spec = eig_laplacian(random_graph(14), "comb")
        sub = random_subset(rng, 14, 5)
        vals = np.linalg.eigvalsh(concentration_matrix(spec, 14, sub).entries)
        np.testing.assert_allclose(vals, [0] * 9 + [1] * 5, atol=1e-8)

    def test_p3_hand(self):
        spec = eig_laplacian(path_graph(3), "comb")
        cm = concentration_matrix(spec, 2, NodeSubset((0,), 3))
        row = np.array([1 / np.sqrt(3), 1 / np.sqrt(2)])
        np.testing.assert_allclose(cm.entries, np.outer(row, row), atol=1e-12)
        emb = embedding_concentration_matrix(spec, 2, NodeSubset((0,), 3))
        np.testing.assert_allclose(emb.entries, [[0, 0], [0, 0.5]], atol=1e-12)

    def test_trace(self, random_graph, rng):
        spec = eig_laplacian(random_graph(20), "norm")
        sub = random_subset(rng, 20)
        c = concentration_matrix(spec, 9, sub).entries
        expected = sum(spec.eigenvectors[i, a] ** 2 for i in sub.indices for a in range(9))
        assert np.trace(c) == pytest.approx(expected, rel=1e-12)
        np.testing.assert_array_equal(c, c.T)

    def test_errors(self):
        spec = eig_laplacian(path_graph(4), "comb", 2)
        with pytest.raises(GraphSlepianError, match="bandwidth"):
            concentration_matrix(spec, 3, NodeSubset((0,), 4))
        with pytest.raises(GraphSlepianError):
            concentration_matrix(spec, 2, NodeSubset((0,), 5))

    def test_embedding_zero_row(self, random_graph, rng):
        spec = eig_laplacian(random_graph(15), "norm", 8)
        emb = embedding_concentration_matrix(spec, 8, random_subset(rng, 15)).entries
        assert np.all(emb[0] == 0) and np.all(emb[:, 0] == 0)
        assert np.linalg.eigvalsh(emb).min() >= -1e-10

    def test_embedding_all_nodes_is_lambda(self, random_graph):
        spec = eig_laplacian(random_graph(15), "comb", 6)
        emb = embedding_concentration_matrix(spec, 6, NodeSubset.all_nodes(15)).entries
        np.testing.assert_allclose(emb, np.diag(spec.eigenvalues[:6]), atol=1e-12)


class TestConcentrationDesign:
    def test_all_nodes(self, random_graph):
        spec = eig_laplacian(random_graph(16), "norm", 6)
        b = slepian_concentration(concentration_matrix(spec, 6, NodeSubset.all_nodes(16)))
        np.testing.assert_allclose(b.values, 1, atol=1e-12)
        assert np.max(subspace_angles(b.vectors, spec.eigenvectors)) < 1e-8

    def test_ring_matches_1d_dft(self):
        # the cycle's 17 lowest eigenvectors span the same space as the 17
        # lowest DFT frequencies, so both problems have the same spectrum
        n, n_w, interval = 128, 17, tuple(range(48, 80))
        spec = eig_laplacian(cycle_graph(n), "comb", n_w)
        b = slepian_basis(spec, n_w, NodeSubset(interval, n), "concentration")
        ref = slepian_1d(DftDesign(n, n_w, interval)).mu
        np.testing.assert_allclose(b.values, ref, atol=1e-10)
        k = shannon_number(n_w, len(interval), n)
        count = int(np.sum(b.values > 0.5))
        assert abs(count - round(k)) <= 1
        # step shape: near 1 before the transition, near 0 well after it
        assert b.values[0] > 0.99 and b.values[-1] < 1e-6

    def test_rayleigh_upper_bound(self, random_graph, rng):
        spec = eig_laplacian(random_graph(25), "norm", 10)
        cm = concentration_matrix(spec, 10, random_subset(rng, 25, 8))
        b = slepian_concentration(cm)
        x = rng.standard_normal((10, 10000))
        x /= np.linalg.norm(x, axis=0)
        q = np.einsum("ak,ak->k", x, cm.entries @ x)
        assert q.max() <= b.values[0] + 1e-9

    def test_design_mismatch(self, random_graph):
        spec = eig_laplacian(random_graph(10), "norm", 4)
        sub = NodeSubset((0, 1), 10)
        with pytest.raises(GraphSlepianError):
            slepian_concentration(embedding_concentration_matrix(spec, 4, sub))
        with pytest.raises(GraphSlepianError):
            slepian_embedding(concentration_matrix(spec, 4, sub))


class TestEmbeddingDesign:
    def test_all_nodes_reduces_to_laplacian(self, random_graph):
        spec = eig_laplacian(random_graph(18), "norm", 7)
        b = slepian_embedding(embedding_concentration_matrix(spec, 7, NodeSubset.all_nodes(18)))
        np.testing.assert_allclose(b.values, spec.eigenvalues[:7], atol=1e-10)
        # random weights: no degeneracy, vectors match column by column
        np.testing.assert_allclose(b.vectors, spec.eigenvectors[:, :7], atol=1e-8)

    def test_first_is_constant_direction(self, random_graph, rng):
        spec = eig_laplacian(random_graph(18), "comb", 7)
        b = slepian_basis(spec, 7, random_subset(rng, 18, 6), "embedding")
        assert abs(b.values[0]) <= 1e-12
        assert abs(abs(b.coefficients[0, 0]) - 1) <= 1e-10

    @pytest.mark.parametrize("seed", range(3))
    def test_against_dense_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        g = random_connected_graph(10, rng, p=0.3)
        sub = random_subset(rng, 10, 4)
        n_w = int(rng.integers(2, 11))
        _, ref = slepian_pipeline(10, g.edges, "norm", n_w, sub.indices, "embedding")
        b = slepian_basis(eig_laplacian(g, "norm"), n_w, sub, "embedding")
        np.testing.assert_allclose(b.values, ref, atol=1e-8)


class TestShannon:
    def test_fig1(self):
        assert shannon_number(17, 129, 512) == 2193 / 512
        assert round(shannon_number(17, 129, 512), 1) == 4.3

    def test_mesh(self):
        assert round(shannon_number(1000, 1534, 4567)) == 336

    def test_full_band(self):
        assert shannon_number(30, 7, 30) == 7

    @pytest.mark.parametrize("args", [(0, 1, 2), (1, -1, 2), (3, 1, 2), (1, 3, 2)])
    def test_invalid(self, args):
        with pytest.raises(GraphSlepianError):
            shannon_number(*args)


class TestCrossMetrics:
    @pytest.fixture
    def setup(self, random_graph, rng):
        spec = eig_laplacian(random_graph(20), "norm", 8)
        return spec, random_subset(rng, 20, 7)

    def test_eigenvector(self, setup):
        spec, sub = setup
        for k in range(8):
            lam_m, _, _ = cross_metrics(spec, sub, spec.eigenvectors[:, k], 8)
            assert lam_m == pytest.approx(spec.eigenvalues[k], abs=1e-12)

    def test_supported_inside(self, setup):
        spec, sub = setup
        g = np.zeros(20)
        g[list(sub.indices)] = 1.0
        g /= np.linalg.norm(g)
        assert cross_metrics(spec, sub, g)[1] == pytest.approx(1.0, abs=1e-14)

    def test_concentration_vectors(self, setup):
        spec, sub = setup
        b = slepian_basis(spec, 8, sub, "concentration")
        for k in range(8):
            lam_m, mu_m, xi_m = cross_metrics(spec, sub, b.vectors[:, k], 8)
            assert mu_m == pytest.approx(b.values[k], abs=1e-10)
            assert (lam_m, mu_m, xi_m) == pytest.approx(tuple(b.cross_metrics[k]), abs=1e-12)

    def test_non_unit(self, setup):
        spec, sub = setup
        with pytest.raises(GraphSlepianError, match="unit norm"):
            cross_metrics(spec, sub, 2 * spec.eigenvectors[:, 0])

    def test_laplacian_table(self, setup):
        spec, sub = setup
        m = laplacian_cross_metrics(spec, sub, 5)
        assert m.shape == (5, 3)
        np.testing.assert_allclose(m[:, 0], spec.eigenvalues[:5], atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(4, 40), seed=st.integers(0, 2**31), kind=st.sampled_from(["comb", "norm"]))
def test_basis_invariants(n, seed, kind):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng, p=0.2)
    n_w = int(rng.integers(1, n + 1))
    sub = random_subset(rng, n)
    spec = eig_laplacian(g, kind, n_w)
    sel = sub.selector()

    conc = slepian_basis(spec, n_w, sub, "concentration")
    v = conc.vectors
    assert np.abs(v.T @ v - np.eye(n_w)).max() <= 1e-8
    gram_s = v.T @ (sel[:, None] * v)
    assert np.abs(gram_s - np.diag(conc.values)).max() <= 1e-8
    assert np.all(np.diff(conc.values) <= 0)
    assert conc.values.min() >= -1e-10 and conc.values.max() <= 1 + 1e-10
    c = concentration_matrix(spec, n_w, sub).entries
    assert conc.values.sum() == pytest.approx(np.trace(c), abs=1e-10)
    np.testing.assert_allclose(conc.values, conc.mu_metric, atol=1e-10)

    emb = slepian_basis(spec, n_w, sub, "embedding")
    ce = embedding_concentration_matrix(spec, n_w, sub).entries
    h = emb.coefficients
    assert np.abs(h.T @ h - np.eye(n_w)).max() <= 1e-8
    assert np.abs(h.T @ ce @ h - np.diag(emb.values)).max() <= 1e-8
    assert np.all(np.diff(emb.values) >= 0)
    assert emb.values.min() >= -1e-10
    np.testing.assert_allclose(emb.values, emb.xi_metric, atol=1e-10)
    assert np.abs(emb.vectors.T @ emb.vectors - np.eye(n_w)).max() <= 1e-8


@settings(max_examples=20, deadline=None)
@given(n=st.integers(5, 30), seed=st.integers(0, 2**31))
def test_monotone_in_subset(n, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng)
    n_w = int(rng.integers(1, n + 1))
    spec = eig_laplacian(g, "norm", n_w)
    perm = rng.permutation(n)
    sizes = sorted(rng.choice(np.arange(1, n + 1), size=3, replace=False))
    tops = []
    for size in sizes:
        sub = NodeSubset(tuple(perm[:size].tolist()), n)
        tops.append(slepian_basis(spec, n_w, sub, "concentration").values[0])
    assert tops[0] <= tops[1] + 1e-12 and tops[1] <= tops[2] + 1e-12


def test_subset_orthogonality_of_embedding_design(random_graph, rng):
    """Measure V^T S V for the embedding design.

    It is diagonal only when C and C_emb commute; on a generic graph it is not,
    and the measured magnitude is recorded rather than assumed to be zero.
    """
    g = random_graph(30)
    sub = random_subset(rng, 30, 10)
    spec = eig_laplacian(g, "norm", 12)
    conc = slepian_basis(spec, 12, sub, "concentration")
    emb = slepian_basis(spec, 12, sub, "embedding")
    assert subset_gram_offdiagonal(conc) < 1e-10
    off = subset_gram_offdiagonal(emb)
    print(f"embedding design: max |offdiag(V^T S V)| = {off:.3e}")
    assert off > 1e-3
    # commuting case: full subset gives C = I
    full = slepian_basis(spec, 12, NodeSubset.all_nodes(30), "embedding")
    assert subset_gram_offdiagonal(full) < 1e-10


def test_order_presentation(random_graph, rng):
    spec = eig_laplacian(random_graph(12), "norm", 6)
    b = slepian_basis(spec, 6, random_subset(rng, 12, 4), Design.CONCENTRATION)
    np.testing.assert_array_equal(b.order("desc"), np.arange(6))
    assert np.all(np.diff(b.values[b.order("asc")]) >= 0)
    with pytest.raises(GraphSlepianError):
        b.order("sideways")


def test_basis_is_deterministic(random_graph, rng):
    g = random_graph(25)
    sub = random_subset(rng, 25, 9)
    a = slepian_basis(eig_laplacian(g, "norm", 10), 10, sub, "embedding")
    b = slepian_basis(eig_laplacian(g, "norm", 10), 10, sub, "embedding")
    assert a.vectors.tobytes() == b.vectors.tobytes()
    for k in range(10):
        col = a.vectors[:, k]
        assert col[np.argmax(np.abs(col))] > 0
