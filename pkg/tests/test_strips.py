import itertools
import math

import numpy as np
import pytest

from girg_lab.analysis.strips import (
    CoverBoundInput,
    StripIndex,
    constant_set_neighbors,
    cover_bound,
    cover_bound_stirling,
    covered_exists,
    degree_concentration,
    empirical_cover_probability,
    gamma_for_strip_count,
    log_binom,
    log_binom_stirling,
    minimal_strip_n,
    same_strip_neighbor_counts,
    same_strip_neighbors,
    strip_rows,
    strip_spread,
    strip_width,
)
from girg_lab.errors import DegenerateStripError
from girg_lab.graph.ops import induced_by_weight
from girg_lab.model.kernel import ModelParams, VertexTable
from girg_lab.sample.sampler import sample_graph_naive


def test_strip_width_examples():
    assert strip_width(1000, 1.0) == (20, 0.05)
    assert strip_width(10_000, 1.0)[0] == 117


def test_strip_width_degenerate():
    with pytest.raises(DegenerateStripError):
        strip_width(100, 2.5)
    with pytest.raises(ValueError):
        strip_width(2, 1.0)
    with pytest.raises(ValueError):
        strip_width(100, 0.0)


def test_minimal_strip_n_is_the_boundary():
    n0 = minimal_strip_n(2.5)
    assert strip_width(n0, 2.5)[0] >= 1
    with pytest.raises(DegenerateStripError) as exc:
        strip_width(n0 - 1, 2.5)
    assert exc.value.min_n == n0


@pytest.mark.parametrize("n,strips", [(1000, 20), (10_000, 5), (5000, 1)])
def test_gamma_for_strip_count(n, strips):
    assert strip_width(n, gamma_for_strip_count(n, strips))[0] == strips


def test_strip_index_buckets():
    vertices = VertexTable(np.ones(4), np.array([[0.0, 0.99], [0.5, 0.5], [0.26, 0.1], [0.74, 0.3]]))
    idx = StripIndex.build(vertices, gamma_for_strip_count(1000, 4), n=1000)
    assert idx.M == 4 and idx.d == 2
    assert idx.strip_of[:, 0].tolist() == [0, 2, 1, 2]
    assert idx.bucket_sizes(0).tolist() == [1, 1, 2, 0]
    assert [b.tolist() for b in idx.buckets(0)] == [[0], [2], [1, 3], []]
    assert strip_spread(idx, [1, 3]) == (2, 1)
    assert strip_spread(idx, [0, 2, 3]) == (3, 0)
    with pytest.raises(ValueError):
        strip_spread(idx, [])


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_strip_spread_grows_with_the_set(seed):
    g = sample_graph_naive(ModelParams(n=500, d=3, seed=seed))
    idx = StripIndex.for_graph(g, 1.0)
    rng = np.random.default_rng(seed)
    for _ in range(20):
        s1 = rng.choice(g.n, size=int(rng.integers(1, 30)), replace=False)
        s2 = rng.choice(g.n, size=int(rng.integers(1, 30)), replace=False)
        union, _ = strip_spread(idx, np.concatenate([s1, s2]))
        assert union >= max(strip_spread(idx, s1)[0], strip_spread(idx, s2)[0])
        assert union <= min(idx.M, s1.size + s2.size)


def test_same_strip_counts_agree_with_scalar():
    g = sample_graph_naive(ModelParams(n=600, seed=3))
    idx = StripIndex.for_graph(g, 1.0)
    view = induced_by_weight(g, 2.0)
    band = (2.0, math.inf)
    counts = same_strip_neighbor_counts(view, idx, band)
    assert counts.shape == (view.size, 2)
    for local in range(0, view.size, 7):
        v = int(view.kept[local])
        for i in range(2):
            assert counts[local, i] == same_strip_neighbors(view, idx, v, i, band)
    outside = int(np.flatnonzero(view.to_local < 0)[0])
    with pytest.raises(ValueError):
        same_strip_neighbors(view, idx, outside, 0, band)


def test_constant_set_neighbors_counts_band_only():
    g = sample_graph_naive(ModelParams(n=400, seed=8))
    view = induced_by_weight(g, 1.0)
    s = [0, 1, 2]
    everything = constant_set_neighbors(view, s, (1.0, math.inf))
    assert constant_set_neighbors(view, s, (1.0, 2.0)) <= everything


def test_cover_bound_anchor():
    assert cover_bound(CoverBoundInput(10, 3, 1, 5, 2)) == pytest.approx(0.192, abs=1e-12)
    assert cover_bound(CoverBoundInput(10, 3, 3, 3, 2)) == 1.0


def test_cover_bound_input_validation():
    with pytest.raises(ValueError):
        CoverBoundInput(10, 11, 1, 5, 2)
    with pytest.raises(ValueError):
        CoverBoundInput(10, 3, 4, 5, 2)
    with pytest.raises(ValueError):
        CoverBoundInput(10, 3, 1, 5, 0)


def test_stirling_dominates_exact():
    for n in (5, 20, 300):
        for k in range(n + 1):
            assert log_binom(n, k) <= log_binom_stirling(n, k) + 1e-9
    for nv, s, k, strips in [(50, 3, 1, 10), (200, 5, 2, 20), (1000, 4, 1, 30)]:
        inp = CoverBoundInput(nv, s, k, strips, 2)
        assert cover_bound(inp) <= cover_bound_stirling(inp) + 1e-12


def _covered_brute(strip_of, s, k):
    for subset in itertools.combinations(range(strip_of.shape[0]), s):
        rows = strip_of[list(subset)]
        if all(np.unique(rows[:, i]).size <= k for i in range(rows.shape[1])):
            return True
    return False


def test_covered_exists_small_cases():
    strip_of = np.array([[0, 0], [0, 1], [1, 0], [1, 1]])
    assert covered_exists(strip_of, 4, 2, 1) == (False, True)
    assert covered_exists(strip_of, 4, 1, 1) == (True, True)
    assert covered_exists(strip_of, 4, 4, 2) == (True, True)
    assert covered_exists(strip_of, 4, 5, 2) == (False, True)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_covered_exists_matches_brute_force(d):
    rng = np.random.default_rng(d)
    for _ in range(40):
        strip_of = rng.integers(0, 5, size=(8, d))
        for s, k in [(2, 1), (3, 1), (3, 2), (4, 2)]:
            covered, exact = covered_exists(strip_of, 5, s, k)
            assert exact
            assert covered == _covered_brute(strip_of, s, k)


def test_empirical_cover_probability_below_bound():
    p = ModelParams(n=200, seed=0)
    gamma = gamma_for_strip_count(200, 5)
    est = empirical_cover_probability(p, gamma, s=4, k=1, trials=30)
    assert est.trials == 30
    assert 0.0 <= est.frequency <= 1.0
    assert est.frequency <= est.bound_mean + 0.2
    assert est.nv_mean > 0
    again = empirical_cover_probability(p, gamma, s=4, k=1, trials=30, threads=3)
    assert again == est


def test_strip_rows_shape():
    p = ModelParams(n=200, seed=1)
    gamma = gamma_for_strip_count(200, 5)
    cells = [(3, 1), (4, 2)]
    estimates = [empirical_cover_probability(p, gamma, s, k, trials=5) for s, k in cells]
    rows = strip_rows(200, 2, 2.5, gamma, cells, estimates)
    assert [(r["s"], r["k"]) for r in rows] == cells
    assert set(rows[0]) >= {"n", "d", "tau", "gamma", "s", "k", "bound", "empirical", "trials"}


def test_degree_concentration():
    g = sample_graph_naive(ModelParams(n=800, seed=2))
    view = induced_by_weight(g, math.log(800))
    conc = degree_concentration(g, view, 1.0)
    assert conc.degree_per_weight > 0
    assert conc.max_relative_deviation >= 0
    assert conc.light_high_degree >= 0
    with pytest.raises(ValueError):
        degree_concentration(g, induced_by_weight(g, 1e12), 1.0)
