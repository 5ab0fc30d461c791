import numpy as np
import pytest
from hypothesis import given

from support import EPS7, graphs, k4, random_graph
from dyncc.baseline import (
    clustering_cost,
    compute_agreement_state,
    connected_components,
    correlation_clustering,
    naive_cost,
    sparsified_edge_present,
)
from dyncc.clustering import Clustering
from dyncc.errors import NotAPartition
from dyncc.graph import Epsilon, SignedGraph


def test_agreement_state_k4m(fix_k4m):
    st = compute_agreement_state(fix_k4m, EPS7)
    assert [e for e, ok in st.agree.items() if ok] == [(3, 4)]
    assert st.agree_cnt == {1: 0, 2: 0, 3: 1, 4: 1}
    assert all(st.is_light.values())


def test_agreement_state_k4(fix_k4):
    st = compute_agreement_state(fix_k4, EPS7)
    assert all(st.agree.values()) and len(st.agree) == 6
    assert set(st.agree_cnt.values()) == {3}
    assert not any(st.is_light.values())


def test_agreement_state_p3(fix_p3):
    st = compute_agreement_state(fix_p3, EPS7)
    assert not any(st.agree.values())
    assert all(st.is_light.values())


def test_sparsified_presence(fix_k4m, fix_k4):
    assert not sparsified_edge_present(fix_k4m, compute_agreement_state(fix_k4m, EPS7), 3, 4)
    st = compute_agreement_state(fix_k4, EPS7)
    assert all(sparsified_edge_present(fix_k4, st, *e) for e in fix_k4.positive_edges())
    st = compute_agreement_state(fix_k4, Epsilon(1, 2))
    assert not any(sparsified_edge_present(fix_k4, st, *e) for e in fix_k4.positive_edges())


def test_connected_components(fix_k4, fix_p3):
    assert connected_components(fix_k4, fix_k4, lambda x, y: True).blocks() == ((1, 2, 3, 4),)
    assert connected_components(fix_k4, fix_k4, lambda x, y: False).blocks() == ((1,), (2,), (3,), (4,))
    keep = lambda x, y: {x, y} == {1, 2}  # noqa: E731
    assert connected_components(fix_p3, fix_p3, keep).blocks() == ((1, 2), (3,))


def test_correlation_clustering_fixtures(fix_k4, fix_k4m, fix_empty):
    assert correlation_clustering(fix_k4, EPS7).blocks() == ((1, 2, 3, 4),)
    assert correlation_clustering(fix_k4m, EPS7).blocks() == ((1,), (2,), (3,), (4,))
    assert len(correlation_clustering(fix_empty, EPS7)) == 0


def test_cluster_ids_ascend_with_minimum_vertex():
    g = SignedGraph(range(8), [(5, 6), (5, 7), (6, 7), (0, 1), (0, 2), (1, 2)])
    c = correlation_clustering(g, Epsilon(1, 1))
    mins = [min(c.clusters[i]) for i in sorted(c.clusters)]
    assert mins == sorted(mins)


def test_clustering_cost_examples(fix_p3, fix_k4):
    assert clustering_cost(fix_p3, Clustering.from_blocks([[1, 2], [3]])).total == 1
    assert clustering_cost(fix_p3, Clustering.from_blocks([[1], [2], [3]])).total == 2
    assert clustering_cost(fix_k4, Clustering.from_blocks([[1, 2, 3, 4]])).total == 0


def test_clustering_cost_rejects_non_partition(fix_p3):
    with pytest.raises(NotAPartition):
        clustering_cost(fix_p3, Clustering.from_blocks([[1, 2]]))


def test_cost_formula_matches_pair_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        g = random_graph(rng, n)
        labels = rng.integers(0, max(1, n // 2) + 1, n)
        blocks = [[v for v in range(n) if labels[v] == lab] for lab in set(labels.tolist())]
        c = Clustering.from_blocks(blocks)
        assert clustering_cost(g, c) == naive_cost(g, blocks)


@given(graphs(max_n=14))
def test_relabeling_invariance(g):
    n = len(g)
    perm = list(reversed(range(n)))
    h = SignedGraph((perm[v] for v in g), ((perm[x], perm[y]) for x, y in g.positive_edges()))
    for eps in (EPS7, Epsilon(6, 5)):
        mapped = {frozenset(perm[v] for v in b) for b in correlation_clustering(g, eps).partition()}
        assert mapped == set(correlation_clustering(h, eps).partition())


@given(graphs(max_n=14))
def test_determinism_including_ids(g):
    a = correlation_clustering(g, EPS7)
    b = correlation_clustering(g.copy(), EPS7)
    assert a == b


def test_closed_neighborhood_changes_the_answer():
    # a lone positive edge: open NA = 2 never agrees; closed NA = 0 agrees and
    # each endpoint has ratio 1/2, heavy once eps <= 1/2
    g = SignedGraph([1, 2], [(1, 2)])
    eps = Epsilon(2, 5)
    assert correlation_clustering(g, eps).blocks() == ((1,), (2,))
    assert correlation_clustering(g, eps, closed=True).blocks() == ((1, 2),)


def test_eps_above_one_makes_every_vertex_light():
    # agreement ratio never exceeds 1, so for eps > 1 nothing survives
    assert correlation_clustering(k4(), Epsilon(6, 5)).blocks() == ((1,), (2,), (3,), (4,))
