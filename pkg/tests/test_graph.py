import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from support import graphs, graphs_with_flips, random_graph
from dyncc.errors import DuplicateVertex, NotPositiveAdjacent, HasPositiveEdges, SelfLoop, VertexNotFound
from dyncc.graph import (
    NEG,
    POS,
    Epsilon,
    SignedGraph,
    add_vertex,
    check_invariants,
    delete_vertex,
    flip_edge_structural,
    non_agreement,
    positive_degree,
    positive_neighbors,
    sym_diff_size,
)


def test_add_vertex_to_empty(fix_empty):
    add_vertex(fix_empty, 1)
    assert fix_empty.vertices == {1}
    assert positive_neighbors(fix_empty, 1) == frozenset()


def test_add_isolated_vertex(fix_p3):
    add_vertex(fix_p3, 4)
    assert positive_neighbors(fix_p3, 4) == frozenset()
    assert positive_neighbors(fix_p3, 2) == {1, 3}


def test_add_duplicate_vertex(fix_p3):
    with pytest.raises(DuplicateVertex):
        add_vertex(fix_p3, 2)


def test_delete_isolated_vertex(fix_p3):
    add_vertex(fix_p3, 4)
    delete_vertex(fix_p3, 4)
    assert fix_p3.vertices == {1, 2, 3}


def test_delete_vertex_with_positive_edge(fix_p3):
    with pytest.raises(HasPositiveEdges):
        delete_vertex(fix_p3, 3)


def test_delete_missing_vertex(fix_p3):
    with pytest.raises(VertexNotFound):
        delete_vertex(fix_p3, 9)


def test_flip_negative_edge(fix_p3):
    assert flip_edge_structural(fix_p3, 1, 3) == NEG
    assert positive_neighbors(fix_p3, 1) == {2, 3}


def test_flip_positive_edge(fix_p3):
    assert flip_edge_structural(fix_p3, 1, 2) == POS
    assert positive_neighbors(fix_p3, 1) == frozenset()


def test_flip_self_loop(fix_p3):
    with pytest.raises(SelfLoop):
        flip_edge_structural(fix_p3, 1, 1)


def test_neighbors_and_degree(fix_p3, fix_k4, fix_k4m):
    assert positive_neighbors(fix_p3, 2) == {1, 3}
    assert positive_degree(fix_p3, 2) == 2
    assert all(positive_degree(fix_k4, v) == 3 for v in fix_k4)
    assert positive_neighbors(fix_k4m, 1) == {3, 4}


@pytest.mark.parametrize("fixture, pair, size", [
    ("fix_k4", (1, 2), 2),
    ("fix_k4m", (1, 3), 3),
    ("fix_k4m", (1, 2), 0),
])
def test_sym_diff_size(request, fixture, pair, size):
    assert sym_diff_size(request.getfixturevalue(fixture), *pair) == size


def test_non_agreement_values(fix_p3, fix_k4, fix_k4m):
    assert non_agreement(fix_p3, 1, 2) == Fraction(3, 2)
    assert non_agreement(fix_k4, 1, 3) == Fraction(2, 3)
    assert non_agreement(fix_k4m, 3, 4) == Fraction(2, 3)
    assert non_agreement(fix_k4m, 1, 3) == 1


def test_non_agreement_needs_positive_pair(fix_p3):
    with pytest.raises(NotPositiveAdjacent):
        non_agreement(fix_p3, 1, 3)


def test_epsilon_parsing():
    assert Epsilon.parse("7/10") == Epsilon(7, 10)
    assert Epsilon.parse("14/20") == Epsilon(7, 10)
    assert str(Epsilon(6, 5)) == "6/5"
    for bad in ("0/1", "-1/2", "x", "1/0", "0.7"):
        with pytest.raises(ValueError):
            Epsilon.parse(bad)


def test_epsilon_threshold_is_strict():
    eps = Epsilon(2, 3)
    assert not eps.exceeds(2, 3)      # NA = 2/3 is not below 2/3
    assert eps.exceeds(1, 2)


@given(graphs_with_flips())
def test_adjacency_invariants_after_flips(case):
    g, flips = case
    for u, v in flips:
        g.flip(u, v)
        check_invariants(g)
    for v in sorted(g.vertices):
        if g.degree(v) == 0:
            g.delete_vertex(v)
            check_invariants(g)


@given(graphs(min_n=2))
def test_non_agreement_symmetry_and_range(g):
    for u, v in g.positive_edges():
        na = non_agreement(g, u, v)
        assert na == non_agreement(g, v, u)
        assert Fraction(2, max(g.degree(u), g.degree(v))) <= na <= 2


def test_non_agreement_locality():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(2, 21))
        g = random_graph(rng, n)
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        before = {e: non_agreement(g, *e) for e in g.positive_edges()}
        g.flip(u, v)
        after = {e: non_agreement(g, *e) for e in g.positive_edges()}
        for e in set(before) & set(after):
            if before[e] != after[e]:
                assert u in e or v in e


def test_open_and_closed_sym_diff_relation():
    rng = np.random.default_rng(1)
    g = random_graph(rng, 12)
    for x, y in itertools.combinations(range(12), 2):
        closed = sym_diff_size(g, x, y, closed=True)
        expected = len((g.neighbors(x) | {x}) ^ (g.neighbors(y) | {y}))
        assert closed == expected
