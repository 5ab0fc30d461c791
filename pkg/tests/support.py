"""Graph builders and hypothesis strategies shared by the test modules."""
from __future__ import annotations

import itertools

import numpy as np
from hypothesis import strategies as st

from dyncc.graph import Epsilon, SignedGraph

EPS7 = Epsilon(7, 10)


def p3() -> SignedGraph:
    return SignedGraph([1, 2, 3], [(1, 2), (2, 3)])


def k4() -> SignedGraph:
    return SignedGraph([1, 2, 3, 4], itertools.combinations(range(1, 5), 2))


def k4m() -> SignedGraph:
    return SignedGraph([1, 2, 3, 4], [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])


def random_graph(rng: np.random.Generator, n: int, density: float | None = None) -> SignedGraph:
    if density is None:
        density = rng.uniform(0.1, 0.9)
    pairs = [(x, y) for x, y in itertools.combinations(range(n), 2) if rng.random() < density]
    return SignedGraph(range(n), pairs)


@st.composite
def graphs(draw, min_n: int = 0, max_n: int = 12):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SignedGraph(range(n), chosen)


@st.composite
def graphs_with_flips(draw, min_n: int = 2, max_n: int = 12, max_flips: int = 25):
    g = draw(graphs(min_n, max_n))
    n = len(g)
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    flips = draw(st.lists(pair, max_size=max_flips))
    return g, flips


epsilons = st.sampled_from([Epsilon(1, 5), Epsilon(2, 5), Epsilon(3, 5), Epsilon(7, 10),
                            Epsilon(1, 1), Epsilon(6, 5), Epsilon(11, 10), Epsilon(1, 2)])
