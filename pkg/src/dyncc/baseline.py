"""Offline clustering: sparsify the positive graph, return its components."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable

from dyncc.clustering import Clustering
from dyncc.errors import NotAPartition
from dyncc.graph import Epsilon, EpsilonLike, SignedGraph
from dyncc.state import AgreementState, init_state


@dataclass(frozen=True)
class CostBreakdown:
    positive_cut: int
    negative_internal: int

    @property
    def total(self) -> int:
        return self.positive_cut + self.negative_internal


def compute_agreement_state(g: SignedGraph, eps: EpsilonLike, closed: bool = False) -> AgreementState:
    return init_state(g, Epsilon.of(eps), closed)


def sparsified_edge_present(g: SignedGraph, state: AgreementState, u: int, v: int) -> bool:
    return state.present(u, v)


def connected_components(g: SignedGraph, vertices: Iterable[int],
                         keep: Callable[[int, int], bool], first_id: int = 0) -> Clustering:
    """Components of the positive edges accepted by ``keep``, restricted to ``vertices``."""
    inside = set(vertices)
    seen: set[int] = set()
    blocks = []
    for root in sorted(inside):
        if root in seen:
            continue
        seen.add(root)
        block = [root]
        queue = deque(block)
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y in inside and y not in seen and keep(x, y):
                    seen.add(y)
                    block.append(y)
                    queue.append(y)
        blocks.append(block)
    return Clustering.from_blocks(blocks, first_id)


def correlation_clustering(g: SignedGraph, eps: EpsilonLike, closed: bool = False,
                           state: AgreementState | None = None) -> Clustering:
    """Baseline clustering of ``g``; ids ascend with each cluster's minimum vertex.

    >>> k4 = SignedGraph([1, 2, 3, 4], [(a, b) for a in range(1, 5) for b in range(a + 1, 5)])
    >>> correlation_clustering(k4, "7/10").blocks()
    ((1, 2, 3, 4),)
    """
    if state is None:
        state = compute_agreement_state(g, eps, closed)
    return connected_components(g, g, state.present)


def clustering_cost(g: SignedGraph, c: Clustering) -> CostBreakdown:
    """Disagreements of ``c``; negatives inside a cluster come from the pair count."""
    c.check(g)
    inside = 0
    negative_internal = 0
    for members in c.clusters.values():
        pos_in = sum(1 for x in members for y in g.neighbors(x) if y in members) // 2
        inside += pos_in
        k = len(members)
        negative_internal += k * (k - 1) // 2 - pos_in
    return CostBreakdown(g.num_positive_edges() - inside, negative_internal)


def naive_cost(g: SignedGraph, blocks: Iterable[Iterable[int]]) -> CostBreakdown:
    """Same quantity by enumerating every vertex pair."""
    where = {}
    for i, b in enumerate(blocks):
        for v in b:
            if v in where:
                raise NotAPartition(v)
            where[v] = i
    if set(where) != g.vertices:
        raise NotAPartition("blocks do not cover the vertex set")
    verts = sorted(where)
    cut = internal = 0
    for i, x in enumerate(verts):
        for y in verts[i + 1:]:
            pos = g.has_positive(x, y)
            same = where[x] == where[y]
            if pos and not same:
                cut += 1
            elif not pos and same:
                internal += 1
    return CostBreakdown(cut, internal)
