"""Repairing the clustering after a sign flip.

Clusters of the previous step are marked Copy, Merge or Split according to how
the vertices of the change region F fall into the sparsified components of
``G_t[F]``. Copy clusters keep their ids. The remaining clusters are broken into
fragments (connected pieces once every F-F edge is dropped) and the fragments
are glued back together through the components of ``G_t[F]``; every glued
set becomes a cluster with a fresh id.

F is S widened by the far endpoints of boundary edges whose presence flipped
because a vertex of S changed lightness. With ``strict=True`` F is S itself,
which can miss such edges.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from scipy.cluster.hierarchy import DisjointSet

from dyncc.clustering import Clustering, canonical
from dyncc.errors import UnprocessedCluster
from dyncc.graph import Edge, SignedGraph
from dyncc.state import AgreementState, FlipSnapshot, collect_changes


class Mark(enum.IntEnum):
    UNPROCESSED = 0
    COPY = 1
    MERGE = 2
    SPLIT = 3


@dataclass
class ClusterMark:
    mark: Mark = Mark.UNPROCESSED
    pairs: set[tuple[int, int]] = field(default_factory=set)
    history: list[Mark] = field(default_factory=list)

    def raise_to(self, new: Mark) -> bool:
        """Apply ``new`` only if strictly greater than the current mark."""
        if new > self.mark:
            self.mark = new
            self.history.append(new)
            return True
        return False


@dataclass
class Marking:
    marks: dict[int, ClusterMark]
    # cluster groups: union-find over ids of clusters that must be merged
    groups: DisjointSet

    def of(self, mark: Mark) -> list[int]:
        return sorted(cid for cid, m in self.marks.items() if m.mark == mark)


@dataclass
class MaintenanceScratch:
    S: frozenset[int]
    F: frozenset[int]
    lam: frozenset[int] = frozenset()
    changed: set[Edge] = field(default_factory=set)
    d_comp: dict[int, int] = field(default_factory=dict)
    fragments: dict[int, list[frozenset[int]]] = field(default_factory=dict)
    marking: Marking | None = None


def frontier(g: SignedGraph, snap: FlipSnapshot, lam: Iterable[int], changed: Iterable[Edge]) -> frozenset[int]:
    """S plus every endpoint of an edge whose sparsified presence changed."""
    F = set(snap.S)
    for x, y in changed:
        F.add(x)
        F.add(y)
    return frozenset(F)


def _components(g: SignedGraph, state: AgreementState, verts: Iterable[int], keep) -> list[list[int]]:
    inside = set(verts)
    seen: set[int] = set()
    out = []
    for root in sorted(inside):
        if root in seen:
            continue
        seen.add(root)
        comp = [root]
        queue = deque(comp)
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y in inside and y not in seen and keep(x, y):
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        out.append(comp)
    return out


def components_within(g: SignedGraph, state: AgreementState, F: Iterable[int]) -> dict[int, int]:
    """Component index (ascending by minimum vertex) of each vertex of F in ``G~_t[F]``."""
    d_comp = {}
    for i, comp in enumerate(_components(g, state, F, state.present)):
        for w in comp:
            d_comp[w] = i
    return d_comp


def mark_clusters(c_prev: Clustering, F: Iterable[int], d_comp: dict[int, int]) -> Marking:
    marks = {cid: ClusterMark() for cid in c_prev.clusters}
    groups = DisjointSet(c_prev.clusters)
    F = sorted(F)
    in_f = set(F)
    for cid, members in c_prev.clusters.items():
        if in_f.isdisjoint(members):
            marks[cid].raise_to(Mark.COPY)
    where = c_prev.assignment
    for i, w in enumerate(F):
        cw = where[w]
        for w2 in F[i:]:
            cw2 = where[w2]
            same_d = d_comp[w] == d_comp[w2]
            if same_d and cw != cw2:
                for cid in (cw, cw2):
                    marks[cid].raise_to(Mark.MERGE)
                    marks[cid].pairs.add((w, w2))
                groups.merge(cw, cw2)
            elif same_d:
                marks[cw].raise_to(Mark.COPY)
            elif cw == cw2:
                marks[cw].raise_to(Mark.SPLIT)
    return Marking(marks, groups)


def split_fragments(g: SignedGraph, state: AgreementState, cluster: Iterable[int],
                    F: Iterable[int]) -> list[frozenset[int]]:
    """Pieces of ``cluster`` under current sparsification with all F-F edges removed."""
    in_f = set(F)

    def keep(x: int, y: int) -> bool:
        return not (x in in_f and y in in_f) and state.present(x, y)

    return [frozenset(c) for c in _components(g, state, cluster, keep)]


def rebuild_clustering(c_prev: Clustering, marking: Marking, d_comp: dict[int, int],
                       fragments: dict[int, list[frozenset[int]]]) -> Clustering:
    """Assemble the new clustering from copied clusters and glued fragments.

    ``fragments`` maps each Split cluster id to its pieces; Merge clusters act
    as a single piece.
    """
    for cid, m in marking.marks.items():
        if m.mark == Mark.UNPROCESSED:
            raise UnprocessedCluster(cid)
    out = Clustering(next_id=c_prev.next_id)
    pieces: list[frozenset[int]] = []
    for cid in sorted(c_prev.clusters):
        m = marking.marks[cid].mark
        if m == Mark.COPY:
            members = c_prev.clusters[cid]
            out.clusters[cid] = members
            for v in members:
                out.assignment[v] = cid
        elif m == Mark.MERGE:
            pieces.append(c_prev.clusters[cid])
        else:
            pieces.extend(fragments[cid])
    glue = DisjointSet([("p", i) for i in range(len(pieces))])
    for i, piece in enumerate(pieces):
        for w in piece:
            d = d_comp.get(w)
            if d is not None:
                glue.add(("d", d))
                glue.merge(("p", i), ("d", d))
    merged: dict[object, set[int]] = {}
    for i, piece in enumerate(pieces):
        merged.setdefault(glue[("p", i)], set()).update(piece)
    for block in canonical(merged.values()):
        out._insert(frozenset(block))
    return out


def maintain_after_flip(g: SignedGraph, state: AgreementState, c_prev: Clustering,
                        snap: FlipSnapshot, strict: bool = False) -> tuple[Clustering, MaintenanceScratch]:
    """Clustering at time t from the one at t-1; ``state`` is already at time t."""
    S, lam, changed = collect_changes(g, state, snap)
    F = S if strict else frontier(g, snap, lam, changed)
    scratch = MaintenanceScratch(S=S, F=F, lam=lam, changed=changed)
    scratch.d_comp = components_within(g, state, F)
    scratch.marking = mark_clusters(c_prev, F, scratch.d_comp)
    for cid in scratch.marking.of(Mark.SPLIT):
        scratch.fragments[cid] = split_fragments(g, state, c_prev.clusters[cid], F)
    return rebuild_clustering(c_prev, scratch.marking, scratch.d_comp, scratch.fragments), scratch
