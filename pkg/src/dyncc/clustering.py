"""Partition of the vertex set with stable, never-reused cluster ids."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from dyncc.errors import NotAPartition, NotASingleton

Partition = frozenset  # frozenset[frozenset[int]]


def canonical(blocks: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """Blocks as sorted tuples, ordered by their minimum vertex."""
    return tuple(sorted((tuple(sorted(b)) for b in blocks if b), key=lambda b: b[0]))


@dataclass
class Clustering:
    clusters: dict[int, frozenset[int]] = field(default_factory=dict)
    assignment: dict[int, int] = field(default_factory=dict)
    next_id: int = 0

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], first_id: int = 0) -> "Clustering":
        """Ids in ascending order of each block's minimum vertex."""
        c = cls(next_id=first_id)
        for block in canonical(blocks):
            c._insert(frozenset(block))
        return c

    def _insert(self, members: frozenset[int]) -> int:
        cid = self.next_id
        self.next_id += 1
        self.clusters[cid] = members
        for v in members:
            self.assignment[v] = cid
        return cid

    def copy(self) -> "Clustering":
        return Clustering(dict(self.clusters), dict(self.assignment), self.next_id)

    def __len__(self) -> int:
        return len(self.clusters)

    def cluster_of(self, v: int) -> frozenset[int]:
        return self.clusters[self.assignment[v]]

    def partition(self) -> Partition:
        return frozenset(self.clusters.values())

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return canonical(self.clusters.values())

    def same_partition(self, other: "Clustering") -> bool:
        return self.partition() == other.partition()

    def check(self, vertices: Iterable[int] | None = None) -> None:
        """Assert the partition invariants by full scan."""
        seen: set[int] = set()
        for cid, members in self.clusters.items():
            if not members:
                raise NotAPartition(f"cluster {cid} is empty")
            if cid >= self.next_id:
                raise NotAPartition(f"cluster id {cid} not below next_id {self.next_id}")
            if seen & members:
                raise NotAPartition(f"cluster {cid} overlaps another cluster")
            seen |= members
            for v in members:
                if self.assignment.get(v) != cid:
                    raise NotAPartition(f"assignment of {v} disagrees with cluster {cid}")
        if set(self.assignment) != seen:
            raise NotAPartition("assignment covers vertices outside the clusters")
        if vertices is not None and seen != set(vertices):
            raise NotAPartition("clusters do not cover exactly the vertex set")


def add_singleton(c: Clustering, v: int) -> int:
    """Give ``v`` its own cluster with a fresh id, in place; return the id."""
    if v in c.assignment:
        raise NotAPartition(f"vertex {v} is already clustered")
    return c._insert(frozenset((v,)))


def remove_singleton(c: Clustering, v: int) -> int:
    """Drop the singleton cluster ``{v}`` in place; return its id."""
    cid = c.assignment.get(v)
    if cid is None or len(c.clusters[cid]) != 1:
        raise NotASingleton(v)
    del c.clusters[cid]
    del c.assignment[v]
    return cid


def first_difference(a: Mapping[int, frozenset[int]] | Clustering,
                     b: Mapping[int, frozenset[int]] | Clustering) -> tuple[int, int] | None:
    """Smallest pair ``(x, y)``, ``x <= y``, on which two partitions disagree.

    A vertex covered by only one side yields ``(x, x)``. ``None`` if the
    partitions are equal.
    """
    ca = _cluster_map(a)
    cb = _cluster_map(b)
    if ca == cb:
        return None
    verts = sorted(set(ca) | set(cb))
    for x in verts:
        if (x in ca) != (x in cb):
            return (x, x)
    for i, x in enumerate(verts):
        for y in verts[i + 1:]:
            if (y in ca[x]) != (y in cb[x]):
                return (x, y)
    return None


def _cluster_map(c) -> dict[int, frozenset[int]]:
    if isinstance(c, Clustering):
        return {v: c.clusters[cid] for v, cid in c.assignment.items()}
    out: dict[int, frozenset[int]] = {}
    for block in c.values() if isinstance(c, Mapping) else c:
        fb = frozenset(block)
        for v in fb:
            out[v] = fb
    return out
