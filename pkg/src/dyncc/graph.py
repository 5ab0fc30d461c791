"""Complete signed graphs stored as positive adjacency sets.

Only positive edges are materialised. Two distinct present vertices that are
not positively adjacent are joined by a negative edge. Neighbourhoods are open
(``v not in N(v)``) unless a function is explicitly asked for the closed
variant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from dyncc.errors import (
    DuplicateVertex,
    HasPositiveEdges,
    NotPositiveAdjacent,
    SelfLoop,
    VertexNotFound,
)

Edge = tuple[int, int]
POS = "+"
NEG = "-"


def edge_key(u: int, v: int) -> Edge:
    """Canonical undirected key ``(min, max)``."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Epsilon:
    """Exact positive rational ``num/den``."""

    num: int
    den: int

    def __post_init__(self) -> None:
        if not (isinstance(self.num, int) and isinstance(self.den, int)):
            raise TypeError("epsilon numerator and denominator must be integers")
        if self.num < 1 or self.den < 1:
            raise ValueError(f"epsilon must be a positive rational, got {self.num}/{self.den}")
        g = math.gcd(self.num, self.den)
        object.__setattr__(self, "num", self.num // g)
        object.__setattr__(self, "den", self.den // g)

    @classmethod
    def parse(cls, text: str) -> "Epsilon":
        """Parse ``"P/Q"`` or a bare integer ``"P"``."""
        head, sep, tail = text.strip().partition("/")
        try:
            num = int(head)
            den = int(tail) if sep else 1
        except ValueError:
            raise ValueError(f"malformed epsilon {text!r}, expected P/Q") from None
        return cls(num, den)

    @classmethod
    def of(cls, value: "EpsilonLike") -> "Epsilon":
        if isinstance(value, Epsilon):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, tuple):
            return cls(*value)
        if isinstance(value, (int, Fraction)):
            f = Fraction(value)
            return cls(f.numerator, f.denominator)
        raise TypeError(f"cannot interpret {value!r} as an exact epsilon")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def exceeds(self, numer: int, denom: int) -> bool:
        """True iff ``numer/denom < eps`` (denom > 0), by cross-multiplication."""
        return self.den * numer < self.num * denom

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


EpsilonLike = Union[Epsilon, str, tuple, int, Fraction]


class SignedGraph:
    """Vertex set plus symmetric positive adjacency.

    >>> g = SignedGraph([1, 2, 3], [(1, 2), (2, 3)])
    >>> sorted(g.neighbors(2))
    [1, 3]
    >>> g.sign(1, 3)
    '-'
    """

    __slots__ = ("_adj",)

    def __init__(self, vertices: Iterable[int] = (), positive_edges: Iterable[Edge] = ()) -> None:
        self._adj: dict[int, set[int]] = {}
        for v in vertices:
            self.add_vertex(v)
        for u, v in positive_edges:
            if self.sign(u, v) == POS:
                continue
            self.flip(u, v)

    # -- inspection -----------------------------------------------------

    @property
    def vertices(self) -> set[int]:
        return set(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._adj))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"SignedGraph(n={len(self._adj)}, m+={self.num_positive_edges()})"

    def copy(self) -> "SignedGraph":
        g = SignedGraph()
        g._adj = {v: set(nb) for v, nb in self._adj.items()}
        return g

    def _require(self, v: int) -> set[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise VertexNotFound(v) from None

    def neighbors(self, v: int) -> set[int]:
        """Live open positive neighbourhood of ``v``. Do not mutate."""
        return self._require(v)

    def degree(self, v: int) -> int:
        return len(self._require(v))

    def has_positive(self, u: int, v: int) -> bool:
        return v in self._require(u)

    def sign(self, u: int, v: int) -> str:
        if u == v:
            raise SelfLoop(u)
        self._require(v)
        return POS if v in self._require(u) else NEG

    def positive_edges(self) -> Iterator[Edge]:
        """All positive edges as ``(u, v)`` with ``u < v``, ascending."""
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    def num_positive_edges(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    # -- mutation -------------------------------------------------------

    def add_vertex(self, v: int) -> None:
        if v in self._adj:
            raise DuplicateVertex(v)
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"vertex ids are unsigned integers, got {v!r}")
        self._adj[v] = set()

    def delete_vertex(self, v: int) -> None:
        if self._require(v):
            raise HasPositiveEdges(v)
        del self._adj[v]

    def flip(self, u: int, v: int) -> str:
        """Toggle the sign of ``{u, v}``; return the sign before the flip."""
        if u == v:
            raise SelfLoop(u)
        nu, nv = self._require(u), self._require(v)
        if v in nu:
            nu.discard(v)
            nv.discard(u)
            return POS
        nu.add(v)
        nv.add(u)
        return NEG


# Functional spellings used throughout the rest of the package.

def add_vertex(g: SignedGraph, v: int) -> None:
    g.add_vertex(v)


def delete_vertex(g: SignedGraph, v: int) -> None:
    g.delete_vertex(v)


def flip_edge_structural(g: SignedGraph, u: int, v: int) -> str:
    return g.flip(u, v)


def positive_neighbors(g: SignedGraph, v: int) -> frozenset[int]:
    return frozenset(g.neighbors(v))


def positive_degree(g: SignedGraph, v: int) -> int:
    return g.degree(v)


def sym_diff_size(g: SignedGraph, u: int, v: int, closed: bool = False) -> int:
    """``|N(u) Δ N(v)|``; with ``closed`` each set also contains its owner."""
    nu, nv = g.neighbors(u), g.neighbors(v)
    size = len(nu ^ nv)
    if closed and u != v:
        # u lands in the difference unless it already sits in N(v); same for v.
        size += (-1 if u in nv else 1) + (-1 if v in nu else 1)
    return size


def neighborhood_size(g: SignedGraph, v: int, closed: bool = False) -> int:
    return g.degree(v) + (1 if closed else 0)


def non_agreement(g: SignedGraph, u: int, v: int, closed: bool = False) -> Fraction:
    """Exact NonAgreement of a positive edge ``{u, v}``.

    >>> non_agreement(SignedGraph([1, 2, 3], [(1, 2), (2, 3)]), 1, 2)
    Fraction(3, 2)
    """
    if u == v or not g.has_positive(u, v):
        raise NotPositiveAdjacent((u, v))
    denom = max(neighborhood_size(g, u, closed), neighborhood_size(g, v, closed))
    return Fraction(sym_diff_size(g, u, v, closed), denom)


def in_agreement(g: SignedGraph, u: int, v: int, eps: Epsilon, closed: bool = False) -> bool:
    if u == v or not g.has_positive(u, v):
        raise NotPositiveAdjacent((u, v))
    denom = max(neighborhood_size(g, u, closed), neighborhood_size(g, v, closed))
    return eps.exceeds(sym_diff_size(g, u, v, closed), denom)


def check_invariants(g: SignedGraph) -> None:
    """Full-scan assertion of symmetry, closure and absence of self-adjacency."""
    adj = g._adj
    for u, nb in adj.items():
        assert u not in nb, f"self adjacency at {u}"
        for v in nb:
            assert v in adj, f"dangling neighbour {v} of {u}"
            assert u in adj[v], f"asymmetric edge {u}-{v}"
