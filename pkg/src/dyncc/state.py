"""Per-edge agreement flags, per-vertex agreement counts and lightness.

The two ``update_*`` functions maintain an :class:`AgreementState` across a
single sign flip, touching only edges incident to the flipped pair and only
re-verifying those whose agreement can actually change. Every skip is decided
on pre-flip degrees and symmetric differences; ``verify_edge`` always works on
the live (post-flip) graph.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field

from dyncc.errors import EdgeNotNegative, EdgeNotPositive, NotPositiveAdjacent
from dyncc.graph import Edge, Epsilon, SignedGraph, edge_key, neighborhood_size, sym_diff_size

NEG_TO_POS = "neg_to_pos"
POS_TO_NEG = "pos_to_neg"

CORRECTED = "corrected"
PAPER_STRICT = "paper-strict"


@dataclass
class WorkStats:
    """Monotone work counters; never part of state equality."""

    na_evaluations: int = 0
    verify_calls: int = 0


@dataclass
class AgreementState:
    eps: Epsilon
    closed: bool = False
    agree: dict[Edge, bool] = field(default_factory=dict)
    agree_cnt: dict[int, int] = field(default_factory=dict)
    is_light: dict[int, bool] = field(default_factory=dict)
    stats: WorkStats = field(default_factory=WorkStats, compare=False, repr=False)

    def copy(self) -> "AgreementState":
        return AgreementState(self.eps, self.closed, dict(self.agree), dict(self.agree_cnt),
                              dict(self.is_light), copy.copy(self.stats))

    def lightness_of(self, g: SignedGraph, v: int) -> bool:
        deg = neighborhood_size(g, v, self.closed)
        if g.degree(v) == 0:
            return True
        return self.eps.exceeds(self.agree_cnt[v], deg)

    def present(self, u: int, v: int) -> bool:
        """Whether positive edge ``{u, v}`` survives sparsification."""
        try:
            agrees = self.agree[edge_key(u, v)]
        except KeyError:
            raise NotPositiveAdjacent((u, v)) from None
        return agrees and not (self.is_light[u] and self.is_light[v])

    def add_isolated(self, v: int) -> None:
        self.agree_cnt[v] = 0
        self.is_light[v] = True

    def drop_isolated(self, v: int) -> None:
        del self.agree_cnt[v]
        del self.is_light[v]


@dataclass(frozen=True)
class PredicateInputs:
    """Pre-flip quantities a pruning guard reads for candidate edge ``{x, w}``."""

    deg_pre_x: int
    deg_pre_w: int
    threshold: int


@dataclass
class FlipSnapshot:
    u: int
    v: int
    direction: str
    pre_N_u: frozenset[int]
    pre_N_v: frozenset[int]
    pre_deg: dict[int, int]
    S: frozenset[int]
    lightness_before: dict[int, bool]
    # Flag of every edge the update looked at, as it was before the flip.
    agree_before: dict[Edge, bool] = field(default_factory=dict)

    @property
    def edge(self) -> Edge:
        return edge_key(self.u, self.v)


# --------------------------------------------------------------------------
# from-scratch evaluation

def init_state(g: SignedGraph, eps: Epsilon, closed: bool = False) -> AgreementState:
    """Agreement flags, counts and lightness of ``g`` computed from scratch."""
    state = AgreementState(Epsilon.of(eps), closed)
    stats = state.stats
    cnt = {v: 0 for v in g}
    for x, y in g.positive_edges():
        stats.na_evaluations += 1
        denom = max(neighborhood_size(g, x, closed), neighborhood_size(g, y, closed))
        ok = state.eps.exceeds(sym_diff_size(g, x, y, closed), denom)
        state.agree[(x, y)] = ok
        if ok:
            cnt[x] += 1
            cnt[y] += 1
    state.agree_cnt = cnt
    state.is_light = {v: state.lightness_of(g, v) for v in g}
    return state


def verify_edge(g: SignedGraph, state: AgreementState, x: int, y: int,
                sym_diff: int | None = None) -> None:
    """Re-evaluate agreement of positive edge ``{x, y}`` on the live graph.

    ``sym_diff`` may carry an already known ``|N(x) Δ N(y)|`` so the
    neighbourhoods are not scanned twice.
    """
    if x == y or not g.has_positive(x, y):
        raise NotPositiveAdjacent((x, y))
    stats = state.stats
    stats.verify_calls += 1
    if sym_diff is None:
        stats.na_evaluations += 1
        sym_diff = sym_diff_size(g, x, y, state.closed)
    denom = max(neighborhood_size(g, x, state.closed), neighborhood_size(g, y, state.closed))
    now = state.eps.exceeds(sym_diff, denom)
    key = edge_key(x, y)
    was = state.agree.get(key, False)
    state.agree[key] = now
    if now != was:
        step = 1 if now else -1
        state.agree_cnt[x] += step
        state.agree_cnt[y] += step


# --------------------------------------------------------------------------
# incremental updates after a structural flip of {u, v}

def _snapshot(g: SignedGraph, state: AgreementState, u: int, v: int, direction: str) -> FlipSnapshot:
    nu, nv = g.neighbors(u), g.neighbors(v)
    if direction == NEG_TO_POS:
        pre_u, pre_v = frozenset(nu - {v}), frozenset(nv - {u})
    else:
        pre_u, pre_v = frozenset(nu | {v}), frozenset(nv | {u})
    S = pre_u | pre_v | {u, v}
    return FlipSnapshot(
        u=u, v=v, direction=direction, pre_N_u=pre_u, pre_N_v=pre_v,
        pre_deg={u: len(pre_u), v: len(pre_v)}, S=S,
        lightness_before={w: state.is_light[w] for w in S},
    )


def _require_open(state: AgreementState) -> None:
    if state.closed:
        raise ValueError("pruned updates assume open neighbourhoods; use safe_recompute_around")


def _verify(g, state, snap: FlipSnapshot, x: int, w: int, sym_diff: int | None = None) -> None:
    key = edge_key(x, w)
    snap.agree_before.setdefault(key, state.agree[key])
    verify_edge(g, state, x, w, sym_diff)


def _refresh_lightness(g: SignedGraph, state: AgreementState, S) -> None:
    for w in S:
        state.is_light[w] = state.lightness_of(g, w)


def _guard_inputs(g: SignedGraph, state: AgreementState, snap: FlipSnapshot, x: int, w: int) -> PredicateInputs:
    pre_x = snap.pre_N_u if x == snap.u else snap.pre_N_v
    state.stats.na_evaluations += 1
    nw = g.neighbors(w)
    return PredicateInputs(len(pre_x), len(nw), len(pre_x ^ nw))


def update_negative_to_positive(g: SignedGraph, state: AgreementState, u: int, v: int) -> FlipSnapshot:
    """Repair ``state`` after ``{u, v}`` went from negative to positive."""
    if not g.has_positive(u, v):
        raise EdgeNotPositive((u, v))
    _require_open(state)
    snap = _snapshot(g, state, u, v, NEG_TO_POS)
    key = edge_key(u, v)
    snap.agree_before[key] = False
    pu, pv = snap.pre_N_u, snap.pre_N_v
    for w in sorted(pu & pv):
        # Agreement with a common neighbour can only improve.
        for x in (u, v):
            if not state.agree[edge_key(x, w)]:
                _verify(g, state, snap, x, w)
    for x, X in ((u, pu - pv - {v}), (v, pv - pu - {u})):
        for w in sorted(X):
            p = _guard_inputs(g, state, snap, x, w)
            if state.agree[edge_key(x, w)]:
                check = p.deg_pre_x < p.deg_pre_w or p.threshold < p.deg_pre_x
            else:
                check = p.deg_pre_x >= p.deg_pre_w and p.threshold > p.deg_pre_x
            if check:
                # v joins N(u) but not N(w): the difference grows by one.
                _verify(g, state, snap, x, w, p.threshold + 1)
    state.agree[key] = False
    verify_edge(g, state, u, v)
    _refresh_lightness(g, state, snap.S)
    return snap


def update_positive_to_negative(g: SignedGraph, state: AgreementState, u: int, v: int,
                                pruning: str = CORRECTED) -> FlipSnapshot:
    """Repair ``state`` after ``{u, v}`` went from positive to negative.

    ``pruning="paper-strict"`` drops the verification of non-agreeing
    one-sided edges with ``deg(x) <= deg(w)``; that branch can cross into
    agreement, so strict mode is unsound and exists for divergence studies.
    """
    if g.has_positive(u, v):
        raise EdgeNotNegative((u, v))
    _require_open(state)
    snap = _snapshot(g, state, u, v, POS_TO_NEG)
    key = edge_key(u, v)
    was = state.agree.pop(key)
    snap.agree_before[key] = was
    if was:
        state.agree_cnt[u] -= 1
        state.agree_cnt[v] -= 1
    pu, pv = snap.pre_N_u, snap.pre_N_v
    for w in sorted(pu & pv):
        # Disagreement with a common neighbour can only worsen.
        for x in (u, v):
            if state.agree[edge_key(x, w)]:
                _verify(g, state, snap, x, w)
    for x, X in ((u, pu - pv - {v}), (v, pv - pu - {u})):
        for w in sorted(X):
            p = _guard_inputs(g, state, snap, x, w)
            if state.agree[edge_key(x, w)]:
                check = p.deg_pre_x <= p.deg_pre_w or p.threshold > p.deg_pre_x
            elif p.deg_pre_x > p.deg_pre_w:
                check = p.threshold < p.deg_pre_x
            else:
                check = pruning != PAPER_STRICT
            if check:
                # v leaves N(u) and is not in N(w): the difference shrinks by one.
                _verify(g, state, snap, x, w, p.threshold - 1)
    _refresh_lightness(g, state, snap.S)
    return snap


def safe_recompute_around(g: SignedGraph, state: AgreementState, u: int, v: int) -> FlipSnapshot:
    """Unpruned reference update: re-verify every positive edge at ``u`` or ``v``."""
    direction = NEG_TO_POS if g.has_positive(u, v) else POS_TO_NEG
    snap = _snapshot(g, state, u, v, direction)
    key = edge_key(u, v)
    if direction == NEG_TO_POS:
        snap.agree_before[key] = False
        state.agree[key] = False
    else:
        was = state.agree.pop(key)
        snap.agree_before[key] = was
        if was:
            state.agree_cnt[u] -= 1
            state.agree_cnt[v] -= 1
    done: set[Edge] = set()
    for x in (u, v):
        for w in sorted(g.neighbors(x)):
            k = edge_key(x, w)
            if k in done:
                continue
            done.add(k)
            _verify(g, state, snap, x, w)
    _refresh_lightness(g, state, snap.S)
    return snap


def collect_changes(g: SignedGraph, state: AgreementState,
                    snap: FlipSnapshot) -> tuple[frozenset[int], frozenset[int], set[Edge]]:
    """``(S, Λ, changed)`` for the flip recorded in ``snap``.

    Λ holds the vertices of S whose lightness changed; ``changed`` holds every
    edge whose sparsified presence differs before and after the flip, plus the
    flipped edge itself.
    """
    before_light = snap.lightness_before
    lam = frozenset(w for w in snap.S if before_light[w] != state.is_light[w])

    def light_before(x: int) -> bool:
        return before_light.get(x, state.is_light[x])

    def present_before(x: int, y: int) -> bool:
        k = edge_key(x, y)
        flag = snap.agree_before.get(k)
        if flag is None:
            flag = state.agree[k]
        return flag and not (light_before(x) and light_before(y))

    candidates = set(snap.agree_before)
    for x in lam:
        for w in g.neighbors(x):
            candidates.add(edge_key(x, w))
    changed = {snap.edge}
    for x, y in candidates:
        if (x, y) == snap.edge:
            continue
        now = state.present(x, y)
        if now != present_before(x, y):
            changed.add((x, y))
    return snap.S, lam, changed
