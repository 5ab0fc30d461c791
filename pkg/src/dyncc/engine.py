"""Online driver: owns graph, agreement state and clustering; applies operations."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

from dyncc.baseline import correlation_clustering
from dyncc.clustering import Clustering, add_singleton, remove_singleton
from dyncc.errors import NotASingleton, SelfLoop
from dyncc.graph import POS, Epsilon, EpsilonLike, SignedGraph
from dyncc.maintenance import Mark, maintain_after_flip
from dyncc.state import (
    CORRECTED,
    PAPER_STRICT,
    AgreementState,
    init_state,
    safe_recompute_around,
    update_negative_to_positive,
    update_positive_to_negative,
)

SAFE = "safe"
FRONTIER = "frontier"
PRUNING_MODES = (CORRECTED, PAPER_STRICT, SAFE)
MAINTENANCE_MODES = (FRONTIER, PAPER_STRICT)
NEIGHBORHOODS = ("open", "closed")


@dataclass(frozen=True)
class FlipSign:
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise SelfLoop(self.u)

    def __str__(self) -> str:
        return f"flip {self.u} {self.v}"


@dataclass(frozen=True)
class AddVertex:
    v: int

    def __str__(self) -> str:
        return f"add {self.v}"


@dataclass(frozen=True)
class DeleteVertex:
    v: int

    def __str__(self) -> str:
        return f"del {self.v}"


Operation = Union[FlipSign, AddVertex, DeleteVertex]


@dataclass(frozen=True)
class EngineConfig:
    eps: Epsilon
    pruning: str = CORRECTED
    maintenance: str = FRONTIER
    neighborhood: str = "open"

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", Epsilon.of(self.eps))
        if self.pruning not in PRUNING_MODES:
            raise ValueError(f"pruning must be one of {PRUNING_MODES}")
        if self.maintenance not in MAINTENANCE_MODES:
            raise ValueError(f"maintenance must be one of {MAINTENANCE_MODES}")
        if self.neighborhood not in NEIGHBORHOODS:
            raise ValueError(f"neighborhood must be one of {NEIGHBORHOODS}")
        if self.neighborhood == "closed":
            # the pruning guards are only valid for open neighbourhoods
            object.__setattr__(self, "pruning", SAFE)

    @property
    def closed(self) -> bool:
        return self.neighborhood == "closed"

    def to_dict(self) -> dict:
        return {"eps": str(self.eps), "pruning": self.pruning,
                "maintenance": self.maintenance, "neighborhood": self.neighborhood}


@dataclass
class StepReport:
    t: int
    op: Operation
    status: str = "applied"
    reason: Optional[str] = None
    na_evaluations: int = 0
    verify_calls: int = 0
    s_size: int = 0
    f_size: int = 0
    touches: int = 0
    cluster_count: int = 0
    cost_total: int = 0
    baseline_match: Optional[bool] = None
    elapsed: float = 0.0

    @property
    def applied(self) -> bool:
        return self.status == "applied"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["op"] = str(self.op)
        return d


def _pairs(k: int) -> int:
    return k * (k - 1) // 2


class Engine:
    """Maintains the baseline clustering of a graph under a stream of edits.

    >>> k4m = SignedGraph([1, 2, 3, 4], [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    >>> eng = Engine(k4m, EngineConfig(Epsilon(7, 10)))
    >>> len(eng.clustering())
    4
    >>> r = eng.apply(FlipSign(1, 2))
    >>> (r.cluster_count, r.cost_total)
    (1, 0)
    """

    def __init__(self, g0: SignedGraph, cfg: EngineConfig | EpsilonLike) -> None:
        if not isinstance(cfg, EngineConfig):
            cfg = EngineConfig(Epsilon.of(cfg))
        self.cfg = cfg
        self._g = g0.copy()
        self._state: AgreementState = init_state(self._g, cfg.eps, cfg.closed)
        self._c: Clustering = correlation_clustering(self._g, cfg.eps, cfg.closed, self._state)
        self._t = 0
        self._totals = {"applied": 0, "rejected": 0, "flips": 0, "adds": 0, "deletes": 0,
                        "na_evaluations": 0, "verify_calls": 0, "touches": 0}
        self._init_na = self._state.stats.na_evaluations
        self._edges = self._g.num_positive_edges()
        self._pos_in: dict[int, int] = {}
        self._cost_sum = 0
        for cid in self._c.clusters:
            self._track_new(cid)

    # -- read-only views ------------------------------------------------

    def graph(self) -> SignedGraph:
        return self._g.copy()

    def clustering(self) -> Clustering:
        return self._c.copy()

    def state(self) -> AgreementState:
        return self._state.copy()

    def counters(self) -> dict[str, int]:
        return dict(self._totals, init_na_evaluations=self._init_na)

    @property
    def t(self) -> int:
        return self._t

    def cost(self) -> int:
        """Current disagreement cost, maintained incrementally."""
        return self._edges + self._cost_sum

    # -- cost bookkeeping -------------------------------------------------

    def _track_new(self, cid: int) -> None:
        members = self._c.clusters[cid]
        pos_in = sum(1 for x in members for y in self._g.neighbors(x) if y in members) // 2
        self._pos_in[cid] = pos_in
        self._cost_sum += _pairs(len(members)) - 2 * pos_in

    def _untrack(self, cid: int, size: int) -> None:
        self._cost_sum -= _pairs(size) - 2 * self._pos_in.pop(cid)

    # -- dispatch ---------------------------------------------------------

    def _reject_reason(self, op: Operation) -> str | None:
        g = self._g
        if isinstance(op, FlipSign):
            missing = [x for x in (op.u, op.v) if x not in g]
            return f"vertex {missing[0]} not found" if missing else None
        if isinstance(op, AddVertex):
            if not isinstance(op.v, int) or op.v < 0:
                return f"invalid vertex id {op.v!r}"
            return f"vertex {op.v} already present" if op.v in g else None
        if isinstance(op, DeleteVertex):
            if op.v not in g:
                return f"vertex {op.v} not found"
            if g.degree(op.v):
                return f"vertex {op.v} has positive edges"
            return None
        return f"unknown operation {op!r}"

    def apply(self, op: Operation, check: bool = False) -> StepReport:
        """Apply one operation; invalid operations are rejected without side effects."""
        start = time.perf_counter()
        self._t += 1
        report = StepReport(t=self._t, op=op)
        reason = self._reject_reason(op)
        if reason is not None:
            report.status = "rejected"
            report.reason = reason
            self._totals["rejected"] += 1
        else:
            stats = self._state.stats
            na0, vc0 = stats.na_evaluations, stats.verify_calls
            if isinstance(op, FlipSign):
                self._flip(op.u, op.v, report)
            elif isinstance(op, AddVertex):
                self._add(op.v, report)
            else:
                self._delete(op.v, report)
            report.na_evaluations = stats.na_evaluations - na0
            report.verify_calls = stats.verify_calls - vc0
            for k in ("na_evaluations", "verify_calls", "touches"):
                self._totals[k] += getattr(report, k)
            self._totals["applied"] += 1
        report.cluster_count = len(self._c)
        report.cost_total = self.cost()
        if check:
            baseline = correlation_clustering(self._g, self.cfg.eps, self.cfg.closed)
            report.baseline_match = baseline.partition() == self._c.partition()
        report.elapsed = time.perf_counter() - start
        return report

    def _flip(self, u: int, v: int, report: StepReport) -> None:
        g, state, c_prev = self._g, self._state, self._c
        prev = g.flip(u, v)
        step = -1 if prev == POS else 1
        self._edges += step
        cu = c_prev.assignment[u]
        if cu == c_prev.assignment[v]:
            self._pos_in[cu] += step
            self._cost_sum -= 2 * step
        if self.cfg.pruning == SAFE:
            snap = safe_recompute_around(g, state, u, v)
        elif prev == POS:
            snap = update_positive_to_negative(g, state, u, v, self.cfg.pruning)
        else:
            snap = update_negative_to_positive(g, state, u, v)
        new_c, scratch = maintain_after_flip(g, state, c_prev, snap,
                                             strict=self.cfg.maintenance == PAPER_STRICT)
        for cid, m in scratch.marking.marks.items():
            if m.mark != Mark.COPY:
                self._untrack(cid, len(c_prev.clusters[cid]))
        self._c = new_c
        for cid in range(c_prev.next_id, new_c.next_id):
            self._track_new(cid)
        report.s_size = len(scratch.S)
        report.f_size = len(scratch.F)
        self._totals["flips"] += 1

    # touches = entries inserted or removed across adjacency, agree_cnt,
    # is_light, clusters and assignment.
    def _add(self, v: int, report: StepReport) -> None:
        self._g.add_vertex(v)
        self._state.add_isolated(v)
        cid = add_singleton(self._c, v)
        self._pos_in[cid] = 0
        report.touches = 5
        self._totals["adds"] += 1

    def _delete(self, v: int, report: StepReport) -> None:
        if len(self._c.cluster_of(v)) != 1:
            # only reachable after an unsound paper-strict step
            raise NotASingleton(v)
        self._g.delete_vertex(v)
        self._state.drop_isolated(v)
        cid = remove_singleton(self._c, v)
        del self._pos_in[cid]
        report.touches = 5
        self._totals["deletes"] += 1
