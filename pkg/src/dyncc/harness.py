"""Verification and experiment rig.

Workload generation (planted partitions plus valid-by-construction operation
streams), the per-step baseline check, exhaustive optimum search, lemma
predictions for a single flip, an epsilon-criticality classifier, and the
experiment/benchmark drivers used by the command line and the acceptance
tests.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence([seed,
stream])``, so a ``(seed, config)`` pair fully determines a workload.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from dyncc.baseline import CostBreakdown, correlation_clustering
from dyncc.clustering import Clustering, canonical, first_difference
from dyncc.engine import AddVertex, DeleteVertex, Engine, EngineConfig, FlipSign, Operation, StepReport
from dyncc.errors import TooLarge
from dyncc.graph import POS, Epsilon, EpsilonLike, SignedGraph, edge_key, non_agreement, sym_diff_size
from dyncc.state import NEG_TO_POS, POS_TO_NEG, init_state, safe_recompute_around

EPS_CHOICES = (Epsilon(1, 5), Epsilon(2, 5), Epsilon(3, 5), Epsilon(7, 10), Epsilon(1, 1), Epsilon(6, 5))
BRUTE_FORCE_LIMIT = 11


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    k: int = 1
    p: Fraction = Fraction(1, 2)
    q: Fraction = Fraction(0)
    op_count: int = 0
    op_mix: tuple[int, int, int] = (8, 1, 1)  # flip, add, delete
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if not 0 <= self.q <= self.p <= 1:
            raise ValueError("need 0 <= q <= p <= 1")
        if self.n < 0 or self.k < 1 or self.op_count < 0:
            raise ValueError("n >= 0, k >= 1 and op_count >= 0 required")

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "p": str(self.p), "q": str(self.q),
                "op_count": self.op_count, "op_mix": list(self.op_mix), "seed": self.seed}


def planted_groups(n: int, k: int) -> list[int]:
    """Vertex ``i`` belongs to contiguous block ``i * k // n``."""
    return [i * k // n for i in range(n)]


def gen_planted(params: GeneratorParams) -> SignedGraph:
    """Planted-partition signed graph on vertices ``0..n-1``.

    Each pair is positive with probability p inside a block and q across
    blocks, drawn exactly as ``randint(den) < num``.
    """
    n = params.n
    g = SignedGraph(range(n))
    if n < 2:
        return g
    rng = _rng(params.seed, 0)
    group = np.asarray(planted_groups(n, params.k))
    iu, ju = np.triu_indices(n, k=1)
    same = group[iu] == group[ju]
    den = params.p.denominator * params.q.denominator
    draws = rng.integers(0, den, size=iu.size)
    limit = np.where(same, params.p.numerator * params.q.denominator,
                     params.q.numerator * params.p.denominator)
    for a, b in zip(iu[draws < limit].tolist(), ju[draws < limit].tolist()):
        g.flip(a, b)
    return g


def gen_ops(params: GeneratorParams, g: SignedGraph) -> list[Operation]:
    """Operation stream of length ``op_count`` that is valid when replayed on ``g``.

    A deletion is preceded by flips removing the victim's positive edges; an
    addition uses an id never seen before. Half the flips hit an existing
    positive edge so both directions stay frequent.
    """
    rng = _rng(params.seed, 1)
    sim = g.copy()
    fresh = max(sim.vertices, default=-1) + 1
    weights = np.asarray(params.op_mix, dtype=float)
    weights /= weights.sum()
    ops: list[Operation] = []
    budget = params.op_count
    while len(ops) < budget:
        kind = rng.choice(3, p=weights)
        verts = sorted(sim.vertices)
        if kind == 1 or len(verts) < 2:
            ops.append(AddVertex(fresh))
            sim.add_vertex(fresh)
            fresh += 1
        elif kind == 2 and len(verts) > 2:
            victim = verts[int(rng.integers(len(verts)))]
            for w in sorted(sim.neighbors(victim)):
                if len(ops) == budget:
                    break
                ops.append(FlipSign(victim, w))
                sim.flip(victim, w)
            if len(ops) < budget:
                ops.append(DeleteVertex(victim))
                sim.delete_vertex(victim)
        else:
            edges = list(sim.positive_edges()) if rng.random() < 0.5 else []
            if edges:
                u, v = edges[int(rng.integers(len(edges)))]
            else:
                i, j = rng.choice(len(verts), size=2, replace=False)
                u, v = verts[int(i)], verts[int(j)]
            ops.append(FlipSign(u, v))
            sim.flip(u, v)
    return ops


def corpus_params(seed: int, n_range: tuple[int, int] = (4, 40), op_count: int = 100) -> tuple[GeneratorParams, Epsilon]:
    """Randomised workload shape for ``seed``: size, blocks, densities and epsilon."""
    rng = _rng(seed, 2)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    k = int(rng.integers(1, min(n, 6) + 1))
    p10 = int(rng.integers(3, 11))
    q10 = int(rng.integers(0, min(p10, 4) + 1))
    eps = EPS_CHOICES[int(rng.integers(len(EPS_CHOICES)))]
    params = GeneratorParams(n=n, k=k, p=Fraction(p10, 10), q=Fraction(q10, 10),
                             op_count=op_count, seed=seed)
    return params, eps


# --------------------------------------------------------------------------
# oracle comparison

@dataclass
class DivergenceWitness:
    step: int
    op: str
    online: tuple[tuple[int, ...], ...]
    baseline: tuple[tuple[int, ...], ...]
    first_pair: tuple[int, int]
    config: dict = field(default_factory=dict)
    seed: int | None = None
    params: dict | None = None

    def to_dict(self) -> dict:
        return {"step": self.step, "op": self.op, "online": [list(b) for b in self.online],
                "baseline": [list(b) for b in self.baseline], "first_pair": list(self.first_pair),
                "config": self.config, "seed": self.seed, "params": self.params}


def compare_partitions(a: Clustering | Iterable[Iterable[int]],
                       b: Clustering | Iterable[Iterable[int]]) -> tuple[int, int] | None:
    """First vertex pair on which two partitions disagree; ids are ignored."""
    return first_difference(a, b)


def check_step(g: SignedGraph, eps: EpsilonLike, online: Clustering, closed: bool = False,
               step: int = 0, op: Operation | None = None, config: dict | None = None,
               baseline: Clustering | None = None) -> DivergenceWitness | None:
    """``None`` when ``online`` equals the baseline partition of ``g``, else a witness."""
    if baseline is None:
        baseline = correlation_clustering(g, eps, closed)
    pair = first_difference(online, baseline)
    if pair is None:
        return None
    return DivergenceWitness(step=step, op=str(op) if op is not None else "",
                             online=online.blocks(), baseline=baseline.blocks(),
                             first_pair=pair, config=dict(config or {}))


# --------------------------------------------------------------------------
# exhaustive optimum

def brute_force_opt(g: SignedGraph) -> tuple[CostBreakdown, tuple[tuple[int, ...], ...]]:
    """Minimum disagreement over all set partitions.

    Ties go to the lexicographically smallest restricted-growth string over
    ascending vertex ids, i.e. the first optimum in enumeration order.
    """
    verts = sorted(g.vertices)
    n = len(verts)
    if n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"{n} vertices exceeds the exhaustive limit of {BRUTE_FORCE_LIMIT}")
    if n == 0:
        return CostBreakdown(0, 0), ()
    index = {v: i for i, v in enumerate(verts)}
    adj = [sum(1 << index[w] for w in g.neighbors(v)) for v in verts]
    best: list = [None, None, None]  # total, (cut, internal), labels
    labels = [0] * n
    masks: list[int] = []
    sizes: list[int] = []

    def place(i: int, cut: int, internal: int) -> None:
        if best[0] is not None and cut + internal >= best[0]:
            return
        if i == n:
            best[0], best[1], best[2] = cut + internal, (cut, internal), list(labels)
            return
        earlier = adj[i] & ((1 << i) - 1)
        pos_prev = earlier.bit_count()
        for b in range(len(masks) + 1):
            if b == len(masks):
                masks.append(0)
                sizes.append(0)
            to_block = (adj[i] & masks[b]).bit_count()
            labels[i] = b
            masks[b] |= 1 << i
            sizes[b] += 1
            place(i + 1, cut + pos_prev - to_block, internal + sizes[b] - 1 - to_block)
            masks[b] &= ~(1 << i)
            sizes[b] -= 1
            if sizes[b] == 0:
                masks.pop()
                sizes.pop()

    place(0, 0, 0)
    blocks: dict[int, list[int]] = {}
    for v, lab in zip(verts, best[2]):
        blocks.setdefault(lab, []).append(v)
    return CostBreakdown(*best[1]), canonical(blocks.values())


def enumerate_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All set partitions of ``items`` (restricted-growth order)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in enumerate_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


# --------------------------------------------------------------------------
# lemma predictions for one flip

@dataclass(frozen=True)
class EdgePrediction:
    x: int
    w: int
    delta: int              # predicted change of |N(x) Δ N(w)|
    trend: str | None       # NonAgreement after vs before; None when undefined
    case: str


@dataclass(frozen=True)
class DeltaCategory:
    category: str           # "pair", "A", "B", "C" or "outside"
    direction: str
    predictions: tuple[EdgePrediction, ...]


INCREASE, DECREASE, EQUAL, NONINCREASE = "increase", "decrease", "equal", "nonincrease"


def _one_sided_trend(direction: str, dx: int, dw: int, threshold: int) -> tuple[str, str]:
    if direction == NEG_TO_POS:
        if dx < dw:
            return INCREASE, "deg(x)<deg(w)"
        if threshold < dx:
            return INCREASE, "deg(x)>=deg(w), T<deg(x)"
        if threshold == dx:
            return EQUAL, "deg(x)>=deg(w), T=deg(x)"
        return DECREASE, "deg(x)>=deg(w), T>deg(x)"
    if dx <= dw:
        return DECREASE, "deg(x)<=deg(w)"
    if threshold < dx:
        return DECREASE, "deg(x)>deg(w), T<deg(x)"
    if threshold == dx:
        return EQUAL, "deg(x)>deg(w), T=deg(x)"
    return INCREASE, "deg(x)>deg(w), T>deg(x)"


def delta_category(g_pre: SignedGraph, u: int, v: int, w: int) -> DeltaCategory:
    """Classify ``w`` relative to a flip of ``{u, v}`` on ``g_pre`` and predict its edges."""
    direction = POS_TO_NEG if g_pre.sign(u, v) == POS else NEG_TO_POS
    step = 1 if direction == NEG_TO_POS else -1
    nu, nv = g_pre.neighbors(u), g_pre.neighbors(v)
    if w in (u, v):
        pred = EdgePrediction(u, v, 2 * step, None, "pair")
        return DeltaCategory("pair", direction, (pred,))
    if w in nu and w in nv:
        trend = NONINCREASE if direction == NEG_TO_POS else INCREASE
        preds = tuple(EdgePrediction(x, w, -step, trend, "common") for x in (u, v))
        return DeltaCategory("A", direction, preds)
    for label, x, nx in (("B", u, nu), ("C", v, nv)):
        if w in nx:
            dx, dw = len(nx), g_pre.degree(w)
            trend, case = _one_sided_trend(direction, dx, dw, sym_diff_size(g_pre, x, w))
            return DeltaCategory(label, direction, (EdgePrediction(x, w, step, trend, case),))
    preds = tuple(EdgePrediction(x, w, 0, EQUAL, "untouched") for x in sorted(g_pre.neighbors(w)))
    return DeltaCategory("outside", direction, preds)


def table_keeps_status(trend: str | None, agreed_before: bool) -> bool:
    """Whether a trend alone guarantees unchanged agreement (the ✓→✓ / ×→× rows)."""
    if trend == EQUAL:
        return True
    if agreed_before:
        return trend in (DECREASE, NONINCREASE)
    return trend == INCREASE


def observed_trend(before: Fraction, after: Fraction) -> str:
    return INCREASE if after > before else DECREASE if after < before else EQUAL


def trend_holds(predicted: str, before: Fraction, after: Fraction) -> bool:
    if predicted == NONINCREASE:
        return after <= before
    return observed_trend(before, after) == predicted


# --------------------------------------------------------------------------
# epsilon-criticality

def is_epsilon_critical(g: SignedGraph, eps: EpsilonLike, element: int | tuple[int, int],
                        closed: bool = False) -> bool:
    """Whether removing an edge (sign to negative) or a vertex changes the sparsified partition."""
    before = correlation_clustering(g, eps, closed)
    h = g.copy()
    if isinstance(element, tuple):
        u, v = element
        if h.sign(u, v) != POS:
            return False
        h.flip(u, v)
        return correlation_clustering(h, eps, closed).partition() != before.partition()
    x = element
    for w in sorted(h.neighbors(x)):
        h.flip(x, w)
    h.delete_vertex(x)
    after = correlation_clustering(h, eps, closed).partition()
    trimmed = frozenset(b - {x} for b in before.partition() if b - {x})
    return after != trimmed


# --------------------------------------------------------------------------
# experiments

@dataclass
class ExperimentConfig:
    seeds: Sequence[int]
    pruning: str = "corrected"
    maintenance: str = "frontier"
    neighborhood: str = "open"
    op_count: int = 100
    n_range: tuple[int, int] = (4, 40)
    eps: Epsilon | None = None
    check: bool = True
    audit: bool = False
    stop_at_divergence: bool = True

    def engine_config(self, eps: Epsilon) -> EngineConfig:
        return EngineConfig(eps, self.pruning, self.maintenance, self.neighborhood)

    def to_dict(self) -> dict:
        return {"seeds": len(self.seeds), "pruning": self.pruning, "maintenance": self.maintenance,
                "neighborhood": self.neighborhood, "op_count": self.op_count,
                "n_range": list(self.n_range), "eps": str(self.eps) if self.eps else None,
                "check": self.check, "audit": self.audit}


@dataclass
class AuditFailure:
    seed: int | None
    step: int
    kind: str
    detail: str = ""


@dataclass
class RunResult:
    steps: list[StepReport] = field(default_factory=list)
    witnesses: list[DivergenceWitness] = field(default_factory=list)
    audit_failures: list[AuditFailure] = field(default_factory=list)
    baseline_evaluations: list[int] = field(default_factory=list)


def run_ops(engine: Engine, ops: Iterable[Operation], check: bool = True, audit: bool = False,
            seed: int | None = None, params: dict | None = None,
            stop_at_divergence: bool = False) -> RunResult:
    """Apply ``ops`` to ``engine``, checking against the baseline after every step.

    With ``audit`` every flip is additionally cross-checked: state equals a
    from-scratch recomputation, equals the unpruned reference update, is
    untouched outside S, the work counter respects its bound, and the
    clustering is a partition.
    """
    cfg = engine.cfg
    out = RunResult()
    for op in ops:
        pre = (engine._g.copy(), engine._state.copy()) if audit and isinstance(op, FlipSign) else None
        report = engine.apply(op)
        out.steps.append(report)
        g = engine._g
        if check or audit:
            base_state = init_state(g, cfg.eps, cfg.closed)
            out.baseline_evaluations.append(base_state.stats.na_evaluations)
            baseline = correlation_clustering(g, cfg.eps, cfg.closed, base_state)
            witness = check_step(g, cfg.eps, engine._c, cfg.closed, report.t, op,
                                 cfg.to_dict(), baseline)
            report.baseline_match = witness is None
            if audit:
                out.audit_failures.extend(_audit(engine, op, report, pre, base_state, seed))
            if witness is not None:
                witness.seed, witness.params = seed, params
                out.witnesses.append(witness)
                if stop_at_divergence:
                    break
    return out


def _audit(engine: Engine, op: Operation, report: StepReport, pre, base_state, seed) -> list[AuditFailure]:
    fails = []
    g, st = engine._g, engine._state

    def fail(kind: str, detail: str = "") -> None:
        fails.append(AuditFailure(seed, report.t, kind, detail))

    if st != base_state:
        fail("state-soundness", str(op))
    try:
        engine._c.check(g.vertices)
    except Exception as exc:  # noqa: BLE001 - any partition defect is a finding
        fail("partition", str(exc))
    if pre is None or not report.applied:
        return fails
    g_pre, st_pre = pre
    u, v = op.u, op.v
    S = g_pre.neighbors(u) | g_pre.neighbors(v) | {u, v}
    shadow_g, shadow = g_pre.copy(), st_pre.copy()
    shadow_g.flip(u, v)
    safe_recompute_around(shadow_g, shadow, u, v)
    if shadow != st:
        fail("pruning-soundness", str(op))
    for w in g:
        if w not in S and (st.agree_cnt[w] != st_pre.agree_cnt[w] or st.is_light[w] != st_pre.is_light[w]):
            fail("locality", f"vertex {w} outside S changed")
            break
    bound = 3 * (g.degree(u) + g.degree(v)) + 1
    if report.na_evaluations > bound:
        fail("work-bound", f"{report.na_evaluations} > {bound}")
    return fails


def workload(seed: int, config: ExperimentConfig) -> tuple[GeneratorParams, Epsilon, SignedGraph, list[Operation]]:
    params, eps = corpus_params(seed, config.n_range, config.op_count)
    if config.eps is not None:
        eps = config.eps
    g = gen_planted(params)
    return params, eps, g, gen_ops(params, g)


@dataclass
class ExperimentReport:
    config: dict
    workloads: int = 0
    init: list[dict] = field(default_factory=list)
    steps: list[StepReport] = field(default_factory=list)
    witnesses: list[DivergenceWitness] = field(default_factory=list)
    audit_failures: list[AuditFailure] = field(default_factory=list)
    totals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"config": self.config, "workloads": self.workloads, "init": self.init,
                "steps": [s.to_dict() for s in self.steps], "totals": self.totals,
                "witnesses": [w.to_dict() for w in self.witnesses],
                "audit_failures": [vars(a) for a in self.audit_failures]}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    report = ExperimentReport(config=config.to_dict())
    baseline_total = 0
    for seed in config.seeds:
        params, eps, g, ops = workload(seed, config)
        engine = Engine(g, config.engine_config(eps))
        report.workloads += 1
        report.init.append({"seed": seed, "n": len(g), "positive_edges": g.num_positive_edges(),
                            "eps": str(eps), "clusters": len(engine._c),
                            "na_evaluations": engine.counters()["init_na_evaluations"]})
        result = run_ops(engine, ops, config.check, config.audit, seed, params.to_dict(),
                         config.stop_at_divergence)
        report.steps.extend(result.steps)
        report.witnesses.extend(result.witnesses)
        report.audit_failures.extend(result.audit_failures)
        baseline_total += sum(result.baseline_evaluations)
    steps = report.steps
    report.totals = {
        "steps": len(steps),
        "applied": sum(s.applied for s in steps),
        "rejected": sum(not s.applied for s in steps),
        "checked": sum(s.baseline_match is not None for s in steps),
        "mismatches": sum(s.baseline_match is False for s in steps),
        "na_evaluations": sum(s.na_evaluations for s in steps),
        "baseline_na_evaluations": baseline_total,
        "witnesses": len(report.witnesses),
        "audit_failures": len(report.audit_failures),
    }
    return report


def replay(witness: DivergenceWitness, config: ExperimentConfig) -> DivergenceWitness | None:
    """Re-run the workload that produced ``witness``; return the first divergence found."""
    one = replace(config, seeds=[witness.seed], stop_at_divergence=True, check=True)
    found = run_experiment(one).witnesses
    return found[0] if found else None


# --------------------------------------------------------------------------
# benchmark

@dataclass
class BenchReport:
    rows: list[dict] = field(default_factory=list)

    @property
    def totals(self) -> dict:
        flips = [r for r in self.rows if r["op"].startswith("flip")]
        online = sum(r["online_na"] for r in flips)
        base = sum(r["baseline_na"] for r in flips)
        return {
            "steps": len(self.rows),
            "flips": len(flips),
            "online_na": online,
            "baseline_na": base,
            "na_ratio": online / base if base else None,
            "max_step_ratio": max((r["ratio"] for r in flips if r["ratio"] is not None), default=None),
            "online_time": sum(r["online_time"] for r in self.rows),
            "baseline_time": sum(r["baseline_time"] for r in self.rows),
            "all_match": all(r["match"] for r in self.rows),
            "online_always_fewer": all(r["online_na"] < r["baseline_na"] for r in flips),
        }

    def to_dict(self) -> dict:
        return {"steps": self.rows, "totals": self.totals}


def run_benchmark(g: SignedGraph, ops: Iterable[Operation], cfg: EngineConfig) -> BenchReport:
    """Online engine against a from-scratch baseline after every step."""
    engine = Engine(g, cfg)
    out = BenchReport()
    for op in ops:
        rep = engine.apply(op)
        start = time.perf_counter()
        base_state = init_state(engine._g, cfg.eps, cfg.closed)
        baseline = correlation_clustering(engine._g, cfg.eps, cfg.closed, base_state)
        base_time = time.perf_counter() - start
        base_na = base_state.stats.na_evaluations
        out.rows.append({
            "t": rep.t, "op": str(op), "status": rep.status,
            "online_na": rep.na_evaluations, "online_time": rep.elapsed,
            "baseline_na": base_na, "baseline_time": base_time,
            "positive_edges": engine._g.num_positive_edges(),
            "ratio": rep.na_evaluations / base_na if base_na else None,
            "match": baseline.partition() == engine._c.partition(),
        })
    return out
