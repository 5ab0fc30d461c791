from fractions import Fraction

import numpy as np
import pytest

from support import EPS7, k4, p3, random_graph
from dyncc.baseline import clustering_cost, correlation_clustering, naive_cost
from dyncc.clustering import Clustering
from dyncc.engine import AddVertex, DeleteVertex, Engine, EngineConfig, FlipSign
from dyncc.errors import TooLarge
from dyncc.graph import Epsilon, SignedGraph
from dyncc.harness import (
    ExperimentConfig,
    GeneratorParams,
    brute_force_opt,
    check_step,
    compare_partitions,
    corpus_params,
    enumerate_partitions,
    gen_ops,
    gen_planted,
    is_epsilon_critical,
    replay,
    run_benchmark,
    run_experiment,
)

TRIANGLES = SignedGraph(range(6), [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


def test_check_step_match_after_split(fix_k4):
    fix_k4.flip(1, 2)
    online = Clustering.from_blocks([[1], [2], [3], [4]], first_id=9)
    assert check_step(fix_k4, EPS7, online) is None


def test_check_step_ignores_ids(fix_k4):
    online = Clustering.from_blocks([[1, 2, 3, 4]], first_id=42)
    assert check_step(fix_k4, EPS7, online) is None


def test_check_step_reports_missing_vertex(fix_k4):
    online = Clustering.from_blocks([[1, 2, 3]])
    w = check_step(fix_k4, EPS7, online)
    assert w is not None and w.first_pair == (4, 4)


def test_compare_partitions_reflexive_and_symmetric():
    rng = np.random.default_rng(2)
    for _ in range(30):
        g = random_graph(rng, 8)
        a = correlation_clustering(g, EPS7)
        b = Clustering.from_blocks([[v] for v in g])
        assert compare_partitions(a, a) is None
        assert compare_partitions(a, b) == compare_partitions(b, a)


def test_planted_degenerate_probabilities():
    g = gen_planted(GeneratorParams(6, 2, Fraction(1), Fraction(0)))
    assert g == TRIANGLES
    empty = gen_planted(GeneratorParams(6, 2, Fraction(0), Fraction(0)))
    assert empty.num_positive_edges() == 0
    assert correlation_clustering(empty, EPS7).blocks() == tuple((v,) for v in range(6))


def test_generator_is_deterministic():
    params = GeneratorParams(30, 3, Fraction(3, 5), Fraction(1, 10), op_count=80, seed=17)
    g1, g2 = gen_planted(params), gen_planted(params)
    assert g1 == g2
    assert gen_ops(params, g1) == gen_ops(params, g2)
    other = gen_planted(GeneratorParams(30, 3, Fraction(3, 5), Fraction(1, 10), seed=18))
    assert other != g1


def test_generated_ops_are_valid():
    for seed in range(40):
        params, eps = corpus_params(seed)
        g = gen_planted(params)
        eng = Engine(g, EngineConfig(eps))
        ops = gen_ops(params, g)
        assert len(ops) == params.op_count
        assert all(eng.apply(op).applied for op in ops)


def test_brute_force_fixtures():
    cost, blocks = brute_force_opt(p3())
    assert cost.total == 1
    assert blocks in {((1, 2), (3,)), ((1,), (2, 3)), ((1, 2, 3),)}
    assert brute_force_opt(k4()) == (brute_force_opt(k4())[0], ((1, 2, 3, 4),))
    assert brute_force_opt(k4())[0].total == 0
    cost, blocks = brute_force_opt(TRIANGLES)
    assert cost.total == 0 and blocks == ((0, 1, 2), (3, 4, 5))


def test_brute_force_is_the_minimum():
    rng = np.random.default_rng(6)
    for _ in range(25):
        n = int(rng.integers(1, 7))
        g = random_graph(rng, n)
        cost, blocks = brute_force_opt(g)
        assert naive_cost(g, blocks) == cost
        assert cost.total == min(naive_cost(g, p).total for p in enumerate_partitions(list(range(n))))


def test_brute_force_size_limit():
    with pytest.raises(TooLarge):
        brute_force_opt(SignedGraph(range(12)))


def test_enumerate_partitions_counts_bell_numbers():
    assert [sum(1 for _ in enumerate_partitions(list(range(n)))) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_epsilon_critical_examples(fix_k4, fix_p3):
    assert is_epsilon_critical(fix_k4, EPS7, (1, 2))
    assert not is_epsilon_critical(fix_p3, EPS7, (1, 2))
    g = fix_p3.copy()
    g.add_vertex(4)
    assert not is_epsilon_critical(g, EPS7, 4)


def test_corrected_experiment_has_no_witnesses():
    report = run_experiment(ExperimentConfig(range(30), audit=True))
    assert report.totals["mismatches"] == 0
    assert report.totals["audit_failures"] == 0
    assert report.workloads == 30


def test_zero_op_experiment_reports_initialization_only():
    report = run_experiment(ExperimentConfig(range(3), op_count=0))
    assert report.steps == [] and len(report.init) == 3
    assert report.totals["steps"] == 0


def test_strict_pruning_witness_replays():
    cfg = ExperimentConfig(range(100), pruning="paper-strict")
    report = run_experiment(cfg)
    assert report.witnesses
    w = report.witnesses[0]
    again = replay(w, cfg)
    assert again is not None and again.to_dict() == w.to_dict()
    fixed = run_experiment(ExperimentConfig([w.seed]))
    assert not fixed.witnesses


def test_benchmark_counts():
    params = GeneratorParams(150, 5, Fraction(3, 10), Fraction(1, 50), op_count=20, op_mix=(1, 0, 0), seed=1)
    g = gen_planted(params)
    bench = run_benchmark(g, gen_ops(params, g), EngineConfig(EPS7))
    t = bench.totals
    assert t["flips"] == 20 and t["all_match"] and t["online_always_fewer"]
    assert all(r["baseline_na"] == r["positive_edges"] for r in bench.rows)


def test_vertex_ops_in_experiments():
    g = SignedGraph([0, 1], [(0, 1)])
    eng = Engine(g, EngineConfig(EPS7))
    assert eng.apply(AddVertex(2)).applied
    assert eng.apply(FlipSign(0, 1)).applied
    assert eng.apply(DeleteVertex(0)).applied
    assert eng.clustering().blocks() == ((1,), (2,))
    assert clustering_cost(eng.graph(), eng.clustering()).total == eng.cost() == 0
