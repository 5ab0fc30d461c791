"""A planted-partition workload processed online and checked step by step.

Run with ``python3 demos/02_online_vs_baseline.py``.
"""
# %%
from fractions import Fraction

import numpy as np

from dyncc import Engine, EngineConfig, Epsilon, clustering_cost
from dyncc.harness import GeneratorParams, gen_ops, gen_planted, run_ops

# Blocks must be dense for their edges to agree at eps = 7/10; at p = 2/5 every
# vertex would end up alone.
params = GeneratorParams(n=300, k=6, p=Fraction(4, 5), q=Fraction(1, 100), op_count=400, seed=3)
g = gen_planted(params)
ops = gen_ops(params, g)
print(f"{len(g)} vertices, {g.num_positive_edges()} positive edges, {len(ops)} operations")

# %%
engine = Engine(g, EngineConfig(Epsilon(7, 10)))
print("initial clusters:", len(engine.clustering()), "cost:", engine.cost())
result = run_ops(engine, ops, check=True)
mismatches = sum(not s.baseline_match for s in result.steps)
print(f"steps checked against the baseline: {len(result.steps)}, mismatches: {mismatches}")

# %%
# Work per step. The baseline evaluates every positive edge; the engine only
# looks around the flipped pair.
online = np.array([s.na_evaluations for s in result.steps])
baseline = np.array(result.baseline_evaluations)
print(f"online evaluations   mean {online.mean():8.1f}  max {online.max()}")
print(f"baseline evaluations mean {baseline.mean():8.1f}  max {baseline.max()}")
print(f"total ratio {online.sum() / baseline.sum():.4f}")

# %%
sizes = sorted((len(m) for m in engine.clustering().clusters.values()), reverse=True)
print("largest clusters:", sizes[:8])
assert engine.cost() == clustering_cost(engine.graph(), engine.clustering()).total
print("final cost:", engine.cost())
