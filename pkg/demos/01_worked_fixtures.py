"""Four vertices, one flip: watching the engine merge and split a cluster.

Run with ``python3 demos/01_worked_fixtures.py``.
"""
# %%
import itertools

from dyncc import Engine, EngineConfig, Epsilon, FlipSign, SignedGraph, correlation_clustering
from dyncc.graph import non_agreement

eps = Epsilon(7, 10)

# K4 with the edge {1,2} negative. Vertices 1 and 2 share both neighbours but
# are not adjacent themselves, which is enough to keep everything apart.
k4m = SignedGraph([1, 2, 3, 4], [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
for u, v in k4m.positive_edges():
    print(f"NA({u},{v}) = {non_agreement(k4m, u, v)}")
print("baseline:", correlation_clustering(k4m, eps).blocks())

# %%
# Turning {1,2} positive gives the full K4: every NonAgreement drops to 2/3,
# all edges agree and every vertex becomes heavy.
engine = Engine(k4m, EngineConfig(eps))
report = engine.apply(FlipSign(1, 2))
print(f"after flip 1 2: {engine.clustering().blocks()}  cost={report.cost_total}")
print(f"  NonAgreement evaluations {report.na_evaluations}, |S|={report.s_size}, |F|={report.f_size}")

# %%
# Flipping it back splits the cluster again. The new clusters get fresh ids.
report = engine.apply(FlipSign(1, 2))
c = engine.clustering()
print(f"after second flip: {c.blocks()} ids={sorted(c.clusters)} cost={report.cost_total}")

# %%
# The same machinery for a fully positive K4 at a few thresholds.
k4 = SignedGraph(range(1, 5), itertools.combinations(range(1, 5), 2))
for e in ("1/2", "7/10", "1/1", "6/5"):
    print(f"eps={e}: {correlation_clustering(k4, e).blocks()}")
