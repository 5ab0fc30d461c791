"""Fully dynamic correlation clustering on complete signed graphs."""
from dyncc.baseline import (
    CostBreakdown,
    clustering_cost,
    compute_agreement_state,
    connected_components,
    correlation_clustering,
    sparsified_edge_present,
)
from dyncc.clustering import Clustering, add_singleton, remove_singleton
from dyncc.engine import AddVertex, DeleteVertex, Engine, EngineConfig, FlipSign, Operation, StepReport
from dyncc.graph import Epsilon, SignedGraph, non_agreement, sym_diff_size
from dyncc.state import AgreementState, init_state

__all__ = [
    "AddVertex", "AgreementState", "Clustering", "CostBreakdown", "DeleteVertex", "Engine",
    "EngineConfig", "Epsilon", "FlipSign", "Operation", "SignedGraph", "StepReport",
    "add_singleton", "clustering_cost", "compute_agreement_state", "connected_components",
    "correlation_clustering", "init_state", "non_agreement", "remove_singleton",
    "sparsified_edge_present", "sym_diff_size",
]
