"""Streaming community detection in one randomized pass over the edge list.

The detector keeps two integers per node (its running degree and community
label) and merges the endpoints of an edge only while both degrees are at or
below a threshold D.  The package adds everything needed to study it:
degree statistics and threshold strategies, cover scoring (best-match F1 and
indicator NMI), conductance-style community structure, and reproducible
experiment harnesses with closed-form cross-checks.
"""

from .detection import (
    AVERAGE,
    MEDIAN,
    MODE,
    Partition,
    ScodaState,
    ThresholdStrategy,
    extract_communities,
    fixed,
    resolve_threshold,
    run,
    run_parallel,
    run_recording_transfers,
    run_state,
)
from .graph import (
    CommunityStats,
    DegreeStats,
    Graph,
    GraphFormatError,
    community_stats,
    degree_stats,
    load_graph,
)
from .metrics import (
    Cover,
    ScoreReport,
    avg_f1,
    directional_f1,
    externalize_cover,
    f1_pair,
    nmi,
    read_community_file,
    score_covers,
    write_community_file,
)
from .stream import EdgeStream, new_seed, shuffle, spawn_seeds, weighted_shuffle
from .theory import (
    ErResult,
    FpeReport,
    IntraProbability,
    SweepResult,
    VarianceResult,
    er_experiment,
    fpe_bound,
    fpe_experiment,
    gnp_graph,
    intra_probability,
    sweep_d,
    variance_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "AVERAGE",
    "MEDIAN",
    "MODE",
    "CommunityStats",
    "Cover",
    "DegreeStats",
    "EdgeStream",
    "ErResult",
    "FpeReport",
    "Graph",
    "GraphFormatError",
    "IntraProbability",
    "Partition",
    "ScodaState",
    "ScoreReport",
    "SweepResult",
    "ThresholdStrategy",
    "VarianceResult",
    "avg_f1",
    "community_stats",
    "degree_stats",
    "directional_f1",
    "er_experiment",
    "externalize_cover",
    "extract_communities",
    "f1_pair",
    "fixed",
    "fpe_bound",
    "fpe_experiment",
    "gnp_graph",
    "intra_probability",
    "load_graph",
    "new_seed",
    "nmi",
    "read_community_file",
    "resolve_threshold",
    "run",
    "run_parallel",
    "run_recording_transfers",
    "run_state",
    "score_covers",
    "shuffle",
    "spawn_seeds",
    "sweep_d",
    "variance_experiment",
    "weighted_shuffle",
    "write_community_file",
]
