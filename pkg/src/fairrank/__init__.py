"""Fairness-aware representative ranking when some groups are under-represented on a platform."""

from fairrank.core import (
    Candidate,
    CandidatePool,
    Ranking,
    RepresentationRatio,
    partition_groups,
    ratio_from_pool,
    validate_pool,
    within_group_rank,
)
from fairrank.errors import FairRankError
from fairrank.estimator import ActivityModel, estimated_ifrr
from fairrank.ideal import ideal_gfrr, ideal_ifrr
from fairrank.metrics import fairness_report, rank_difference, skew
from fairrank.ranker import MergeKind, MergePolicy, TieBreak, generate_gfrr_detconst, merge, representative_rank

__version__ = "0.1.0"

__all__ = [
    "ActivityModel",
    "Candidate",
    "CandidatePool",
    "FairRankError",
    "MergeKind",
    "MergePolicy",
    "Ranking",
    "RepresentationRatio",
    "TieBreak",
    "estimated_ifrr",
    "fairness_report",
    "generate_gfrr_detconst",
    "ideal_gfrr",
    "ideal_ifrr",
    "merge",
    "partition_groups",
    "rank_difference",
    "ratio_from_pool",
    "representative_rank",
    "skew",
    "validate_pool",
    "within_group_rank",
]
