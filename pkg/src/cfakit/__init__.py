"""Combinatorial fusion analysis of multiple scoring systems.

Score and rank combinations weighted by cognitive diversity, Kemeny rank-space
combinatorics, ROUGE-L evaluation and a unit-selection pipeline.
"""

from .core import (
    Item,
    RankScoreFunction,
    Ranking,
    ScoreMatrix,
    ScoringSystem,
    TiePolicy,
    derive_ranking,
    normalize_scores,
    rank_score_function,
)
from .diversity import DiversityMatrix, cognitive_diversity, diversity_matrix, diversity_strength
from .fusion import (
    METHODS,
    FusionConfig,
    FusionResult,
    Method,
    arc,
    asc,
    enumerate_configs,
    fuse,
    run_all,
    wrcds,
    wscds,
)
from .metrics import RougeScore, lexical_unit_scorer, rouge_l_f1, tokenize

__version__ = "0.1.0"

__all__ = [
    "DiversityMatrix",
    "FusionConfig",
    "FusionResult",
    "Item",
    "METHODS",
    "Method",
    "RankScoreFunction",
    "Ranking",
    "RougeScore",
    "ScoreMatrix",
    "ScoringSystem",
    "TiePolicy",
    "arc",
    "asc",
    "cognitive_diversity",
    "derive_ranking",
    "diversity_matrix",
    "diversity_strength",
    "enumerate_configs",
    "fuse",
    "lexical_unit_scorer",
    "normalize_scores",
    "rank_score_function",
    "rouge_l_f1",
    "run_all",
    "tokenize",
    "wrcds",
    "wscds",
]
