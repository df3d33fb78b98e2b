"""The four combinations over subsets of scoring systems.

* ASC: mean of (normalized) scores, higher is better.
* ARC: mean of ranks, lower is better.
* WSCDS: scores averaged with diversity strength as weight.
* WRCDS: ranks averaged with the reciprocal of diversity strength as weight.

Note the asymmetry: WSCDS up-weights diverse systems while WRCDS
down-weights them. Both are implemented as defined.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import Ranking, ScoreMatrix, TiePolicy, derive_ranking, minmax, rank_values
from .diversity import DiversityMatrix, diversity_matrix
from .errors import InvalidMinSize, NeedTwoSystems, NegativeWeight, SubsetTooSmall, ValidationError

#: Total diversity weight below which a weighted method falls back to its unweighted sibling.
EPS = 1e-12
#: Relative gap under which two fused values count as tied.
FUSED_TIE_TOL = 1e-12


class Method(str, enum.Enum):
    ASC = "ASC"
    ARC = "ARC"
    WSCDS = "WSCDS"
    WRCDS = "WRCDS"

    @property
    def rank_based(self) -> bool:
        return self in (Method.ARC, Method.WRCDS)


METHODS = (Method.ASC, Method.ARC, Method.WSCDS, Method.WRCDS)


@dataclass(frozen=True)
class FusionConfig:
    subset: tuple[str, ...]
    method: Method = Method.ASC

    def __post_init__(self):
        object.__setattr__(self, "subset", tuple(self.subset))
        object.__setattr__(self, "method", Method(self.method))
        if not self.subset:
            raise ValidationError("a fusion config needs a non-empty subset")
        if len(set(self.subset)) != len(self.subset):
            raise ValidationError("subset lists a system more than once")

    @property
    def label(self) -> str:
        return "+".join(self.subset)


@dataclass(frozen=True)
class FusionResult:
    config: FusionConfig
    fused_values: Mapping[str, float]
    ranking: Ranking
    top_item: str
    fallback: bool = False

    @property
    def top_value(self) -> float:
        return self.fused_values[self.top_item]


def enumerate_configs(k: int, min_size: int = 2) -> list[tuple[int, ...]]:
    """Index subsets of ``range(k)`` with at least ``min_size`` members,
    ordered by size and then lexicographically."""
    if not 1 <= min_size <= k:
        raise InvalidMinSize(f"min_size must lie in [1, {k}], got {min_size}")
    return [c for t in range(min_size, k + 1) for c in itertools.combinations(range(k), t)]


def _columns(matrix: ScoreMatrix, subset: Sequence[str]) -> list[int]:
    cols = [matrix.index_of(s) for s in subset]
    if len(cols) < 2:
        raise SubsetTooSmall("fusion needs a subset of at least two systems")
    if len(set(cols)) != len(cols):
        raise ValidationError("subset lists a system more than once")
    return cols


def _score_block(matrix: ScoreMatrix, cols: list[int], normalize: bool) -> list[list[float]]:
    out = []
    for c in cols:
        v = matrix.values[:, c]
        out.append((minmax(v) if normalize else v).tolist())
    return out


def _rank_block(matrix: ScoreMatrix, cols: list[int], policy: TiePolicy) -> list[list[float]]:
    return [rank_values(matrix.values[:, c], policy).tolist() for c in cols]


def _weighted_mean(block: list[list[float]], weights: Sequence[float]) -> list[float]:
    total = math.fsum(weights)
    return [math.fsum(col[i] * w for col, w in zip(block, weights)) / total for i in range(len(block[0]))]


def _weights(subset: Sequence[str], ds: Mapping[str, float] | DiversityMatrix) -> list[float]:
    ds_map = ds.ds_map() if isinstance(ds, DiversityMatrix) else ds
    try:
        w = [float(ds_map[s]) for s in subset]
    except KeyError as exc:
        raise ValidationError(f"no diversity strength for system {exc.args[0]!r}") from None
    if any(x < 0 or not math.isfinite(x) for x in w):
        raise NegativeWeight("diversity strengths must be finite and non-negative")
    return w


def _result(matrix: ScoreMatrix, config: FusionConfig, fused: list[float], fallback: bool = False) -> FusionResult:
    ranks = rank_values(fused, descending=not config.method.rank_based, tol=FUSED_TIE_TOL)
    ids = matrix.item_ids
    ranking = Ranking(dict(zip(ids, ranks.tolist())))
    return FusionResult(config, dict(zip(ids, fused)), ranking, ranking.top(), fallback)


def asc(matrix: ScoreMatrix, subset: Sequence[str], *, normalize: bool = True) -> FusionResult:
    cols = _columns(matrix, subset)
    block = _score_block(matrix, cols, normalize)
    return _result(matrix, FusionConfig(subset, Method.ASC), _weighted_mean(block, [1.0] * len(cols)))


def arc(matrix: ScoreMatrix, subset: Sequence[str], *, policy: TiePolicy = TiePolicy.FRACTIONAL) -> FusionResult:
    cols = _columns(matrix, subset)
    block = _rank_block(matrix, cols, policy)
    return _result(matrix, FusionConfig(subset, Method.ARC), _weighted_mean(block, [1.0] * len(cols)))


def wscds(
    matrix: ScoreMatrix,
    subset: Sequence[str],
    ds: Mapping[str, float] | DiversityMatrix,
    *,
    normalize: bool = True,
    eps: float = EPS,
) -> FusionResult:
    cols = _columns(matrix, subset)
    w = _weights(subset, ds)
    config = FusionConfig(subset, Method.WSCDS)
    block = _score_block(matrix, cols, normalize)
    if math.fsum(w) < eps:
        return _result(matrix, config, _weighted_mean(block, [1.0] * len(cols)), fallback=True)
    return _result(matrix, config, _weighted_mean(block, w))


def wrcds(
    matrix: ScoreMatrix,
    subset: Sequence[str],
    ds: Mapping[str, float] | DiversityMatrix,
    *,
    policy: TiePolicy = TiePolicy.FRACTIONAL,
    eps: float = EPS,
) -> FusionResult:
    cols = _columns(matrix, subset)
    w = _weights(subset, ds)
    config = FusionConfig(subset, Method.WRCDS)
    block = _rank_block(matrix, cols, policy)
    if min(w) < eps:
        return _result(matrix, config, _weighted_mean(block, [1.0] * len(cols)), fallback=True)
    return _result(matrix, config, _weighted_mean(block, [1.0 / x for x in w]))


def fuse(
    matrix: ScoreMatrix,
    config: FusionConfig,
    *,
    normalize: bool = True,
    policy: TiePolicy = TiePolicy.FRACTIONAL,
    diversity: DiversityMatrix | None = None,
    eps: float = EPS,
) -> FusionResult:
    """Dispatch ``config`` to its combination.

    A singleton subset is a pass-through baseline: the system's own ranking,
    whatever the method. Weighted methods compute diversity over every
    system in ``matrix`` unless ``diversity`` is supplied.
    """
    if len(config.subset) == 1:
        system = matrix.system(config.subset[0])
        ranking = derive_ranking(system, policy)
        vals = matrix.column(config.subset[0])
        vals = minmax(vals) if normalize else vals
        return FusionResult(config, dict(zip(matrix.item_ids, vals.tolist())), ranking, ranking.top())
    m = config.method
    if m is Method.ASC:
        return asc(matrix, config.subset, normalize=normalize)
    if m is Method.ARC:
        return arc(matrix, config.subset, policy=policy)
    if diversity is None:
        diversity = diversity_matrix(matrix)
    if m is Method.WSCDS:
        return wscds(matrix, config.subset, diversity, normalize=normalize, eps=eps)
    return wrcds(matrix, config.subset, diversity, policy=policy, eps=eps)


def all_configs(system_ids: Sequence[str], min_size: int = 2) -> list[FusionConfig]:
    return [
        FusionConfig(tuple(system_ids[i] for i in idx), m)
        for idx in enumerate_configs(len(system_ids), min_size)
        for m in METHODS
    ]


def run_all(
    matrix: ScoreMatrix,
    *,
    normalize: bool = True,
    policy: TiePolicy = TiePolicy.FRACTIONAL,
    min_size: int = 2,
    eps: float = EPS,
) -> list[FusionResult]:
    """Every subset of size >= ``min_size`` under every method, subsets outer."""
    if matrix.n_systems < 2:
        raise NeedTwoSystems("run_all needs at least two systems")
    div = diversity_matrix(matrix)
    return [
        fuse(matrix, cfg, normalize=normalize, policy=policy, diversity=div, eps=eps)
        for cfg in all_configs(matrix.system_ids, min_size)
    ]


def fusion_report_csv(results: Sequence[FusionResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["subset", "method", "top_item", "fused_value_of_top", "fallback_flag"])
    for r in results:
        w.writerow([r.config.label, r.config.method.value, r.top_item, repr(float(r.top_value)), int(r.fallback)])
    return buf.getvalue()


