"""Cognitive diversity between scoring systems and diversity strength.

Cognitive diversity is the root-mean-square gap between two rank-score
functions, with divisor n - 1. A system's diversity strength is its mean
cognitive diversity to every other system under consideration.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import RankScoreFunction, ScoreMatrix, rank_score_function
from .errors import DegenerateLength, LengthMismatch, NeedTwoSystems, UnknownSystem


def cognitive_diversity(a: RankScoreFunction, b: RankScoreFunction) -> float:
    if len(a) != len(b):
        raise LengthMismatch(f"rank-score functions differ in length ({len(a)} vs {len(b)})")
    n = len(a)
    if n < 2:
        raise DegenerateLength("cognitive diversity needs at least two items")
    return math.sqrt(math.fsum((x - y) ** 2 for x, y in zip(a.values, b.values)) / (n - 1))


def diversity_strength(target: str, rsfs: Mapping[str, RankScoreFunction]) -> float:
    """Mean cognitive diversity between ``target`` and each other system."""
    if len(rsfs) < 2:
        raise NeedTwoSystems("diversity strength needs at least two systems")
    if target not in rsfs:
        raise UnknownSystem(f"unknown system {target!r}")
    cds = [cognitive_diversity(rsfs[target], f) for name, f in rsfs.items() if name != target]
    return math.fsum(cds) / len(cds)


@dataclass(frozen=True)
class DiversityMatrix:
    systems: tuple[str, ...]
    cd: np.ndarray = field(repr=False)
    ds: np.ndarray

    def ds_map(self) -> dict[str, float]:
        return dict(zip(self.systems, self.ds.tolist()))

    def cd_between(self, a: str, b: str) -> float:
        return float(self.cd[self.systems.index(a), self.systems.index(b)])

    def to_csv(self) -> str:
        """Pairwise block ``system_a,system_b,cd`` then ``system,ds`` block."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["system_a", "system_b", "cd"])
        k = len(self.systems)
        for i in range(k):
            for j in range(i + 1, k):
                w.writerow([self.systems[i], self.systems[j], repr(float(self.cd[i, j]))])
        w.writerow([])
        w.writerow(["system", "ds"])
        for name, v in zip(self.systems, self.ds.tolist()):
            w.writerow([name, repr(v)])
        return buf.getvalue()


def diversity_from_rsfs(rsfs: Mapping[str, RankScoreFunction]) -> DiversityMatrix:
    names = tuple(rsfs)
    k = len(names)
    if k < 2:
        raise NeedTwoSystems("diversity matrix needs at least two systems")
    cd = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            cd[i, j] = cd[j, i] = cognitive_diversity(rsfs[names[i]], rsfs[names[j]])
    ds = np.array([math.fsum(np.delete(cd[i], i).tolist()) / (k - 1) for i in range(k)])
    cd.flags.writeable = False
    ds.flags.writeable = False
    return DiversityMatrix(names, cd, ds)


def diversity_matrix(matrix: ScoreMatrix, *, normalize: bool = True) -> DiversityMatrix:
    if matrix.n_systems < 2:
        raise NeedTwoSystems("diversity matrix needs at least two systems")
    rsfs = {s.system_id: rank_score_function(s, normalize=normalize) for s in matrix.systems()}
    return diversity_from_rsfs(rsfs)
