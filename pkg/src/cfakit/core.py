"""Domain types and tie-aware rank derivation.

A scoring system assigns a real score to every item of a dataset. From the
scores we derive a rank function (rank 1 = highest score) and a rank-score
function, the normalized scores read off in rank order.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NonFiniteScore, ParseError, UnknownSystem, ValidationError


class TiePolicy(str, enum.Enum):
    FRACTIONAL = "fractional"
    FIRST_OCCURRENCE = "first"


@dataclass(frozen=True)
class Item:
    id: str
    text: str | None = None
    source: str | None = None


def _check_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise NonFiniteScore("scores must be finite (no NaN or infinity)")


@dataclass(frozen=True)
class ScoringSystem:
    """A score function over items, keyed by item id.

    ``scores`` keeps insertion order; that order is the item-list order used
    by :attr:`TiePolicy.FIRST_OCCURRENCE`.
    """

    system_id: str
    scores: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "scores", dict(self.scores))
        _check_finite(np.fromiter(self.scores.values(), dtype=float, count=len(self.scores)))

    @property
    def item_ids(self) -> list[str]:
        return list(self.scores)

    def values(self) -> np.ndarray:
        return np.fromiter(self.scores.values(), dtype=float, count=len(self.scores))


@dataclass(frozen=True)
class Ranking:
    """Rank values per item id; 1 is best."""

    ranks: Mapping[str, float]
    tie_policy: TiePolicy = TiePolicy.FRACTIONAL

    def __post_init__(self):
        object.__setattr__(self, "ranks", dict(self.ranks))

    def top(self) -> str:
        """Best item; ties at the best rank go to the smallest item id."""
        best = min(self.ranks.values())
        return min(k for k, r in self.ranks.items() if r == best)

    def ordered(self) -> list[str]:
        """Item ids by ascending rank, ties by item id."""
        return sorted(self.ranks, key=lambda k: (self.ranks[k], k))


@dataclass(frozen=True)
class RankScoreFunction:
    """Scores at rank positions 1..n, non-increasing."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        arr = np.asarray(vals)
        _check_finite(arr)
        if np.any(np.diff(arr) > 0):
            raise ValidationError("rank-score function must be non-increasing")
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValidationError("rank-score function values must lie in [0, 1]")

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)


@dataclass(frozen=True)
class ScoreMatrix:
    """n items by k scoring systems."""

    items: tuple[Item, ...]
    system_ids: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        items = tuple(it if isinstance(it, Item) else Item(str(it)) for it in self.items)
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "system_ids", tuple(self.system_ids))
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape != (len(items), len(self.system_ids)):
            raise ValidationError(
                f"values must have shape ({len(items)}, {len(self.system_ids)}), got {vals.shape}"
            )
        if not items or not self.system_ids:
            raise ValidationError("a score matrix needs at least one item and one system")
        if len({it.id for it in items}) != len(items):
            raise ValidationError("item ids must be pairwise distinct")
        if len(set(self.system_ids)) != len(self.system_ids):
            raise ValidationError("system ids must be pairwise distinct")
        _check_finite(vals)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_systems(cls, systems: Sequence[ScoringSystem], items: Sequence[Item] | None = None):
        if not systems:
            raise ValidationError("need at least one scoring system")
        ids = systems[0].item_ids
        if items is None:
            items = [Item(i) for i in ids]
        for s in systems:
            if set(s.scores) != {it.id for it in items}:
                raise ValidationError(f"system {s.system_id!r} does not score exactly the matrix items")
        vals = [[s.scores[it.id] for s in systems] for it in items]
        return cls(tuple(items), tuple(s.system_id for s in systems), np.array(vals, dtype=float))

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def n_systems(self) -> int:
        return len(self.system_ids)

    @property
    def item_ids(self) -> list[str]:
        return [it.id for it in self.items]

    def index_of(self, system_id: str) -> int:
        try:
            return self.system_ids.index(system_id)
        except ValueError:
            raise UnknownSystem(f"unknown system {system_id!r}") from None

    def column(self, system_id: str) -> np.ndarray:
        return self.values[:, self.index_of(system_id)]

    def system(self, system_id: str) -> ScoringSystem:
        return ScoringSystem(system_id, dict(zip(self.item_ids, self.column(system_id).tolist())))

    def systems(self) -> list[ScoringSystem]:
        return [self.system(s) for s in self.system_ids]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["item_id", *self.system_ids])
        for it, row in zip(self.items, self.values.tolist()):
            w.writerow([it.id, *(repr(v) for v in row)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ScoreMatrix":
        rows = [(i, r) for i, r in enumerate(csv.reader(io.StringIO(text)), start=1) if r]
        if not rows:
            raise ParseError("empty score matrix CSV")
        first, header = rows[0]
        if len(header) < 2 or header[0] != "item_id":
            raise ParseError("header must be 'item_id,<system_1>,...'", line=first)
        items, vals = [], []
        for lineno, row in rows[1:]:
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} fields, got {len(row)}", line=lineno)
            try:
                vals.append([float(x) for x in row[1:]])
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
            items.append(Item(row[0]))
        if not items:
            raise ParseError("score matrix CSV has no item rows")
        return cls(tuple(items), tuple(header[1:]), np.array(vals, dtype=float))

    @classmethod
    def read_csv(cls, path: str | Path) -> "ScoreMatrix":
        return cls.from_csv(Path(path).read_text(encoding="utf-8"))


def minmax(values: Iterable[float]) -> np.ndarray:
    """Min-max scale to [0, 1]; a constant vector maps to 0.5 everywhere."""
    v = np.asarray(values, dtype=float)
    _check_finite(v)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.full_like(v, 0.5)
    return (v - lo) / (hi - lo)


def rank_values(
    values: Iterable[float],
    policy: TiePolicy = TiePolicy.FRACTIONAL,
    *,
    descending: bool = True,
    tol: float = 0.0,
) -> np.ndarray:
    """Rank a vector of values, 1 = best.

    ``descending=True`` means larger values are better. Values whose gap to
    the first member of their tie group is at most ``tol * max(1, max|v|)``
    are treated as tied.
    """
    v = np.asarray(values, dtype=float)
    _check_finite(v)
    n = v.size
    key = -v if descending else v
    order = np.argsort(key, kind="stable")
    slack = tol * max(1.0, float(np.abs(v).max())) if n else 0.0
    ranks = np.empty(n, dtype=float)
    i = 0
    while i < n:
        anchor = key[order[i]]
        j = i + 1
        while j < n and key[order[j]] - anchor <= slack:
            j += 1
        group = order[i:j]
        if policy is TiePolicy.FRACTIONAL:
            ranks[group] = (i + 1 + j) / 2
        else:
            ranks[np.sort(group)] = np.arange(i + 1, j + 1, dtype=float)
        i = j
    return ranks


def normalize_scores(system: ScoringSystem) -> ScoringSystem:
    if not system.scores:
        raise ValidationError("cannot normalize an empty scoring system")
    return ScoringSystem(system.system_id, dict(zip(system.item_ids, minmax(system.values()).tolist())))


def derive_ranking(system: ScoringSystem, policy: TiePolicy = TiePolicy.FRACTIONAL) -> Ranking:
    ranks = rank_values(system.values(), policy)
    return Ranking(dict(zip(system.item_ids, ranks.tolist())), TiePolicy(policy))


def rank_score_function(system: ScoringSystem, *, normalize: bool = True) -> RankScoreFunction:
    """Normalized scores listed at rank positions 1..n.

    Sorting the normalized scores in non-increasing order is the same as
    composing them with the inverse rank function; tied items occupy
    consecutive positions with their shared value.
    """
    v = system.values()
    if normalize:
        v = minmax(v)
    return RankScoreFunction(tuple(np.sort(v)[::-1].tolist()))


