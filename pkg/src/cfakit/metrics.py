"""ROUGE-L and unit scorers."""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Protocol, Sequence


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


class UnitScorer(Protocol):
    """Scores one unit against k reference profiles, one finite score per profile.

    Implementations must be deterministic.
    """

    def __call__(self, unit: str, profiles: Sequence[str]) -> Sequence[float]: ...


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_punct(tok: str) -> str:
    start, end = 0, len(tok)
    while start < end and _is_punct(tok[start]):
        start += 1
    while end > start and _is_punct(tok[end - 1]):
        end -= 1
    return tok[start:end]


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase, split on Unicode whitespace, strip edge punctuation.

    Tokens that are pure punctuation vanish.
    """
    out = (_strip_punct(t) for t in text.lower().split())
    return tuple(t for t in out if t)


def lcs_length(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l_f1(candidate: str, reference: str) -> RougeScore:
    """Sentence-level ROUGE-L between two texts."""
    c, r = tokenize(candidate), tokenize(reference)
    lcs = lcs_length(c, r)
    p = lcs / len(c) if c else 0.0
    rec = lcs / len(r) if r else 0.0
    f1 = 2 * p * rec / (p + rec) if p + rec > 0 else 0.0
    return RougeScore(p, rec, f1)


def _cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(v * b[t] for t, v in a.items() if t in b)
    if dot == 0:
        return 0.0
    # integer squared norms keep identical vectors at exactly 1.0
    na2 = sum(v * v for v in a.values())
    nb2 = sum(v * v for v in b.values())
    return min(1.0, dot / math.sqrt(na2 * nb2))


def lexical_unit_scorer(unit: str, profiles: Sequence[str]) -> list[float]:
    """Term-frequency cosine similarity between a unit and each profile."""
    tf = Counter(tokenize(unit))
    return [_cosine(tf, Counter(tokenize(p))) for p in profiles]


SCORERS = {"lexical": lexical_unit_scorer}
