"""Seeded synthetic scoring systems and the diversity-vs-accuracy study.

Latent item qualities are ``signal_strength * U(0, 1)``. System j observes
``score_scale[j] * (quality + noise_scales[j] * U(-1, 1))``. The ground truth
is the item of highest latent quality.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import Item, ScoreMatrix
from .diversity import diversity_matrix
from .errors import InvalidSpec
from .fusion import METHODS, FusionConfig, Method, fuse


@dataclass(frozen=True)
class SyntheticSpec:
    n_items: int
    k_systems: int
    noise_scales: tuple[float, ...]
    score_scale: tuple[float, ...]
    signal_strength: float = 1.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "noise_scales", tuple(float(x) for x in self.noise_scales))
        object.__setattr__(self, "score_scale", tuple(float(x) for x in self.score_scale))
        if self.n_items < 2 or self.k_systems < 2:
            raise InvalidSpec("need n_items >= 2 and k_systems >= 2")
        if len(self.noise_scales) != self.k_systems or len(self.score_scale) != self.k_systems:
            raise InvalidSpec("noise_scales and score_scale need one entry per system")
        if any(not math.isfinite(x) or x < 0 for x in self.noise_scales):
            raise InvalidSpec("noise scales must be finite and non-negative")
        if any(not math.isfinite(x) or x <= 0 for x in self.score_scale):
            raise InvalidSpec("score scales must be finite and positive")
        if not math.isfinite(self.signal_strength) or self.signal_strength < 0:
            raise InvalidSpec("signal_strength must be finite and non-negative")
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must be a 64-bit unsigned integer")


#: Template used by the CLI and the pinned study: heterogeneous noise and scales.
DEFAULT_STUDY_SPEC = SyntheticSpec(
    n_items=20,
    k_systems=5,
    noise_scales=(0.15, 0.3, 0.45, 0.6, 0.75),
    score_scale=(1.0, 5.0, 0.5, 10.0, 2.0),
    signal_strength=1.0,
    seed=20251014,
)


def item_ids(n: int) -> list[str]:
    width = len(str(n))
    return [f"d{i:0{width}d}" for i in range(1, n + 1)]


def generate(spec: SyntheticSpec) -> tuple[ScoreMatrix, str]:
    """Draw one score matrix; returns it with the id of the best latent item."""
    rng = np.random.default_rng(spec.seed)
    quality = spec.signal_strength * rng.uniform(0.0, 1.0, spec.n_items)
    noise = rng.uniform(-1.0, 1.0, (spec.n_items, spec.k_systems))
    scores = np.asarray(spec.score_scale) * (quality[:, None] + np.asarray(spec.noise_scales) * noise)
    ids = item_ids(spec.n_items)
    systems = tuple(f"S{j + 1}" for j in range(spec.k_systems))
    matrix = ScoreMatrix(tuple(Item(i) for i in ids), systems, scores)
    return matrix, ids[int(np.argmax(quality))]


def trial_seed(master: int, trial: int) -> int:
    """Per-trial seed; depends only on (master, trial) so trials can run in any order."""
    state = np.random.SeedSequence([master, trial]).generate_state(1, dtype=np.uint64)
    return int(state[0])


@dataclass(frozen=True)
class TrialRow:
    trial: int
    method: Method
    hit: bool
    mean_cd: float


@dataclass(frozen=True)
class StudyReport:
    rows: tuple[TrialRow, ...]
    accuracy: dict[Method, float]
    buckets: tuple[tuple[float, float, dict[Method, float], int], ...] = field(default=())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "method", "hit", "mean_cd"])
        for r in self.rows:
            w.writerow([r.trial, r.method.value, int(r.hit), repr(r.mean_cd)])
        w.writerow([])
        w.writerow(["method", "accuracy"])
        for m, acc in self.accuracy.items():
            w.writerow([m.value, repr(acc)])
        w.writerow([])
        w.writerow(["bucket", "cd_low", "cd_high", "method", "accuracy", "n_trials"])
        for b, (lo, hi, accs, count) in enumerate(self.buckets, start=1):
            for m, acc in accs.items():
                w.writerow([b, repr(lo), repr(hi), m.value, repr(acc), count])
        return buf.getvalue()


def diversity_study(
    template: SyntheticSpec,
    trials: int,
    *,
    normalize: bool = False,
    n_buckets: int = 4,
) -> StudyReport:
    """Fuse the full system set with all four methods over seeded trials.

    Records whether each method's top item is the latent best, together with
    the trial's mean pairwise cognitive diversity, and buckets accuracy by
    diversity quantile.
    """
    if trials < 1:
        raise InvalidSpec("trials must be at least 1")
    if n_buckets < 1:
        raise InvalidSpec("n_buckets must be at least 1")
    rows: list[TrialRow] = []
    per_trial_cd = []
    k = template.k_systems
    iu = np.triu_indices(k, 1)
    for t in range(trials):
        matrix, truth = generate(replace(template, seed=trial_seed(template.seed, t)))
        div = diversity_matrix(matrix)
        mean_cd = math.fsum(div.cd[iu].tolist()) / len(iu[0])
        per_trial_cd.append(mean_cd)
        for m in METHODS:
            r = fuse(matrix, FusionConfig(matrix.system_ids, m), normalize=normalize, diversity=div)
            rows.append(TrialRow(t, m, r.top_item == truth, mean_cd))
    accuracy = {m: sum(r.hit for r in rows if r.method is m) / trials for m in METHODS}

    cds = np.asarray(per_trial_cd)
    edges = np.quantile(cds, np.linspace(0.0, 1.0, n_buckets + 1))
    # bucket b holds edges[b] <= cd < edges[b+1]; the last bucket is closed
    which = np.clip(np.searchsorted(edges, cds, side="right") - 1, 0, n_buckets - 1)
    buckets = []
    for b in range(n_buckets):
        members = set(np.flatnonzero(which == b).tolist())
        accs = {}
        for m in METHODS:
            hits = [r.hit for r in rows if r.method is m and r.trial in members]
            accs[m] = sum(hits) / len(hits) if hits else float("nan")
        buckets.append((float(edges[b]), float(edges[b + 1]), accs, len(members)))
    return StudyReport(tuple(rows), accuracy, tuple(buckets))
