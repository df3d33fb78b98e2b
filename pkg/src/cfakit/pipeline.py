"""Unit pool -> scoring table -> fusion -> top-unit selection -> ROUGE-L.

Each question carries a pool of candidate units (already decomposed from the
agent responses), k value profiles and a reference answer. Units are scored
against the profiles, every subset of at least two systems is fused under
each of the four methods, and the rank-1 unit of every configuration is
evaluated against the reference. Per method the configuration whose unit
scores best is kept; per system the unit it scores highest is the baseline.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import Item, RankScoreFunction, ScoreMatrix, TiePolicy, derive_ranking, rank_score_function
from .diversity import DiversityMatrix, diversity_matrix
from .errors import CFAError, IoError, ParseError, ScorerFailure, ValidationError
from .fusion import METHODS, FusionConfig, Method, run_all
from .metrics import UnitScorer, lexical_unit_scorer, rouge_l_f1


@dataclass(frozen=True)
class QuestionRecord:
    question_id: str
    question: str
    reference_answer: str
    units: tuple[Item, ...]
    profiles: Mapping[str, str]
    scores: Mapping[str, tuple[float, ...]] | None = None

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "profiles", dict(self.profiles))
        qid = self.question_id
        if not self.units:
            raise ValidationError(f"{qid}: units must be non-empty")
        ids = [u.id for u in self.units]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"{qid}: duplicate unit id(s) {dup}")
        if len(self.profiles) < 2:
            raise ValidationError(f"{qid}: need at least two profiles, got {len(self.profiles)}")
        if self.scores is not None:
            k = len(self.profiles)
            scores = {u: tuple(float(x) for x in v) for u, v in self.scores.items()}
            if set(scores) != set(ids):
                raise ValidationError(f"{qid}: precomputed scores must cover exactly the unit ids")
            for u, v in scores.items():
                if len(v) != k or not all(math.isfinite(x) for x in v):
                    raise ValidationError(f"{qid}: scores for unit {u!r} must be {k} finite numbers")
            object.__setattr__(self, "scores", scores)

    @property
    def system_ids(self) -> tuple[str, ...]:
        return tuple(self.profiles)

    def unit(self, unit_id: str) -> Item:
        for u in self.units:
            if u.id == unit_id:
                return u
        raise KeyError(unit_id)


def _no_duplicate_keys(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    if not isinstance(obj[key], kind):
        raise ValidationError(f"{where}: field {key!r} has the wrong type")
    return obj[key]


def _record(obj, lineno: int) -> QuestionRecord:
    where = f"line {lineno}"
    if not isinstance(obj, dict):
        raise ParseError("record is not an object", line=lineno)
    qid = _require(obj, "question_id", str, where)
    where = f"line {lineno} ({qid})"
    question = _require(obj, "question", str, where)
    reference = _require(obj, "reference_answer", str, where)
    profiles = _require(obj, "profiles", dict, where)
    if not all(isinstance(v, str) for v in profiles.values()):
        raise ValidationError(f"{where}: profile texts must be strings")
    units = []
    for u in _require(obj, "units", list, where):
        if not isinstance(u, dict) or not isinstance(u.get("id"), str) or not isinstance(u.get("text"), str):
            raise ValidationError(f"{where}: each unit needs string 'id' and 'text'")
        src = u.get("source")
        units.append(Item(u["id"], u["text"], None if src is None else str(src)))
    scores = obj.get("scores")
    if scores is not None:
        if not isinstance(scores, dict) or not all(isinstance(v, list) for v in scores.values()):
            raise ValidationError(f"{where}: 'scores' must map unit id to a list of numbers")
    try:
        return QuestionRecord(qid, question, reference, tuple(units), profiles, scores)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{where}: {exc}") from None


def parse_corpus(text: str) -> list[QuestionRecord]:
    records: list[QuestionRecord] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line, object_pairs_hook=_no_duplicate_keys)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        rec = _record(obj, lineno)
        if rec.question_id in seen:
            raise ValidationError(f"line {lineno}: duplicate question id {rec.question_id!r}")
        seen.add(rec.question_id)
        records.append(rec)
    if not records:
        raise ParseError("corpus contains no records")
    return records


def load_corpus(path: str | Path) -> list[QuestionRecord]:
    """Read a line-delimited JSON corpus, one question per line."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None
    return parse_corpus(text)


def score_units(q: QuestionRecord, scorer: UnitScorer = lexical_unit_scorer) -> ScoreMatrix:
    """Scoring table: rows are units sorted by id, columns follow profile order."""
    units = sorted(q.units, key=lambda u: u.id)
    k = len(q.profiles)
    if q.scores is not None:
        vals = [q.scores[u.id] for u in units]
    else:
        texts = list(q.profiles.values())
        vals = []
        for u in units:
            try:
                row = [float(x) for x in scorer(u.text or "", texts)]
            except Exception as exc:
                raise ScorerFailure(f"{q.question_id}: scorer failed on unit {u.id!r}: {exc}") from exc
            if len(row) != k or not all(math.isfinite(x) for x in row):
                raise ScorerFailure(f"{q.question_id}: scorer must return {k} finite scores for unit {u.id!r}")
            vals.append(row)
    return ScoreMatrix(tuple(units), q.system_ids, np.array(vals, dtype=float))


@dataclass(frozen=True)
class Selection:
    """One configuration's rank-1 unit and its ROUGE-L F1 against the reference."""

    config: FusionConfig
    unit_id: str
    f1: float
    fallback: bool = False


@dataclass(frozen=True)
class QuestionResult:
    question_id: str
    matrix: ScoreMatrix
    diversity: DiversityMatrix
    rsf: Mapping[str, RankScoreFunction]
    combos: tuple[Selection, ...]
    best: Mapping[Method, Selection]
    baselines: Mapping[str, Selection]

    def full_subset(self, method: Method) -> Selection:
        return next(s for s in reversed(self.combos) if s.config.method is method)


def run_question(
    q: QuestionRecord,
    scorer: UnitScorer = lexical_unit_scorer,
    *,
    normalize: bool = True,
    policy: TiePolicy = TiePolicy.FRACTIONAL,
) -> QuestionResult:
    matrix = score_units(q, scorer)
    div = diversity_matrix(matrix)
    rsf = {s.system_id: rank_score_function(s) for s in matrix.systems()}
    f1_cache: dict[str, float] = {}

    def f1_of(unit_id: str) -> float:
        if unit_id not in f1_cache:
            f1_cache[unit_id] = rouge_l_f1(q.unit(unit_id).text or "", q.reference_answer).f1
        return f1_cache[unit_id]

    combos = tuple(
        Selection(r.config, r.top_item, f1_of(r.top_item), r.fallback)
        for r in run_all(matrix, normalize=normalize, policy=policy)
    )
    best = {}
    for m in METHODS:
        rows = [s for s in combos if s.config.method is m]
        top = max(s.f1 for s in rows)
        best[m] = next(s for s in rows if s.f1 == top)
    baselines = {}
    for system in matrix.systems():
        unit = derive_ranking(system, policy).top()
        baselines[system.system_id] = Selection(FusionConfig((system.system_id,)), unit, f1_of(unit))
    return QuestionResult(q.question_id, matrix, div, rsf, combos, best, baselines)


@dataclass(frozen=True)
class PipelineReport:
    questions: tuple[QuestionResult, ...]
    method_means: Mapping[Method, float]
    baseline_means: Mapping[str, float]

    def to_dict(self) -> dict:
        return {
            "aggregates": {
                "methods": {m.value: v for m, v in self.method_means.items()},
                "baselines": dict(self.baseline_means),
            },
            "questions": [
                {
                    "question_id": qr.question_id,
                    "best": {
                        m.value: {"subset": s.config.label, "unit": s.unit_id, "f1": s.f1}
                        for m, s in qr.best.items()
                    },
                    "baselines": {k: {"unit": s.unit_id, "f1": s.f1} for k, s in qr.baselines.items()},
                    "ds": qr.diversity.ds_map(),
                    "combos": [
                        [s.config.label, s.config.method.value, s.unit_id, s.f1, int(s.fallback)]
                        for s in qr.combos
                    ],
                }
                for qr in self.questions
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"


def _mean(values: Iterable[float]) -> float:
    vals = list(values)
    return math.fsum(vals) / len(vals)


def aggregate(results: Sequence[QuestionResult]) -> PipelineReport:
    if not results:
        raise ValidationError("cannot aggregate an empty result set")
    methods = {m: _mean(r.best[m].f1 for r in results) for m in METHODS}
    systems: list[str] = []
    for r in results:
        systems.extend(s for s in r.baselines if s not in systems)
    baselines = {s: _mean(r.baselines[s].f1 for r in results if s in r.baselines) for s in systems}
    return PipelineReport(tuple(results), methods, baselines)


def run_corpus(
    corpus: Sequence[QuestionRecord],
    scorer: UnitScorer = lexical_unit_scorer,
    *,
    normalize: bool = True,
    policy: TiePolicy = TiePolicy.FRACTIONAL,
) -> PipelineReport:
    if not corpus:
        raise ValidationError("corpus must contain at least one question")
    results = []
    for q in corpus:
        try:
            results.append(run_question(q, scorer, normalize=normalize, policy=policy))
        except CFAError as exc:
            raise type(exc)(f"question {q.question_id}: {exc}") from exc
    return aggregate(results)


def _csv(rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def summary_csv(report: PipelineReport) -> str:
    n = len(report.questions)
    rows = [["group", "model", "mean_rouge_l_f1", "n_questions"]]
    rows += [["individual", s, repr(v), n] for s, v in report.baseline_means.items()]
    rows += [["cfa_fusion", m.value, repr(v), n] for m, v in report.method_means.items()]
    return _csv(rows)


def rsf_csv(qr: QuestionResult) -> str:
    systems = list(qr.rsf)
    n = len(qr.rsf[systems[0]])
    rows = [["rank", *systems]]
    rows += [[i + 1, *(repr(qr.rsf[s].values[i]) for s in systems)] for i in range(n)]
    return _csv(rows)


def combos_csv(qr: QuestionResult) -> str:
    rows = [["subset", "method", "f1"]]
    rows += [[s.config.label, s.config.method.value, repr(s.f1)] for s in qr.combos]
    return _csv(rows)


def emit_reports(report: PipelineReport, out_dir: str | Path) -> list[Path]:
    """Write summary.csv and per-question curve files into an empty directory."""
    out = Path(out_dir)
    try:
        if out.exists():
            if not out.is_dir():
                raise IoError(f"{out} exists and is not a directory")
            if any(out.iterdir()):
                raise IoError(f"{out} is not empty")
        for qr in report.questions:
            if any(c in qr.question_id for c in "/\\") or qr.question_id in ("", ".", ".."):
                raise IoError(f"question id {qr.question_id!r} is not usable as a file name")
        curves = out / "curves"
        curves.mkdir(parents=True, exist_ok=True)
        files = {out / "summary.csv": summary_csv(report)}
        for qr in report.questions:
            files[curves / f"{qr.question_id}_rsf.csv"] = rsf_csv(qr)
            files[curves / f"{qr.question_id}_combos.csv"] = combos_csv(qr)
        for path, text in files.items():
            path.write_text(text, encoding="utf-8", newline="")
    except IoError:
        raise
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return list(files)
