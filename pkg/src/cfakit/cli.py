"""Command-line front end: ``cfakit <subcommand> ...``.

Every subcommand writes CSV or plain text, to ``-o/--output`` when given and
to stdout otherwise. ``pipeline`` writes a directory of reports, taken from
``--out-dir`` or the ``CFAKIT_OUTPUT_DIR`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .core import ScoreMatrix, TiePolicy, rank_score_function
from .data import toy_corpus_path
from .diversity import diversity_matrix
from .errors import CFAError
from .fusion import fusion_report_csv, run_all
from .kemeny import (
    build_bubble_sort_graph,
    describe_graph,
    enumerate_weak_orders,
    verify_recursive_structure,
)
from .metrics import SCORERS
from .pipeline import emit_reports, load_corpus, run_corpus
from .simulate import DEFAULT_STUDY_SPEC, diversity_study

OUTPUT_ENV = "CFAKIT_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")


def _add_matrix(p: argparse.ArgumentParser) -> None:
    p.add_argument("matrix", type=Path, help="score matrix CSV: item_id,<system_1>,...,<system_k>")


def _tie_policy(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--tie-policy",
        choices=[t.value for t in TiePolicy],
        default=TiePolicy.FRACTIONAL.value,
        help="how tied scores are ranked (default: fractional)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfakit", description="Combinatorial fusion analysis toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("fuse", help="run every subset under ASC, ARC, WSCDS and WRCDS")
    _add_matrix(p)
    _add_output(p)
    _tie_policy(p)
    p.add_argument("--no-normalize", action="store_true", help="combine raw scores in ASC/WSCDS")
    p.add_argument("--min-size", type=int, default=2, help="smallest subset size (default: 2)")

    p = sub.add_parser("diversity", help="pairwise cognitive diversity and diversity strength")
    _add_matrix(p)
    _add_output(p)
    p.add_argument("--raw", action="store_true", help="use unnormalized rank-score functions")

    p = sub.add_parser("rsf", help="rank-score function curves, one column per system")
    _add_matrix(p)
    _add_output(p)
    p.add_argument("--raw", action="store_true", help="use unnormalized scores")

    p = sub.add_parser("kemeny", help="bubble-sort Cayley graph or weak-order enumeration")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph", type=int, metavar="N", help="build B_N and print its properties")
    g.add_argument("--weak-orders", type=int, metavar="N", help="count the weak orders on N items")
    p.add_argument("--edges", type=Path, help="with --graph: write the edge list to this file")
    _add_output(p)

    p = sub.add_parser("pipeline", help="score, fuse, select and evaluate a unit-pool corpus")
    p.add_argument("corpus", type=Path, nargs="?", help="JSONL corpus (default: bundled toy corpus)")
    p.add_argument("--out-dir", type=Path, help=f"empty output directory (default: ${OUTPUT_ENV})")
    p.add_argument("--scorer", choices=sorted(SCORERS), default="lexical")
    p.add_argument("--no-normalize", action="store_true", help="combine raw scores in ASC/WSCDS")
    _tie_policy(p)

    p = sub.add_parser("simulate", help="seeded diversity study on synthetic scoring systems")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=DEFAULT_STUDY_SPEC.seed)
    p.add_argument("--n-items", type=int, default=DEFAULT_STUDY_SPEC.n_items)
    p.add_argument("--normalize", action="store_true", help="normalize scores before ASC/WSCDS")
    _add_output(p)
    return parser


def _check_output(path: Path | None) -> None:
    if path is not None and not path.resolve().parent.is_dir():
        raise UsageError(f"output directory {path.parent} does not exist")


def _check_input(path: Path) -> None:
    if not path.is_file():
        raise UsageError(f"input file {path} not found")


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="")


def _cmd_fuse(args) -> None:
    matrix = ScoreMatrix.read_csv(args.matrix)
    results = run_all(
        matrix,
        normalize=not args.no_normalize,
        policy=TiePolicy(args.tie_policy),
        min_size=args.min_size,
    )
    _emit(fusion_report_csv(results), args.output)


def _cmd_diversity(args) -> None:
    matrix = ScoreMatrix.read_csv(args.matrix)
    _emit(diversity_matrix(matrix, normalize=not args.raw).to_csv(), args.output)


def _cmd_rsf(args) -> None:
    matrix = ScoreMatrix.read_csv(args.matrix)
    curves = [rank_score_function(s, normalize=not args.raw).values for s in matrix.systems()]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", *matrix.system_ids])
    for i in range(matrix.n_items):
        w.writerow([i + 1, *(repr(c[i]) for c in curves)])
    _emit(buf.getvalue(), args.output)


def _cmd_kemeny(args) -> None:
    if args.graph is not None:
        g = build_bubble_sort_graph(args.graph)
        lines = [describe_graph(g)]
        if g.n >= 3:
            lines.append(verify_recursive_structure(g).summary())
        if args.edges is not None:
            args.edges.write_text(g.edge_list_text(), encoding="utf-8", newline="")
    else:
        if args.edges is not None:
            raise UsageError("--edges requires --graph")
        n = args.weak_orders
        count = len(enumerate_weak_orders(n))
        lines = [f"{count} weak orders on {n} items ({math.factorial(n)} permutations)"]
    _emit("\n".join(lines) + "\n", args.output)


def _cmd_pipeline(args) -> None:
    out_dir = args.out_dir or (Path(os.environ[OUTPUT_ENV]) if os.environ.get(OUTPUT_ENV) else None)
    if out_dir is None:
        raise UsageError(f"pipeline needs --out-dir or ${OUTPUT_ENV}")
    corpus_path = args.corpus or toy_corpus_path()
    corpus = load_corpus(corpus_path)
    report = run_corpus(
        corpus,
        SCORERS[args.scorer],
        normalize=not args.no_normalize,
        policy=TiePolicy(args.tie_policy),
    )
    emit_reports(report, out_dir)
    lines = [f"{len(report.questions)} questions -> {out_dir}"]
    lines += [f"{m.value}: {v:.4f}" for m, v in report.method_means.items()]
    lines += [f"{s}: {v:.4f}" for s, v in report.baseline_means.items()]
    sys.stdout.write("\n".join(lines) + "\n")


def _cmd_simulate(args) -> None:
    spec = replace(
        DEFAULT_STUDY_SPEC,
        seed=args.seed,
        n_items=args.n_items,
    )
    report = diversity_study(spec, args.trials, normalize=args.normalize)
    _emit(report.to_csv(), args.output)


COMMANDS = {
    "fuse": _cmd_fuse,
    "diversity": _cmd_diversity,
    "rsf": _cmd_rsf,
    "kemeny": _cmd_kemeny,
    "pipeline": _cmd_pipeline,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_output(getattr(args, "output", None))
        _check_output(getattr(args, "edges", None))
        for name in ("matrix", "corpus"):
            if getattr(args, name, None) is not None:
                _check_input(getattr(args, name))
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cfakit: error: {exc}", file=sys.stderr)
        return 2
    except (CFAError, OSError) as exc:
        print(f"cfakit: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
