"""Regenerate the oracle fixtures for the toy corpus.

Uses tests/oracles.py only, never the package under test:

    python tests/data/make_oracle_fixtures.py
"""

import csv
import json
import math
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))
import oracles  # noqa: E402

CORPUS = HERE.parents[1] / "src" / "cfakit" / "data" / "toy_corpus.jsonl"


def main():
    records = [json.loads(line) for line in CORPUS.read_text(encoding="utf-8").splitlines() if line.strip()]
    out = {}
    for rec in records:
        res = oracles.run_question(rec)
        out[rec["question_id"]] = {
            "n_units": len(res["ids"]),
            "best": {m: {"subset": s, "unit": u, "f1": f} for m, (s, u, f) in res["best"].items()},
            "baselines": {s: {"unit": u, "f1": f} for s, (u, f) in res["baselines"].items()},
        }
        if rec["question_id"] == "q_0003":
            with open(HERE / "q_0003_scores.csv", "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["item_id", *rec["profiles"]])
                for i, uid in enumerate(res["ids"]):
                    w.writerow([uid, *(repr(c[i]) for c in res["columns"])])
    methods = ("ASC", "ARC", "WSCDS", "WRCDS")
    systems = list(records[0]["profiles"])
    aggregates = {
        "methods": {m: math.fsum(q["best"][m]["f1"] for q in out.values()) / len(out) for m in methods},
        "baselines": {s: math.fsum(q["baselines"][s]["f1"] for q in out.values()) / len(out) for s in systems},
    }
    payload = {"questions": out, "aggregates": aggregates}
    (HERE / "toy_oracle.json").write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
