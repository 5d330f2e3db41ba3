#!/usr/bin/env python3
"""Run the full measurement pipeline on downloaded MEDLINE data.

Expects locally saved query results (MEDLINE text or canonical JSONL)
for any of the three showcase research areas plus a MeSH descriptor
file (NLM ASCII or TSV).  For each supplied corpus this runs ingest,
descriptive stats, the three count-map MI series, the T_CDE null band,
the scaling fits, and the cross-branch pair tables over the windows of
interest, then prints a compact summary.

Example:
    python scripts/replicate_medline.py --mesh d2014.bin \\
        --hpv hpv.medline --out runs/medline
"""

import argparse
import csv
import json
from pathlib import Path

from helixmi.cli import main as helixmi

QUERIES = {
    # query -> (year range, complementary pair branches, pair window)
    "hpv": ("1963:2013", "D,E", "1996:2002"),
    "rnai": ("1998:2013", "C,E", "2005:2008"),
    "mri": ("1978:2013", "C,D", "2002:2008"),
}


def run(args):
    argv = [str(a) for a in args]
    code = helixmi(argv)
    if code != 0:
        raise SystemExit(f"step failed ({code}): {' '.join(argv)}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mesh", required=True, help="MeSH descriptor file")
    for query in QUERIES:
        parser.add_argument(f"--{query}", help=f"{query.upper()} corpus file")
    parser.add_argument("--out", default="runs/medline")
    parser.add_argument("--replicates", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    supplied = {q: getattr(args, q) for q in QUERIES if getattr(args, q)}
    if not supplied:
        parser.error("supply at least one corpus (--hpv / --rnai / --mri)")

    out = Path(args.out)
    for query, corpus_path in supplied.items():
        years, pair, window = QUERIES[query]
        base = out / query
        source = ["--corpus", corpus_path, "--mesh", args.mesh,
                  "--years", years, "--label", query.upper()]
        run(["ingest"] + source + ["--out", base / "ingest"])
        run(["stats"] + source + ["--out", base / "stats"])
        for map_kind in ("binary", "median", "full"):
            run(["mi"] + source + ["--map", map_kind, "--out", base / f"mi-{map_kind}"])
        run(["null"] + source + ["--map", "full", "--target", "T_CDE",
             "--replicates", args.replicates, "--seed", args.seed,
             "--out", base / "null"])
        run(["scaling"] + source + ["--out", base / "scaling"])
        run(["dynamics"] + source + ["--pair-branches", pair,
             "--window", window, "--out", base / "dynamics"])

        with open(base / "stats" / "stats.csv", encoding="utf-8") as fh:
            stats = next(csv.DictReader(fh))
        with open(base / "scaling" / "scaling.json", encoding="utf-8") as fh:
            fits = json.load(fh)
        with open(base / "dynamics" / "pairs.csv", encoding="utf-8") as fh:
            top_pair = next(csv.DictReader(fh), None)
        print(f"== {query.upper()}")
        print(f"   A_q={stats['A_q']}  V_q={stats['V_q']}  "
              f"mean_mesh={float(stats['mean_mesh']):.1f}  "
              f"medians C/D/E = {stats['med_C']}/{stats['med_D']}/{stats['med_E']}")
        print(f"   zipf xi={fits['zipf']['exponent']:.3f}  "
              f"heaps beta={fits['heaps']['exponent']:.3f}")
        if top_pair:
            print(f"   top {pair} pair {window}: {top_pair['name_a']} & "
                  f"{top_pair['name_b']} ({top_pair['co_count']} publications)")


if __name__ == "__main__":
    main()
