#!/usr/bin/env python3
"""Time the full pipeline at production corpus scale.

Builds a corpus shaped like a large retrieval query result: tens of
thousands of publications over decades, Zipf-weighted fingerprints
drawn from a multi-branch vocabulary, exponential yearly growth.  Then
times ingest, stats, the MI series, the 100-replicate null band, the
scaling fits and the dynamics derivations.
"""

import argparse
import json
import time
from pathlib import Path

import numpy as np

from helixmi.cli import main as helixmi
from helixmi.mesh import TSV_HEADER

BRANCH_WHEEL = "CDECDEABFGHN"  # half the vocabulary inside C/D/E


def build_inputs(out, n_pubs, n_vocab, year_lo, year_hi, seed):
    rng = np.random.default_rng(seed)
    mesh_path = out / "mesh.tsv"
    with open(mesh_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TSV_HEADER + "\n")
        for i in range(n_vocab):
            branch = BRANCH_WHEEL[i % len(BRANCH_WHEEL)]
            fh.write(f"T{i:06d}\tSynthetic term {i}\t{branch}01.{i:06d}\n")

    # Zipfian descriptor popularity, exponential growth in yearly volume
    weights = 1.0 / np.arange(1, n_vocab + 1)
    weights /= weights.sum()
    years = np.arange(year_lo, year_hi + 1)
    growth = np.exp(0.08 * np.arange(len(years)))
    per_year = np.maximum(1, (n_pubs * growth / growth.sum()).astype(int))

    corpus_path = out / "corpus.jsonl"
    serial = 0
    with open(corpus_path, "w", encoding="utf-8", newline="\n") as fh:
        for year, count in zip(years, per_year):
            sizes = rng.poisson(11, size=count).clip(1, 40)
            for size in sizes:
                ids = rng.choice(n_vocab, size=size, replace=False, p=weights)
                mesh = [f"T{i:06d}" for i in sorted(ids)]
                fh.write(json.dumps(
                    {"id": str(serial), "year": int(year), "mesh": mesh},
                    sort_keys=True, separators=(",", ":")) + "\n")
                serial += 1
    return mesh_path, corpus_path, serial


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/benchmark")
    parser.add_argument("--pubs", type=int, default=62_000)
    parser.add_argument("--vocab", type=int, default=16_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    mesh, corpus, total = build_inputs(out, args.pubs, args.vocab, 1978, 2013, args.seed)
    print(f"generated {total} publications in {time.perf_counter() - t0:.1f}s")

    source = ["--corpus", str(corpus), "--mesh", str(mesh)]
    steps = [
        ("ingest", ["ingest"] + source),
        ("stats", ["stats"] + source),
        ("mi-full", ["mi"] + source + ["--map", "full"]),
        ("null-100", ["null"] + source + ["--map", "full", "--target", "T_CDE",
                                          "--replicates", "100", "--seed", "9"]),
        ("scaling", ["scaling"] + source),
        ("dynamics", ["dynamics"] + source + ["--topk", "200"]),
    ]
    for name, argv in steps:
        t0 = time.perf_counter()
        code = helixmi(argv + ["--out", str(out / name)])
        if code != 0:
            raise SystemExit(f"{name} failed with exit code {code}")
        print(f"{name:10s} {time.perf_counter() - t0:6.1f}s")

    fits = json.loads((out / "scaling" / "scaling.json").read_text())
    print(f"zipf xi = {fits['zipf']['exponent']:.3f}  "
          f"heaps beta = {fits['heaps']['exponent']:.3f}")


if __name__ == "__main__":
    main()
