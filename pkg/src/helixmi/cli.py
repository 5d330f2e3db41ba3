"""Command-line front end with reproducible run manifests.

Every subcommand writes its outputs plus a ``manifest.json`` recording
input hashes and the full configuration; two runs with equal manifests
(timestamp aside) produce byte-identical outputs.  Exit codes: 0 on
success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .corpus import (
    Corpus,
    CorpusFormatError,
    IngestReport,
    corpus_canonical_bytes,
    ingest_jsonl,
    ingest_medline_text,
    write_corpus_jsonl,
    yearly_sizes,
)
from .counts import BRANCHES, branch_stats, corpus_triples, wilcoxon_signed_rank
from .dynamics import branch_share_series, detect_entries, rank_trajectories, top_pairs
from .infotheory import efficiency, yearly_mi
from .mesh import MeshFormatError, Vocabulary, load_mesh_ascii, load_mesh_tsv, write_mesh_tsv
from .nullmodel import TARGETS, ShuffleConfig, null_band
from .scaling import descriptor_counts, heaps_fit, rank_table, zipf_fit
from .synth import MODES, SynthConfig, synth_corpus


def _fmt(value) -> str:
    """Shortest round-trip cell formatting for CSV output."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    command: str
    inputs: list[dict] = field(default_factory=list)
    vocabulary_sha256: str | None = None
    config: dict = field(default_factory=dict)
    tool_version: str = __version__
    timestamp: str = ""

    def add_input(self, path: str) -> None:
        self.inputs.append({"path": str(path), "sha256": file_sha256(path)})

    def write(self, out_dir: Path) -> None:
        self.timestamp = datetime.now(timezone.utc).isoformat()
        _write_json(out_dir / "manifest.json", asdict(self))


def _detect_and_load_mesh(path: str) -> Vocabulary:
    with open(path, "rb") as fh:
        head = fh.read(4096)
    first = head.split(b"\n", 1)[0]
    if b"\t" in first:
        return load_mesh_tsv(path)
    return load_mesh_ascii(path)


def _detect_and_ingest(
    path: str, vocabulary: Vocabulary, year_range, label: str
) -> tuple[Corpus, IngestReport]:
    with open(path, "rb") as fh:
        head = fh.read(4096).lstrip()
    if head.startswith(b"{"):
        return ingest_jsonl(path, vocabulary, year_range, label)
    return ingest_medline_text(path, vocabulary, year_range, label)


def _year_range_arg(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None


def _branch_pair_arg(text: str) -> tuple[str, str]:
    parts = [p.strip().upper() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected two branches like D,E, got {text!r}")
    return parts[0], parts[1]


def _synth_years_arg(text: str) -> int | tuple[int, int]:
    if ":" in text:
        return _year_range_arg(text)
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a year count or LO:HI, got {text!r}"
        ) from None


def _lam_arg(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    try:
        if len(parts) != 3:
            raise ValueError
        c, d, e = (float(p) for p in parts)
        return c, d, e
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated rates, got {text!r}"
        ) from None


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("HELIX_THREADS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _load_inputs(args, manifest: RunManifest):
    vocabulary = _detect_and_load_mesh(args.mesh)
    manifest.add_input(args.mesh)
    manifest.vocabulary_sha256 = file_sha256(args.mesh)
    label = getattr(args, "label", None) or Path(args.corpus).stem
    corpus, report = _detect_and_ingest(args.corpus, vocabulary, args.years, label)
    manifest.add_input(args.corpus)
    return vocabulary, corpus, report


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_ingest(args, out_dir: Path, manifest: RunManifest) -> int:
    _, corpus, report = _load_inputs(args, manifest)
    write_corpus_jsonl(corpus, str(out_dir / "corpus.jsonl"))
    _write_json(out_dir / "ingest_report.json", report.to_json_dict())
    return 0


def _cmd_stats(args, out_dir: Path, manifest: RunManifest) -> int:
    _, corpus, _ = _load_inputs(args, manifest)
    stats = branch_stats(corpus, args.counting)
    sizes = yearly_sizes(corpus)
    total_assignments = sum(r.total_descriptors for r in sizes)
    distinct: set[str] = set()
    for p in corpus.publications:
        distinct.update(p.mesh_ids)

    header = ["query", "A_q", "V_q", "mean_mesh"]
    row: list = [corpus.query_label, len(corpus), len(distinct),
                 total_assignments / len(corpus) if len(corpus) else 0.0]
    for alpha in BRANCHES:
        header += [f"mean_{alpha}", f"sd_{alpha}", f"med_{alpha}"]
        row += [stats.mean[alpha], stats.std[alpha], stats.median[alpha]]
    _write_csv(out_dir / "stats.csv", header, [row])

    triples = corpus_triples(corpus, args.counting)
    wilcoxon_rows = []
    for i, a in enumerate(BRANCHES):
        for j, b in enumerate(BRANCHES):
            if i < j:
                res = wilcoxon_signed_rank(triples[:, i], triples[:, j])
                wilcoxon_rows.append([a, b, res.statistic, res.p_value, res.n_effective])
    _write_csv(
        out_dir / "wilcoxon.csv",
        ["branch_a", "branch_b", "statistic", "p_value", "n_effective"],
        wilcoxon_rows,
    )

    yearly_rows = []
    for r in sizes:
        eff = {}
        year_counts = descriptor_counts(corpus, r.year)
        for alpha in BRANCHES:
            usage = [
                c
                for uid, c in year_counts.items()
                if alpha in corpus.vocabulary.descriptors[uid].branches
            ]
            eff[alpha] = efficiency(usage) if usage else None
        yearly_rows.append(
            [r.year, r.publications, r.total_descriptors, r.distinct_descriptors,
             r.mean_per_publication, eff["C"], eff["D"], eff["E"]]
        )
    _write_csv(
        out_dir / "yearly.csv",
        ["year", "A_q", "M_q", "V_q", "mean_mesh", "eff_C", "eff_D", "eff_E"],
        yearly_rows,
    )
    return 0


MI_HEADER = [
    "year", "map", "H_C", "H_D", "H_E", "H_CD", "H_CE", "H_DE", "H_CDE",
    "T_CD", "T_CE", "T_DE", "T_CDE", "n_obs", "low_support",
]


def _cmd_mi(args, out_dir: Path, manifest: RunManifest) -> int:
    _, corpus, _ = _load_inputs(args, manifest)
    series = yearly_mi(corpus, map_kind=args.map, counting=args.counting)
    rows = [
        [r.year, series.map_kind, r.h_c, r.h_d, r.h_e, r.h_cd, r.h_ce, r.h_de,
         r.h_cde, r.t_cd, r.t_ce, r.t_de, r.t_cde, r.n_obs, r.low_support]
        for r in series.records
    ]
    _write_csv(out_dir / "mi.csv", MI_HEADER, rows)
    return 0


def _cmd_null(args, out_dir: Path, manifest: RunManifest) -> int:
    _, corpus, _ = _load_inputs(args, manifest)
    config = ShuffleConfig(
        replicates=args.replicates,
        ci_level=args.ci,
        seed=args.seed,
        map_kind=args.map,
        counting=args.counting,
        threads=_resolve_threads(args.threads),
    )
    band = null_band(corpus, config, args.target)
    rows = [
        [r.year, band.target, band.map_kind, r.observed, r.mean_rand, r.lo, r.hi, r.flag]
        for r in band.rows
    ]
    _write_csv(
        out_dir / "null_band.csv",
        ["year", "target", "map", "observed", "mean_rand", "lo", "hi", "flag"],
        rows,
    )
    _write_json(
        out_dir / "null_manifest.json",
        {
            "seed": config.seed,
            "replicates": config.replicates,
            "ci_level": config.ci_level,
            "corpus_hash": hashlib.sha256(corpus_canonical_bytes(corpus)).hexdigest(),
        },
    )
    return 0


def _cmd_scaling(args, out_dir: Path, manifest: RunManifest) -> int:
    _, corpus, _ = _load_inputs(args, manifest)
    table = rank_table(corpus, "all")
    zipf = zipf_fit(table, min_count=args.min_count)
    sizes = yearly_sizes(corpus)
    heaps = heaps_fit([(r.total_descriptors, r.distinct_descriptors) for r in sizes])
    _write_json(
        out_dir / "scaling.json",
        {"zipf": asdict(zipf), "heaps": asdict(heaps)},
    )
    _write_csv(
        out_dir / "zipf_points.csv",
        ["rank", "descriptor", "count"],
        [[e.rank, e.descriptor_id, e.count] for e in table.entries],
    )
    _write_csv(
        out_dir / "heaps_points.csv",
        ["year", "M_q", "V_q"],
        [[r.year, r.total_descriptors, r.distinct_descriptors] for r in sizes],
    )
    return 0


def _cmd_dynamics(args, out_dir: Path, manifest: RunManifest) -> int:
    _, corpus, _ = _load_inputs(args, manifest)
    matrix = rank_trajectories(corpus, k=args.topk)
    header = ["descriptor", "primary_branch"] + [str(y) for y in matrix.years]
    rows = []
    for i, uid in enumerate(matrix.descriptor_ids):
        branch = corpus.vocabulary.descriptors[uid].primary_branch
        rows.append([uid, branch] + [int(c) for c in matrix.cells[i]])
    _write_csv(out_dir / "trajectories.csv", header, rows)

    entries = detect_entries(corpus, k=args.topk)
    _write_csv(
        out_dir / "entries.csv",
        ["descriptor", "birth_year", "impact", "primary_branch"],
        [[e.descriptor_id, e.birth_year, e.impact, e.primary_branch] for e in entries],
    )

    branch_a, branch_b = args.pair_branches
    pairs = top_pairs(corpus, branch_a, branch_b, window=args.window, limit=args.limit)
    _write_pairs_csv(out_dir / "pairs.csv", corpus, pairs, branch_a, branch_b)

    shares = branch_share_series(corpus, args.counting)
    _write_csv(
        out_dir / "shares.csv",
        ["year", "share_C", "share_D", "share_E"],
        [[s.year, s.share_c, s.share_d, s.share_e] for s in shares],
    )
    return 0


def _write_pairs_csv(path: Path, corpus: Corpus, pairs, branch_a: str, branch_b: str) -> None:
    rows = []
    for p in pairs:
        name_a = corpus.vocabulary.descriptors[p.descriptor_a].name
        name_b = corpus.vocabulary.descriptors[p.descriptor_b].name
        rows.append(
            [branch_a, p.descriptor_a, name_a, branch_b, p.descriptor_b, name_b,
             p.co_count, p.window[0], p.window[1]]
        )
    _write_csv(
        path,
        ["branch_a", "descriptor_a", "name_a", "branch_b", "descriptor_b", "name_b",
         "co_count", "year_lo", "year_hi"],
        rows,
    )


def _cmd_pairs(args, out_dir: Path, manifest: RunManifest) -> int:
    _, corpus, _ = _load_inputs(args, manifest)
    branch_a, branch_b = args.branches
    pairs = top_pairs(corpus, branch_a, branch_b, window=args.window, limit=args.limit)
    _write_pairs_csv(out_dir / "pairs.csv", corpus, pairs, branch_a, branch_b)
    return 0


def _cmd_synth(args, out_dir: Path, manifest: RunManifest) -> int:
    if isinstance(args.years, tuple):
        start_year, n_years = args.years[0], args.years[1] - args.years[0] + 1
    else:
        start_year, n_years = args.start_year, args.years
    config = SynthConfig(
        mode=args.mode,
        pubs_per_year=args.pubs,
        years=n_years,
        seed=args.seed,
        rho=args.rho,
        lam=args.lam,
        sigma=args.sigma,
        start_year=start_year,
    )
    corpus = synth_corpus(config)
    write_corpus_jsonl(corpus, str(out_dir / "corpus.jsonl"))
    write_mesh_tsv(corpus.vocabulary, str(out_dir / "mesh.tsv"))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_io_options(sub, years_help: str = "restrict to years LO:HI") -> None:
    sub.add_argument("--corpus", required=True, help="corpus file (JSONL or MEDLINE text)")
    sub.add_argument("--mesh", required=True, help="descriptor file (NLM ASCII or TSV)")
    sub.add_argument("--years", type=_year_range_arg, default=None, help=years_help)
    sub.add_argument("--label", default=None, help="query label for outputs")
    sub.add_argument(
        "--counting",
        choices=["membership", "primary"],
        default="membership",
        help="how multi-branch descriptors are counted",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="helixmi", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub = commands.add_parser("ingest", help="parse a corpus into canonical JSONL")
    _add_io_options(sub)

    sub = commands.add_parser("stats", help="descriptive branch statistics")
    _add_io_options(sub)

    sub = commands.add_parser("mi", help="yearly entropy and mutual information")
    _add_io_options(sub)
    sub.add_argument("--map", choices=["binary", "median", "full"], default="full")

    sub = commands.add_parser("null", help="shuffling null model confidence bands")
    _add_io_options(sub)
    sub.add_argument("--map", choices=["binary", "median", "full"], default="full")
    sub.add_argument("--target", choices=list(TARGETS), default="T_CDE")
    sub.add_argument("--replicates", type=int, default=100)
    sub.add_argument("--ci", type=float, default=0.90)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: HELIX_THREADS or machine parallelism)")

    sub = commands.add_parser("scaling", help="rank-frequency and vocabulary-growth fits")
    _add_io_options(sub)
    sub.add_argument("--min-count", type=int, default=5)

    sub = commands.add_parser("dynamics", help="rank trajectories, entries, pairs, shares")
    _add_io_options(sub)
    sub.add_argument("--topk", type=int, default=200)
    sub.add_argument("--pair-branches", type=_branch_pair_arg, default=("D", "E"))
    sub.add_argument("--window", type=_year_range_arg, default=None, help="pair window LO:HI")
    sub.add_argument("--limit", type=int, default=10)

    sub = commands.add_parser("pairs", help="most frequent cross-branch descriptor pairs")
    _add_io_options(sub)
    sub.add_argument("--branches", type=_branch_pair_arg, default=("D", "E"))
    sub.add_argument("--window", type=_year_range_arg, default=None, help="pair window LO:HI")
    sub.add_argument("--limit", type=int, default=10)

    sub = commands.add_parser("synth", help="generate a synthetic corpus")
    sub.add_argument("--mode", choices=list(MODES), required=True)
    sub.add_argument("--pubs", type=int, required=True, help="publications per year")
    sub.add_argument("--years", type=_synth_years_arg, required=True,
                     help="number of years, or LO:HI")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--rho", type=float, default=1.0)
    sub.add_argument("--lam", type=_lam_arg, default=(2.0, 1.0, 2.0),
                     help="Poisson rates for C,D,E")
    sub.add_argument("--sigma", type=float, default=0.5,
                     help="intensity spread for sizemix mode")
    sub.add_argument("--start-year", type=int, default=2000)

    for name, sub in commands.choices.items():
        sub.add_argument("--out", required=True, help="output directory")

    return parser


_COMMANDS = {
    "ingest": _cmd_ingest,
    "stats": _cmd_stats,
    "mi": _cmd_mi,
    "null": _cmd_null,
    "scaling": _cmd_scaling,
    "dynamics": _cmd_dynamics,
    "pairs": _cmd_pairs,
    "synth": _cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(command=args.command)
    manifest.config = {
        k: v for k, v in vars(args).items() if k not in {"command", "out"}
    }
    try:
        code = _COMMANDS[args.command](args, out_dir, manifest)
    except (MeshFormatError, CorpusFormatError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"helixmi {args.command}: error: {exc}", file=sys.stderr)
        return 2
    manifest.write(out_dir)
    return code


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
