"""Descriptor-level temporal analytics.

Covers the rank-trajectory view of the top-K descriptors (yearly rank
folded into six percentile bands), the detection of descriptors
entering a corpus after its first year with a net-impact score, the
most frequent cross-branch descriptor pairs, and the yearly branch
occupancy shares.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .counts import BRANCHES, corpus_triples
from .scaling import descriptor_counts, rank_table

ABSENT = -2
OUT_OF_TOPK = -1


def sextile_sizes(k: int) -> list[int]:
    """Partition sizes of ranks 1..k into six contiguous bands.

    A nominal "six groups of 33" covers only 198 of the top 200, so the
    remainder is spread over the leading bands: k = 200 gives
    (34, 34, 33, 33, 33, 33).
    """
    q, rem = divmod(k, 6)
    return [q + 1] * rem + [q] * (6 - rem)


def sextile_of(rank: int, k: int) -> int:
    """1-based band index of a rank in 1..k."""
    if not 1 <= rank <= k:
        raise ValueError(f"rank {rank} outside 1..{k}")
    upper = 0
    for i, size in enumerate(sextile_sizes(k), start=1):
        upper += size
        if rank <= upper:
            return i
    raise AssertionError("unreachable")


@dataclass
class RankTrajectoryMatrix:
    """Rows: top-K descriptors by all-years usage; columns: years.

    Cell codes: -2 absent that year, -1 present but ranked beyond K,
    1..6 the yearly-rank sextile.
    """

    descriptor_ids: list[str]
    years: list[int]
    cells: np.ndarray
    k: int


def rank_trajectories(corpus: Corpus, k: int = 200) -> RankTrajectoryMatrix:
    years = corpus.years()
    if len(years) < 2:
        raise ValueError("rank trajectories need a corpus spanning at least 2 years")
    overall = rank_table(corpus, "all")
    k = min(k, len(overall.entries))
    top = [e.descriptor_id for e in overall.entries[:k]]
    row_of = {uid: i for i, uid in enumerate(top)}

    cells = np.full((k, len(years)), ABSENT, dtype=np.int64)
    for j, year in enumerate(years):
        yearly = rank_table(corpus, year)
        for entry in yearly.entries:
            i = row_of.get(entry.descriptor_id)
            if i is None:
                continue
            if entry.rank > k:
                cells[i, j] = OUT_OF_TOPK
            else:
                cells[i, j] = sextile_of(entry.rank, k)
    return RankTrajectoryMatrix(descriptor_ids=top, years=years, cells=cells, k=k)


@dataclass(frozen=True)
class EntryRecord:
    descriptor_id: str
    birth_year: int
    impact: float
    primary_branch: str


def detect_entries(corpus: Corpus, k: int = 200) -> list[EntryRecord]:
    """Top-K descriptors whose first appearance postdates the corpus start.

    Descriptors already present in the first year are left-censored
    (entry cannot be distinguished from pre-existing use) and skipped.
    The impact of an entrant is its appearance count from birth year to
    the end, normalized by the appearances of the whole top-K set over
    that same window.
    """
    years = corpus.years()
    if not years:
        return []
    first_year = years[0]
    overall = rank_table(corpus, "all")
    k = min(k, len(overall.entries))
    top = {e.descriptor_id for e in overall.entries[:k]}

    yearly_counts = {y: descriptor_counts(corpus, y) for y in years}
    births: dict[str, int] = {}
    for uid in top:
        for y in years:
            if yearly_counts[y].get(uid, 0) > 0:
                births[uid] = y
                break

    # suffix sums of the top-K appearance mass, so each entrant's
    # normalizer (birth year through the end) is a single lookup
    topk_mass_from: dict[int, int] = {}
    acc = 0
    for y in reversed(years):
        acc += sum(yearly_counts[y].get(uid, 0) for uid in top)
        topk_mass_from[y] = acc

    entries = []
    for uid, birth in sorted(births.items()):
        if birth == first_year:
            continue
        own = sum(yearly_counts[y].get(uid, 0) for y in years if y >= birth)
        normalizer = topk_mass_from[birth]
        impact = own / normalizer if normalizer else 0.0
        entries.append(
            EntryRecord(
                descriptor_id=uid,
                birth_year=birth,
                impact=impact,
                primary_branch=corpus.vocabulary.descriptors[uid].primary_branch,
            )
        )
    entries.sort(key=lambda e: (e.birth_year, -e.impact, e.descriptor_id))
    return entries


@dataclass(frozen=True)
class PairRecord:
    descriptor_a: str
    descriptor_b: str
    co_count: int
    window: tuple[int, int]


def top_pairs(
    corpus: Corpus,
    branch_a: str,
    branch_b: str,
    window: tuple[int, int] | None = None,
    limit: int = 10,
) -> list[PairRecord]:
    """Most frequent cross-branch descriptor pairs by publication presence.

    A publication counts once toward a pair if it carries both
    descriptors, regardless of multiplicity.  Branch membership is used,
    so a descriptor affiliated with both branches can appear on either
    side, but never paired with itself.
    """
    if branch_a == branch_b or branch_a not in BRANCHES or branch_b not in BRANCHES:
        raise ValueError("branches must be two distinct letters among C, D, E")
    years = corpus.years()
    if window is None:
        if not years:
            return []
        window = (years[0], years[-1])
    lo, hi = window
    counter: Counter[tuple[str, str]] = Counter()
    for year in years:
        if not lo <= year <= hi:
            continue
        for p in corpus.publications_in(year):
            side_a = [
                uid
                for uid in p.mesh_ids
                if branch_a in corpus.vocabulary.descriptors[uid].branches
            ]
            side_b = [
                uid
                for uid in p.mesh_ids
                if branch_b in corpus.vocabulary.descriptors[uid].branches
            ]
            for a in side_a:
                for b in side_b:
                    if a != b:
                        counter[(a, b)] += 1
    ordered = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        PairRecord(descriptor_a=a, descriptor_b=b, co_count=c, window=window)
        for (a, b), c in ordered[:limit]
    ]


@dataclass(frozen=True)
class BranchShare:
    year: int
    share_c: float | None
    share_d: float | None
    share_e: float | None


def branch_share_series(corpus: Corpus, counting: str = "membership") -> list[BranchShare]:
    """Yearly fraction of C/D/E descriptor occurrences held by each branch."""
    triples = corpus_triples(corpus, counting)
    rows = []
    for year in corpus.years():
        idx = np.asarray(corpus.by_year[year], dtype=np.intp)
        totals = triples[idx].sum(axis=0)
        denom = int(totals.sum())
        if denom == 0:
            rows.append(BranchShare(year, None, None, None))
        else:
            c, d, e = (float(t) / denom for t in totals)
            rows.append(BranchShare(year, c, d, e))
    return rows
