"""Rank-frequency and vocabulary-growth power-law fits.

Descriptor usage follows a Zipf-type rank-frequency law
C(r) = C(1) * r^-xi, and yearly vocabulary size follows a Heaps-type
allometry V = b * M^beta.  Both exponents are estimated by ordinary
least squares on log-log coordinates; the Zipf fit restricts to ranks
whose count clears a floor, since the far tail is truncated by finite
corpus size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.stats import linregress

from .corpus import Corpus


@dataclass(frozen=True)
class RankEntry:
    rank: int
    descriptor_id: str
    count: float  # integer for real corpora; float admits synthetic laws


@dataclass
class RankTable:
    """Descriptors sorted by descending usage; ties broken by id."""

    scope: str
    entries: list[RankEntry]

    def counts(self) -> list[int]:
        return [e.count for e in self.entries]


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    prefactor: float
    stderr_exponent: float
    r_squared: float
    fit_range: tuple[float, float]
    n_points: int


def descriptor_counts(corpus: Corpus, scope: str | int = "all") -> dict[str, int]:
    """Publications per descriptor, over all years or one year."""
    counts: dict[str, int] = {}
    if scope == "all":
        pubs = corpus.publications
    else:
        pubs = tuple(corpus.publications_in(int(scope)))
    for p in pubs:
        for mesh_id in p.mesh_ids:
            counts[mesh_id] = counts.get(mesh_id, 0) + 1
    return counts


def rank_table(corpus: Corpus, scope: str | int = "all") -> RankTable:
    counts = descriptor_counts(corpus, scope)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = [
        RankEntry(rank=i, descriptor_id=uid, count=c)
        for i, (uid, c) in enumerate(ordered, start=1)
    ]
    return RankTable(scope=str(scope), entries=entries)


def _ols_loglog(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    fit = linregress(np.log10(x), np.log10(y))
    return fit.slope, fit.intercept, fit.stderr, fit.rvalue**2


def zipf_fit(table: RankTable, min_count: int = 5) -> ScalingFit:
    """OLS fit of log10 C(r) on log10 r over ranks with count >= min_count."""
    rows = [e for e in table.entries if e.count >= min_count]
    if len(rows) < 3:
        raise ValueError(
            f"need at least 3 ranks with count >= {min_count}, found {len(rows)}"
        )
    ranks = np.array([e.rank for e in rows], dtype=float)
    counts = np.array([e.count for e in rows], dtype=float)
    slope, intercept, stderr, r2 = _ols_loglog(ranks, counts)
    return ScalingFit(
        exponent=-slope,
        prefactor=10.0**intercept,
        stderr_exponent=stderr,
        r_squared=r2,
        fit_range=(float(ranks.min()), float(ranks.max())),
        n_points=len(rows),
    )


def heaps_fit(pairs: Iterable[tuple[float, float]]) -> ScalingFit:
    """OLS fit of log10 V on log10 M over yearly (M, V) pairs."""
    pts = [(m, v) for m, v in pairs if m > 0 and v > 0]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 years with positive (M, V), found {len(pts)}")
    m = np.array([p[0] for p in pts], dtype=float)
    v = np.array([p[1] for p in pts], dtype=float)
    slope, intercept, stderr, r2 = _ols_loglog(m, v)
    return ScalingFit(
        exponent=slope,
        prefactor=10.0**intercept,
        stderr_exponent=stderr,
        r_squared=r2,
        fit_range=(float(m.min()), float(m.max())),
        n_points=len(pts),
    )


def marginal_returns(fit: ScalingFit, v: float) -> float:
    """dM/dV = b^(-1/beta) * V^((1/beta) - 1); increasing in V iff beta < 1."""
    beta = fit.exponent
    if beta <= 0:
        raise ValueError("marginal returns need a positive exponent")
    if v <= 0:
        raise ValueError("V must be positive")
    b = fit.prefactor
    return b ** (-1.0 / beta) * v ** ((1.0 / beta) - 1.0)
