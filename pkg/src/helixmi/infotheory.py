"""Entropy and mutual-information kernel over discrete joint tables.

All quantities are plug-in maximum-likelihood estimates in bits
(base-2 logarithm, with 0*log 0 = 0).  For two variables

    T_xy = H_x + H_y - H_xy >= 0,

and for three

    T_xyz = H_x + H_y + H_z - H_xy - H_xz - H_yz + H_xyz,

which can take either sign; negative values read as synergetic
integration among the three channels.  The identity

    T_xyz = (T_xy + T_xz + T_yz) + (H_xyz - H_x - H_y - H_z)

splits it into a non-negative pairwise part and a non-positive
subadditivity gap, and is used as a diagnostic throughout the tests.

Probabilities are accumulated in descending order so that summation
error stays well inside the 1e-9 bit end-to-end budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus
from .counts import (
    BRANCHES,
    MAP_KINDS,
    BranchStats,
    apply_count_map,
    branch_stats_from_triples,
    triples_by_year,
)

PROB_TOLERANCE = 1e-12
MI_CLAMP = 1e-12
LOW_SUPPORT_THRESHOLD = 30


def _entropy_of_probs(probs: np.ndarray) -> float:
    p = np.sort(probs)[::-1]
    # + 0.0 turns a possible -0.0 (single-cell table) into plain 0.0
    return float(-(p * np.log2(p)).sum()) + 0.0


@dataclass
class JointTable:
    """Empirical joint distribution over 1-3 integer-valued axes.

    ``cells`` maps value tuples to probabilities; zero-probability cells
    are never stored.  ``n_obs`` records how many observations back the
    estimate, when known.
    """

    dims: tuple[str, ...]
    cells: dict[tuple[int, ...], float]
    n_obs: int | None = None

    def __post_init__(self) -> None:
        self.dims = tuple(self.dims)
        if not 1 <= len(self.dims) <= 3:
            raise ValueError("JointTable supports 1 to 3 dimensions")
        if not self.cells:
            raise ValueError("JointTable must have at least one cell")
        total = 0.0
        for key, p in self.cells.items():
            if len(key) != len(self.dims):
                raise ValueError(f"cell {key!r} does not match dims {self.dims!r}")
            if not 0.0 < p <= 1.0 + PROB_TOLERANCE:
                raise ValueError(f"cell {key!r} probability {p!r} outside (0, 1]")
            total += p
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    @property
    def support_size(self) -> int:
        return len(self.cells)

    @classmethod
    def from_observations(
        cls, dims: Sequence[str], rows: Iterable[tuple[int, ...]]
    ) -> "JointTable":
        counts: dict[tuple[int, ...], int] = {}
        n = 0
        for row in rows:
            key = tuple(int(v) for v in row)
            counts[key] = counts.get(key, 0) + 1
            n += 1
        if n == 0:
            raise ValueError("no observations")
        cells = {k: c / n for k, c in counts.items()}
        return cls(dims=tuple(dims), cells=cells, n_obs=n)

    def marginal(self, dims: Sequence[str]) -> "JointTable":
        """Marginalize onto a subset of this table's axes."""
        axes = tuple(self.dims.index(d) for d in dims)
        cells: dict[tuple[int, ...], float] = {}
        for key, p in self.cells.items():
            sub = tuple(key[a] for a in axes)
            cells[sub] = cells.get(sub, 0.0) + p
        return JointTable(dims=tuple(dims), cells=cells, n_obs=self.n_obs)


def entropy(table: JointTable) -> float:
    """Shannon entropy of the table, in bits."""
    return _entropy_of_probs(np.fromiter(table.cells.values(), dtype=float))


def mutual_info_2(table: JointTable, clamp: bool = True) -> float:
    """Pairwise mutual information of a 2-d table, in bits.

    The plug-in value is non-negative up to floating-point error; tiny
    negatives are clamped to zero unless ``clamp=False`` asks for the
    raw value.
    """
    if len(table.dims) != 2:
        raise ValueError("mutual_info_2 requires a 2-dimensional table")
    t = (
        entropy(table.marginal(table.dims[:1]))
        + entropy(table.marginal(table.dims[1:]))
        - entropy(table)
    )
    if clamp and t < 0.0:
        t = 0.0
    return t


def mutual_info_3(table: JointTable) -> float:
    """Three-way mutual (interaction) information of a 3-d table, signed."""
    if len(table.dims) != 3:
        raise ValueError("mutual_info_3 requires a 3-dimensional table")
    x, y, z = table.dims
    h = {
        "x": entropy(table.marginal((x,))),
        "y": entropy(table.marginal((y,))),
        "z": entropy(table.marginal((z,))),
        "xy": entropy(table.marginal((x, y))),
        "xz": entropy(table.marginal((x, z))),
        "yz": entropy(table.marginal((y, z))),
        "xyz": entropy(table),
    }
    return h["x"] + h["y"] + h["z"] - h["xy"] - h["xz"] - h["yz"] + h["xyz"]


@dataclass(frozen=True)
class Decomposition:
    pairwise_sum: float
    subadditivity_gap: float
    t3: float


def decomposition(table: JointTable) -> Decomposition:
    """Split the three-way information into its two contributions."""
    if len(table.dims) != 3:
        raise ValueError("decomposition requires a 3-dimensional table")
    x, y, z = table.dims
    pairwise = (
        mutual_info_2(table.marginal((x, y)))
        + mutual_info_2(table.marginal((x, z)))
        + mutual_info_2(table.marginal((y, z)))
    )
    gap = (
        entropy(table)
        - entropy(table.marginal((x,)))
        - entropy(table.marginal((y,)))
        - entropy(table.marginal((z,)))
    )
    return Decomposition(pairwise_sum=pairwise, subadditivity_gap=gap, t3=pairwise + gap)


def efficiency(counts: Iterable[float]) -> float:
    """Normalized usage entropy in [0, 1].

    ``counts`` are per-descriptor usage counts within one branch; zero
    counts are ignored.  A single-descriptor vocabulary carries zero
    diversity by convention (the 0/0 case of the formula).
    """
    arr = np.asarray(list(counts), dtype=float)
    if arr.size == 0 or (arr < 0).any():
        raise ValueError("counts must be non-negative with at least one entry")
    arr = arr[arr > 0]
    if arr.size == 0:
        raise ValueError("all counts are zero")
    v = arr.size
    if v == 1:
        return 0.0
    return _entropy_of_probs(arr / arr.sum()) / float(np.log2(v))


# ---------------------------------------------------------------------------
# Yearly series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class YearMi:
    year: int
    h_c: float
    h_d: float
    h_e: float
    h_cd: float
    h_ce: float
    h_de: float
    h_cde: float
    t_cd: float
    t_ce: float
    t_de: float
    t_cde: float
    n_obs: int
    low_support: bool

    def target(self, name: str) -> float:
        return {
            "T_CD": self.t_cd,
            "T_CE": self.t_ce,
            "T_DE": self.t_de,
            "T_CDE": self.t_cde,
        }[name]


@dataclass
class MiSeries:
    map_kind: str
    records: list[YearMi]

    def years(self) -> list[int]:
        return [r.year for r in self.records]


def _entropy_of_counts(counts: np.ndarray) -> float:
    return _entropy_of_probs(counts / counts.sum())


def year_entropies(vectors: np.ndarray) -> dict[str, float]:
    """All seven entropies for one year's (n, 3) count-vector block.

    Vectorized path: each axis combination is encoded into a single
    integer key and tallied with ``np.unique``, which is equivalent to
    building the explicit joint table.
    """
    n = len(vectors)
    if n == 0:
        raise ValueError("no observations")
    base = int(vectors.max()) + 1
    zc = vectors[:, 0]
    zd = vectors[:, 1]
    ze = vectors[:, 2]

    def h(codes: np.ndarray) -> float:
        _, counts = np.unique(codes, return_counts=True)
        return _entropy_of_counts(counts.astype(float))

    return {
        "h_c": h(zc),
        "h_d": h(zd),
        "h_e": h(ze),
        "h_cd": h(zc * base + zd),
        "h_ce": h(zc * base + ze),
        "h_de": h(zd * base + ze),
        "h_cde": h((zc * base + zd) * base + ze),
    }


def _clamp(t: float) -> float:
    return 0.0 if t < 0.0 else t


def _year_record(year: int, vectors: np.ndarray, low_support_threshold: int) -> YearMi:
    h = year_entropies(vectors)
    t_cd = _clamp(h["h_c"] + h["h_d"] - h["h_cd"])
    t_ce = _clamp(h["h_c"] + h["h_e"] - h["h_ce"])
    t_de = _clamp(h["h_d"] + h["h_e"] - h["h_de"])
    t_cde = (
        h["h_c"] + h["h_d"] + h["h_e"]
        - h["h_cd"] - h["h_ce"] - h["h_de"]
        + h["h_cde"]
    )
    n = len(vectors)
    return YearMi(
        year=year,
        **h,
        t_cd=t_cd,
        t_ce=t_ce,
        t_de=t_de,
        t_cde=t_cde,
        n_obs=n,
        low_support=n < low_support_threshold,
    )


def mi_from_triples(
    triples_per_year: Mapping[int, np.ndarray],
    map_kind: str = "full",
    medians: BranchStats | None = None,
    include_empty: bool = True,
    low_support_threshold: int = LOW_SUPPORT_THRESHOLD,
) -> MiSeries:
    """Yearly entropy/MI series from per-year branch-count arrays.

    ``include_empty`` keeps publications whose count vector is (0,0,0);
    they carry probability mass in the joint tables.  Disabling it is a
    sensitivity switch, not the default analysis.
    """
    if map_kind not in MAP_KINDS:
        raise ValueError(f"unknown count map {map_kind!r}")
    if map_kind == "median" and medians is None:
        pooled = np.concatenate([triples_per_year[y] for y in sorted(triples_per_year)])
        medians = branch_stats_from_triples(pooled)
    records = []
    for year in sorted(triples_per_year):
        triples = triples_per_year[year]
        if len(triples) == 0:
            continue
        vectors = apply_count_map(triples, map_kind, medians)
        if not include_empty:
            vectors = vectors[vectors.any(axis=1)]
            if len(vectors) == 0:
                continue
        records.append(_year_record(year, vectors, low_support_threshold))
    return MiSeries(map_kind=map_kind, records=records)


def yearly_mi(
    corpus: Corpus,
    map_kind: str = "full",
    counting: str = "membership",
    include_empty: bool = True,
) -> MiSeries:
    """Per-year entropies and mutual information for a corpus.

    For the median map the thresholds are the medians of the pooled
    corpus (all years), matching how the per-query medians are reported.
    """
    per_year = triples_by_year(corpus, counting)
    return mi_from_triples(per_year, map_kind=map_kind, include_empty=include_empty)


def year_joint_table(vectors: np.ndarray) -> JointTable:
    """Explicit three-axis joint table for one year's count vectors."""
    return JointTable.from_observations(BRANCHES, (tuple(v) for v in vectors))
