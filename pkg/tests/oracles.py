"""Independent reference implementations used to check the library.

Everything here is deliberately plain Python (dicts, math.log2,
exhaustive loops) and shares no code with the package: direct-summation
entropy and mutual information over explicit cell maps, full sign
enumeration for the signed-rank test, and brute-force pair counting.
"""

import math
from itertools import product


def entropy_direct(cells):
    return -sum(p * math.log2(p) for p in cells.values() if p > 0)


def marginal_direct(cells, axes):
    out = {}
    for key, p in cells.items():
        sub = tuple(key[a] for a in axes)
        out[sub] = out.get(sub, 0.0) + p
    return out


def mi2_direct(cells):
    hx = entropy_direct(marginal_direct(cells, (0,)))
    hy = entropy_direct(marginal_direct(cells, (1,)))
    return hx + hy - entropy_direct(cells)


def mi3_direct(cells):
    h1 = entropy_direct(marginal_direct(cells, (0,)))
    h2 = entropy_direct(marginal_direct(cells, (1,)))
    h3 = entropy_direct(marginal_direct(cells, (2,)))
    h12 = entropy_direct(marginal_direct(cells, (0, 1)))
    h13 = entropy_direct(marginal_direct(cells, (0, 2)))
    h23 = entropy_direct(marginal_direct(cells, (1, 2)))
    return h1 + h2 + h3 - h12 - h13 - h23 + entropy_direct(cells)


def midranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and values[order[j]] == values[order[i]]:
            j += 1
        mid = (i + j + 1) / 2.0  # average of 1-based positions i+1 .. j
        for k in range(i, j):
            ranks[order[k]] = mid
        i = j
    return ranks


def wilcoxon_enumerate(x, y):
    """Exhaustive signed-rank test: every sign assignment of the nonzero
    differences is equally likely under the null."""
    d = [a - b for a, b in zip(x, y) if a != b]
    n = len(d)
    if n == 0:
        return 0.0, 1.0, 0
    ranks = midranks([abs(v) for v in d])
    total = sum(ranks)
    w_plus = sum(r for v, r in zip(d, ranks) if v > 0)
    w_minus = sum(r for v, r in zip(d, ranks) if v < 0)
    statistic = abs(w_plus - w_minus)
    observed_dev = abs(2 * w_plus - total)
    extreme = 0
    for signs in product((0, 1), repeat=n):
        wp = sum(r for s, r in zip(signs, ranks) if s)
        if abs(2 * wp - total) >= observed_dev - 1e-9:
            extreme += 1
    return statistic, extreme / 2**n, n


def pair_counts_brute(corpus, branch_a, branch_b, window):
    """Count, for every descriptor pair, the publications carrying both."""
    lo, hi = window
    counts = {}
    for pub in corpus.publications:
        if not lo <= pub.year <= hi:
            continue
        for a in pub.mesh_ids:
            if branch_a not in corpus.vocabulary.descriptors[a].branches:
                continue
            for b in pub.mesh_ids:
                if b == a:
                    continue
                if branch_b not in corpus.vocabulary.descriptors[b].branches:
                    continue
                counts[(a, b)] = counts.get((a, b), 0) + 1
    return counts
