"""Rank organizations by diversity and compare rankings across variants.

Rank 1 is the least diverse organization; ties share the average of the
positions they occupy.
"""

import csv
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from scidiv.errors import InputError


def assign_ranks(scores):
    """Map ``[(org, value), ...]`` to ``[(org, rank), ...]`` in input order.

    >>> assign_ranks([("a", 5), ("b", 5), ("c", 1)])
    [('a', 2.5), ('b', 2.5), ('c', 1.0)]
    """
    scores = list(scores)
    if not scores:
        raise InputError("no scores to rank")
    for org, v in scores:
        if not math.isfinite(v):
            raise InputError(f"non-finite score for {org}: {v}")
    values = np.array([float(v) for _, v in scores])
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j (0-based) share the mean of ranks i+1..j+1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return [(org, float(r)) for (org, _), r in zip(scores, ranks)]


def spearman(x_ranks, y_ranks):
    """Pearson correlation of two rank vectors (tie-safe Spearman rho)."""
    x = np.asarray(x_ranks, dtype=np.float64)
    y = np.asarray(y_ranks, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError(f"rank vectors must have equal length, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise InputError("at least two paired ranks required")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise InputError("correlation undefined: a ranking has zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass
class RankTable:
    org_ids: tuple
    scores: dict  # variant -> array aligned with org_ids
    ranks: dict = field(default_factory=dict)
    deltas: dict = field(default_factory=dict)  # (first, second) -> array

    def rank_of(self, org, variant):
        return float(self.ranks[variant][self.org_ids.index(org)])


def build_rank_table(report, variants=None, pairs=None):
    """Rank every variant of a :class:`~scidiv.diversity.DiversityReport`.

    Organizations missing any requested variant are left out. ``pairs``
    defaults to every combination of the variants in canonical order.
    """
    variants = tuple(variants or report.variants)
    orgs = tuple(org for org, vals in report.values.items() if all(v in vals for v in variants))
    scores = {v: np.array([report.values[o][v] for o in orgs]) for v in variants}
    rt = RankTable(orgs, scores)
    for v in variants:
        rt.ranks[v] = np.array([r for _, r in assign_ranks(zip(orgs, scores[v]))]) if orgs else np.zeros(0)
    for pair in pairs if pairs is not None else combinations(variants, 2):
        a, b = pair
        rt.deltas[(a, b)] = np.array([d for _, d in _deltas(rt, a, b)])
    return rt


def _deltas(rt, a, b):
    for v in (a, b):
        if v not in rt.ranks:
            raise InputError(f"variant {v!r} not in rank table")
    return list(zip(rt.org_ids, (rt.ranks[b] - rt.ranks[a]).tolist()))


def rank_deltas(rt, variant_pair):
    """``rank(second) - rank(first)`` per org, largest upgrade first."""
    a, b = variant_pair
    return sorted(_deltas(rt, a, b), key=lambda od: -od[1])


def compare(rt):
    """Spearman rho for every delta pair; ``None`` when fewer than two orgs."""
    out = {}
    for a, b in rt.deltas:
        if len(rt.org_ids) < 2:
            out[(a, b)] = None
        else:
            try:
                out[(a, b)] = spearman(rt.ranks[a], rt.ranks[b])
            except InputError:
                out[(a, b)] = None
    return out


def _fmt_rank(r):
    return str(int(r)) if float(r).is_integer() else f"{r:g}"


def write_rank_table(rt, path):
    variants = list(rt.ranks)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["org_id"]
        for v in variants:
            header += [f"score_{v}", f"rank_{v}"]
        header += [f"delta_{a}_{b}" for a, b in rt.deltas]
        w.writerow(header)
        for i, org in enumerate(rt.org_ids):
            row = [org]
            for v in variants:
                row += [f"{rt.scores[v][i]:.6f}", _fmt_rank(rt.ranks[v][i])]
            row += [_fmt_rank(d[i]) for d in rt.deltas.values()]
            w.writerow(row)
