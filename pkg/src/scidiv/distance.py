"""All-pairs distances between subject categories on a basemap.

Three variants:

``cosine``
    ``1 - s`` for linked pairs, 1 for every pair without an edge.
``path``
    Hop count of the shortest path.
``wpath``
    Minimum over paths of the summed edge distances ``1 - s``.

Pairs that no path connects are filled with the diameter of the largest
connected component (hop or weighted, per variant) unless an explicit fill
value is given.
"""

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from scidiv import kernels
from scidiv.errors import InputError, UnmappedCategoryError

VARIANTS = ("cosine", "path", "wpath")


@dataclass(frozen=True)
class DistanceMatrix:
    variant: str
    sc_index: tuple
    values: np.ndarray
    disconnected_policy: dict = field(default_factory=dict)
    unreachable: np.ndarray | None = None

    @cached_property
    def index(self):
        return {sc: i for i, sc in enumerate(self.sc_index)}

    def __call__(self, a, b):
        return float(self.values[self.index[a], self.index[b]])

    def positions(self, scs):
        missing = [sc for sc in scs if sc not in self.index]
        if missing:
            raise UnmappedCategoryError(missing)
        return np.array([self.index[sc] for sc in scs], dtype=np.int64)

    def block(self, scs):
        idx = self.positions(scs)
        return self.values[np.ix_(idx, idx)]


def cosine_distance_matrix(bm):
    n = len(bm.nodes)
    values = np.ones((n, n))
    for (u, v), w in bm.distances.items():
        i, j = bm.index[u], bm.index[v]
        values[i, j] = values[j, i] = w
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix("cosine", bm.nodes, values, {"mode": "not-applicable"}, np.zeros((n, n), dtype=bool))


def _components(reach):
    # label = lowest node index in the component
    n = reach.shape[0]
    return np.array([int(np.argmax(reach[i])) for i in range(n)]) if n else np.zeros(0, dtype=int)


def _fill(raw, reach, fill):
    unreachable = ~reach
    n_pairs = int(np.triu(unreachable, 1).sum())
    values = raw.copy()
    if n_pairs == 0:
        return values, {"mode": "none", "fill": None, "unreachable_pairs": 0}, unreachable
    if fill is not None:
        fill = float(fill)
        if not math.isfinite(fill) or fill < 0:
            raise InputError(f"disconnected fill value must be finite and >= 0, got {fill}")
        policy = {"mode": "override", "fill": fill, "unreachable_pairs": n_pairs}
    else:
        labels = _components(reach)
        uniq, sizes = np.unique(labels, return_counts=True)
        biggest = uniq[np.argmax(sizes)]
        members = np.flatnonzero(labels == biggest)
        diameter = float(raw[np.ix_(members, members)].max()) if members.size else 0.0
        # a largest component without edges has diameter 0; fall back to one step
        fill = diameter if diameter > 0 else 1.0
        policy = {
            "mode": "largest-component-diameter",
            "fill": fill,
            "component_size": int(members.size),
            "unreachable_pairs": n_pairs,
        }
    values[unreachable] = fill
    np.fill_diagonal(values, 0.0)
    return values, policy, unreachable


def unweighted_path_matrix(bm, disconnected=None, backend=None):
    indptr, indices, _ = bm.csr()
    hops = kernels.hop_apsp(indptr, indices, backend=backend)
    reach = hops >= 0
    values, policy, unreachable = _fill(hops.astype(np.float64), reach, disconnected)
    return DistanceMatrix("path", bm.nodes, values, policy, unreachable)


def weighted_path_matrix(bm, disconnected=None, backend=None):
    indptr, indices, weights = bm.csr()
    raw = kernels.weighted_apsp(indptr, indices, weights, backend=backend)
    reach = np.isfinite(raw)
    values, policy, unreachable = _fill(np.where(reach, raw, 0.0), reach, disconnected)
    return DistanceMatrix("wpath", bm.nodes, values, policy, unreachable)


def distance_matrix(bm, variant, disconnected=None, backend=None):
    if variant == "cosine":
        return cosine_distance_matrix(bm)
    if variant == "path":
        return unweighted_path_matrix(bm, disconnected, backend)
    if variant == "wpath":
        return weighted_path_matrix(bm, disconnected, backend)
    raise InputError(f"unknown distance variant {variant!r}; expected one of {VARIANTS}")


@dataclass(frozen=True)
class Histogram:
    variant: str
    bins: dict  # lower bin edge (int hops for "path") -> pair count
    unreachable: int
    bin_width: float | None = None


def path_length_distribution(dm, bin_width=0.1):
    """Histogram of distances over unordered pairs ``i < j``.

    Hop counts get one bin per integer; real-valued variants use
    fixed-width bins labelled by their lower edge. Unreachable pairs are
    counted apart, not binned.
    """
    n = len(dm.sc_index)
    iu, ju = np.triu_indices(n, k=1)
    unreach = dm.unreachable[iu, ju] if dm.unreachable is not None else np.zeros(iu.size, dtype=bool)
    vals = dm.values[iu, ju][~unreach]
    bins = {}
    if dm.variant == "path":
        for v in vals.astype(np.int64):
            bins[int(v)] = bins.get(int(v), 0) + 1
        width = None
    else:
        if bin_width <= 0:
            raise InputError(f"bin width must be positive, got {bin_width}")
        width = float(bin_width)
        for v in vals:
            k = math.floor(v / width + 1e-9)
            edge = round(k * width, 12)
            bins[edge] = bins.get(edge, 0) + 1
    return Histogram(dm.variant, dict(sorted(bins.items())), int(unreach.sum()), width)


def write_histogram(hist, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin", "count"])
        for b, c in hist.bins.items():
            w.writerow([b if isinstance(b, int) else f"{b:g}", c])
        w.writerow(["unreachable", hist.unreachable])


def write_distance_matrix(dm, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["", *dm.sc_index])
        for sc, row in zip(dm.sc_index, dm.values):
            w.writerow([sc, *(repr(float(x)) for x in row)])
