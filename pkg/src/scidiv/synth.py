"""Synthetic basemaps and portfolios for the polarized / spread / concentrated typology."""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from scidiv.basemap import Basemap
from scidiv.distance import weighted_path_matrix
from scidiv.errors import InputError
from scidiv.profile import ResearchProfile

KINDS = ("polarized", "spread", "concentrated")
_EXHAUSTIVE_LIMIT = 20_000


@dataclass(frozen=True)
class SynthSpec:
    kind: str
    n_active: int = 1
    poles: int = 2
    seed: int = 0
    org_id: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n_active < 1:
            raise InputError("n_active must be >= 1")
        if self.kind == "polarized" and self.poles < 2:
            raise InputError("a polarized portfolio needs at least 2 poles")


def gen_basemap_path(n, edge_w=0.15, prefix="SC"):
    """Path graph ``SC1 - SC2 - ... - SCn`` with every edge at distance ``edge_w``."""
    if n < 2:
        raise InputError("path basemap needs n >= 2")
    if not 0.0 < edge_w < 1.0:
        raise InputError("edge_w must lie in (0, 1)")
    nodes = tuple(f"{prefix}{i}" for i in range(1, n + 1))
    return Basemap.from_distances(nodes, {(nodes[i], nodes[i + 1]): edge_w for i in range(n - 1)})


def _pick(rng, candidates):
    return candidates[int(rng.integers(len(candidates)))] if len(candidates) > 1 else candidates[0]


def _components(dm):
    reach = ~dm.unreachable
    seen, comps = set(), []
    for i in range(len(dm.sc_index)):
        if i not in seen:
            members = np.flatnonzero(reach[i])
            seen.update(members.tolist())
            comps.append(members)
    return comps


def _polarized(d, k, rng):
    n = d.shape[0]
    if comb(n, k) <= _EXHAUSTIVE_LIMIT:
        best, cands = None, []
        for combo in combinations(range(n), k):
            sub = d[np.ix_(combo, combo)]
            iu = np.triu_indices(k, 1)
            # farthest-apart set: maximize the closest pair, then the total
            key = (round(float(sub[iu].min()), 12), round(float(sub[iu].sum()), 12))
            if best is None or key > best:
                best, cands = key, [combo]
            elif key == best:
                cands.append(combo)
        return list(_pick(rng, cands))
    # greedy farthest-point from one end of the diameter
    i, j = np.unravel_index(np.argmax(d), d.shape)
    chosen = [int(i), int(j)]
    while len(chosen) < k:
        gap = d[:, chosen].min(axis=1)
        gap[chosen] = -1.0
        chosen.append(int(np.argmax(gap)))
    return chosen


def _spread(d, k, comps, rng):
    # candidate region around each node: its k nearest (same component)
    best, cands = None, []
    for comp in comps:
        if comp.size < k:
            continue
        for c in comp:
            near = comp[np.lexsort((comp, d[c, comp]))][:k]
            region = tuple(sorted(near.tolist()))
            key = round(float(d[np.ix_(region, region)].max()), 12)
            if best is None or key < best:
                best, cands = key, [region]
            elif key == best and region not in cands:
                cands.append(region)
    if not cands:
        raise InputError(f"no connected component holds {k} nodes")
    return list(_pick(rng, cands))


def gen_profile(spec, bm):
    """Equal-mass portfolio placed on ``bm`` according to ``spec.kind``.

    Ties between equally good placements are broken by ``spec.seed``.
    """
    rng = np.random.default_rng(spec.seed)
    n = len(bm.nodes)
    org = spec.org_id or f"{spec.kind}-{spec.seed}"
    if spec.kind == "concentrated":
        chosen = [int(rng.integers(n))]
    else:
        dm = weighted_path_matrix(bm)
        if spec.kind == "polarized":
            if spec.poles > n:
                raise InputError(f"{spec.poles} poles requested on a {n}-node basemap")
            chosen = _polarized(dm.values, spec.poles, rng)
        else:
            if spec.n_active > n:
                raise InputError(f"{spec.n_active} active SCs requested on a {n}-node basemap")
            chosen = _spread(dm.values, spec.n_active, _components(dm), rng)
    return ResearchProfile(org, {bm.nodes[i]: 1 for i in chosen})
