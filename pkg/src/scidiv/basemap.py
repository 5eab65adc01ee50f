"""Science basemap: the thresholded cosine-similarity network of subject categories."""

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from scidiv import _graphml, kernels
from scidiv.errors import FormatError, InputError, UndefinedSimilarityError

DEFAULT_THRESHOLD = 0.15


@dataclass(frozen=True)
class CitationMatrix:
    """Square SC-by-SC citation counts; rows cite, columns are cited."""

    sc_names: tuple
    counts: np.ndarray

    def __post_init__(self):
        names = tuple(str(s) for s in self.sc_names)
        counts = np.asarray(self.counts, dtype=np.float64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise FormatError(f"citation matrix must be square, got shape {counts.shape}")
        if counts.shape[0] != len(names):
            raise FormatError(f"{len(names)} SC names for a {counts.shape[0]}x{counts.shape[0]} matrix")
        if len(set(names)) != len(names):
            raise FormatError("duplicate subject category names")
        if not np.all(np.isfinite(counts)) or (counts < 0).any():
            raise FormatError("citation counts must be finite and non-negative")
        object.__setattr__(self, "sc_names", names)
        object.__setattr__(self, "counts", counts)


@dataclass(frozen=True)
class Basemap:
    """Undirected similarity network of subject categories.

    ``edges`` maps an unordered pair (stored in node order) to its cosine
    similarity ``s``; ``distances`` maps the same pairs to ``1 - s``. Build
    with :meth:`from_distances` when the distances are the exact inputs.
    """

    nodes: tuple
    edges: dict = field(default_factory=dict)
    threshold: float | None = None
    distances: dict | None = None

    def __post_init__(self):
        nodes = tuple(str(n) for n in self.nodes)
        if len(set(nodes)) != len(nodes):
            raise InputError("duplicate basemap nodes")
        pos = {n: i for i, n in enumerate(nodes)}
        canon = {}
        for (u, v), s in self.edges.items():
            u, v, s = str(u), str(v), float(s)
            if u == v:
                raise InputError(f"self-loop on {u}")
            if u not in pos or v not in pos:
                raise InputError(f"edge {u}-{v} references an unknown node")
            if not (0.0 < s <= 1.0):
                raise InputError(f"similarity of {u}-{v} outside (0, 1]: {s}")
            if self.threshold is not None and s < self.threshold:
                raise InputError(f"similarity of {u}-{v} below threshold {self.threshold}: {s}")
            key = (u, v) if pos[u] < pos[v] else (v, u)
            if key in canon:
                raise InputError(f"duplicate edge {key[0]}-{key[1]}")
            canon[key] = s
        canon = dict(sorted(canon.items(), key=lambda kv: (pos[kv[0][0]], pos[kv[0][1]])))
        if self.distances is None:
            dist = {k: 1.0 - s for k, s in canon.items()}
        else:
            given = {}
            for (u, v), w in self.distances.items():
                key = (str(u), str(v)) if pos.get(str(u), -1) < pos.get(str(v), -1) else (str(v), str(u))
                given[key] = float(w)
            if set(given) != set(canon):
                raise InputError("distances must cover exactly the edge set")
            dist = {k: given[k] for k in canon}
            for (u, v), w in dist.items():
                if w + canon[(u, v)] != 1.0:
                    raise InputError(f"distance and similarity of {u}-{v} do not sum to 1")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", canon)
        object.__setattr__(self, "distances", dist)

    @classmethod
    def from_distances(cls, nodes, distances, threshold=None):
        """Build from edge distances ``w``; similarities become ``1 - w``."""
        dist = {(u, v): float(w) for (u, v), w in distances.items()}
        return cls(tuple(nodes), {k: 1.0 - w for k, w in dist.items()}, threshold, dist)

    @cached_property
    def index(self):
        return {n: i for i, n in enumerate(self.nodes)}

    def __len__(self):
        return len(self.nodes)

    @property
    def n_edges(self):
        return len(self.edges)

    def _key(self, u, v):
        return (u, v) if self.index[u] < self.index[v] else (v, u)

    def has_edge(self, u, v):
        return u != v and self._key(u, v) in self.edges

    def similarity(self, u, v):
        return self.edges.get(self._key(u, v), 0.0)

    def weight(self, u, v):
        """Edge distance ``1 - s``; raises ``KeyError`` for non-adjacent pairs."""
        return self.distances[self._key(u, v)]

    def degrees(self):
        deg = dict.fromkeys(self.nodes, 0)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def csr(self):
        """CSR arrays ``(indptr, indices, distance)`` with both arc directions."""
        n = len(self.nodes)
        nbrs = [[] for _ in range(n)]
        for (u, v), w in self.distances.items():
            i, j = self.index[u], self.index[v]
            nbrs[i].append((j, w))
            nbrs[j].append((i, w))
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices, weights = [], []
        for i, row in enumerate(nbrs):
            row.sort()
            indices.extend(j for j, _ in row)
            weights.extend(w for _, w in row)
            indptr[i + 1] = len(indices)
        return indptr, np.asarray(indices, dtype=np.int64), np.asarray(weights, dtype=np.float64)

    def without_edges(self, pairs):
        drop = {self._key(u, v) for u, v in pairs}
        keep = [k for k in self.edges if k not in drop]
        return Basemap(
            self.nodes,
            {k: self.edges[k] for k in keep},
            self.threshold,
            {k: self.distances[k] for k in keep},
        )

    def summary(self):
        deg = np.array(list(self.degrees().values()), dtype=float)
        return {
            "nodes": len(self.nodes),
            "edges": self.n_edges,
            "isolated": int((deg == 0).sum()),
            "degree_min": int(deg.min()) if deg.size else 0,
            "degree_max": int(deg.max()) if deg.size else 0,
            "degree_mean": float(deg.mean()) if deg.size else 0.0,
        }


def cosine_similarity(u, v, names=("u", "v")):
    """Cosine of two non-negative count vectors.

    >>> cosine_similarity([1, 1, 0], [0, 1, 1])
    0.5
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise InputError(f"vector lengths differ: {u.shape} vs {v.shape}")
    uu, vv = float(u @ u), float(v @ v)
    zero = [name for name, sq in zip(names, (uu, vv)) if sq == 0.0]
    if zero:
        raise UndefinedSimilarityError(zero)
    return min(1.0, float(u @ v) / math.sqrt(uu * vv))


def build_basemap(cm, threshold=DEFAULT_THRESHOLD, zero_diagonal=False, backend=None):
    """Link every pair of SCs whose citing-row cosine is at least ``threshold``.

    Pairs with zero similarity never get an edge, even at threshold 0.
    """
    if not 0.0 <= threshold <= 1.0:
        raise InputError(f"threshold must lie in [0, 1], got {threshold}")
    counts = cm.counts.copy()
    if zero_diagonal:
        np.fill_diagonal(counts, 0.0)
    empty = [cm.sc_names[i] for i in np.flatnonzero(~counts.any(axis=1))]
    if empty:
        raise UndefinedSimilarityError(empty)
    sim = kernels.cosine_matrix(counts, backend=backend)
    iu, ju = np.triu_indices(len(cm.sc_names), k=1)
    s = sim[iu, ju]
    keep = (s >= threshold) & (s > 0.0)
    names = cm.sc_names
    edges = {(names[i], names[j]): float(x) for i, j, x in zip(iu[keep], ju[keep], s[keep])}
    return Basemap(names, edges, threshold)


def read_citation_matrix(path):
    """Read a citation-matrix CSV (SC names along the first row and column)."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError("empty file", path)
    header = [h.strip() for h in rows[0][1:]]
    body = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not any(c.strip() for c in row):
            continue
        name = row[0].strip()
        if len(row) - 1 != len(header):
            raise FormatError(f"expected {len(header)} counts, found {len(row) - 1}", path, lineno)
        if name in body:
            raise FormatError(f"duplicate row for {name}", path, lineno)
        try:
            vals = [float(c) for c in row[1:]]
        except ValueError as exc:
            raise FormatError(f"non-numeric count ({exc})", path, lineno) from None
        if any(x < 0 or not math.isfinite(x) or x != int(x) for x in vals):
            raise FormatError("counts must be non-negative integers", path, lineno)
        body[name] = vals
    if set(body) != set(header) or len(body) != len(header):
        raise FormatError("row names must match the column header (matrix must be square)", path)
    return CitationMatrix(tuple(header), np.array([body[h] for h in header]))


def _infer_format(path, fmt):
    if fmt:
        fmt = fmt.lower()
    else:
        fmt = "graphml" if Path(path).suffix.lower() in (".graphml", ".xml") else "csv"
    if fmt not in ("csv", "graphml"):
        raise InputError(f"unknown basemap format {fmt!r}")
    return fmt


def save_basemap(bm, path, fmt=None):
    """Write the basemap as an edge-list CSV or GraphML.

    In CSV, an isolated node is written as a row with empty target and
    similarity so that the node set survives the round trip.
    """
    fmt = _infer_format(path, fmt)
    if fmt == "csv":
        deg = bm.degrees()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["source", "target", "similarity"])
            for (u, v), s in bm.edges.items():
                w.writerow([u, v, repr(s)])
            for n in bm.nodes:
                if deg[n] == 0:
                    w.writerow([n, "", ""])
    else:
        _graphml.write(
            path,
            [(n, {}) for n in bm.nodes],
            [(u, v, {"similarity": s}) for (u, v), s in bm.edges.items()],
            edge_attrs=[("similarity", "double")],
        )


def load_basemap(path, fmt=None):
    fmt = _infer_format(path, fmt)
    return _load_csv(Path(path)) if fmt == "csv" else _load_graphml(Path(path))


def _load_csv(path):
    nodes, seen, edges = {}, {}, {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:3]] != ["source", "target", "similarity"]:
            raise FormatError("header must be source,target,similarity", path, 1)
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(c.strip() for c in row):
                continue
            if len(row) != 3:
                raise FormatError(f"expected 3 fields, found {len(row)}", path, lineno)
            u, v, s = (c.strip() for c in row)
            if not u:
                raise FormatError("missing source", path, lineno)
            nodes.setdefault(u, None)
            if not v and not s:
                continue
            nodes.setdefault(v, None)
            if u == v:
                raise FormatError(f"self-loop on {u}", path, lineno)
            try:
                sim = float(s)
            except ValueError:
                raise FormatError(f"non-numeric similarity {s!r}", path, lineno) from None
            if not (0.0 < sim <= 1.0):
                raise FormatError(f"similarity {sim} outside (0, 1]", path, lineno)
            key = frozenset((u, v))
            if key in seen:
                raise FormatError(f"duplicate edge {u}-{v} (first on line {seen[key]})", path, lineno)
            seen[key] = lineno
            edges[(u, v)] = sim
    return Basemap(tuple(nodes), edges)


def _load_graphml(path):
    try:
        node_ids, raw = _graphml.read(path)
    except Exception as exc:  # ParseError and friends
        raise FormatError(f"invalid GraphML: {exc}", path) from None
    nodes = dict.fromkeys(node_ids)
    seen, edges = set(), {}
    for k, (u, v, attrs) in enumerate(raw, start=1):
        where = f"edge #{k} ({u}-{v}): "
        if u not in nodes or v not in nodes:
            raise FormatError(where + "unknown endpoint", path)
        if u == v:
            raise FormatError(where + "self-loop", path)
        try:
            sim = float(attrs["similarity"])
        except (KeyError, ValueError):
            raise FormatError(where + "missing or non-numeric similarity", path) from None
        if not (0.0 < sim <= 1.0):
            raise FormatError(where + f"similarity {sim} outside (0, 1]", path)
        key = frozenset((u, v))
        if key in seen:
            raise FormatError(where + "duplicate edge", path)
        seen.add(key)
        edges[(u, v)] = sim
    return Basemap(tuple(nodes), edges)
