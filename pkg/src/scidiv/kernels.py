"""Hot numeric kernels, each in a numba loop form and a vectorized numpy form.

The public functions at the bottom dispatch on :data:`scidiv._jit.USE_NUMBA`
unless a ``backend`` is passed explicitly. Graphs arrive in CSR form
(``indptr``, ``indices``, ``weights``) with both directions of every
undirected edge present.
"""

import numpy as np

from scidiv import _jit
from scidiv._jit import njit

BACKEND_NAMES = ("numba", "numpy")


# -- cosine similarity ------------------------------------------------------


@njit
def _cosine_matrix_numba(x):
    n, m = x.shape
    sq = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for c in range(m):
            acc += x[i, c] * x[i, c]
        sq[i] = acc
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            dot = 0.0
            for c in range(m):
                dot += x[i, c] * x[j, c]
            s = dot / np.sqrt(sq[i] * sq[j])
            if s > 1.0:
                s = 1.0
            out[i, j] = s
            out[j, i] = s
    return out


def _cosine_matrix_numpy(x):
    gram = x @ x.T
    sq = np.diag(gram).copy()
    out = gram / np.sqrt(np.outer(sq, sq))
    np.minimum(out, 1.0, out=out)
    return np.triu(out) + np.triu(out, 1).T


# -- all-pairs shortest paths -----------------------------------------------


@njit
def _weighted_apsp_numba(indptr, indices, weights):
    # dense-selection Dijkstra from every source; O(n^2) per source is
    # the right trade-off for a few hundred nodes
    n = indptr.shape[0] - 1
    out = np.full((n, n), np.inf)
    done = np.zeros(n, dtype=np.bool_)
    for s in range(n):
        dist = out[s]
        done[:] = False
        dist[s] = 0.0
        for _ in range(n):
            u = -1
            best = np.inf
            for v in range(n):
                if not done[v] and dist[v] < best:
                    best = dist[v]
                    u = v
            if u < 0:
                break
            done[u] = True
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                cand = best + weights[e]
                if cand < dist[v]:
                    dist[v] = cand
    return out


def _weighted_apsp_numpy(indptr, indices, weights):
    n = indptr.shape[0] - 1
    dist = np.full((n, n), np.inf)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    np.minimum.at(dist, (rows, indices), weights)
    np.fill_diagonal(dist, 0.0)
    for k in range(n):
        np.minimum(dist, dist[:, k : k + 1] + dist[k : k + 1, :], out=dist)
    return dist


@njit
def _hop_apsp_numba(indptr, indices):
    n = indptr.shape[0] - 1
    out = np.full((n, n), -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        out[s, s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if out[s, v] < 0:
                    out[s, v] = out[s, u] + 1
                    queue[tail] = v
                    tail += 1
    return out


def _hop_apsp_numpy(indptr, indices):
    n = indptr.shape[0] - 1
    adj = np.zeros((n, n), dtype=np.int64)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    adj[rows, indices] = 1
    out = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(out, 0)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    level = 0
    while frontier.any():
        level += 1
        nxt = (frontier.astype(np.int64) @ adj > 0) & ~reached
        out[nxt] = level
        reached |= nxt
        frontier = nxt
    return out


# -- Stirling double sum ----------------------------------------------------


@njit
def _stirling_numba(p, d):
    n = p.shape[0]
    total = 0.0
    for i in range(n):
        pi = p[i]
        if pi == 0.0:
            continue
        row = 0.0
        for j in range(n):
            if j != i:
                row += d[i, j] * p[j]
        total += pi * row
    return total


def _stirling_numpy(p, d):
    return float(p @ d @ p - np.dot(np.diag(d), p * p))


# -- Fruchterman-Reingold ---------------------------------------------------


@njit
def _fr_layout_numba(pos, src, dst, attract, iterations, k, t0):
    n = pos.shape[0]
    disp = np.zeros((n, 2))
    for it in range(iterations):
        t = t0 * (iterations - it) / iterations
        disp[:, :] = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[i, 0] - pos[j, 0]
                dy = pos[i, 1] - pos[j, 1]
                d2 = dx * dx + dy * dy
                if d2 < 1e-18:
                    d2 = 1e-18
                f = k * k / d2
                disp[i, 0] += dx * f
                disp[i, 1] += dy * f
                disp[j, 0] -= dx * f
                disp[j, 1] -= dy * f
        for e in range(src.shape[0]):
            u = src[e]
            v = dst[e]
            dx = pos[u, 0] - pos[v, 0]
            dy = pos[u, 1] - pos[v, 1]
            f = attract[e] * np.sqrt(dx * dx + dy * dy) / k
            disp[u, 0] -= dx * f
            disp[u, 1] -= dy * f
            disp[v, 0] += dx * f
            disp[v, 1] += dy * f
        for i in range(n):
            length = np.sqrt(disp[i, 0] ** 2 + disp[i, 1] ** 2)
            if length > 0.0:
                step = min(length, t) / length
                for c in range(2):
                    x = pos[i, c] + disp[i, c] * step
                    pos[i, c] = min(0.5, max(-0.5, x))
    return pos


def _fr_layout_numpy(pos, src, dst, attract, iterations, k, t0):
    n = pos.shape[0]
    for it in range(iterations):
        t = t0 * (iterations - it) / iterations
        delta = pos[:, None, :] - pos[None, :, :]
        d2 = np.maximum(np.einsum("ijk,ijk->ij", delta, delta), 1e-18)
        f = k * k / d2
        f[np.diag_indices(n)] = 0.0
        disp = np.einsum("ij,ijk->ik", f, delta)
        if src.size:
            ed = pos[src] - pos[dst]
            fa = (attract * np.sqrt(np.einsum("ij,ij->i", ed, ed)) / k)[:, None] * ed
            np.subtract.at(disp, src, fa)
            np.add.at(disp, dst, fa)
        length = np.sqrt(np.einsum("ij,ij->i", disp, disp))
        moving = length > 0.0
        step = np.zeros(n)
        step[moving] = np.minimum(length[moving], t) / length[moving]
        pos = np.clip(pos + disp * step[:, None], -0.5, 0.5)
    return pos


_KERNELS = {
    "numba": {
        "cosine": _cosine_matrix_numba,
        "weighted_apsp": _weighted_apsp_numba,
        "hop_apsp": _hop_apsp_numba,
        "stirling": _stirling_numba,
        "fr_layout": _fr_layout_numba,
    },
    "numpy": {
        "cosine": _cosine_matrix_numpy,
        "weighted_apsp": _weighted_apsp_numpy,
        "hop_apsp": _hop_apsp_numpy,
        "stirling": _stirling_numpy,
        "fr_layout": _fr_layout_numpy,
    },
}


def active_backend():
    return "numba" if _jit.USE_NUMBA else "numpy"


def _pick(name, backend):
    backend = backend or active_backend()
    if backend not in _KERNELS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKEND_NAMES}")
    if backend == "numba" and not _jit.NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is not installed")
    return _KERNELS[backend][name]


def cosine_matrix(x, backend=None):
    """Pairwise cosine similarity of the rows of ``x`` (rows must be nonzero).

    Computed as ``dot / sqrt(|u|^2 |v|^2)`` so integer count rows give the
    same bits on both backends.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _pick("cosine", backend)(x)


def weighted_apsp(indptr, indices, weights, backend=None):
    """All-pairs minimum path weight; ``inf`` where unreachable."""
    out = _pick("weighted_apsp", backend)(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(weights, dtype=np.float64),
    )
    # reversed paths can round differently; keep the matrix exactly symmetric
    return np.minimum(out, out.T)


def hop_apsp(indptr, indices, backend=None):
    """All-pairs hop counts; ``-1`` where unreachable."""
    return _pick("hop_apsp", backend)(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
    )


def stirling_sum(p, d, backend=None):
    """``sum_{i != j} d[i, j] * p[i] * p[j]``."""
    p = np.ascontiguousarray(p, dtype=np.float64)
    d = np.ascontiguousarray(d, dtype=np.float64)
    return float(_pick("stirling", backend)(p, d))


def fr_layout(pos, src, dst, attract, iterations, k, t0, backend=None):
    return _pick("fr_layout", backend)(
        np.array(pos, dtype=np.float64),
        np.ascontiguousarray(src, dtype=np.int64),
        np.ascontiguousarray(dst, dtype=np.int64),
        np.ascontiguousarray(attract, dtype=np.float64),
        int(iterations),
        float(k),
        float(t0),
    )
