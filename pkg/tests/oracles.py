"""Independent brute-force oracles. Pure Python on purpose: no numpy, no scidiv kernels."""

import random
from collections import deque


def simple_path_minima(n, wedges):
    """Minimum summed weight over all simple paths, by exhaustive DFS.

    ``wedges`` maps ``(i, j)`` (i < j) to a weight. Returns an ``n x n``
    list of lists with ``None`` for unreachable pairs.
    """
    adj = [[] for _ in range(n)]
    for (i, j), w in wedges.items():
        adj[i].append((j, w))
        adj[j].append((i, w))
    best = [[None] * n for _ in range(n)]
    for s in range(n):
        best[s][s] = 0.0
        on_path = [False] * n
        on_path[s] = True

        def walk(u, acc):
            for v, w in adj[u]:
                if on_path[v]:
                    continue
                total = acc + w
                if best[s][v] is None or total < best[s][v]:
                    best[s][v] = total
                on_path[v] = True
                walk(v, total)
                on_path[v] = False

        walk(s, 0.0)
    return best


def bfs_hops(n, edges):
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    out = [[None] * n for _ in range(n)]
    for s in range(n):
        out[s][s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if out[s][v] is None:
                    out[s][v] = out[s][u] + 1
                    q.append(v)
    return out


def naive_stirling(shares, dist):
    """``dist(a, b)`` is any callable; plain double loop over ordered pairs."""
    total = 0.0
    keys = list(shares)
    for a in keys:
        for b in keys:
            if a != b:
                total += dist(a, b) * shares[a] * shares[b]
    return total


def random_graph(rng, max_nodes=12, p_range=(0.15, 0.45)):
    """Random weighted graph; weights strictly inside (0, 1)."""
    n = rng.randint(2, max_nodes)
    p = rng.uniform(*p_range)
    wedges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                wedges[(i, j)] = rng.uniform(1e-6, 1 - 1e-6)
    return n, wedges


def as_basemap(n, wedges):
    from scidiv.basemap import Basemap

    names = tuple(f"N{i}" for i in range(n))
    return Basemap.from_distances(names, {(names[i], names[j]): w for (i, j), w in wedges.items()})


def seeded(seed):
    return random.Random(seed)
