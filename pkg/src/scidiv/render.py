"""Force-directed layout and static export of competence maps."""

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from scidiv import _graphml, kernels
from scidiv.errors import FormatError, InputError

FORMATS = ("dot", "graphml", "svg", "csv")

# presentation constants, in SVG user units
MIN_RADIUS = 2.0
RADIUS_SCALE = 60.0
CANVAS = 1000.0
MARGIN = 50.0


@dataclass(frozen=True)
class LayoutCoords:
    coords: dict  # sc -> (x, y) in the unit square
    seed: int
    iterations: int


def layout_fr(bm, seed=0, iterations=500, t0=0.1, backend=None):
    """Fruchterman-Reingold layout with similarity-weighted attraction.

    Nodes start uniformly at random (seeded), move inside a unit frame, and
    the result is re-centred on (0.5, 0.5).
    """
    if iterations < 1:
        raise InputError("iterations must be >= 1")
    n = len(bm.nodes)
    if n == 0:
        return LayoutCoords({}, seed, iterations)
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2)) - 0.5
    src = np.array([bm.index[u] for u, _ in bm.edges], dtype=np.int64)
    dst = np.array([bm.index[v] for _, v in bm.edges], dtype=np.int64)
    sims = np.array(list(bm.edges.values()), dtype=np.float64)
    pos = kernels.fr_layout(pos, src, dst, sims, iterations, math.sqrt(1.0 / n), t0, backend=backend)
    pos = pos - (pos.min(axis=0) + pos.max(axis=0)) / 2.0 + 0.5
    return LayoutCoords({sc: (float(x), float(y)) for sc, (x, y) in zip(bm.nodes, pos)}, seed, iterations)


def node_radius(share, min_radius=MIN_RADIUS, scale=RADIUS_SCALE):
    return min_radius + scale * share


def export_map(cmap, coords, fmt, path, min_radius=MIN_RADIUS, scale=RADIUS_SCALE):
    """Write ``cmap`` laid out at ``coords`` as dot, graphml, svg or csv.

    Every basemap node is written; inactive ones keep the minimum radius.
    """
    if fmt not in FORMATS:
        raise InputError(f"unknown map format {fmt!r}; expected one of {FORMATS}")
    bm = cmap.basemap
    missing = [sc for sc in bm.nodes if sc not in coords.coords]
    if missing:
        raise InputError("layout lacks coordinates for: " + ", ".join(missing[:10]))
    nodes = [
        (sc, *coords.coords[sc], float(cmap.node_weights.get(sc, 0.0)))
        for sc in bm.nodes
    ]
    edges = [(u, v, s) for (u, v), s in bm.edges.items()]
    writer = {"csv": _write_csv, "dot": _write_dot, "graphml": _write_graphml, "svg": _write_svg}[fmt]
    writer(Path(path), cmap.org_id, nodes, edges, min_radius, scale)
    return Path(path)


def _write_csv(path, org, nodes, edges, min_radius, scale):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sc", "x", "y", "share"])
        for sc, x, y, share in nodes:
            w.writerow([sc, repr(x), repr(y), repr(share)])


def _write_dot(path, org, nodes, edges, min_radius, scale):
    def q(s):
        return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"graph {q(org)} {{", '  node [shape=circle, fixedsize=true, label=""];']
    for sc, x, y, share in nodes:
        # DOT sizes are inches; radius is in points
        width = 2.0 * node_radius(share, min_radius, scale) / 72.0
        lines.append(
            f'  {q(sc)} [pos="{x * 10:.6f},{y * 10:.6f}!", width={width:.6f}, share={share!r}, tooltip={q(sc)}];'
        )
    for u, v, s in edges:
        lines.append(f"  {q(u)} -- {q(v)} [penwidth={3.0 * s:.6f}, similarity={s!r}];")
    lines.append("}")
    path.write_text("\n".join(lines) + "\n")


def _write_graphml(path, org, nodes, edges, min_radius, scale):
    _graphml.write(
        path,
        [
            (sc, {"x": x, "y": y, "share": share, "radius": node_radius(share, min_radius, scale)})
            for sc, x, y, share in nodes
        ],
        [(u, v, {"similarity": s}) for u, v, s in edges],
        node_attrs=[("x", "double"), ("y", "double"), ("share", "double"), ("radius", "double")],
        edge_attrs=[("similarity", "double")],
    )


def _canvas(x, y):
    span = CANVAS - 2 * MARGIN
    return MARGIN + x * span, CANVAS - (MARGIN + y * span)


def _write_svg(path, org, nodes, edges, min_radius, scale):
    where = {sc: _canvas(x, y) for sc, x, y, _ in nodes}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS:g}" height="{CANVAS:g}" '
        f'viewBox="0 0 {CANVAS:g} {CANVAS:g}">',
        f"  <title>{escape(str(org))}</title>",
        '  <g stroke="#999999" stroke-opacity="0.6">',
    ]
    for u, v, s in edges:
        (x1, y1), (x2, y2) = where[u], where[v]
        out.append(f'    <line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" stroke-width="{2.0 * s:.4f}"/>')
    out.append("  </g>")
    out.append('  <g fill="#1f77b4" fill-opacity="0.8" stroke="#ffffff" stroke-width="0.5">')
    for sc, x, y, share in nodes:
        cx, cy = where[sc]
        r = node_radius(share, min_radius, scale)
        out.append(
            f'    <circle cx="{cx:.3f}" cy="{cy:.3f}" r="{r:.4f}" data-sc={quoteattr(str(sc))} data-share="{share!r}">'
            f"<title>{escape(str(sc))}: {share:.4f}</title></circle>"
        )
    out += ["  </g>", "</svg>"]
    path.write_text("\n".join(out) + "\n")


def read_map_csv(path):
    """Inverse of the csv export: ``({sc: (x, y)}, {sc: share})``."""
    path = Path(path)
    coords, shares = {}, {}
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["sc", "x", "y", "share"]:
            raise FormatError("header must be sc,x,y,share", path, 1)
        for lineno, row in enumerate(reader, start=2):
            try:
                coords[row["sc"]] = (float(row["x"]), float(row["y"]))
                shares[row["sc"]] = float(row["share"])
            except ValueError:
                raise FormatError("non-numeric field", path, lineno) from None
    return coords, shares
