"""Generalized Stirling diversity over competence maps."""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from scidiv import kernels
from scidiv.distance import distance_matrix
from scidiv.errors import FormatError, InputError, ScidivError
from scidiv.profile import overlay

# score variant -> distance variant
SCORE_VARIANTS = {"sim": "cosine", "path": "path", "wpath": "wpath"}
SUM_TOL = 1e-9


@dataclass(frozen=True)
class DiversityScore:
    org_id: str
    variant: str
    value: float


def _ordered(shares, dm):
    items = [(sc, float(p)) for sc, p in shares.items() if p != 0]
    for sc, p in items:
        if not (0.0 <= p <= 1.0) or not math.isfinite(p):
            raise InputError(f"share of {sc} outside [0, 1]: {p}")
    idx = dm.positions([sc for sc, _ in items])
    order = np.argsort(idx, kind="stable")
    return idx[order], np.array([p for _, p in items])[order]


def stirling(shares, dm, normalized=True, backend=None):
    """Sum of ``d_ij * p_i * p_j`` over ordered pairs ``i != j``.

    Each unordered pair therefore contributes twice. With
    ``normalized=False`` the shares may sum to less than one (the
    ``drop-keep`` overlay policy).
    """
    total = math.fsum(shares.values())
    if normalized and abs(total - 1.0) > SUM_TOL:
        raise InputError(f"shares sum to {total!r}, expected 1")
    if total > 1.0 + SUM_TOL:
        raise InputError(f"shares sum to {total!r} > 1")
    idx, p = _ordered(shares, dm)
    if idx.size < 2:
        return 0.0
    return kernels.stirling_sum(p, dm.values[np.ix_(idx, idx)], backend=backend)


def stirling_uniform(active, dm, backend=None):
    """Unweighted variant: sum of ``d_ij`` over ordered pairs of active SCs."""
    active = sorted(set(active), key=lambda sc: dm.index.get(sc, -1))
    if not active:
        raise InputError("at least one active subject category required")
    idx = dm.positions(active)
    return kernels.stirling_sum(np.ones(idx.size), dm.values[np.ix_(idx, idx)], backend=backend)


@dataclass
class DiversityReport:
    variants: tuple
    values: dict = field(default_factory=dict)  # org -> {variant: value}
    errors: dict = field(default_factory=dict)  # org -> message

    @property
    def org_ids(self):
        return list(self.values)

    def scores(self):
        return [
            DiversityScore(org, v, vals[v])
            for org, vals in self.values.items()
            for v in self.variants
            if v in vals
        ]

    def column(self, variant):
        return [(org, vals[variant]) for org, vals in self.values.items() if variant in vals]


def _canonical(variants):
    variants = set(variants)
    unknown = variants - set(SCORE_VARIANTS)
    if unknown:
        raise InputError(f"unknown diversity variant(s): {sorted(unknown)}")
    return tuple(v for v in SCORE_VARIANTS if v in variants)


def diversity_report(
    profiles,
    bm,
    variants=("sim", "path", "wpath"),
    policy="drop-renormalize",
    disconnected=None,
    weighting="shares",
    backend=None,
):
    """Score every profile under every requested variant.

    Distance matrices are built once. A profile that fails (overlay error,
    nothing on the map) gets an entry in ``errors`` and no scores; the rest
    of the batch proceeds.
    """
    if weighting not in ("shares", "uniform"):
        raise InputError(f"weighting must be 'shares' or 'uniform', got {weighting!r}")
    variants = _canonical(variants)
    report = DiversityReport(variants)
    if not variants:
        return report
    matrices = {v: distance_matrix(bm, SCORE_VARIANTS[v], disconnected, backend) for v in variants}
    for prof in profiles:
        try:
            cmap = overlay(prof, bm, policy)
            if not cmap.node_weights:
                raise InputError(f"{prof.org_id}: no subject category on the basemap")
            vals = {}
            for v, dm in matrices.items():
                if weighting == "uniform":
                    vals[v] = stirling_uniform(cmap.node_weights, dm, backend)
                else:
                    vals[v] = stirling(cmap.node_weights, dm, normalized=policy != "drop-keep", backend=backend)
        except ScidivError as exc:
            report.errors[prof.org_id] = str(exc)
            continue
        report.values[prof.org_id] = vals
    return report


def write_report(report, path):
    cols = [f"div_{v}" for v in report.variants]
    with_errors = bool(report.errors)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["org_id", *cols] + (["error"] if with_errors else []))
        for org, vals in report.values.items():
            w.writerow([org, *(f"{vals[v]:.6f}" for v in report.variants)] + ([""] if with_errors else []))
        for org, msg in report.errors.items():
            w.writerow([org, *([""] * len(cols)), msg])


def read_scores(path):
    """Load precomputed scores (``org_id`` plus any ``div_<variant>`` columns).

    Decimal commas are accepted, as in tables copied from European sources.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "org_id" not in fields:
            raise FormatError("header must contain org_id", path, 1)
        variants = _canonical(f[4:] for f in fields if f.startswith("div_"))
        if not variants:
            raise FormatError("no div_<variant> columns", path, 1)
        report = DiversityReport(variants)
        for lineno, row in enumerate(reader, start=2):
            org = row["org_id"].strip()
            if org in report.values:
                raise FormatError(f"duplicate org {org}", path, lineno)
            vals = {}
            for v in variants:
                raw = (row[f"div_{v}"] or "").strip().replace(",", ".")
                try:
                    vals[v] = float(raw)
                except ValueError:
                    raise FormatError(f"bad value {raw!r} for div_{v}", path, lineno) from None
                if not math.isfinite(vals[v]) or vals[v] < 0:
                    raise FormatError(f"div_{v} must be finite and >= 0", path, lineno)
            report.values[org] = vals
    return report
