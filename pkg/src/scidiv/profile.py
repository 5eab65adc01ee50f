"""Research profiles and their overlay on the basemap (competence maps)."""

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from scidiv.errors import FormatError, InputError, UnmappedCategoryError

logger = logging.getLogger(__name__)

COUNTING_MODES = ("full", "fractional")
OVERLAY_POLICIES = ("error", "drop-renormalize", "drop-keep")


@dataclass(frozen=True)
class PaperRecord:
    org_id: str
    paper_id: str
    sc_list: tuple

    def __post_init__(self):
        scs = tuple(str(s).strip() for s in self.sc_list)
        if not scs or any(not s for s in scs):
            raise InputError(f"paper {self.paper_id}: empty subject category list")
        if len(set(scs)) != len(scs):
            raise InputError(f"paper {self.paper_id}: duplicate subject categories {scs}")
        object.__setattr__(self, "sc_list", scs)


def _shares(counts):
    total = sum(counts.values())
    if total == 0:
        return {}
    # exact ratio, then one rounding: bit-stable under integer rescaling
    return {sc: float(Fraction(c) / Fraction(total)) for sc, c in counts.items() if c != 0}


@dataclass(frozen=True)
class ResearchProfile:
    """Counts per subject category and the derived shares.

    Counts are kept exact (``int`` or ``Fraction``); shares are floats.
    ``n_papers`` is the number of distinct papers, when known.
    """

    org_id: str
    counts: dict
    n_papers: int | None = None
    shares: dict = field(init=False)

    def __post_init__(self):
        counts = {}
        for sc, c in self.counts.items():
            c = Fraction(c) if not isinstance(c, (int, Fraction)) else c
            if c < 0:
                raise InputError(f"{self.org_id}: negative count for {sc}")
            if c:
                counts[str(sc)] = c
        object.__setattr__(self, "counts", dict(sorted(counts.items())))
        object.__setattr__(self, "shares", _shares(self.counts))

    def scaled(self, k):
        return ResearchProfile(self.org_id, {sc: c * k for sc, c in self.counts.items()}, self.n_papers)


@dataclass(frozen=True)
class CompetenceMap:
    """A profile projected onto a basemap.

    ``unmapped`` holds the original shares of profile SCs missing from the
    basemap; ``node_weights`` depend on the overlay policy.
    """

    basemap: object
    org_id: str
    node_weights: dict
    unmapped: dict
    policy: str

    @property
    def mass(self):
        return sum(self.node_weights.values())


def aggregate_profiles(records, counting="full"):
    """Fold paper records into one profile per organization (sorted by org id)."""
    if counting not in COUNTING_MODES:
        raise InputError(f"counting must be one of {COUNTING_MODES}, got {counting!r}")
    records = list(records)
    if not records:
        raise InputError("no paper records")
    counts = defaultdict(lambda: defaultdict(int))
    papers = defaultdict(set)
    for rec in records:
        if rec.paper_id in papers[rec.org_id]:
            raise InputError(f"{rec.org_id}: paper {rec.paper_id} listed twice")
        papers[rec.org_id].add(rec.paper_id)
        inc = 1 if counting == "full" else Fraction(1, len(rec.sc_list))
        for sc in rec.sc_list:
            counts[rec.org_id][sc] += inc
    return [ResearchProfile(org, dict(counts[org]), len(papers[org])) for org in sorted(counts)]


def filter_orgs(profiles, min_papers=100):
    """Keep organizations with at least ``min_papers`` distinct papers."""
    if min_papers < 1:
        raise InputError(f"min_papers must be >= 1, got {min_papers}")
    profiles = list(profiles)
    missing = [p.org_id for p in profiles if p.n_papers is None]
    if missing:
        raise InputError("paper counts unknown for: " + ", ".join(missing))
    kept = [p for p in profiles if p.n_papers >= min_papers]
    logger.info("retained %d of %d organizations (min %d papers)", len(kept), len(profiles), min_papers)
    return kept


def overlay(profile, bm, policy="drop-renormalize"):
    if policy not in OVERLAY_POLICIES:
        raise InputError(f"overlay policy must be one of {OVERLAY_POLICIES}, got {policy!r}")
    on_map = {sc: p for sc, p in profile.shares.items() if sc in bm.index}
    unmapped = {sc: p for sc, p in profile.shares.items() if sc not in bm.index}
    if unmapped:
        if policy == "error":
            raise UnmappedCategoryError(unmapped, profile.org_id)
        logger.warning(
            "%s: %d subject categor%s not on the basemap (%s): %s",
            profile.org_id,
            len(unmapped),
            "y" if len(unmapped) == 1 else "ies",
            policy,
            ", ".join(sorted(unmapped)),
        )
        if policy == "drop-renormalize" and on_map:
            kept = {sc: profile.counts[sc] for sc in on_map}
            on_map = _shares(kept)
    return CompetenceMap(bm, profile.org_id, on_map, unmapped, policy)


def read_records(path):
    """Read ``org_id,paper_id,subject_categories`` rows (SCs separated by ';')."""
    path = Path(path)
    out = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"org_id", "paper_id", "subject_categories"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise FormatError("header must contain org_id,paper_id,subject_categories", path, 1)
        for lineno, row in enumerate(reader, start=2):
            scs = [s.strip() for s in (row["subject_categories"] or "").split(";") if s.strip()]
            try:
                out.append(PaperRecord(row["org_id"].strip(), row["paper_id"].strip(), tuple(scs)))
            except InputError as exc:
                raise FormatError(str(exc), path, lineno) from None
    return out


def read_profiles(path):
    """Read pre-aggregated ``org_id,subject_category,count`` rows."""
    path = Path(path)
    counts = defaultdict(dict)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"org_id", "subject_category", "count"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise FormatError("header must contain org_id,subject_category,count", path, 1)
        for lineno, row in enumerate(reader, start=2):
            org, sc = row["org_id"].strip(), row["subject_category"].strip()
            try:
                c = Fraction(row["count"].strip())
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"bad count {row['count']!r}", path, lineno) from None
            if c < 0:
                raise FormatError("negative count", path, lineno)
            if sc in counts[org]:
                raise FormatError(f"duplicate row for {org}/{sc}", path, lineno)
            counts[org][sc] = int(c) if c.denominator == 1 else c
    return [ResearchProfile(org, counts[org]) for org in sorted(counts)]


def _fmt_count(c):
    if isinstance(c, Fraction) and c.denominator != 1:
        return repr(float(c)) if float(c) == c else f"{c.numerator}/{c.denominator}"
    return str(int(c))


def write_profiles(profiles, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["org_id", "subject_category", "count"])
        for p in profiles:
            for sc, c in p.counts.items():
                w.writerow([p.org_id, sc, _fmt_count(c)])
