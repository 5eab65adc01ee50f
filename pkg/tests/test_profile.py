import logging
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scidiv.basemap import Basemap
from scidiv.errors import FormatError, InputError, UnmappedCategoryError
from scidiv.profile import (
    PaperRecord,
    ResearchProfile,
    aggregate_profiles,
    filter_orgs,
    overlay,
    read_profiles,
    read_records,
    write_profiles,
)

RECS = [PaperRecord("O", "P1", ("A",)), PaperRecord("O", "P2", ("A", "B"))]


def test_full_counting():
    (p,) = aggregate_profiles(RECS, "full")
    assert p.counts == {"A": 2, "B": 1}
    assert p.shares == {"A": 2 / 3, "B": 1 / 3}
    assert p.n_papers == 2


def test_fractional_counting():
    (p,) = aggregate_profiles(RECS, "fractional")
    assert p.counts == {"A": 1.5, "B": 0.5}
    assert p.shares == {"A": 0.75, "B": 0.25}


def test_single_assignment():
    (p,) = aggregate_profiles([PaperRecord("O", "P", ("A",))])
    assert p.shares == {"A": 1.0}


def test_record_validation():
    with pytest.raises(InputError):
        PaperRecord("O", "P", ())
    with pytest.raises(InputError):
        PaperRecord("O", "P", ("A", "A"))
    with pytest.raises(InputError):
        aggregate_profiles([])
    with pytest.raises(InputError):
        aggregate_profiles(RECS, "harmonic")
    with pytest.raises(InputError, match="twice"):
        aggregate_profiles(RECS + [PaperRecord("O", "P1", ("C",))])


def _orgs(sizes):
    recs = [PaperRecord(org, f"{org}-{i}", ("A",)) for org, n in sizes.items() for i in range(n)]
    return aggregate_profiles(recs)


def test_filter_boundary_inclusive():
    kept = filter_orgs(_orgs({"X": 150, "Y": 100, "Z": 99}), 100)
    assert [p.org_id for p in kept] == ["X", "Y"]


def test_filter_min_one_keeps_all():
    profs = _orgs({"X": 3, "Y": 1})
    assert filter_orgs(profs, 1) == profs


def test_filter_needs_paper_counts():
    with pytest.raises(InputError):
        filter_orgs([ResearchProfile("X", {"A": 3})], 1)
    with pytest.raises(InputError):
        filter_orgs([], 0)


BM = Basemap(("A", "B", "C"), {("A", "B"): 0.5})


def test_overlay_full_coverage():
    cm = overlay(ResearchProfile("O", {"A": 1, "B": 1}), BM)
    assert cm.node_weights == {"A": 0.5, "B": 0.5}
    assert cm.unmapped == {}


def test_overlay_drop_renormalize(caplog):
    prof = ResearchProfile("O", {"A": 1, "X": 1})
    with caplog.at_level(logging.WARNING):
        cm = overlay(prof, BM, "drop-renormalize")
    assert cm.node_weights == {"A": 1.0}
    assert set(cm.unmapped) == {"X"}
    assert "X" in caplog.text


def test_overlay_drop_keep():
    cm = overlay(ResearchProfile("O", {"A": 1, "X": 1}), BM, "drop-keep")
    assert cm.node_weights == {"A": 0.5}
    assert set(cm.unmapped) == {"X"}
    assert cm.mass + sum(cm.unmapped.values()) == pytest.approx(1.0, abs=1e-9)


def test_overlay_error_policy():
    with pytest.raises(UnmappedCategoryError, match="X"):
        overlay(ResearchProfile("O", {"A": 1, "X": 1}), BM, "error")
    with pytest.raises(InputError):
        overlay(ResearchProfile("O", {"A": 1}), BM, "ignore")


counts_st = st.dictionaries(
    st.sampled_from([f"S{i}" for i in range(12)]), st.integers(0, 10_000), min_size=1
).filter(lambda d: sum(d.values()) > 0)


@settings(max_examples=200, deadline=None)
@given(counts_st, st.integers(1, 10_000))
def test_scale_invariance_bitwise(counts, k):
    p = ResearchProfile("O", counts)
    assert p.scaled(k).shares == p.shares


@settings(max_examples=100, deadline=None)
@given(counts_st)
def test_shares_normalized_and_supported(counts):
    p = ResearchProfile("O", counts)
    assert abs(sum(p.shares.values()) - 1.0) <= 1e-9
    assert set(p.shares) == {sc for sc, c in counts.items() if c}


records_st = st.lists(
    st.tuples(
        st.sampled_from(["O1", "O2", "O3"]),
        st.sets(st.sampled_from(list("ABCDEFG")), min_size=1, max_size=4),
    ),
    min_size=1,
    max_size=30,
)


@settings(max_examples=100, deadline=None)
@given(records_st, st.randoms(use_true_random=False), st.sampled_from(["full", "fractional"]))
def test_aggregation_order_independent(raw, rnd, counting):
    recs = [PaperRecord(org, f"P{i}", tuple(sorted(scs))) for i, (org, scs) in enumerate(raw)]
    shuffled = recs[:]
    rnd.shuffle(shuffled)
    assert aggregate_profiles(recs, counting) == aggregate_profiles(shuffled, counting)


@settings(max_examples=100, deadline=None)
@given(records_st)
def test_full_counting_totals(raw):
    recs = [PaperRecord(org, f"P{i}", tuple(sorted(scs))) for i, (org, scs) in enumerate(raw)]
    profs = aggregate_profiles(recs)
    assert sum(sum(p.counts.values()) for p in profs) == sum(len(r.sc_list) for r in recs)


def test_read_records(tmp_path):
    p = tmp_path / "r.csv"
    p.write_text("org_id,paper_id,subject_categories\nO,P1,A\nO,P2,A; B\nQ,P3,C\n")
    recs = read_records(p)
    assert recs[1].sc_list == ("A", "B")
    profs = aggregate_profiles(recs)
    assert [x.org_id for x in profs] == ["O", "Q"]
    p.write_text("org_id,paper_id,subject_categories\nO,P1,\n")
    with pytest.raises(FormatError, match=":2"):
        read_records(p)
    p.write_text("org,paper\n")
    with pytest.raises(FormatError):
        read_records(p)


def test_profiles_csv_round_trip(tmp_path):
    (frac,) = aggregate_profiles(
        [PaperRecord("O", "P1", ("A", "B", "C")), PaperRecord("O", "P2", ("A",))], "fractional"
    )
    assert frac.counts["B"] == Fraction(1, 3)
    path = tmp_path / "p.csv"
    write_profiles([frac], path)
    (back,) = read_profiles(path)
    assert back.counts == frac.counts
    assert back.shares == frac.shares


def test_read_profiles_rejects(tmp_path):
    p = tmp_path / "p.csv"
    p.write_text("org_id,subject_category,count\nO,A,-1\n")
    with pytest.raises(FormatError, match=":2"):
        read_profiles(p)
    p.write_text("org_id,subject_category,count\nO,A,1\nO,A,2\n")
    with pytest.raises(FormatError, match=":3"):
        read_profiles(p)
