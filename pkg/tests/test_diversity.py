import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scidiv.basemap import Basemap
from scidiv.distance import DistanceMatrix, cosine_distance_matrix, unweighted_path_matrix, weighted_path_matrix
from scidiv.diversity import diversity_report, read_scores, stirling, stirling_uniform, write_report
from scidiv.errors import InputError, UnmappedCategoryError
from scidiv.profile import ResearchProfile
from oracles import naive_stirling


def _dm(names, pairs, variant="wpath"):
    n = len(names)
    v = np.zeros((n, n))
    for (a, b), d in pairs.items():
        i, j = names.index(a), names.index(b)
        v[i, j] = v[j, i] = d
    return DistanceMatrix(variant, tuple(names), v, {}, np.zeros((n, n), dtype=bool))


def test_single_sc_scores_zero():
    dm = _dm(["A", "B"], {("A", "B"): 1.0})
    assert stirling({"A": 1.0}, dm) == 0.0


def test_two_sc_ordered_pairs(backend):
    dm = _dm(["A", "B"], {("A", "B"): 1.0})
    assert stirling({"A": 0.5, "B": 0.5}, dm, backend=backend) == 0.5


def test_three_sc_hand_value(backend):
    dm = _dm(["A", "B", "C"], {("A", "B"): 0.4, ("A", "C"): 1.0, ("B", "C"): 0.8})
    shares = {"A": 0.5, "B": 0.3, "C": 0.2}
    expected = naive_stirling(shares, dm)
    assert expected == pytest.approx(0.416, abs=1e-12)
    assert stirling(shares, dm, backend=backend) == pytest.approx(expected, abs=1e-12)


def test_stirling_validation():
    dm = _dm(["A", "B"], {("A", "B"): 1.0})
    with pytest.raises(InputError):
        stirling({"A": 0.5, "B": 0.4}, dm)
    with pytest.raises(UnmappedCategoryError, match="X"):
        stirling({"A": 0.5, "X": 0.5}, dm)
    assert stirling({"A": 0.5, "B": 0.25}, dm, normalized=False) == 0.25


def test_uniform_examples(chain):
    dm = _dm(["A", "B"], {("A", "B"): 0.7})
    assert stirling_uniform({"A"}, dm) == 0.0
    assert stirling_uniform({"A", "B"}, dm) == 1.4
    assert stirling_uniform({"I", "J", "K"}, unweighted_path_matrix(chain)) == 8.0
    with pytest.raises(InputError):
        stirling_uniform(set(), dm)


@pytest.mark.parametrize("seed", range(25))
def test_matches_naive_loop(seed, backend):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 51))
    names = [f"S{i}" for i in range(n)]
    d = rng.random((n, n))
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0)
    dm = DistanceMatrix("wpath", tuple(names), d)
    p = rng.dirichlet(np.ones(n) * 0.5)
    shares = dict(zip(names, p.tolist()))
    shares = {k: v / sum(shares.values()) for k, v in shares.items()}
    assert stirling(shares, dm, backend=backend) == pytest.approx(naive_stirling(shares, dm), abs=1e-12)


graph_and_shares = st.integers(2, 9).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.dictionaries(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1]),
            st.floats(0.05, 1.0),
        ),
        st.lists(st.integers(0, 50), min_size=n, max_size=n).filter(lambda c: sum(c) > 0),
    )
)


def _build(n, sims, counts):
    names = tuple(f"S{i}" for i in range(n))
    bm = Basemap(names, {(names[i], names[j]): s for (i, j), s in sims.items()})
    return bm, ResearchProfile("O", dict(zip(names, counts)))


@settings(max_examples=100, deadline=None)
@given(graph_and_shares)
def test_cosine_bound(case):
    bm, prof = _build(*case)
    p = prof.shares
    val = stirling(p, cosine_distance_matrix(bm))
    assert 0.0 <= val <= 1.0 - sum(x * x for x in p.values()) + 1e-12
    assert val < 1.0


@settings(max_examples=100, deadline=None)
@given(graph_and_shares, st.integers(1, 1000))
def test_score_scale_invariance(case, k):
    bm, prof = _build(*case)
    a = diversity_report([prof], bm).values["O"]
    b = diversity_report([prof.scaled(k)], bm).values["O"]
    assert a == b


def test_merge_at_zero_distance_is_neutral():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(3, 12))
        names = [f"S{i}" for i in range(n)]
        d = rng.random((n, n))
        # S1 is a duplicate of S0: zero apart, same distance to everyone else
        d[1, :] = d[0, :]
        d = np.triu(d, 1)
        d = d + d.T
        d[0, 1] = d[1, 0] = 0.0
        d[1, 2:] = d[2:, 1] = d[0, 2:]
        np.fill_diagonal(d, 0)
        dm = DistanceMatrix("wpath", tuple(names), d)
        p = rng.dirichlet(np.ones(n))
        full = dict(zip(names, p.tolist()))
        merged = {"S0": full["S0"] + full["S1"], **{k: v for k, v in full.items() if k not in ("S0", "S1")}}
        assert stirling(merged, dm, normalized=False) == pytest.approx(stirling(full, dm, normalized=False), abs=1e-12)


def test_report_pass_through_matches_ref_scores(ref_scores, tmp_path):
    assert len(ref_scores.values) == 27
    assert ref_scores.values["CORV"] == {"sim": 0.446, "wpath": 0.653}
    assert ref_scores.values["PSYNEU"] == {"sim": 0.242, "wpath": 0.243}
    out = tmp_path / "r.csv"
    write_report(ref_scores, out)
    again = read_scores(out)
    assert again.values == ref_scores.values


def test_empty_variant_set(chain):
    rep = diversity_report([ResearchProfile("O", {"I": 1, "J": 1})], chain, variants=())
    assert rep.scores() == []


def test_identical_profiles_identical_scores(chain):
    a = ResearchProfile("A", {"I": 3, "J": 1, "K": 2})
    b = ResearchProfile("B", {"I": 3, "J": 1, "K": 2})
    rep = diversity_report([a, b], chain)
    assert rep.values["A"] == rep.values["B"]
    assert set(rep.values["A"]) == {"sim", "path", "wpath"}


def test_failing_org_does_not_abort_batch(chain, tmp_path):
    good = ResearchProfile("GOOD", {"I": 1, "J": 1})
    bad = ResearchProfile("BAD", {"I": 1, "X": 1})
    rep = diversity_report([bad, good], chain, policy="error")
    assert "GOOD" in rep.values and "BAD" in rep.errors
    assert "X" in rep.errors["BAD"]
    out = tmp_path / "r.csv"
    write_report(rep, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "org_id,div_sim,div_path,div_wpath,error"
    assert lines[1] == "GOOD,0.500000,1.000000,0.350000,"
    assert lines[2].startswith("BAD,,,,")


def test_drop_keep_scores_use_raw_mass(chain):
    prof = ResearchProfile("O", {"I": 1, "J": 1, "X": 2})
    rep = diversity_report([prof], chain, variants=("wpath",), policy="drop-keep")
    assert rep.values["O"]["wpath"] == pytest.approx(2 * 0.25 * 0.25 * 0.7)


def test_uniform_weighting(chain):
    rep = diversity_report([ResearchProfile("O", {"I": 5, "J": 1, "K": 1})], chain, variants=("path",), weighting="uniform")
    assert rep.values["O"]["path"] == 8.0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_threshold_monotonicity_wpath(seed):
    from scidiv.basemap import CitationMatrix, build_basemap

    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    counts = rng.integers(0, 6, size=(n, n)) + np.eye(n, dtype=int)
    names = tuple(f"S{i}" for i in range(n))
    cm = CitationMatrix(names, counts)
    t1, t2 = sorted(rng.uniform(0, 0.8, size=2))
    lo, hi = build_basemap(cm, t1), build_basemap(cm, t2)
    active = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
    prof = ResearchProfile("O", {names[i]: int(rng.integers(1, 9)) for i in active})
    a, b = weighted_path_matrix(lo), weighted_path_matrix(hi)
    idx = [names.index(sc) for sc in prof.shares]
    if a.unreachable[np.ix_(idx, idx)].any() or b.unreachable[np.ix_(idx, idx)].any():
        return
    assert stirling(prof.shares, b) >= stirling(prof.shares, a) - 1e-12
