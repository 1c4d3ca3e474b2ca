import itertools
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from conftest import fr_bruteforce, y_direct
from regenrepair.core import OperatingPoint as P, PreconditionViolated, validate_params
from regenrepair.family import FamilyStructure, rfip
from regenrepair.tradeoff import (Partition, br_mbr, br_mincut, br_msr,
                                  br_tradeoff_curve, cm_values,
                                  family_plus_mbr, family_plus_mincut,
                                  family_plus_partition,
                                  family_plus_tradeoff_curve, fr_mbr,
                                  fr_mincut, fr_msr, fr_tradeoff_curve,
                                  grouped_lrc_mbr, helper_selection_beneficial,
                                  optimality_class, stationary_lower_bound)

SAMPLES = [P(Fr(1), Fr(1)), P(Fr(3), Fr(1)), P(Fr(5, 2), Fr(1)), P(Fr(7, 3), Fr(2, 3)), P(Fr(1, 2), Fr(1, 5))]


def nkd(max_n):
    for n in range(2, max_n + 1):
        for d in range(1, n):
            for k in range(1, n + 1):
                yield n, k, d


def ag(curve):
    return set(curve.alpha_gamma())


# ------------------------------------------------------------------ blind

def test_br_values():
    assert br_mincut(validate_params(6, 4, 4), P(Fr(1, 4), Fr(1, 4))) == 1
    assert br_mincut(validate_params(6, 3, 3), P(3, 1)) == 6
    p = validate_params(7, 3, 5)
    assert br_mincut(p, P(100, 1)) == 3 * 5 - 3


def test_br_extremes():
    assert br_mbr(validate_params(6, 4, 4)).alpha == Fr(2, 5)
    assert br_mbr(validate_params(5, 3, 2)).alpha == Fr(2, 3)
    assert br_mbr(validate_params(20, 10, 10)).alpha == Fr(2, 11)
    m = br_msr(validate_params(6, 4, 4))
    assert (m.alpha, m.gamma(4)) == (Fr(1, 4), 1)
    m = br_msr(validate_params(5, 3, 2))
    assert (m.alpha, m.gamma(2)) == (Fr(1, 2), 1)
    m = br_msr(validate_params(9, 4, 4, 4))
    assert (m.alpha, m.gamma(4)) == (1, 4)


# ----------------------------------------------------------------- family

def test_fr_values():
    assert fr_mincut(validate_params(6, 3, 3), P(3, 1)) == 7
    a = Fr(5, 3)
    assert fr_mincut(validate_params(4, 3, 2), P(a, a)) == 2 * a
    assert fr_mincut(validate_params(6, 5, 3), P(3, 1)) == 9


@pytest.mark.parametrize("n,k,d", [t for t in nkd(7)])
def test_fr_mincut_matches_permutation_oracle(n, k, d):
    p = validate_params(n, k, d)
    for pt in SAMPLES[:3]:
        assert fr_mincut(p, pt) == fr_bruteforce(n, k, d, pt.alpha, pt.beta)


def test_fr_extremes():
    assert fr_mbr(validate_params(6, 4, 4)).alpha == Fr(4, 11)
    assert fr_mbr(validate_params(5, 3, 2)).alpha == Fr(1, 2)
    assert fr_mbr(validate_params(20, 10, 10)).alpha == Fr(2, 15)
    m = fr_msr(validate_params(6, 4, 4))
    assert (m.alpha, m.beta) == (Fr(1, 4), Fr(1, 4))
    m = fr_msr(validate_params(5, 3, 2))
    assert (m.alpha, m.beta) == (Fr(1, 2), Fr(1, 4))
    m = fr_msr(validate_params(7, 1, 3))
    assert (m.alpha, m.beta) == (1, Fr(1, 3))


@pytest.mark.parametrize("n,k,d", [t for t in nkd(8) if t[2] < t[1]])
def test_fr_msr_search_is_tight(n, k, d):
    p = validate_params(n, k, d)
    m = fr_msr(p)
    assert m.alpha == Fr(1, d)
    assert fr_mincut(p, m) == 1
    assert fr_mincut(p, P(m.alpha, m.beta * Fr(999, 1000))) < 1


def test_curves_examples():
    assert ag(fr_tradeoff_curve(validate_params(6, 4, 4))) == {
        (Fr(1, 4), 1), (Fr(2, 7), Fr(4, 7)), (Fr(4, 11), Fr(4, 11))}
    br = br_tradeoff_curve(validate_params(6, 4, 4))
    assert (br.mbr.alpha, br.mbr.gamma(4)) == (Fr(2, 5), Fr(2, 5))
    assert (br.msr.alpha, br.msr.gamma(4)) == (Fr(1, 4), 1)
    assert ag(fr_tradeoff_curve(validate_params(5, 3, 2))) == {(Fr(1, 2), Fr(1, 2))}
    for n, d in [(5, 2), (7, 4), (9, 8)]:
        assert ag(fr_tradeoff_curve(validate_params(n, 1, d))) == {(1, 1)}
        assert ag(br_tradeoff_curve(validate_params(n, 1, d))) == {(1, 1)}


def _slope_changes(g, d):
    """Breakpoints of t -> g(t) on a fine grid, found by second differences."""
    h = Fr(1, 60)
    ts = [i * h for i in range(1, int((d + 1) / h))]
    vals = [g(t) for t in ts]
    out = set()
    for i in range(1, len(ts) - 1):
        if vals[i + 1] - 2 * vals[i] + vals[i - 1] != 0:
            out.add(ts[i])
    return out


@pytest.mark.parametrize("n,k,d", [(6, 4, 4), (5, 3, 2), (7, 5, 4), (8, 6, 5), (6, 5, 3), (7, 6, 3)])
def test_curve_corners_match_grid_breakpoints(n, k, d):
    p = validate_params(n, k, d)
    curve = fr_tradeoff_curve(p)
    ts = {c.alpha / c.beta for c in curve.corners}
    grid = _slope_changes(lambda t: fr_mincut(p, P(t, 1)), d)
    assert grid == ts   # corners here all lie on multiples of 1/60


@pytest.mark.parametrize("n,k,d", [t for t in nkd(7)])
def test_curve_validity(n, k, d):
    p = validate_params(n, k, d, Fr(3, 2))
    eps = Fr(1, 10 ** 6)
    for curve, cut in [(fr_tradeoff_curve(p), fr_mincut), (br_tradeoff_curve(p), br_mincut)]:
        alphas = [c.alpha for c in curve.corners]
        gammas = [c.gamma(d) for c in curve.corners]
        assert alphas == sorted(alphas, reverse=True) and len(set(alphas)) == len(alphas)
        assert gammas == sorted(gammas) and len(set(gammas)) == len(gammas)
        for c in curve.corners:
            assert cut(p, c) == p.M
            assert cut(p, P(c.alpha * (1 + eps), c.beta * (1 + eps))) > p.M
    fr = fr_tradeoff_curve(p)
    assert fr.mbr == fr_mbr(p)
    assert fr.msr.alpha == fr_msr(p).alpha


# ---------------------------------------------------------- lower bounds

def _rfip_bound(p, pt):
    ys = y_direct(rfip(p.n, p.d).labels[:p.k])
    return sum(min((p.d - y) * pt.beta, pt.alpha) for y in ys)


@pytest.mark.parametrize("n,k,d", [t for t in nkd(8)])
def test_sandwich(n, k, d):
    p = validate_params(n, k, d)
    hs = FamilyStructure(n, d).helper_sets
    for pt in SAMPLES:
        lo = stationary_lower_bound(hs, k, pt)
        full = stationary_lower_bound(hs, k, pt, distinct_only=False) if n <= 6 else lo
        fr = fr_mincut(p, pt)
        assert full == lo <= fr <= _rfip_bound(p, pt)
        assert fr == lo
        assert fr >= br_mincut(p, pt)


def test_stationary_k1():
    hs = {1: {2, 3}, 2: {3, 1}, 3: {1, 2}}
    assert stationary_lower_bound(hs, 1, P(5, 1)) == 2
    assert stationary_lower_bound(FamilyStructure(6, 3).helper_sets, 3, P(3, 1)) == 7


@pytest.mark.parametrize("n,k,d", [t for t in nkd(10) if t[2] >= 2])
def test_fr_beats_br_when_expected(n, k, d):
    p = validate_params(n, k, d)
    pt = P(d, 1)
    if k > -(-n // (n - d)):
        assert fr_mincut(p, pt) > br_mincut(p, pt)
    assert fr_mbr(p).alpha <= br_mbr(p).alpha
    assert (fr_mbr(p).alpha == br_mbr(p).alpha) == (fr_mincut(p, pt) == br_mincut(p, pt))


# ------------------------------------------------------------- verdicts

def test_beneficial_examples():
    v = helper_selection_beneficial(6, 3, 4)
    assert not v and v.condition == "ii"
    assert helper_selection_beneficial(6, 4, 4).beneficial
    v = helper_selection_beneficial(7, 3, 1)
    assert not v and v.condition == "i"


def test_cm_values():
    vals, low = cm_values(validate_params(4, 3, 2), P(1, 1))
    assert vals == [2, 3] and low == 2
    p = validate_params(6, 4, 4)
    vals, low = cm_values(p, P(10, 1))
    assert vals == [sum(4 - i for i in range(4) if i != m - 1) + 6 - m for m in range(2, 5)]
    assert low == fr_mincut(p, P(10, 1))
    with pytest.raises(PreconditionViolated):
        cm_values(validate_params(6, 3, 4), P(1, 1))


@pytest.mark.parametrize("n,d", [(n, d) for n in range(3, 11) for d in range(2, n)])
def test_cm_min_is_fr(n, d):
    k = -(-n // (n - d)) + 1
    if k > n:
        return
    p = validate_params(n, k, d)
    for pt in SAMPLES:
        assert cm_values(p, pt)[1] == fr_mincut(p, pt)


# ------------------------------------------------------------ family-plus

def test_partitions():
    assert family_plus_partition(8, 2).group_sizes == (4, 4)
    assert family_plus_partition(9, 2).group_sizes == (4, 5)
    assert family_plus_partition(60, 10).group_sizes == (20, 20, 20)
    assert family_plus_partition(7, 4).group_sizes == (7,)


@given(st.integers(2, 80).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_partition_shape(nd):
    n, d = nd
    sizes = family_plus_partition(n, d).group_sizes
    assert sum(sizes) == n and all(s > d for s in sizes)
    assert all(s == 2 * d for s in sizes[:-1])
    if n % (2 * d) and n > 2 * d:
        assert 2 * d + 1 <= sizes[-1] <= 4 * d


def test_family_plus_examples():
    p = validate_params(6, 4, 4)
    for pt in SAMPLES:
        assert family_plus_mincut(p, pt, Partition((6,))) == fr_mincut(p, pt)
    assert family_plus_mincut(validate_params(60, 40, 10), P(10, 1)) == 200
    assert family_plus_mbr(validate_params(60, 40, 10)).alpha == Fr(1, 20)
    assert family_plus_mbr(validate_params(60, 10, 10)).alpha == Fr(2, 15)
    assert family_plus_mbr(validate_params(40, 20, 10, 7)).alpha == Fr(7, 10)


def _composition_oracle(p, pt, sizes):
    best = None
    for ks in itertools.product(*[range(min(s, p.k) + 1) for s in sizes]):
        if sum(ks) != p.k:
            continue
        v = sum((fr_bruteforce(s, kb, p.d, pt.alpha, pt.beta) if kb else Fr(0)
                 for s, kb in zip(sizes, ks)), Fr(0))
        best = v if best is None or v < best else best
    return best


@pytest.mark.parametrize("n,k,d,sizes", [(8, 5, 2, (4, 4)), (9, 6, 2, (4, 5)), (9, 7, 3, (9,)),
                                         (10, 7, 2, (5, 5)), (10, 8, 3, (4, 6))])
def test_family_plus_knapsack_vs_compositions(n, k, d, sizes):
    p = validate_params(n, k, d)
    for pt in SAMPLES[:3]:
        assert family_plus_mincut(p, pt, Partition(sizes)) == _composition_oracle(p, pt, sizes)


def test_family_plus_mbr_formula_against_mincut():
    for n in range(3, 17):
        for d in range(1, n):
            for k in range(1, n + 1):
                p = validate_params(n, k, d)
                pt = family_plus_mbr(p)
                assert pt.alpha == d * pt.beta
                assert family_plus_mincut(p, pt) == 1


@pytest.mark.parametrize("n,k,d", [(6, 4, 4), (9, 6, 2), (8, 7, 2), (12, 9, 3)])
def test_family_plus_curve(n, k, d):
    p = validate_params(n, k, d)
    curve = family_plus_tradeoff_curve(p)
    assert curve.mbr == family_plus_mbr(p)
    for c in curve.corners:
        assert family_plus_mincut(p, c) == 1


def test_grouped_lrc():
    assert grouped_lrc_mbr(12, 5, 3).alpha == Fr(1, 3)
    assert grouped_lrc_mbr(12, 4, 3).alpha == Fr(1, 2)
    assert grouped_lrc_mbr(12, 12, 3, 5).alpha == Fr(2 * 5, 12)
    with pytest.raises(PreconditionViolated):
        grouped_lrc_mbr(60, 10, 10)


@pytest.mark.parametrize("n", range(3, 13))
def test_family_plus_monotone(n):
    for d in range(1, n):
        for k in range(1, n + 1):
            p = validate_params(n, k, d)
            pt = P(d, 1)
            assert family_plus_mincut(p, pt) >= fr_mincut(p, pt)


# ------------------------------------------------------------ optimality

def test_optimality_examples():
    assert "FR-curve-optimal" in optimality_class(6, 4, 4).classes
    rep = optimality_class(19, 18, 4)
    assert "family-plus-MBR-optimal" in rep.classes
    assert rep.partition.group_sizes == (8, 6, 5)
    assert optimality_class(6, 3, 4).classes == ("BR-equivalent",)
    assert "FR-MBR-optimal" in optimality_class(6, 5, 3).classes


def test_optimality_equalities():
    a = Fr(3, 7)
    assert fr_mincut(validate_params(4, 3, 2), P(a, a)) == 2 * a
    for n, k, d in [(6, 5, 3), (8, 7, 4)]:
        assert fr_mincut(validate_params(n, k, d), P(d, 1)) == Fr(n * d, 2)
    p = validate_params(19, 18, 4)
    assert family_plus_mincut(p, P(4, 1), Partition((8, 6, 5))) == Fr(19 * 4, 2)


@pytest.mark.parametrize("n", range(3, 11))
def test_dynamic_upper_bound(n):
    for d in range(1, n):
        p = validate_params(n, n - 1, d)
        pt = P(d, 1)
        bound = Fr(n * d, 2)
        assert fr_mincut(p, pt) <= bound
        assert family_plus_mincut(p, pt) <= bound
        if n % (n - d) == 0:
            assert fr_mincut(p, pt) == bound
