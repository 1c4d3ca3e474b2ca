import itertools
import json
from fractions import Fraction as Fr

import pytest

from regenrepair.core import OperatingPoint as P, SchemeViolation, validate_params
from regenrepair.family import FamilyStructure, y_scores
from regenrepair.ifg import (INF, Family, FamilyPlus, ScriptedAdversary,
                             Stationary, fail_and_repair, fr_adversarial_sequence,
                             max_flow, min_cut_certificate, min_cut_to_collector,
                             min_over_collectors, new_ifg, run_schedule,
                             worst_case_search)
from regenrepair.tradeoff import (Partition, family_plus_mincut, fr_mincut,
                                  stationary_lower_bound)


def brute_min_cut(edges, s, t):
    """Independent oracle: minimum over all s-side vertex sets."""
    verts = sorted({u for u, _, _ in edges} | {v for _, v, _ in edges} - {s, t})
    best = None
    for r in range(len(verts) + 1):
        for side in itertools.combinations(verts, r):
            S = set(side) | {s}
            caps = [c for u, v, c in edges if u in S and v not in S]
            if any(c is INF for c in caps):
                continue
            val = sum(caps, Fr(0))
            best = val if best is None or val < best else best
    return best


def choice1():
    g = new_ifg(6, 3, 3, 1)
    return run_schedule(g, [4, 3], ScriptedAdversary([(1, 2, 3), (1, 2, 4)]))


def choice2():
    g = new_ifg(6, 3, 3, 1)
    return run_schedule(g, [4, 3], ScriptedAdversary([(1, 2, 3), (4, 5, 6)]))


def test_fresh_graph():
    g = new_ifg(4, 2, Fr(3), Fr(1))
    verts = {u for u, _, _ in g.edges} | {v for _, v, _ in g.edges}
    assert len(verts) == 1 + 2 * 4
    assert sum(1 for e in g.edges if e[2] is INF) == 4
    assert sum(1 for e in g.edges if e[2] == 3) == 4
    for k in range(1, 5):
        assert min_over_collectors(g, k) == 3 * k
        assert min_cut_to_collector(g, tuple(range(1, k + 1))) == 3 * k


def test_single_repair_topology():
    g = fail_and_repair(new_ifg(4, 2, 2, 1), 1, ScriptedAdversary([(2, 3)]))
    g.validate()
    beta = [(u, v) for u, v, c in g.edges if u.startswith("out:")]
    assert beta == [("out:2.0", "in:1.1"), ("out:3.0", "in:1.1")]
    assert g.active == (1, 0, 0, 0)


def test_repair_twice_versions():
    sch = Stationary({1: {2, 3}, 2: {1, 3}, 3: {1, 2}, 4: {1, 2}})
    g = run_schedule(new_ifg(4, 2, 2, 1), [1, 1], sch)
    g.validate()
    assert g.version(1) == 2
    assert [ev.version for ev in g.history] == [1, 2]
    # the intermediate version no longer helps anyone
    g = fail_and_repair(g, 2, sch)
    assert ("out:1.2", "in:2.1", Fr(1)) in g.edges
    assert not any(u == "out:1.1" and v == "in:2.1" for u, v, _ in g.edges)


def test_scheme_violations():
    g = new_ifg(4, 2, 2, 1)
    with pytest.raises(SchemeViolation):
        fail_and_repair(g, 1, ScriptedAdversary([(1, 2)]))
    with pytest.raises(SchemeViolation):
        fail_and_repair(g, 1, ScriptedAdversary([(2, 2)]))
    with pytest.raises(SchemeViolation):
        fail_and_repair(g, 1, ScriptedAdversary([(2, 3, 4)]))
    with pytest.raises(SchemeViolation):
        fail_and_repair(g, 1, ScriptedAdversary([]))


def test_worked_six_node_example():
    g1, g2 = choice1(), choice2()
    g1.validate()
    g2.validate()
    assert min_cut_to_collector(g1, (1, 3, 4)) == 6
    assert min_cut_to_collector(g2, (1, 3, 4)) == 7
    assert min_over_collectors(g2, 3) == 7
    assert all(min_cut_to_collector(g2, c) >= 7 for c in itertools.combinations(range(1, 7), 3))
    assert min_over_collectors(g1, 3) <= 6


def test_max_flow_matches_brute_force():
    for g in (choice1(), choice2()):
        for coll in [(1, 3, 4), (2, 3, 4), (4, 5, 6)]:
            cert = min_cut_certificate(g, coll)
            edges = list(g.edges) + [(f"out:{i}.{g.version(i)}", "t", INF) for i in coll]
            assert cert.value == brute_min_cut(edges, "s", "t")
            assert sum(c for _, _, c in cert.edges) == cert.value


def test_max_flow_rational_capacities():
    edges = [("s", "a", Fr(1, 3)), ("s", "b", Fr(2, 5)), ("a", "b", Fr(1, 7)),
             ("a", "t", Fr(1, 6)), ("b", "t", Fr(1, 2))]
    cert = max_flow(edges, "s", "t")
    assert cert.value == brute_min_cut(edges, "s", "t")
    out = json.loads(json.dumps(cert.to_json()))
    assert sum(Fr(e["capacity"]) for e in out) == cert.value


def test_adversarial_sequence_examples():
    st8 = FamilyStructure(8, 5)
    order = fr_adversarial_sequence(st8, (1, 2, 1, -2, 0, 0, 1, 2))
    assert order == [1, 4, 2, 6, 7, 8, 3, 5]
    alt = [3, 5, 2, 6, 8, 7, 1, 4]
    assert [st8.label(v) for v in alt] == [1, 2, 1, -2, 0, 0, 1, 2]


@pytest.mark.parametrize("target", [(1, 2, 1, -2, 0, 0, 1, 2), (1, 2, 0, 1, 2, 0, 1, -2)])
def test_adversarial_sequence_value(target):
    st8 = FamilyStructure(8, 5)
    for alpha, beta in [(Fr(5), Fr(1)), (Fr(3), Fr(1))]:
        order = fr_adversarial_sequence(st8, target)
        g = run_schedule(new_ifg(8, 5, alpha, beta), order, Family(st8))
        oldest = tuple(order[:4])
        expect = sum(min((5 - y) * beta, alpha) for y in y_scores(target, 4))
        assert min_cut_to_collector(g, oldest) == expect


def test_adversarial_policy_reaches_fr():
    p = validate_params(6, 3, 3)
    res = worst_case_search(Family(FamilyStructure(6, 3)), p, P(3, 1), "adversarial")
    assert res.value == 7 and res.matches


def test_exhaustive_small():
    p = validate_params(4, 3, 2)
    b = Fr(2, 3)
    res = worst_case_search(Family(FamilyStructure(4, 2)), p, P(b, b), "exhaustive")
    assert res.value == 2 * b == res.closed_form and res.exact
    assert res.graphs == 1 + 4 + 12 + 24 + 24


def test_scripted_choice1_search():
    p = validate_params(6, 3, 3)
    res = worst_case_search(ScriptedAdversary([(1, 2, 3), (1, 2, 4)]), p, P(3, 1), [[4, 3]])
    assert res.value == 6 < fr_mincut(p, P(3, 1))
    assert res.matches is None


def test_parallel_equals_serial():
    p = validate_params(5, 3, 2)
    sch = Family(FamilyStructure(5, 2))
    a = worst_case_search(sch, p, P(1, 1), "exhaustive", workers=1)
    b = worst_case_search(sch, p, P(1, 1), "exhaustive", workers=2)
    assert (a.value, a.graphs) == (b.value, b.graphs)


@pytest.mark.parametrize("n,k,d", [(4, 3, 2), (5, 3, 2), (5, 4, 3)])
def test_oracle_never_below_closed_form(n, k, d):
    p = validate_params(n, k, d)
    st = FamilyStructure(n, d)
    for pt in [P(1, 1), P(d, 1), P(Fr(3, 2), Fr(1, 2))]:
        cf = fr_mincut(p, pt)
        for order in itertools.permutations(range(1, n + 1)):
            g = run_schedule(new_ifg(n, d, pt.alpha, pt.beta), order, Family(st))
            g.validate()
            assert min_over_collectors(g, k) >= cf


@pytest.mark.parametrize("assign", [
    {1: {2, 3}, 2: {3, 4}, 3: {4, 5}, 4: {5, 1}, 5: {1, 2}},
    {1: {2, 3}, 2: {1, 3}, 3: {1, 2}, 4: {1, 2}, 5: {3, 4}},
])
def test_oracle_above_stationary_bound(assign):
    p = validate_params(5, 3, 2)
    for pt in [P(2, 1), P(1, 1)]:
        lb = stationary_lower_bound(assign, 3, pt)
        res = worst_case_search(Stationary(assign), p, pt, "exhaustive")
        assert res.value >= lb


def test_family_plus_scheme():
    part = Partition((4, 4))
    sch = FamilyPlus(part, 2)
    assert sch.helpers(new_ifg(8, 2, 2, 1), 6) == (7, 8)
    p = validate_params(8, 5, 2)
    res = worst_case_search(sch, p, P(2, 1), [[1, 3, 5, 7, 2, 6]])
    assert res.value >= family_plus_mincut(p, P(2, 1), part)
