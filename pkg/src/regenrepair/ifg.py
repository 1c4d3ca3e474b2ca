"""Information flow graphs and an exact max-flow oracle.

Each storage node has an (in, out) vertex pair per version.  The source
feeds the original versions with infinite capacity, in->out edges carry
alpha, and a newcomer receives beta from each of its d helpers.  Graphs are
immutable; ``fail_and_repair`` returns a new graph.
"""

import itertools
import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (DEFAULT_BUDGET, BudgetExceeded, OperatingPoint,
                   ParamOutOfRange, SchemeViolation, SystemParams,
                   as_rational, check_nd, format_rational)
from .family import FamilyStructure, argmin_sequence, complete_to_permutation
from .tradeoff import Partition, fr_mincut


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"


INF = _Infinity()

SOURCE = "s"
SINK = "t"


def vin(node: int, ver: int) -> str:
    return f"in:{node}.{ver}"


def vout(node: int, ver: int) -> str:
    return f"out:{node}.{ver}"


@dataclass(frozen=True)
class RepairEvent:
    node: int
    helpers: tuple
    version: int


@dataclass(frozen=True)
class InformationFlowGraph:
    n: int
    d: int
    alpha: Fraction
    beta: Fraction
    edges: tuple = ()
    active: tuple = ()
    history: tuple = ()

    def version(self, node: int) -> int:
        return self.active[node - 1]

    def validate(self) -> None:
        """Check the structural invariants; raises AssertionError."""
        indeg: dict = {}
        for u, v, cap in self.edges:
            if u == SOURCE:
                assert cap is INF and v.endswith(".0")
            elif u.startswith("in:"):
                assert cap == self.alpha and v == "out:" + u[3:]
            else:
                assert cap == self.beta and v.startswith("in:")
                indeg[v] = indeg.get(v, 0) + 1
        for ev in self.history:
            assert indeg.get(vin(ev.node, ev.version), 0) == self.d
            assert len(set(ev.helpers)) == self.d and ev.node not in ev.helpers
        # acyclic: every beta edge points to a strictly later version stamp
        order = {vin(i, 0): 0 for i in range(1, self.n + 1)}
        for step, ev in enumerate(self.history, start=1):
            order[vin(ev.node, ev.version)] = step
        for u, v, cap in self.edges:
            if u.startswith("out:"):
                assert order["in:" + u[4:]] < order[v]


def new_ifg(n: int, d: int, alpha, beta) -> InformationFlowGraph:
    check_nd(n, d)
    alpha, beta = as_rational(alpha), as_rational(beta)
    edges = []
    for i in range(1, n + 1):
        edges.append((SOURCE, vin(i, 0), INF))
        edges.append((vin(i, 0), vout(i, 0), alpha))
    return InformationFlowGraph(n, d, alpha, beta, tuple(edges), (0,) * n, ())


# ------------------------------------------------------------------ schemes

class HelperSelectionScheme:
    name = "scheme"

    def helpers(self, g: InformationFlowGraph, node: int) -> tuple:
        raise NotImplementedError


@dataclass
class Stationary(HelperSelectionScheme):
    assignment: Mapping
    name: str = "stationary"

    def helpers(self, g, node):
        return tuple(sorted(self.assignment[node]))


class Family(Stationary):
    def __init__(self, structure: FamilyStructure):
        super().__init__(structure.helper_sets, "fr")
        self.structure = structure


class FamilyPlus(Stationary):
    def __init__(self, partition: Partition, d: int):
        sets = {}
        for off, nb in zip(partition.offsets(), partition.group_sizes):
            st = FamilyStructure(nb, d)
            for i, hs in st.helper_sets.items():
                sets[off + i] = frozenset(off + h for h in hs)
        super().__init__(sets, "family-plus")
        self.partition = partition


@dataclass
class ScriptedAdversary(HelperSelectionScheme):
    """Explicit helper sets, one per repair event in order."""
    script: Sequence
    name: str = "scripted"

    def helpers(self, g, node):
        idx = len(g.history)
        if idx >= len(self.script):
            raise SchemeViolation(f"no scripted helpers for repair #{idx + 1}")
        return tuple(self.script[idx])


def fail_and_repair(g: InformationFlowGraph, node: int,
                    scheme: HelperSelectionScheme) -> InformationFlowGraph:
    if not 1 <= node <= g.n:
        raise ParamOutOfRange(f"node {node} outside 1..{g.n}")
    hs = tuple(scheme.helpers(g, node))
    if len(set(hs)) != g.d or len(hs) != g.d:
        raise SchemeViolation(f"helper set {hs} does not have {g.d} distinct nodes")
    if node in hs:
        raise SchemeViolation(f"node {node} cannot help itself")
    if any(not 1 <= h <= g.n for h in hs):
        raise SchemeViolation(f"helper set {hs} names unknown nodes")
    ver = g.version(node) + 1
    new_edges = [(vout(h, g.version(h)), vin(node, ver), g.beta) for h in hs]
    new_edges.append((vin(node, ver), vout(node, ver), g.alpha))
    active = list(g.active)
    active[node - 1] = ver
    return InformationFlowGraph(g.n, g.d, g.alpha, g.beta, g.edges + tuple(new_edges),
                                tuple(active), g.history + (RepairEvent(node, hs, ver),))


# ----------------------------------------------------------------- max-flow

@dataclass(frozen=True)
class CutCertificate:
    value: Fraction
    edges: tuple   # (from, to, capacity)

    def to_json(self) -> list:
        return [{"from": u, "to": v, "capacity": format_rational(c)} for u, v, c in self.edges]


def max_flow(edges: Sequence, s: str, t: str) -> CutCertificate:
    """Exact s-t max-flow (Edmonds-Karp) with a matching min-cut certificate.

    Finite capacities are rationals; they are scaled to integers by the
    common denominator.  ``INF`` capacities stay symbolic.
    """
    dens = [c.denominator for _, _, c in edges if c is not INF]
    scale = math.lcm(*dens) if dens else 1
    res: dict = {}
    for u, v, c in edges:
        cap = INF if c is INF else int(c * scale)
        ru = res.setdefault(u, {})
        if cap is INF or ru.get(v) is INF:
            ru[v] = INF
        else:
            ru[v] = ru.get(v, 0) + cap
        res.setdefault(v, {}).setdefault(u, 0)
    flow = 0
    while True:
        parent = {s: None}
        q = deque([s])
        while q and t not in parent:
            u = q.popleft()
            for v, c in res[u].items():
                if v not in parent and (c is INF or c > 0):
                    parent[v] = u
                    q.append(v)
        if t not in parent:
            break
        path = []
        v = t
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        finite = [res[u][v] for u, v in path if res[u][v] is not INF]
        if not finite:
            raise ArithmeticError("unbounded flow: an all-infinite path joins s and t")
        b = min(finite)
        for u, v in path:
            if res[u][v] is not INF:
                res[u][v] -= b
            if res[v][u] is not INF:
                res[v][u] += b
        flow += b
    seen = {s}
    q = deque([s])
    while q:
        u = q.popleft()
        for v, c in res[u].items():
            if v not in seen and (c is INF or c > 0):
                seen.add(v)
                q.append(v)
    cut = tuple((u, v, c) for u, v, c in edges if u in seen and v not in seen)
    if any(c is INF for _, _, c in cut):
        raise ArithmeticError("certificate crosses an infinite edge")
    value = Fraction(flow, scale)
    if sum((c for _, _, c in cut), Fraction(0)) != value:
        raise ArithmeticError("cut certificate does not match the flow value")
    return CutCertificate(value, cut)


def _collector_edges(g: InformationFlowGraph, nodes) -> list:
    return list(g.edges) + [(vout(i, g.version(i)), SINK, INF) for i in nodes]


def min_cut_certificate(g: InformationFlowGraph, nodes: Sequence[int]) -> CutCertificate:
    nodes = tuple(nodes)
    if len(set(nodes)) != len(nodes) or any(not 1 <= i <= g.n for i in nodes):
        raise ParamOutOfRange(f"collector {nodes} must list distinct node ids")
    return max_flow(_collector_edges(g, nodes), SOURCE, SINK)


def min_cut_to_collector(g: InformationFlowGraph, nodes: Sequence[int]) -> Fraction:
    return min_cut_certificate(g, nodes).value


def min_over_collectors(g: InformationFlowGraph, k: int, with_argmin: bool = False):
    best, arg = None, None
    for coll in itertools.combinations(range(1, g.n + 1), k):
        v = min_cut_to_collector(g, coll)
        if best is None or v < best:
            best, arg = v, coll
    return (best, arg) if with_argmin else best


# ------------------------------------------------------------ adversaries

def fr_adversarial_sequence(structure: FamilyStructure, target) -> list:
    """Failure order (each node once) whose family transcript equals target."""
    labels = tuple(target)
    if sorted(labels) != sorted(structure.labels):
        raise ParamOutOfRange("target is not a full family index permutation")
    pools = {lab: list(nodes) for lab, nodes in structure.label_nodes.items()}
    return [pools[lab].pop(0) for lab in labels]


def run_schedule(g: InformationFlowGraph, order: Sequence[int],
                 scheme: HelperSelectionScheme) -> InformationFlowGraph:
    for node in order:
        g = fail_and_repair(g, node, scheme)
    return g


@dataclass
class SearchResult:
    value: Fraction
    schedule: tuple
    collector: tuple
    graphs: int
    exact: bool
    closed_form: Fraction | None = None

    @property
    def matches(self) -> bool | None:
        if self.closed_form is None:
            return None
        return self.value == self.closed_form


def _subtree_min(args):
    g, prefix, scheme, k, n = args
    best = [None, (), ()]
    count = 0

    def visit(g, order):
        nonlocal count
        count += 1
        v, coll = min_over_collectors(g, k, with_argmin=True)
        if best[0] is None or v < best[0]:
            best[0], best[1], best[2] = v, tuple(order), coll
        for node in range(1, n + 1):
            if node not in order:
                visit(fail_and_repair(g, node, scheme), order + [node])

    g = run_schedule(g, prefix, scheme)
    if prefix:
        visit(g, list(prefix))
    else:
        count += 1
        v, coll = min_over_collectors(g, k, with_argmin=True)
        best = [v, (), coll]
    return best, count


def _count_orders(n: int) -> int:
    return sum(math.perm(n, j) for j in range(n + 1))


def worst_case_search(scheme: HelperSelectionScheme, p: SystemParams, point: OperatingPoint,
                      schedule_policy="exhaustive", workers: int | None = None,
                      budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Smallest collector min-cut over the graphs reached by the given schedules.

    ``schedule_policy`` is "exhaustive" (every order that fails each node at
    most once, including all prefixes), "adversarial" (Family scheme only:
    the order realising the minimising label sequence), or an explicit list
    of failure orders.  The value is exact for the Family scheme and an
    upper bound on the infimum otherwise.
    """
    g0 = new_ifg(p.n, p.d, point.alpha, point.beta)
    closed = fr_mincut(p, point) if isinstance(scheme, Family) else None
    if workers is None:
        workers = int(os.environ.get("REGENREPAIR_WORKERS", "1"))
    if schedule_policy == "exhaustive":
        total = _count_orders(p.n) * math.comb(p.n, p.k)
        if total > budget:
            raise BudgetExceeded(f"{total} max-flow evaluations exceed budget {budget}")
        jobs = [(g0, [first], scheme, p.k, p.n) for first in range(1, p.n + 1)]
        root, count = _subtree_min((g0, [], scheme, p.k, p.n))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(_subtree_min, jobs))
        else:
            parts = [_subtree_min(j) for j in jobs]
        best = root
        for b, c in parts:
            count += c
            if b[0] < best[0]:
                best = b
        return SearchResult(best[0], best[1], best[2], count, closed is not None, closed)
    if schedule_policy == "adversarial":
        if not isinstance(scheme, Family):
            raise SchemeViolation("the adversarial policy needs the Family scheme")
        st = scheme.structure
        a, b = point.alpha, point.beta
        prefix = argmin_sequence(st, p.k, lambda y: (min((p.d - y) * b, a),))
        order = fr_adversarial_sequence(st, complete_to_permutation(st, prefix))
        orders = [order]
    else:
        orders = [list(o) for o in schedule_policy]
    best = None
    for order in orders:
        g = run_schedule(g0, order, scheme)
        v, coll = min_over_collectors(g, p.k, with_argmin=True)
        if best is None or v < best.value:
            best = SearchResult(v, tuple(order), coll, 0, closed is not None, closed)
        best.graphs += 1
    return best
