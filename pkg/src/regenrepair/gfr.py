"""Generalized fractional repetition (GFR) codes.

Packets are edges of a graph on the storage nodes.  A "bar" edge joins two
nodes of different families and its packet is stored at both ends.  A
"tilde" edge joins an incomplete-family node u to a node w labelled -c; its
packet is a combination of u's bar packets and is stored only at w.  Every
node stores exactly d packets and is repaired by its FR helpers, one packet
per helper.
"""

import hashlib
import itertools
import json
import random
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .core import (ConstructionFailed, ParamOutOfRange, RankDeficient,
                   check_nd, check_nkd)
from .family import FamilyStructure
from .galois import GF2m, field as make_field, rank, solve
from .tradeoff import (OperatingPoint, Partition, SystemParams, family_plus_mincut,
                       fr_mbr_sum)

BAR = "bar"
TILDE = "tilde"

MAX_RETRIES = 32
SAMPLES = 1000
EXHAUSTIVE_EDGE_LIMIT = 20


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    kind: str

    def ends(self) -> tuple:
        return (self.i, self.j)

    def touches(self, v: int) -> bool:
        return v == self.i or v == self.j

    def other(self, v: int) -> int:
        return self.j if v == self.i else self.i


@dataclass(frozen=True)
class GfrGraph:
    """One or more disjoint GFR groups on global node ids 1..n."""
    n: int
    d: int
    groups: tuple                 # (offset, FamilyStructure) per group
    bar: tuple
    tilde: tuple
    label: tuple                  # global node -> signed family label within its group
    group_of: tuple               # global node -> group index

    @property
    def edges(self) -> tuple:
        return self.bar + self.tilde

    @property
    def n0(self) -> tuple:
        return tuple(v for v in range(1, self.n + 1) if self.label[v - 1] == 0)

    @property
    def n_minus(self) -> tuple:
        out = []
        for v in range(1, self.n + 1):
            st = self.groups[self.group_of[v - 1]][1]
            if st.has_incomplete and self.label[v - 1] == -st.complete_count:
                out.append(v)
        return tuple(out)

    def stored(self, v: int) -> tuple:
        """Edges whose packet node v stores."""
        return tuple(e for e in self.edges
                     if (e.kind == BAR and e.touches(v)) or (e.kind == TILDE and e.j == v))

    def incident(self, v: int) -> tuple:
        return tuple(e for e in self.edges if e.touches(v))

    def helpers(self, v: int) -> frozenset:
        off, st = self.groups[self.group_of[v - 1]]
        return frozenset(off + h for h in st.helpers(v - off))


def _group_edges(st: FamilyStructure, off: int):
    n = st.n
    c = st.complete_count
    lab = st.labels
    bar, tilde = [], []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            a, b = lab[i - 1], lab[j - 1]
            if abs(a) == abs(b):
                continue
            if st.has_incomplete and {a, b} == {0, -c}:
                continue
            bar.append(Edge(off + i, off + j, BAR))
    if st.has_incomplete:
        for u in st.label_nodes[0]:
            for w in st.label_nodes.get(-c, ()):
                tilde.append(Edge(off + u, off + w, TILDE))
    return bar, tilde


def _assemble(sizes: Sequence[int], d: int) -> GfrGraph:
    groups, bar, tilde, label, group_of = [], [], [], [], []
    off = 0
    for g, nb in enumerate(sizes):
        st = FamilyStructure(nb, d)
        groups.append((off, st))
        b, t = _group_edges(st, off)
        bar += b
        tilde += t
        label += list(st.labels)
        group_of += [g] * nb
        off += nb
    return GfrGraph(off, d, tuple(groups), tuple(bar), tuple(tilde), tuple(label), tuple(group_of))


def build_graph(n: int, d: int) -> GfrGraph:
    check_nd(n, d)
    return _assemble([n], d)


def build_family_plus_graph(partition: Partition, d: int) -> GfrGraph:
    partition.check(partition.n, d)
    return _assemble(partition.group_sizes, d)


def expected_edge_counts(n: int, d: int) -> tuple:
    """(bar, tilde) edge counts from the closed forms."""
    st = FamilyStructure(n, d)
    z = st.incomplete_size
    minus = st.caps.get(-st.complete_count, 0) if st.has_incomplete else 0
    return (n - z) * (d - z) // 2 + d * z, minus * z


def gfr_file_size(n: int, k: int, d: int) -> int:
    check_nkd(n, k, d)
    return fr_mbr_sum(n, k, d)


# ------------------------------------------------------------ counting

@dataclass(frozen=True)
class EdgeSubsetCount:
    a_0: int
    a_m: tuple          # per incomplete-family vertex, ascending id
    a_count: int


def a_count(graph: GfrGraph, subset) -> EdgeSubsetCount:
    n0 = graph.n0
    per = {u: 0 for u in n0}
    a0 = 0
    for e in subset:
        hit = [u for u in e.ends() if u in per]
        if hit:
            per[hit[0]] += 1
        else:
            a0 += 1
    am = tuple(per[u] for u in n0)
    return EdgeSubsetCount(a0, am, a0 + sum(min(a, graph.d) for a in am))


def count_procedure(graph: GfrGraph, S) -> int:
    """Iterative count e(S) over the nodes of S, -c nodes last."""
    minus = set(graph.n_minus)
    n0 = graph.n0
    order = sorted(v for v in S if v not in minus) + sorted(v for v in S if v in minus)
    live = set(graph.edges)
    tilde_deg = {u: sum(1 for e in graph.tilde if e.i == u) for u in n0}
    total = 0
    for v in order:
        x = sum(1 for e in live if e.kind == BAR and e.touches(v))
        if v in minus:
            for u in n0:
                t = Edge(u, v, TILDE)
                if t in live:
                    deg = sum(1 for e in live if e.touches(u))
                    if deg > tilde_deg[u]:
                        x += 1
        total += x
        live = {e for e in live if not e.touches(v)}
    return total


# ----------------------------------------------------------------- code

@dataclass
class GfrCode:
    graph: GfrGraph
    field: GF2m
    k: int
    M: int
    vectors: dict                     # Edge -> coding vector
    seed: int | None = None
    used_seed: int | None = None
    retries: int = 0
    partition: Partition | None = None
    mixing: dict = field(default_factory=dict)   # tilde Edge -> coefficients over bar_at(u)

    def bar_at(self, u: int) -> tuple:
        return tuple(e for e in self.graph.bar if e.touches(u))

    def stored_vectors(self, v: int) -> list:
        return [self.vectors[e] for e in self.graph.stored(v)]

    def to_json(self) -> dict:
        out = {
            "n": self.graph.n, "k": self.k, "d": self.graph.d,
            "field": {"m": self.field.m, "poly": self.field.poly},
            "M": self.M, "seed": self.seed,
            "edges": [{"i": e.i, "j": e.j, "kind": e.kind, "vector": list(self.vectors[e])}
                      for e in self.graph.edges],
        }
        if self.partition is not None:
            out["partition"] = list(self.partition.group_sizes)
        if self.used_seed is not None:
            out["used_seed"] = self.used_seed
            out["retries"] = self.retries
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def load_code(obj) -> GfrCode:
    """Build a code from its JSON form (dict, JSON text, or path)."""
    if isinstance(obj, str):
        if obj.lstrip().startswith("{"):
            obj = json.loads(obj)
        else:
            with open(obj) as fh:
                obj = json.load(fh)
    n, d, k = obj["n"], obj["d"], obj["k"]
    F = make_field(obj["field"]["m"], obj["field"]["poly"])
    part = Partition(tuple(obj["partition"])) if obj.get("partition") else None
    graph = build_family_plus_graph(part, d) if part else build_graph(n, d)
    given = {}
    for rec in obj["edges"]:
        kind = rec["kind"]
        i, j = rec["i"], rec["j"]
        e = Edge(min(i, j), max(i, j), BAR) if kind == BAR else Edge(i, j, TILDE)
        if e in given:
            raise ParamOutOfRange(f"duplicate edge {e}")
        vec = [int(x) for x in rec["vector"]]
        if len(vec) != obj["M"] or any(not 0 <= x < F.q for x in vec):
            raise ParamOutOfRange(f"bad coding vector on edge ({i},{j})")
        given[e] = vec
    if set(given) != set(graph.edges):
        raise ParamOutOfRange("edge list does not match the graph for these parameters")
    code = GfrCode(graph, F, k, obj["M"], given, obj.get("seed"), obj.get("used_seed"),
                   obj.get("retries", 0), part)
    return code


# ------------------------------------------------------------ properties

def check_property1(code: GfrCode) -> dict:
    """Coefficients expressing each tilde vector through u's bar vectors.

    Raises RankDeficient when some tilde vector is outside that span.
    """
    F = code.field
    out = {}
    for e in code.graph.tilde:
        bars = code.bar_at(e.i)
        cols = [code.vectors[b] for b in bars]
        A = [list(row) for row in zip(*cols)]
        try:
            x = solve(F, A, code.vectors[e])
        except Exception as exc:
            raise RankDeficient(f"tilde edge ({e.i},{e.j}) is not in the span at node {e.i}") from exc
        out[e] = x
    return out


def _full_rank(code: GfrCode, edges) -> bool:
    return rank(code.field, [code.vectors[e] for e in edges]) == code.M


def node_subsets_ok(code: GfrCode, subsets=None):
    """Every k-subset of nodes spans the message space; returns first failure or None."""
    if subsets is None:
        subsets = itertools.combinations(range(1, code.graph.n + 1), code.k)
    for S in subsets:
        edges = {e for v in S for e in code.graph.stored(v)}
        if not _full_rank(code, edges):
            return tuple(S)
    return None


def _minimal_subsets(graph: GfrGraph, M: int):
    # size-M subsets with no incomplete-family vertex over its cap; every
    # subset with a.count >= M contains one of these
    n0 = set(graph.n0)
    d = graph.d
    for sub in itertools.combinations(graph.edges, M):
        per: dict = {}
        ok = True
        for e in sub:
            for u in e.ends():
                if u in n0:
                    per[u] = per.get(u, 0) + 1
                    if per[u] > d:
                        ok = False
                    break
            if not ok:
                break
        if ok:
            yield sub


def _sample_subset(graph: GfrGraph, M: int, rng: random.Random) -> list:
    edges = list(graph.edges)
    rng.shuffle(edges)
    n0 = set(graph.n0)
    per: dict = {}
    out = []
    for e in edges:
        hit = [u for u in e.ends() if u in n0]
        if hit and per.get(hit[0], 0) >= graph.d:
            continue
        if hit:
            per[hit[0]] = per.get(hit[0], 0) + 1
        out.append(e)
        if len(out) == M:
            break
    return out


@dataclass
class Property2Report:
    ok: bool
    mode: str
    checked: int
    failure: tuple | None = None


def check_property2(code: GfrCode, mode: str | None = None, samples: int = SAMPLES,
                    rng_seed: int = 0) -> Property2Report:
    """Every edge subset with a.count >= M has full rank.

    "exhaustive" checks every minimal such subset; "sampled" checks every
    k-node stored set plus random subsets with a.count = M.
    """
    g = code.graph
    if mode is None:
        mode = "exhaustive" if len(g.edges) <= EXHAUSTIVE_EDGE_LIMIT else "sampled"
    checked = 0
    if mode == "exhaustive":
        for sub in _minimal_subsets(g, code.M):
            checked += 1
            if not _full_rank(code, sub):
                return Property2Report(False, mode, checked, tuple((e.i, e.j) for e in sub))
        return Property2Report(True, mode, checked)
    if mode != "sampled":
        raise ValueError(f"unknown Property-2 mode {mode!r}")
    for S in itertools.combinations(range(1, g.n + 1), code.k):
        checked += 1
        edges = {e for v in S for e in g.stored(v)}
        if not _full_rank(code, edges):
            return Property2Report(False, mode, checked, tuple(S))
    rng = random.Random(rng_seed)
    for _ in range(samples):
        sub = _sample_subset(g, code.M, rng)
        if a_count(g, sub).a_count < code.M:
            continue
        checked += 1
        if not _full_rank(code, sub):
            return Property2Report(False, mode, checked, tuple((e.i, e.j) for e in sub))
    return Property2Report(True, mode, checked)


# ---------------------------------------------------------- construction

def next_seed(seed: int) -> int:
    h = hashlib.sha256(str(seed).encode()).digest()
    return int.from_bytes(h[:8], "big")


def _draw(graph: GfrGraph, F: GF2m, M: int, rng: random.Random):
    vectors = {}
    for e in graph.bar:
        vectors[e] = F.random_vector(M, rng)
    mixing = {}
    for e in graph.tilde:
        bars = tuple(b for b in graph.bar if b.touches(e.i))
        coeffs = F.random_vector(len(bars), rng)
        vectors[e] = F.combine(coeffs, [vectors[b] for b in bars])
        mixing[e] = coeffs
    return vectors, mixing


def _construct(graph: GfrGraph, k: int, M: int, F: GF2m, seed: int, partition,
               max_retries: int, mode, samples) -> GfrCode:
    if F.m == 1 and M > 1:
        warnings.warn("GF(2) is too small for random GFR construction when M > 1")
        raise ConstructionFailed("field GF(2) rejected for M > 1; use m >= 2")
    s = seed
    for attempt in range(max_retries + 1):
        rng = random.Random(s)
        vectors, mixing = _draw(graph, F, M, rng)
        code = GfrCode(graph, F, k, M, vectors, seed, s, attempt, partition, mixing)
        if check_property2(code, mode, samples, rng_seed=s).ok:
            check_property1(code)
            return code
        s = next_seed(s)
    raise ConstructionFailed(f"no valid code after {max_retries} retries over {F}")


def construct(n: int, k: int, d: int, F: GF2m | None = None, seed: int = 0,
              max_retries: int = MAX_RETRIES, mode: str | None = None,
              samples: int = SAMPLES) -> GfrCode:
    check_nkd(n, k, d)
    F = F or make_field(8)
    return _construct(build_graph(n, d), k, gfr_file_size(n, k, d), F, seed, None,
                      max_retries, mode, samples)


def family_plus_file_size(n: int, k: int, d: int, partition: Partition) -> int:
    p = SystemParams(n, k, d)
    return int(family_plus_mincut(p, OperatingPoint(d, 1), partition))


def construct_family_plus(n: int, k: int, d: int, partition: Partition,
                          F: GF2m | None = None, seed: int = 0,
                          max_retries: int = MAX_RETRIES, mode: str | None = None,
                          samples: int = SAMPLES) -> GfrCode:
    check_nkd(n, k, d)
    partition.check(n, d)
    F = F or make_field(8)
    graph = build_family_plus_graph(partition, d)
    M = family_plus_file_size(n, k, d, partition)
    return _construct(graph, k, M, F, seed, partition, max_retries, mode, samples)


# ---------------------------------------------------- repair and decoding

def encode(code: GfrCode, message: Sequence[Sequence[int]]) -> dict:
    """Packet payloads for a message of M packets (each a list of symbols)."""
    if len(message) != code.M:
        raise ParamOutOfRange(f"message needs {code.M} packets")
    F = code.field
    width = len(message[0])
    out = {}
    for e, vec in code.vectors.items():
        out[e] = F.combine(vec, message) if width else []
    return out


def random_message(code: GfrCode, width: int, rng: random.Random) -> list:
    return [code.field.random_vector(width, rng) for _ in range(code.M)]


@dataclass(frozen=True)
class Transfer:
    helper: int
    edge: Edge
    how: str              # "copy" or "combine"
    coefficients: tuple = ()


@dataclass
class RepairResult:
    node: int
    helpers: tuple
    transfers: tuple
    vectors: dict
    payloads: dict | None
    identical: bool


def repair(code: GfrCode, node: int, payloads: dict | None = None) -> RepairResult:
    """Exactly regenerate node's packets from its helpers, one packet each."""
    g = code.graph
    if not 1 <= node <= g.n:
        raise ParamOutOfRange(f"node {node} outside 1..{g.n}")
    F = code.field
    mixing = code.mixing or check_property1(code)
    transfers, vectors, restored = [], {}, {}
    for e in g.stored(node):
        if e.kind == BAR:
            h = e.other(node)
            transfers.append(Transfer(h, e, "copy"))
            vectors[e] = list(code.vectors[e])
            if payloads is not None:
                restored[e] = list(payloads[e])
        else:
            h = e.i
            bars = code.bar_at(h)
            coeffs = tuple(mixing[e])
            transfers.append(Transfer(h, e, "combine", coeffs))
            vectors[e] = F.combine(coeffs, [code.vectors[b] for b in bars])
            if payloads is not None:
                restored[e] = F.combine(coeffs, [payloads[b] for b in bars])
    helpers = tuple(sorted(t.helper for t in transfers))
    if len(set(helpers)) != len(helpers) or frozenset(helpers) != g.helpers(node):
        raise AssertionError(f"repair of node {node} did not use its helper set")
    same = all(vectors[e] == code.vectors[e] for e in vectors)
    if payloads is not None:
        same = same and all(restored[e] == payloads[e] for e in restored)
    return RepairResult(node, helpers, tuple(transfers), vectors,
                        restored if payloads is not None else None, same)


def reconstruct(code: GfrCode, nodes: Sequence[int], payloads: dict) -> list:
    """Recover the M message packets from the packets stored at the given nodes."""
    F = code.field
    edges = []
    for v in nodes:
        for e in code.graph.stored(v):
            if e not in edges:
                edges.append(e)
    A = [code.vectors[e] for e in edges]
    if rank(F, A) < code.M:
        raise RankDeficient(f"nodes {tuple(nodes)} do not determine the file")
    width = len(payloads[edges[0]])
    cols = []
    for s in range(width):
        cols.append(solve(F, A, [payloads[e][s] for e in edges]))
    return [[cols[s][i] for s in range(width)] for i in range(code.M)]
