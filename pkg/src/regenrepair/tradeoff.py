"""Min-cut values, extreme points and tradeoff curves for the repair schemes.

Every min-cut here is homogeneous in (alpha, beta).  Writing t = alpha/beta,
a scheme's min-cut is beta * g(t) where g is a concave piecewise-linear
function of t that is flat for t >= d.  The tradeoff curve in the
(alpha, gamma) plane has one corner per breakpoint of g, so curves are
computed by locating those breakpoints exactly.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .core import (DEFAULT_BUDGET, BudgetExceeded, OperatingPoint,
                   ParamOutOfRange, PreconditionViolated, SystemParams,
                   as_rational, check_nd, check_nkd)
from .family import (FamilyStructure, min_over_sequences, rfip,
                     y_scores)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


# ------------------------------------------------------------ blind repair

def br_mincut(p: SystemParams, point: OperatingPoint) -> Fraction:
    a, b = point.alpha, point.beta
    return sum((min(max(p.d - i, 0) * b, a) for i in range(p.k)), Fraction(0))


def br_mbr(p: SystemParams) -> OperatingPoint:
    m = min(p.d, p.k)
    gamma = Fraction(2 * p.d) * p.M / (m * (2 * p.d - m + 1))
    return OperatingPoint(gamma, gamma / p.d)


def br_msr(p: SystemParams) -> OperatingPoint:
    m = min(p.d, p.k)
    gamma = p.d * p.M / (m * (p.d - m + 1))
    return OperatingPoint(p.M / m, gamma / p.d)


# ------------------------------------------------------ stationary schemes

def _is_fr_shaped(helpers: Mapping) -> bool:
    n = len(helpers)
    sizes = {len(v) for v in helpers.values()}
    if len(sizes) != 1 or set(helpers) != set(range(1, n + 1)):
        return False
    d = sizes.pop()
    if not 1 <= d <= n - 1:
        return False
    fr = FamilyStructure(n, d).helper_sets
    return all(frozenset(helpers[i]) == fr[i] for i in fr)


def stationary_lower_bound(helpers: Mapping, k: int, point: OperatingPoint,
                           distinct_only: bool | None = None,
                           budget: int = DEFAULT_BUDGET) -> Fraction:
    """min over node sequences r of sum_i min((d - z_i(r)) beta, alpha).

    z_i only depends on the set of distinct earlier nodes, so the search runs
    over (visited set, position) states.  With ``distinct_only`` the sequences
    are restricted to repetition-free ones, which loses nothing for FR-shaped
    helper sets; by default that restriction is used exactly for those.
    """
    nodes = sorted(helpers)
    n = len(nodes)
    d = len(helpers[nodes[0]])
    if any(len(helpers[v]) != d for v in nodes):
        raise ParamOutOfRange("all helper sets must have the same size")
    if not 1 <= k <= n:
        raise ParamOutOfRange(f"k={k} outside 1..{n}")
    if distinct_only is None:
        distinct_only = _is_fr_shaped(helpers)
    if (1 << n) * k > budget:
        raise BudgetExceeded(f"2^{n}*{k} states exceed budget {budget}")
    bit = {v: 1 << i for i, v in enumerate(nodes)}
    hmask = {v: sum(bit[h] for h in helpers[v]) for v in nodes}
    a, b = point.alpha, point.beta
    costs = [min((d - z) * b, a) for z in range(d + 1)]
    memo: dict = {}

    def best(mask: int, left: int) -> Fraction:
        if left == 0:
            return Fraction(0)
        key = (mask, left)
        if key in memo:
            return memo[key]
        out = None
        for v in nodes:
            if distinct_only and mask & bit[v]:
                continue
            z = bin(mask & hmask[v]).count("1")
            val = costs[z] + best(mask | bit[v], left - 1)
            if out is None or val < out:
                out = val
        memo[key] = out
        return out

    return best(0, k)


# ------------------------------------------------------------ family repair

def fr_mincut(p: SystemParams, point: OperatingPoint,
              budget: int = DEFAULT_BUDGET) -> Fraction:
    return _fr_value(p.n, p.k, p.d, point.alpha, point.beta, budget)


def _fr_value(n, k, d, alpha, beta, budget=DEFAULT_BUDGET) -> Fraction:
    if k == 0:
        return Fraction(0)
    st = FamilyStructure(n, d)
    res = min_over_sequences(st, k, lambda y: (min((d - y) * beta, alpha),), budget)
    return res[0]


def fr_mbr_sum(n: int, k: int, d: int) -> int:
    return sum(d - y for y in y_scores(rfip(n, d), k))


def fr_mbr(p: SystemParams) -> OperatingPoint:
    gamma = p.d * p.M / fr_mbr_sum(p.n, p.k, p.d)
    return OperatingPoint(gamma, gamma / p.d)


def fr_msr(p: SystemParams, budget: int = DEFAULT_BUDGET) -> OperatingPoint:
    alpha = p.M / min(p.d, p.k)
    if p.d >= p.k:
        return OperatingPoint(alpha, p.M / (p.k * (p.d - p.k + 1)))
    env = _fr_envelope(p.n, p.k, p.d, budget)
    t = env.largest_t_with_ratio(alpha / p.M)
    return OperatingPoint(alpha, alpha / t)


# ------------------------------------------------------------- envelopes

def _interval_line(v: int, j: int):
    # min(v, t) restricted to t in [j, j+1] as (intercept, slope)
    return (v, 0) if v <= j else (0, 1)


class Envelope:
    """Exact concave piecewise-linear g(t) given a best-line oracle.

    ``oracle(t, j, sign)`` must return the (intercept, slope) of a line that
    attains g(t) on the interval [j, j+1], choosing the smallest slope among
    ties when sign=+1 and the largest when sign=-1.
    """

    def __init__(self, d: int, oracle: Callable):
        self.d = d
        self.oracle = oracle
        self.vertices = self._vertices()

    def value(self, t: Fraction) -> Fraction:
        t = Fraction(t)
        if t >= self.d:
            t = Fraction(self.d)
        j = min(int(t), self.d - 1)
        a, b = self.oracle(t, j, 1)
        return a + b * t

    def _crossings(self, la, lb, j):
        if la == lb:
            return []
        (aa, ba), (ab, bb) = la, lb
        ts = Fraction(ab - aa, 1) / (ba - bb)
        lm = self.oracle(ts, j, 1)
        if lm[0] + lm[1] * ts == aa + ba * ts:
            return [ts]
        return self._crossings(la, lm, j) + [ts] + self._crossings(lm, lb, j)

    def _vertices(self):
        cands = {Fraction(j) for j in range(1, self.d + 1)}
        for j in range(self.d):
            la = self.oracle(Fraction(j), j, 1)
            lb = self.oracle(Fraction(j + 1), j, -1)
            cands.update(self._crossings(la, lb, j))
        pts = [(Fraction(0), Fraction(0))] + [(t, self.value(t)) for t in sorted(cands)]
        last = pts[-1]
        pts.append((last[0] + 1, last[1]))
        out = []
        for (t0, g0), (t1, g1), (t2, g2) in zip(pts, pts[1:], pts[2:]):
            if (g1 - g0) * (t2 - t1) != (g2 - g1) * (t1 - t0):
                out.append((t1, g1))
        return out

    def largest_t_with_ratio(self, ratio: Fraction) -> Fraction:
        """Largest t with t / g(t) <= ratio; t/g(t) is nondecreasing."""
        pts = [(Fraction(0), Fraction(0))] + self.vertices
        best = None
        for (t0, g0), (t1, g1) in zip(pts, pts[1:]):
            if t1 <= ratio * g1:
                best = t1
                continue
            # on the segment g = g0 + s (t - t0); solve t = ratio * g
            s = (g1 - g0) / (t1 - t0)
            den = 1 - ratio * s
            if den != 0:
                t = (ratio * (g0 - s * t0)) / den
                if t0 <= t <= t1 and t > 0:
                    best = t
            break
        if best is None:
            raise PreconditionViolated(f"storage {ratio} per unit file is below the minimum")
        return best


@dataclass(frozen=True)
class TradeoffCurve:
    scheme: str
    d: int
    file_size: Fraction
    corners: tuple

    @property
    def mbr(self) -> OperatingPoint:
        return self.corners[0]

    @property
    def msr(self) -> OperatingPoint:
        return self.corners[-1]

    def alpha_gamma(self) -> list:
        return [(c.alpha, c.gamma(self.d)) for c in self.corners]


def _curve_from_envelope(scheme: str, p: SystemParams, env: Envelope) -> TradeoffCurve:
    corners = []
    for t, g in env.vertices:
        beta = p.M / g
        corners.append(OperatingPoint(t * beta, beta))
    corners.sort(key=lambda c: -c.alpha)
    return TradeoffCurve(scheme, p.d, p.M, tuple(corners))


def _check_curve(curve: TradeoffCurve, mincut: Callable) -> None:
    eps = Fraction(1, 10 ** 6)
    for c in curve.corners:
        if mincut(c) != curve.file_size:
            raise AssertionError(f"corner {c} does not meet the file size exactly")
        bumped = OperatingPoint(c.alpha * (1 + eps), c.beta * (1 + eps))
        if not mincut(bumped) > curve.file_size:
            raise AssertionError(f"corner {c} is not on the boundary")


def _fr_line_oracle(n, k, d, budget):
    st = FamilyStructure(n, d)

    def oracle(t, j, sign):
        def term(y):
            a, b = _interval_line(d - y, j)
            return (a + b * t, sign * b)
        val, sb = min_over_sequences(st, k, term, budget)
        b = sign * sb
        return (val - b * t, b)

    return oracle


def _fr_envelope(n, k, d, budget=DEFAULT_BUDGET) -> Envelope:
    return Envelope(d, _fr_line_oracle(n, k, d, budget))


def fr_tradeoff_curve(p: SystemParams, budget: int = DEFAULT_BUDGET) -> TradeoffCurve:
    curve = _curve_from_envelope("fr", p, _fr_envelope(p.n, p.k, p.d, budget))
    _check_curve(curve, lambda c: fr_mincut(p, c, budget))
    return curve


def br_tradeoff_curve(p: SystemParams) -> TradeoffCurve:
    vals = [max(p.d - i, 0) for i in range(p.k)]

    def oracle(t, j, sign):
        lines = [_interval_line(v, j) for v in vals]
        return (sum(a for a, _ in lines), sum(b for _, b in lines))

    curve = _curve_from_envelope("br", p, Envelope(p.d, oracle))
    _check_curve(curve, lambda c: br_mincut(p, c))
    return curve


# -------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class Verdict:
    beneficial: bool
    condition: str | None

    def __bool__(self):
        return self.beneficial


def helper_selection_beneficial(n: int, k: int, d: int) -> Verdict:
    check_nkd(n, k, d)
    if d == 1 and k == 3 and n % 2 == 1:
        return Verdict(False, "i")
    if k <= _ceil_div(n, n - d):
        return Verdict(False, "ii")
    return Verdict(True, None)


def cm_values(p: SystemParams, point: OperatingPoint) -> tuple:
    """Values C_2..C_k and their minimum, for d >= 2 and k = ceil(n/(n-d)) + 1."""
    n, k, d = p.n, p.k, p.d
    if d < 2 or k != _ceil_div(n, n - d) + 1:
        raise PreconditionViolated("needs d >= 2 and k = ceil(n/(n-d)) + 1")
    a, b = point.alpha, point.beta
    vals = []
    for m in range(2, k + 1):
        s = sum((min((d - i) * b, a) for i in range(k) if i != m - 1), Fraction(0))
        vals.append(s + min((d - m + 2) * b, a))
    return vals, min(vals)


# ------------------------------------------------------------ family-plus

@dataclass(frozen=True)
class Partition:
    group_sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "group_sizes", tuple(self.group_sizes))

    @property
    def n(self) -> int:
        return sum(self.group_sizes)

    def offsets(self) -> list:
        out, acc = [], 0
        for s in self.group_sizes:
            out.append(acc)
            acc += s
        return out

    def check(self, n: int, d: int) -> None:
        if self.n != n:
            raise PreconditionViolated(f"group sizes sum to {self.n}, expected {n}")
        if any(s <= d for s in self.group_sizes):
            raise PreconditionViolated(f"every group needs more than d={d} nodes")


def family_plus_partition(n: int, d: int) -> Partition:
    check_nd(n, d)
    g = 2 * d
    if n % g == 0:
        return Partition((g,) * (n // g))
    if n < g + 1:
        return Partition((n,))
    regular = (n - (g + 1)) // g
    return Partition((g,) * regular + (n - g * regular,))


def _knapsack(tables: list, k: int, add, zero):
    """Min-plus combination of per-group value tables over compositions of k."""
    best = {0: zero}
    for table in tables:
        nxt: dict = {}
        for used, v in best.items():
            for kb, w in enumerate(table):
                tot = used + kb
                if tot > k:
                    break
                cand = add(v, w)
                if tot not in nxt or cand < nxt[tot]:
                    nxt[tot] = cand
        best = nxt
    if k not in best:
        raise PreconditionViolated(f"k={k} exceeds the partition size")
    return best[k]


def family_plus_mincut(p: SystemParams, point: OperatingPoint,
                       partition: Partition | None = None,
                       budget: int = DEFAULT_BUDGET) -> Fraction:
    if partition is None:
        partition = family_plus_partition(p.n, p.d)
    partition.check(p.n, p.d)
    cache: dict = {}
    tables = []
    for nb in partition.group_sizes:
        if nb not in cache:
            cache[nb] = [_fr_value(nb, kb, p.d, point.alpha, point.beta, budget)
                         for kb in range(min(nb, p.k) + 1)]
        tables.append(cache[nb])
    return _knapsack(tables, p.k, lambda a, b: a + b, Fraction(0))


def _fp_line_oracle(p: SystemParams, partition: Partition, budget):
    d = p.d

    def oracle(t, j, sign):
        def term(y):
            a, b = _interval_line(d - y, j)
            return (a + b * t, sign * b)
        cache: dict = {}
        tables = []
        for nb in partition.group_sizes:
            if nb not in cache:
                st = FamilyStructure(nb, d)
                row = [(Fraction(0), 0)]
                for kb in range(1, min(nb, p.k) + 1):
                    row.append(min_over_sequences(st, kb, term, budget))
                cache[nb] = row
            tables.append(cache[nb])
        val, sb = _knapsack(tables, p.k, lambda a, b: (a[0] + b[0], a[1] + b[1]),
                            (Fraction(0), 0))
        b = sign * sb
        return (val - b * t, b)

    return oracle


def family_plus_tradeoff_curve(p: SystemParams, partition: Partition | None = None,
                               budget: int = DEFAULT_BUDGET) -> TradeoffCurve:
    if partition is None:
        partition = family_plus_partition(p.n, p.d)
    partition.check(p.n, p.d)
    env = Envelope(p.d, _fp_line_oracle(p, partition, budget))
    curve = _curve_from_envelope("family-plus", p, env)
    _check_curve(curve, lambda c: family_plus_mincut(p, c, partition, budget))
    return curve


def _fp_terms(upto: int, d: int) -> int:
    return sum(d - i + i // 2 for i in range(upto))


def family_plus_mbr_sum(n: int, k: int, d: int) -> int:
    check_nkd(n, k, d)
    g = 2 * d
    ragged = n % g != 0
    if ragged and n < g + 1:
        # a single group is plain FR; the group-sum form assumes n > 2d
        return fr_mbr_sum(n, k, d)
    part = family_plus_partition(n, d)
    n_l = part.group_sizes[-1] if ragged else 0
    spill = max(k - n_l, 0)
    q = spill % g - 1
    first = _fp_terms(min(k, g - 1), d) if ragged else 0
    return first + d * d * (spill // g) + _fp_terms(q + 1, d)


def family_plus_mbr(p: SystemParams) -> OperatingPoint:
    beta = p.M / family_plus_mbr_sum(p.n, p.k, p.d)
    return OperatingPoint(p.d * beta, beta)


def grouped_lrc_mbr(n: int, k: int, d: int, M=1) -> OperatingPoint:
    """MBR point of the scheme that repairs inside disjoint groups of d+1 nodes."""
    check_nkd(n, k, d)
    if n % (d + 1):
        raise PreconditionViolated(f"n={n} is not a multiple of d+1={d + 1}")
    M = as_rational(M)
    full = k // (d + 1)
    r = k - full * (d + 1)
    denom = Fraction(full * (d + 1) * d, 2) + Fraction(2 * d * r - r * r + r, 2)
    gamma = d * M / denom
    return OperatingPoint(gamma, gamma / d)


@dataclass(frozen=True)
class OptimalityReport:
    classes: tuple
    partition: Partition | None = None


def _divisible_parts(n: int, d: int, limit: int = 64):
    """Smallest list of parts n_b > d, each with n_b mod (n_b - d) = 0, summing to n."""
    if n > limit:
        return None
    parts = [s for s in range(d + 1, n + 1) if s % (s - d) == 0]
    best: dict = {0: ()}
    for total in range(1, n + 1):
        cands = [tuple(sorted(best[total - s] + (s,), reverse=True))
                 for s in parts if s <= total and (total - s) in best]
        if cands:
            best[total] = min(cands, key=lambda c: (len(c), [-x for x in c]))
    return best.get(n)


def optimality_class(n: int, k: int, d: int) -> OptimalityReport:
    check_nkd(n, k, d)
    if not helper_selection_beneficial(n, k, d):
        return OptimalityReport(("BR-equivalent",))
    classes = []
    part = None
    if d % 2 == 0 and n == d + 2 and 2 * k == n + 2:
        classes.append("FR-curve-optimal")
    if k == n - 1 and n % (n - d) == 0:
        classes.append("FR-MBR-optimal")
    if k == n - 1:
        found = _divisible_parts(n, d)
        if found is not None:
            classes.append("family-plus-MBR-optimal")
            part = Partition(found)
    if not classes:
        classes.append("weakly-optimal-only")
    return OptimalityReport(tuple(classes), part)
