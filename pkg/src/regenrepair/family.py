"""Family structure of the family repair (FR) helper selection scheme.

Nodes are split into complete families of n-d nodes plus an incomplete
family of n mod (n-d) nodes.  The signed family labels are

    1,...,1, 2,...,2, ..., c,...,c, -c,...,-c, 0,...,0

where the last complete family c is split into the part that helps the
incomplete family (label c) and the part that does not (label -c).
Node ids are 1-based throughout.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .core import DEFAULT_BUDGET, BudgetExceeded, ParamOutOfRange, check_nd


@dataclass(frozen=True)
class FamilyStructure:
    n: int
    d: int
    labels: tuple = field(init=False)

    def __post_init__(self):
        check_nd(self.n, self.d)
        object.__setattr__(self, "labels", _index_vector(self.n, self.d))

    @property
    def family_size(self) -> int:
        return self.n - self.d

    @property
    def complete_count(self) -> int:
        return self.n // (self.n - self.d)

    @property
    def incomplete_size(self) -> int:
        return self.n % (self.n - self.d)

    @property
    def has_incomplete(self) -> bool:
        return self.incomplete_size > 0

    def label(self, node: int) -> int:
        return self.labels[node - 1]

    def family(self, node: int) -> int:
        """Unsigned family id: 1..c for complete families, 0 for the incomplete one."""
        return abs(self.labels[node - 1])

    @cached_property
    def label_nodes(self) -> dict:
        out: dict = {}
        for i, lab in enumerate(self.labels, start=1):
            out.setdefault(lab, []).append(i)
        return {lab: tuple(v) for lab, v in out.items()}

    def family_nodes(self, fam: int) -> tuple:
        if fam == 0:
            return self.label_nodes.get(0, ())
        return self.label_nodes.get(fam, ()) + self.label_nodes.get(-fam, ())

    def is_complete(self, node: int) -> bool:
        return self.labels[node - 1] != 0

    @cached_property
    def caps(self) -> dict:
        """Multiplicity of every label in the family index vector."""
        return {lab: len(v) for lab, v in self.label_nodes.items()}

    @cached_property
    def label_order(self) -> tuple:
        """Labels in enumeration order 1 < 2 < ... < c < -c < 0."""
        c = self.complete_count
        order = list(range(1, c + 1))
        if self.has_incomplete:
            if self.caps.get(-c, 0):
                order.append(-c)
            order.append(0)
        return tuple(order)

    def helpers(self, node: int) -> frozenset:
        if self.labels[node - 1] == 0:
            return frozenset(range(1, self.d + 1))
        fam = self.family(node)
        return frozenset(j for j in range(1, self.n + 1) if self.family(j) != fam)

    @cached_property
    def helper_sets(self) -> dict:
        return {i: self.helpers(i) for i in range(1, self.n + 1)}


def _index_vector(n: int, d: int) -> tuple:
    size = n - d
    c, r = divmod(n, size)
    out = []
    for fam in range(1, c):
        out += [fam] * size
    if r == 0:
        out += [c] * size
    else:
        out += [c] * r + [-c] * (size - r) + [0] * r
    return tuple(out)


def family_index_vector(n: int, d: int) -> FamilyStructure:
    return FamilyStructure(n, d)


@dataclass(frozen=True)
class FamilyIndexPermutation:
    labels: tuple
    structure: FamilyStructure

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if sorted(self.labels) != sorted(self.structure.labels):
            raise ParamOutOfRange("labels are not a permutation of the family index vector")

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)


def rfip(n: int, d: int) -> FamilyIndexPermutation:
    """Rotating family index permutation: column-major fill, row-major read."""
    st = FamilyStructure(n, d)
    rows = n - d
    cols = -(-n // rows)
    grid = [[None] * cols for _ in range(rows)]
    for pos, lab in enumerate(st.labels):
        grid[pos % rows][pos // rows] = lab
    seq = [lab for row in grid for lab in row if lab is not None]
    return FamilyIndexPermutation(tuple(seq), st)


def y_scores(perm, k: int | None = None) -> list:
    """Helper-availability scores of the first k coordinates of a label sequence."""
    labels = tuple(perm)
    if k is None:
        k = len(labels)
    if k > len(labels):
        raise ParamOutOfRange(f"k={k} exceeds sequence length {len(labels)}")
    out = []
    for i in range(k):
        lab = labels[i]
        prev = labels[:i]
        if lab == 0:
            out.append(sum(1 for p in prev if p > 0))
        else:
            out.append(sum(1 for p in prev if abs(p) != abs(lab)))
    return out


def z_scores(r: Sequence[int], helpers: Mapping) -> list:
    """z_i = number of distinct earlier entries of r lying in the helper set of r_i."""
    out = []
    seen: set = set()
    for node in r:
        out.append(len(seen & set(helpers[node])))
        seen.add(node)
    return out


def y_offset(perm, k: int) -> int:
    return sum(i - y for i, y in enumerate(y_scores(perm, k)))


def enumerate_label_sequences(structure: FamilyStructure, k: int,
                              budget: int = DEFAULT_BUDGET) -> Iterator[tuple]:
    """Every distinct length-k label sequence within the multiplicity caps, lexicographic."""
    if k > structure.n:
        raise ParamOutOfRange(f"k={k} > n={structure.n}")
    order = structure.label_order
    left = dict(structure.caps)
    seq: list = []
    emitted = 0

    def rec():
        nonlocal emitted
        if len(seq) == k:
            emitted += 1
            if emitted > budget:
                raise BudgetExceeded(f"more than {budget} label sequences")
            yield tuple(seq)
            return
        for lab in order:
            if left[lab]:
                left[lab] -= 1
                seq.append(lab)
                yield from rec()
                seq.pop()
                left[lab] += 1

    yield from rec()


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class _CountDP:
    """Minimise an additive per-coordinate cost over all capped label sequences.

    The score of the next coordinate depends only on how many of each label
    were already used, and the complete families that behave identically are
    interchangeable, so the state is a sorted count vector.
    """

    def __init__(self, st: FamilyStructure, k: int, term, budget: int):
        self.st, self.k, self.term, self.budget = st, k, term, budget
        self.size = st.family_size
        self.c = st.complete_count
        self.r = st.incomplete_size
        # complete families that are interchangeable
        self.nsym = self.c if self.r == 0 else self.c - 1
        self.memo: dict = {}

    def moves(self, state):
        sym, cc, cn, c0 = state
        t = sum(sym) + cc + cn + c0
        seen = set()
        for idx, x in enumerate(sym):
            if x < self.size and x not in seen:
                seen.add(x)
                nsym = tuple(sorted(sym[:idx] + (x + 1,) + sym[idx + 1:]))
                yield ("sym", x), t - x, (nsym, cc, cn, c0)
        if self.r:
            same = cc + cn
            if cc < self.r:
                yield ("c",), t - same, (sym, cc + 1, cn, c0)
            if cn < self.size - self.r:
                yield ("-c",), t - same, (sym, cc, cn + 1, c0)
            if c0 < self.r:
                yield ("0",), sum(sym) + cc, (sym, cc, cn, c0 + 1)

    def best(self, state, left):
        if left == 0:
            return None
        key = (state, left)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[0]
        if len(self.memo) >= self.budget:
            raise BudgetExceeded(f"more than {self.budget} search states")
        best = None
        arg = None
        for mv, y, nxt in self.moves(state):
            cost = self.term(y)
            rest = self.best(nxt, left - 1)
            tot = cost if rest is None else _add(cost, rest)
            if best is None or tot < best:
                best, arg = tot, (mv, nxt)
        self.memo[key] = (best, arg)
        return best

    def start(self):
        return ((0,) * self.nsym, 0, 0, 0)

    def run(self):
        return self.best(self.start(), self.k)

    def argmin_labels(self) -> tuple:
        """Concrete label sequence attaining the minimum."""
        self.run()
        c = self.c
        sym_labels = list(range(1, self.nsym + 1))
        used = {lab: 0 for lab in self.st.label_order}
        state, out = self.start(), []
        for left in range(self.k, 0, -1):
            mv, nxt = self.memo[(state, left)][1]
            if mv[0] == "sym":
                lab = next(l for l in sym_labels if used[l] == mv[1])
            else:
                lab = {"c": c, "-c": -c, "0": 0}[mv[0]]
            used[lab] += 1
            out.append(lab)
            state = nxt
        return tuple(out)


def min_over_sequences(structure: FamilyStructure, k: int, term,
                       budget: int = DEFAULT_BUDGET):
    """min over label sequences of sum_i term(y_i); term returns a tuple."""
    if k > structure.n:
        raise ParamOutOfRange(f"k={k} > n={structure.n}")
    if k == 0:
        return None
    return _CountDP(structure, k, term, budget).run()


def argmin_sequence(structure: FamilyStructure, k: int, term,
                    budget: int = DEFAULT_BUDGET) -> tuple:
    return _CountDP(structure, k, term, budget).argmin_labels()


def complete_to_permutation(structure: FamilyStructure, prefix: Sequence[int]) -> FamilyIndexPermutation:
    """Extend a capped label prefix to a full family index permutation."""
    left = dict(structure.caps)
    for lab in prefix:
        left[lab] -= 1
        if left[lab] < 0:
            raise ParamOutOfRange(f"label {lab} exceeds its multiplicity")
    tail = [lab for lab in structure.label_order for _ in range(left[lab])]
    return FamilyIndexPermutation(tuple(prefix) + tuple(tail), structure)


# ---------------------------------------------------------------- MODIFY

def modify_potential(r: Sequence[int], structure: FamilyStructure) -> int:
    """Repeated complete-family pairs plus twice the repeated incomplete-family pairs."""
    tot = 0
    for node in set(r):
        m = list(r).count(node)
        pairs = m * (m - 1) // 2
        tot += pairs if structure.is_complete(node) else 2 * pairs
    return tot


def _first_repeat(r, pred):
    # repeated pair (i, j), i < j, with the smallest j whose value satisfies pred
    for j in range(len(r)):
        for i in range(j):
            if r[i] == r[j] and pred(r[j]):
                return i, j
    return None


def _last_index(r, pred):
    for j in range(len(r) - 1, -1, -1):
        if pred(r[j]):
            return j
    return None


def modify_steps(r: Sequence[int], structure: FamilyStructure) -> list:
    """Run the duplicate-removal procedure; return every intermediate vector.

    The first entry is the input and each later entry follows one mutating
    step.  Arbitrary choices take the smallest eligible node id.
    """
    st = structure
    n = st.n
    for x in r:
        if not 1 <= x <= n:
            raise ParamOutOfRange(f"node id {x} outside 1..{n}")
    r = list(r)
    trace = [tuple(r)]

    def absent(cands):
        present = set(r)
        return [g for g in cands if g not in present]

    complete_nodes = [v for v in range(1, n + 1) if st.is_complete(v)]
    incomplete_nodes = [v for v in range(1, n + 1) if not st.is_complete(v)]
    last_family = st.family_nodes(st.complete_count)

    while True:
        # step 1: replace a repeat by an unused node of the same family
        progressed = True
        while progressed:
            progressed = False
            for j in range(len(r)):
                if progressed:
                    break
                for i in range(j):
                    if r[i] == r[j]:
                        h = r[j]
                        pool = absent(v for v in st.family_nodes(st.family(h)) if v != h)
                        if pool:
                            r[j] = pool[0]
                            trace.append(tuple(r))
                            progressed = True
                            break
        # step 2: complete-family repeat, swap and replace by any unused complete node
        restart = False
        while True:
            pair = _first_repeat(r, st.is_complete)
            if pair is None:
                break
            pool = absent(complete_nodes)
            if not pool:
                break
            h = r[pair[1]]
            fam = st.family(h)
            j1 = _last_index(r, lambda v: v == h)
            j2 = _last_index(r, lambda v: st.is_complete(v) and st.family(v) == fam)
            r[j1], r[j2] = r[j2], r[j1]
            r[j2] = pool[0]
            trace.append(tuple(r))
        if _first_repeat(r, lambda v: True) is None:
            return trace
        if _first_repeat(r, st.is_complete) is None:
            # step 3: incomplete-family repeats only
            while True:
                pair = _first_repeat(r, lambda v: not st.is_complete(v))
                if pair is None:
                    return trace
                h = r[pair[1]]
                j1 = _last_index(r, lambda v: v == h)
                j2 = _last_index(r, lambda v: not st.is_complete(v))
                r[j1], r[j2] = r[j2], r[j1]
                pool = absent(last_family)
                gamma = pool[0] if pool else last_family[0]
                clash = gamma in r
                r[j2] = gamma
                trace.append(tuple(r))
                if clash:
                    restart = True
                    break
            if restart:
                continue
        else:
            # step 4: complete-family repeats only, replace by unused incomplete node
            while True:
                pair = _first_repeat(r, st.is_complete)
                if pair is None:
                    return trace
                h = r[pair[1]]
                fam = st.family(h)
                j1 = _last_index(r, lambda v: v == h)
                j2 = _last_index(r, lambda v: st.is_complete(v) and st.family(v) == fam)
                r[j1], r[j2] = r[j2], r[j1]
                pool = absent(incomplete_nodes)
                r[j2] = pool[0]
                trace.append(tuple(r))


def modify(r: Sequence[int], structure: FamilyStructure) -> tuple:
    return modify_steps(r, structure)[-1]
