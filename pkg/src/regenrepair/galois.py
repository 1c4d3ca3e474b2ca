"""GF(2^m) arithmetic with log/antilog tables and Gaussian elimination."""

import random
from functools import lru_cache

from .core import DimensionMismatch, NoSolution, UnsupportedField

# primitive polynomials, bit i = coefficient of x^i
DEFAULT_POLYS = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x89, 8: 0x11D,
    9: 0x211, 10: 0x409, 11: 0x805, 12: 0x1053, 13: 0x201B, 14: 0x4443,
    15: 0x8003, 16: 0x1100B,
}


def _polymulmod(a, b, poly, m):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return r


def _is_irreducible(poly, m):
    # no factor of degree <= m/2
    def pmod(a, b):
        db = b.bit_length()
        while a.bit_length() >= db:
            a ^= b << (a.bit_length() - db)
        return a
    for f in range(2, 1 << (m // 2 + 1)):
        if f.bit_length() - 1 <= m // 2 and pmod(poly, f) == 0:
            return False
    return True


class GF2m:
    def __init__(self, m, poly=None):
        if not 1 <= m <= 16:
            raise UnsupportedField(f"m={m} outside 1..16")
        poly = DEFAULT_POLYS[m] if poly is None else poly
        if poly.bit_length() - 1 != m or not _is_irreducible(poly, m):
            raise UnsupportedField(f"{poly:#x} is not an irreducible polynomial of degree {m}")
        self.m = m
        self.poly = poly
        self.q = 1 << m
        # tables over a generator of the multiplicative group
        self.exp = [0] * (2 * self.q)
        self.log = [0] * self.q
        g = self._find_generator()
        x = 1
        for i in range(self.q - 1):
            self.exp[i] = x
            self.log[x] = i
            x = _polymulmod(x, g, poly, m)
        for i in range(self.q - 1, 2 * self.q):
            self.exp[i] = self.exp[i - (self.q - 1)]

    def _find_generator(self):
        order = self.q - 1
        if order == 1:
            return 1
        for g in range(2, self.q):
            x, k = g, 1
            while x != 1:
                x = _polymulmod(x, g, self.poly, self.m)
                k += 1
            if k == order:
                return g
        raise UnsupportedField("no generator found")

    def __repr__(self):
        return f"GF(2^{self.m}, poly={self.poly:#x})"

    def __eq__(self, other):
        return isinstance(other, GF2m) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self):
        return hash((self.m, self.poly))

    def add(self, a, b):
        return a ^ b

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def dot(self, u, v):
        out = 0
        for a, b in zip(u, v):
            if a and b:
                out ^= self.exp[self.log[a] + self.log[b]]
        return out

    def scale(self, c, v):
        if c == 0:
            return [0] * len(v)
        lc = self.log[c]
        return [self.exp[lc + self.log[x]] if x else 0 for x in v]

    def axpy(self, c, x, y):
        """y + c*x."""
        if c == 0:
            return list(y)
        lc = self.log[c]
        return [b ^ (self.exp[lc + self.log[a]] if a else 0) for a, b in zip(x, y)]

    def matvec(self, A, x):
        return [self.dot(row, x) for row in A]

    def matmul(self, A, B):
        cols = list(zip(*B))
        return [[self.dot(row, col) for col in cols] for row in A]

    def combine(self, coeffs, rows):
        """sum_i coeffs[i] * rows[i]."""
        out = [0] * len(rows[0])
        for c, r in zip(coeffs, rows):
            out = self.axpy(c, r, out)
        return out

    def random_element(self, rng):
        return rng.randrange(self.q)

    def random_vector(self, length, rng):
        return [rng.randrange(self.q) for _ in range(length)]

    def rank(self, rows):
        return rank(self, rows)

    def solve(self, A, b):
        return solve(self, A, b)


@lru_cache(maxsize=None)
def field(m=8, poly=None) -> GF2m:
    return GF2m(m, poly)


def field_from_size(q: int, poly=None) -> GF2m:
    m = q.bit_length() - 1
    if q < 2 or 1 << m != q:
        raise UnsupportedField(f"field size {q} is not a power of two")
    return field(m, poly)


def _check_rect(rows):
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("rows have different lengths")


def _echelon(F, rows):
    """Row echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][col])
        rows[r] = F.scale(inv, rows[r])
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                rows[i] = F.axpy(rows[i][col], rows[r], rows[i])
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(F: GF2m, rows) -> int:
    rows = [list(r) for r in rows]
    _check_rect(rows)
    if not rows:
        return 0
    return len(_echelon(F, rows)[1])


def solve(F: GF2m, A, b) -> list:
    """One solution x of A x = b (free variables set to zero)."""
    A = [list(r) for r in A]
    _check_rect(A)
    if len(A) != len(b):
        raise DimensionMismatch(f"A has {len(A)} rows but b has {len(b)} entries")
    if not A:
        return []
    ncols = len(A[0])
    aug = [row + [bi] for row, bi in zip(A, b)]
    red, pivots = _echelon(F, aug)
    if ncols in pivots:
        raise NoSolution("inconsistent system")
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = red[i][ncols]
    return x


def random_vector(F: GF2m, length: int, rng: random.Random) -> list:
    return F.random_vector(length, rng)
