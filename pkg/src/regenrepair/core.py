"""Exact scalars, validated system parameters and the shared error types."""

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

DEFAULT_BUDGET = 5_000_000


class RegenError(Exception):
    """Base class for all library errors."""


class ParamOutOfRange(RegenError, ValueError):
    pass


class PreconditionViolated(RegenError, ValueError):
    pass


class BudgetExceeded(RegenError):
    pass


class SchemeViolation(RegenError):
    pass


class UnsupportedField(RegenError, ValueError):
    pass


class DimensionMismatch(RegenError, ValueError):
    pass


class NoSolution(RegenError):
    pass


class RankDeficient(RegenError):
    pass


class ConstructionFailed(RegenError):
    pass


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction) -> str:
    # display only
    return f"{float(x):.6g}"


def check_nkd(n: int, k: int, d: int) -> None:
    for name, v in (("n", n), ("k", k), ("d", d)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParamOutOfRange(f"{name} must be an integer, got {v!r}")
    if n < 2:
        raise ParamOutOfRange(f"n>=2 violated (n={n})")
    if k < 1:
        raise ParamOutOfRange(f"k>=1 violated (k={k})")
    if k > n:
        raise ParamOutOfRange(f"k>n (k={k}, n={n})")
    if d < 1:
        raise ParamOutOfRange(f"d>=1 violated (d={d})")
    if d > n - 1:
        raise ParamOutOfRange(f"d>n-1 (d={d}, n={n})")


def check_nd(n: int, d: int) -> None:
    check_nkd(n, 1, d)


@dataclass(frozen=True)
class SystemParams:
    n: int
    k: int
    d: int
    file_size: Fraction = Fraction(1)

    def __post_init__(self):
        check_nkd(self.n, self.k, self.d)
        object.__setattr__(self, "file_size", as_rational(self.file_size))
        if self.file_size <= 0:
            raise ParamOutOfRange(f"file_size>0 violated ({self.file_size})")

    @property
    def M(self) -> Fraction:
        return self.file_size


def validate_params(n: int, k: int, d: int, M=1) -> SystemParams:
    # k > d is allowed on purpose
    return SystemParams(n, k, d, as_rational(M))


@dataclass(frozen=True)
class OperatingPoint:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_rational(self.alpha))
        object.__setattr__(self, "beta", as_rational(self.beta))
        if self.alpha <= 0 or self.beta <= 0:
            raise ParamOutOfRange(f"alpha, beta must be positive ({self.alpha}, {self.beta})")

    def gamma(self, d: int) -> Fraction:
        return d * self.beta

    @classmethod
    def from_gamma(cls, alpha, gamma, d: int) -> "OperatingPoint":
        return cls(as_rational(alpha), as_rational(gamma) / d)
