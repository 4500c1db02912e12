"""Exact scalars for coordinates: rationals, the field Q(sqrt 5), and tolerance-tagged floats.

Rationals are ``fractions.Fraction`` (arbitrary precision, always in lowest
terms with positive denominator, which is exactly the canonical form needed
here).  ``GoldenRational`` represents a + b*sqrt(5) with rational a, b; the
basis (1, sqrt 5) keeps the multiplication table trivial and the golden ratio
is the element (1/2, 1/2).  Floating values carry an absolute tolerance.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

# Scalar kind tags used by point sets and certificates.
RATIONAL = "rational"
GOLDEN = "golden"
FLOAT = "float"

KINDS = (RATIONAL, GOLDEN, FLOAT)

DEFAULT_TOL = 1e-9

Rational = Fraction


def rational_to_str(x: Fraction) -> str:
    """Canonical "num/den" form, denominator always explicit."""
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    if not isinstance(s, str):
        raise ValueError(f"expected rational string, got {type(s).__name__}")
    return Fraction(s)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to Fraction")


@functools.total_ordering
@dataclass(frozen=True)
class GoldenRational:
    """Element a + b*sqrt(5) of Q(sqrt 5) with exact comparisons."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))

    @staticmethod
    def of(v) -> "GoldenRational":
        if isinstance(v, GoldenRational):
            return v
        return GoldenRational(_as_fraction(v), Fraction(0))

    def __add__(self, other):
        o = GoldenRational.of(other)
        return GoldenRational(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = GoldenRational.of(other)
        return GoldenRational(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return GoldenRational.of(other) - self

    def __neg__(self):
        return GoldenRational(-self.a, -self.b)

    def __mul__(self, other):
        # (a + b s)(c + d s) = (ac + 5bd) + (ad + bc) s  with s = sqrt 5
        o = GoldenRational.of(other)
        return GoldenRational(
            self.a * o.a + 5 * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GoldenRational.of(other)
        norm = o.a * o.a - 5 * o.b * o.b
        if norm == 0:
            # a^2 = 5 b^2 has no nonzero rational solutions, so this is o == 0
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        return self * GoldenRational(o.a / norm, -o.b / norm)

    def __rtruediv__(self, other):
        return GoldenRational.of(other) / self

    def sign(self) -> int:
        """Exact sign of the real value a + b*sqrt(5), no floating arithmetic.

        When a and b have the same sign the value's sign is theirs; for mixed
        signs the larger of a^2 and 5 b^2 decides, i.e. sign(a) * sign(a^2 - 5 b^2).
        """
        a, b = self.a, self.b
        if b == 0:
            return 0 if a == 0 else (1 if a > 0 else -1)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        disc = a * a - 5 * b * b
        # disc == 0 would force a = b = 0 (sqrt 5 irrational), excluded above
        sa = 1 if a > 0 else -1
        return sa * (1 if disc > 0 else -1)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __lt__(self, other):
        return (self - GoldenRational.of(other)).sign() < 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(5.0)

    def __repr__(self):
        return f"GoldenRational({self.a!s}, {self.b!s})"


GOLDEN_ZERO = GoldenRational(Fraction(0), Fraction(0))
GOLDEN_ONE = GoldenRational(Fraction(1), Fraction(0))
SQRT5 = GoldenRational(Fraction(0), Fraction(1))
PHI = GoldenRational(Fraction(1, 2), Fraction(1, 2))
INV_PHI = GoldenRational(Fraction(-1, 2), Fraction(1, 2))  # 1/phi = phi - 1


def golden_arith(op: str, x: GoldenRational, y: GoldenRational) -> GoldenRational:
    """Field operation dispatch; div raises ZeroDivisionError on y == 0."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def scalar_sign(x) -> int:
    """Sign of a Rational or GoldenRational, computed exactly."""
    if isinstance(x, GoldenRational):
        return x.sign()
    x = _as_fraction(x)
    return 0 if x == 0 else (1 if x > 0 else -1)


@dataclass(frozen=True)
class FloatTol:
    """A float together with the absolute tolerance its comparisons use."""

    value: float
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")

    def approx_eq(self, other) -> bool:
        v = other.value if isinstance(other, FloatTol) else float(other)
        t = max(self.tol, other.tol) if isinstance(other, FloatTol) else self.tol
        return abs(self.value - v) <= t


def feq(x: float, y: float, tol: float = DEFAULT_TOL) -> bool:
    """Absolute-tolerance equality."""
    return abs(x - y) <= tol


def frel_eq(x: float, y: float, tol: float = DEFAULT_TOL) -> bool:
    """Equality within max(tol, tol * magnitude); used for squared distances."""
    return abs(x - y) <= max(tol, tol * max(abs(x), abs(y)))


def scalar_to_json(x, kind: str):
    if kind == RATIONAL:
        return rational_to_str(x)
    if kind == GOLDEN:
        g = GoldenRational.of(x)
        return {"a": rational_to_str(g.a), "b": rational_to_str(g.b)}
    if kind == FLOAT:
        return float(x)
    raise ValueError(f"unknown scalar kind {kind!r}")


def scalar_from_json(v, kind: str):
    if kind == RATIONAL:
        return rational_from_str(v)
    if kind == GOLDEN:
        if not isinstance(v, dict) or set(v) != {"a", "b"}:
            raise ValueError("golden scalar must be an object with keys a, b")
        return GoldenRational(rational_from_str(v["a"]), rational_from_str(v["b"]))
    if kind == FLOAT:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValueError("float scalar must be a number")
        return float(v)
    raise ValueError(f"unknown scalar kind {kind!r}")


def scalar_of(value, kind: str):
    """Coerce an int/Fraction into the arithmetic type of the given kind."""
    if kind == RATIONAL:
        return _as_fraction(value)
    if kind == GOLDEN:
        return GoldenRational.of(value)
    if kind == FLOAT:
        return float(value)
    raise ValueError(f"unknown scalar kind {kind!r}")
