"""Truncated 2-adic numbers, the square criterion and Hensel square roots.

Numbers are carried as ``2**valuation * u`` with ``u`` an odd residue known
modulo ``2**precision``.  Everything is hard-wired to p = 2; the lifting code
only touches ``P`` so an odd prime would be a parameter change, but nothing
here claims to handle one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import QuadExt

P = 2
INFINITY = math.inf
DEFAULT_PRECISION = 64


class PrecisionError(ArithmeticError):
    """Not enough known bits to answer the question asked."""


def _ord2_int(n: int) -> int:
    return (n & -n).bit_length() - 1


def val2(x) -> int | float:
    """2-adic valuation of a rational; ``INFINITY`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _ord2_int(x.numerator) - _ord2_int(x.denominator)


def _unit_residue(x: Fraction, k: int) -> int:
    """Residue mod 2^k of the 2-adic unit x / 2^val2(x)."""
    v = val2(x)
    u = x / Fraction(2) ** v
    mod = 1 << k
    return (u.numerator * pow(u.denominator, -1, mod)) % mod


@dataclass(frozen=True)
class PadicApprox:
    valuation: int | float
    unit_residue: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be positive")
        if self.valuation == INFINITY:
            return
        if self.unit_residue % 2 == 0:
            raise ValueError("unit residue must be odd")
        if not 0 <= self.unit_residue < (1 << self.precision):
            object.__setattr__(self, "unit_residue", self.unit_residue % (1 << self.precision))

    @classmethod
    def from_rational(cls, x, precision: int = DEFAULT_PRECISION) -> "PadicApprox":
        x = Fraction(x)
        if x == 0:
            return cls.zero(precision)
        return cls(val2(x), _unit_residue(x, precision), precision)

    @classmethod
    def zero(cls, precision: int = DEFAULT_PRECISION) -> "PadicApprox":
        return cls(INFINITY, 0, precision)

    @property
    def is_zero(self) -> bool:
        return self.valuation == INFINITY

    @property
    def absolute_precision(self) -> int | float:
        return self.valuation + self.precision

    def residue(self, k: int) -> int:
        """The value mod 2^k; needs valuation >= 0 and enough known bits."""
        if self.is_zero:
            return 0
        if self.valuation < 0:
            raise ValueError(f"{self} is not a 2-adic integer")
        if self.absolute_precision < k:
            raise PrecisionError(f"{self} known only mod 2^{self.absolute_precision}, asked mod 2^{k}")
        return (self.unit_residue << self.valuation) % (1 << k)

    def truncate(self, precision: int) -> "PadicApprox":
        if precision > self.precision:
            raise PrecisionError("cannot add precision by truncation")
        return PadicApprox(self.valuation, self.unit_residue % (1 << precision), precision)

    def __mul__(self, other: "PadicApprox") -> "PadicApprox":
        k = min(self.precision, other.precision)
        if self.is_zero or other.is_zero:
            return PadicApprox.zero(k)
        return PadicApprox(self.valuation + other.valuation, (self.unit_residue * other.unit_residue) % (1 << k), k)

    def __neg__(self) -> "PadicApprox":
        if self.is_zero:
            return self
        return PadicApprox(self.valuation, (-self.unit_residue) % (1 << self.precision), self.precision)

    def __add__(self, other: "PadicApprox") -> "PadicApprox":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        base = min(self.valuation, other.valuation)
        known = min(self.absolute_precision, other.absolute_precision)
        bits = known - base
        total = (self.unit_residue << (self.valuation - base)) + (other.unit_residue << (other.valuation - base))
        total %= 1 << bits
        if total == 0:
            raise PrecisionError(f"sum vanishes mod 2^{known}; valuation undetermined")
        shift = _ord2_int(total)
        return PadicApprox(base + shift, total >> shift, bits - shift)

    def __sub__(self, other: "PadicApprox") -> "PadicApprox":
        return self + (-other)

    def congruent(self, other: "PadicApprox", k: int | None = None) -> bool:
        """Whether self - other = 0 mod 2^k (default: all bits both sides know)."""
        known = min(self.absolute_precision, other.absolute_precision)
        if k is None:
            k = known
        elif k > known:
            raise PrecisionError(f"values known only mod 2^{known}")
        if self.is_zero and other.is_zero:
            return True
        base = min(self.valuation, other.valuation)
        if base >= k:
            return True
        a = self.unit_residue << int(self.valuation - base) if not self.is_zero else 0
        b = other.unit_residue << int(other.valuation - base) if not other.is_zero else 0
        return (a - b) % (1 << int(k - base)) == 0

    def __str__(self):
        if self.is_zero:
            return f"0 (mod 2^{self.precision})"
        return f"2^{self.valuation} * ({self.unit_residue} mod 2^{self.precision})"


def is_square_q2(x: PadicApprox) -> bool:
    """Square criterion in Q_2*: even valuation and unit = 1 mod 8."""
    if x.is_zero:
        raise ValueError("squareness is only classified on nonzero elements")
    if x.precision < 3:
        raise PrecisionError("need the unit part mod 8")
    return x.valuation % 2 == 0 and x.unit_residue % 8 == 1


def hensel_sqrt(a: int, k: int) -> int:
    """Square root of ``a`` (``a = 1 mod 8``) in Z_2, truncated mod 2^k.

    Returns the branch that is 1 mod 4; the other 2-adic root is its negative.
    The bitwise lift fixes one bit per step; we lift one bit past ``k``
    because a root mod 2^(j+1) only pins the 2-adic root mod 2^j.
    """
    if k < 3:
        raise ValueError("precision must be at least 3")
    if a % 8 != 1:
        raise ValueError(f"{a} is not 1 mod 8, so it has no square root in Z_2*")
    t = 1
    for j in range(3, k + 1):
        # t^2 = a mod 2^j; fix bit j-1 so that it holds mod 2^(j+1)
        if (t * t - a) % (1 << (j + 1)):
            t += 1 << (j - 1)
    t %= 1 << k
    if t % 4 == 3:
        t = (-t) % (1 << k)
    return t


@dataclass(frozen=True)
class EmbeddingChoice:
    """Which root of T^2 + 7 in Z_2 the element sqrt(-7) is sent to."""

    label: str
    root_residue: int
    precision: int

    def __post_init__(self):
        if self.label not in ("theta1", "theta2"):
            raise ValueError("label must be theta1 or theta2")
        if (self.root_residue**2 + 7) % (1 << self.precision):
            raise ValueError("root_residue is not a square root of -7 at this precision")

    @classmethod
    def make(cls, label: str = "theta1", precision: int = DEFAULT_PRECISION + 16) -> "EmbeddingChoice":
        # theta1 is the branch 181 mod 128, i.e. the 1 mod 4 root
        r = hensel_sqrt(-7, precision)
        if label == "theta2":
            r = (-r) % (1 << precision)
        return cls(label, r, precision)

    def conjugate(self) -> "EmbeddingChoice":
        other = "theta2" if self.label == "theta1" else "theta1"
        return EmbeddingChoice(other, (-self.root_residue) % (1 << self.precision), self.precision)


def embed_theta(x, choice: EmbeddingChoice, precision: int = DEFAULT_PRECISION) -> PadicApprox:
    """Image of a + b*sqrt(-7) in Q_2 under ``choice``, unit part mod 2^precision."""
    if not isinstance(x, QuadExt):
        x = QuadExt(x, 0, -7)
    if x.d != -7:
        raise ValueError("embedding is defined for Q(sqrt -7) only")
    if not x:
        return PadicApprox.zero(precision)
    a, b = x.a, x.b
    if b == 0:
        return PadicApprox.from_rational(a, precision)
    va, vb = val2(a), val2(b)
    base = min(va, vb)
    # b * root is known mod 2^(vb + choice.precision); a is exact
    known = vb + choice.precision
    bits = known - base
    if bits <= 0:
        raise PrecisionError("embedding root too coarse")
    mod = 1 << bits
    scale = Fraction(2) ** base

    def integral(q: Fraction) -> int:
        q = q / scale
        return (q.numerator * pow(q.denominator, -1, mod)) % mod

    total = (integral(a) + integral(b) * choice.root_residue) % mod
    if total == 0:
        raise PrecisionError(f"value vanishes mod 2^{known}; raise the root precision")
    shift = _ord2_int(total)
    have = bits - shift
    if have < precision:
        raise PrecisionError(f"only {have} unit bits determined, {precision} requested")
    return PadicApprox(base + shift, (total >> shift) % (1 << precision), precision)
