"""Exact coefficient rings: rationals, Q(sqrt d) and Q(sqrt d, i).

Rationals are plain :class:`fractions.Fraction`.  The two extensions are
small immutable classes with explicit promotion
``Fraction -> QuadExt -> Tower``; mixing operands promotes to the larger ring.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC

DEFAULT_D = -7

Rational = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


class QuadExt:
    """Element a + b*sqrt(d) of Q(sqrt d), d a fixed non-square integer."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = DEFAULT_D):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))
        object.__setattr__(self, "d", int(d))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt_d(cls, d: int = DEFAULT_D) -> "QuadExt":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mismatched fields: sqrt({self.d}) vs sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Tower):
            return NotImplemented
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if isinstance(other, Tower):
            return NotImplemented
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Tower):
            return NotImplemented
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt d)")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, Tower):
            return NotImplemented
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, Tower):
            return other == self
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return format_coeff(self)


class Tower:
    """Element u + v*i with u, v in Q(sqrt d) and i^2 = -1."""

    __slots__ = ("u", "v")

    def __init__(self, u=0, v=0, d: int | None = None):
        if d is None:
            d = u.d if isinstance(u, QuadExt) else v.d if isinstance(v, QuadExt) else DEFAULT_D
        u = u if isinstance(u, QuadExt) else QuadExt(u, 0, d)
        v = v if isinstance(v, QuadExt) else QuadExt(v, 0, d)
        if u.d != v.d:
            raise ValueError("components live in different quadratic fields")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("Tower is immutable")

    @property
    def d(self) -> int:
        return self.u.d

    @classmethod
    def i(cls, d: int = DEFAULT_D) -> "Tower":
        return cls(QuadExt(0, 0, d), QuadExt(1, 0, d))

    def _coerce(self, other):
        if isinstance(other, Tower):
            if other.d != self.d:
                raise ValueError("mismatched base fields")
            return other
        if isinstance(other, QuadExt):
            return Tower(other, QuadExt(0, 0, other.d))
        if isinstance(other, (int, Fraction)):
            return Tower(QuadExt(other, 0, self.d), QuadExt(0, 0, self.d))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Tower(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return Tower(-self.u, -self.v)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Tower(self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Tower(self.u * o.u - self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def conjugate(self) -> "Tower":
        """Complex conjugation i -> -i (fixes Q(sqrt d))."""
        return Tower(self.u, -self.v)

    def norm(self) -> QuadExt:
        return self.u * self.u + self.v * self.v

    def inverse(self) -> "Tower":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(sqrt d, i)")
        ninv = n.inverse()
        return Tower(self.u * ninv, -self.v * ninv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Tower(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def in_base_field(self) -> bool:
        return not self.v

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def __eq__(self, other):
        if isinstance(other, Tower):
            return self.u == other.u and self.v == other.v
        if isinstance(other, (QuadExt, int, Fraction)):
            return not self.v and self.u == other
        return NotImplemented

    def __hash__(self):
        if not self.v:
            return hash(self.u)
        return hash((self.u, self.v))

    def __repr__(self):
        return f"Tower({self.u!r}, {self.v!r})"

    def __str__(self):
        return format_coeff(self)


# ring ranks for promotion
_RANK = {Fraction: 0, int: 0, QuadExt: 1, Tower: 2}


def ring_rank(c) -> int:
    try:
        return _RANK[type(c)]
    except KeyError:
        raise TypeError(f"unsupported coefficient type {type(c).__name__}") from None


def promote(c, rank: int, d: int = DEFAULT_D):
    """Lift ``c`` into the ring of the given rank (0 rational, 1 quadratic, 2 tower)."""
    r = ring_rank(c)
    if r > rank:
        raise ValueError(f"cannot demote {c!r} to rank {rank}")
    if rank == 0:
        return _as_fraction(c)
    if isinstance(c, (QuadExt, Tower)):
        d = c.d
    if rank == 1:
        return c if isinstance(c, QuadExt) else QuadExt(c, 0, d)
    if isinstance(c, Tower):
        return c
    return Tower(c if isinstance(c, QuadExt) else QuadExt(c, 0, d), QuadExt(0, 0, d))


def zero_like(c):
    if isinstance(c, Tower):
        return Tower(0, 0, c.d)
    if isinstance(c, QuadExt):
        return QuadExt(0, 0, c.d)
    return Fraction(0)


def one_like(c):
    if isinstance(c, Tower):
        return Tower(1, 0, c.d)
    if isinstance(c, QuadExt):
        return QuadExt(1, 0, c.d)
    return Fraction(1)


# --- text format -----------------------------------------------------------
#   rational:  p  or  p/q
#   quadratic: a + b*rt          (rt = sqrt d)
#   tower:     (a + b*rt) + (c + e*rt)*i

def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_coeff(c) -> str:
    if isinstance(c, Tower):
        return f"({format_coeff(c.u)}) + ({format_coeff(c.v)})*i"
    if isinstance(c, QuadExt):
        return f"{_fmt_frac(c.a)} + {_fmt_frac(c.b)}*rt"
    return _fmt_frac(_as_fraction(c))


_FRAC = r"-?\d+(?:/\d+)?"
_QUAD_RE = re.compile(rf"^({_FRAC}) \+ ({_FRAC})\*rt$")
_TOWER_RE = re.compile(rf"^\(({_FRAC} \+ {_FRAC}\*rt)\) \+ \(({_FRAC} \+ {_FRAC}\*rt)\)\*i$")
_FRAC_RE = re.compile(rf"^{_FRAC}$")


def _parse_frac(s: str) -> Fraction:
    x = Fraction(s)
    if _fmt_frac(x) != s:
        raise ValueError(f"non-canonical rational {s!r}")
    return x


def parse_coeff(text: str, d: int = DEFAULT_D):
    """Inverse of :func:`format_coeff`; only canonical text is accepted."""
    text = text.strip()
    m = _TOWER_RE.match(text)
    if m:
        return Tower(parse_coeff(m.group(1), d), parse_coeff(m.group(2), d))
    m = _QUAD_RE.match(text)
    if m:
        return QuadExt(_parse_frac(m.group(1)), _parse_frac(m.group(2)), d)
    if _FRAC_RE.match(text):
        return _parse_frac(text)
    raise ValueError(f"unparseable coefficient {text!r}")
