"""Sparse multivariate polynomials with weighted variables.

A :class:`WeightedForm` is an immutable map ``exponent tuple -> coefficient``
together with variable names and weights.  All coefficients of one form live
in a single ring (rational, quadratic or tower); mixing promotes.

Text format, one form per line::

    [1] * w^2 + [1/2 + 3/2*rt] * x^2 y^2 + [-1] * 1

Coefficients sit in square brackets (see :func:`dp2verify.exact.format_coeff`),
monomials list only the non-zero exponents, the constant monomial is ``1`` and
the zero form is ``0``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import DEFAULT_D, format_coeff, parse_coeff, promote, ring_rank

Exponent = tuple[int, ...]


class WeightedForm:
    __slots__ = ("terms", "variables", "weights", "_rank", "_d")

    def __init__(
        self,
        terms: Mapping[Exponent, object],
        variables: Sequence[str],
        weights: Sequence[int] | None = None,
    ):
        variables = tuple(variables)
        weights = tuple(weights) if weights is not None else (1,) * len(variables)
        if len(weights) != len(variables):
            raise ValueError("one weight per variable required")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        rank, d = 0, DEFAULT_D
        for c in terms.values():
            rank = max(rank, ring_rank(c))
            if hasattr(c, "d"):
                d = c.d
        clean = {}
        for e, c in terms.items():
            e = tuple(int(k) for k in e)
            if len(e) != len(variables):
                raise ValueError(f"exponent {e} does not match {len(variables)} variables")
            if any(k < 0 for k in e):
                raise ValueError("negative exponent")
            if c:
                clean[e] = promote(c, rank, d)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_rank", rank)
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name, value):
        raise AttributeError("WeightedForm is immutable")

    # construction helpers

    @classmethod
    def zero(cls, variables, weights=None) -> "WeightedForm":
        return cls({}, variables, weights)

    @classmethod
    def constant(cls, c, variables, weights=None) -> "WeightedForm":
        return cls({(0,) * len(variables): c}, variables, weights)

    @classmethod
    def var(cls, name: str, variables, weights=None) -> "WeightedForm":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls({tuple(e): Fraction(1)}, variables, weights)

    @classmethod
    def gens(cls, variables, weights=None) -> tuple["WeightedForm", ...]:
        return tuple(cls.var(v, variables, weights) for v in variables)

    def _like(self, terms) -> "WeightedForm":
        return WeightedForm(terms, self.variables, self.weights)

    # structure

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def ring_rank(self) -> int:
        return self._rank

    def is_zero(self) -> bool:
        return not self.terms

    def weighted_degree(self, e: Exponent) -> int:
        return sum(w * k for w, k in zip(self.weights, e))

    def degrees(self) -> set[int]:
        return {self.weighted_degree(e) for e in self.terms}

    def is_weighted_homogeneous(self, degree: int | None = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs == {degree}

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def has_integer_coefficients(self) -> bool:
        return self._rank == 0 and all(c.denominator == 1 for c in self.terms.values())

    def coefficient(self, e: Exponent):
        return self.terms.get(tuple(e), Fraction(0))

    def _check(self, other: "WeightedForm"):
        if self.variables != other.variables or self.weights != other.weights:
            raise ValueError("forms over different variable sets")

    # arithmetic

    def _lift(self, other):
        if isinstance(other, WeightedForm):
            self._check(other)
            return other
        return WeightedForm.constant(other, self.variables, self.weights)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, WeightedForm):
            return self._like({e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return self._like(out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = WeightedForm.constant(1, self.variables, self.weights)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, WeightedForm):
            if self.is_zero():
                return other == 0
            return NotImplemented
        return (
            self.variables == other.variables
            and self.weights == other.weights
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, self.weights, frozenset(self.terms.items())))

    # calculus / evaluation

    def eval(self, point: Sequence):
        """Exact value at ``point`` (one coordinate per variable)."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, form has {self.nvars} variables")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    __call__ = eval

    def partial(self, index: int | str) -> "WeightedForm":
        if isinstance(index, str):
            index = self.variables.index(index)
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable index {index} out of range")
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                e2 = e[:index] + (k - 1,) + e[index + 1 :]
                out[e2] = c * k
        return self._like(out)

    def gradient(self) -> tuple["WeightedForm", ...]:
        return tuple(self.partial(i) for i in range(self.nvars))

    def substitute(self, assignments: Mapping[str | int, object] | Sequence) -> "WeightedForm":
        """Compose with per-variable polynomials.

        ``assignments`` is either a full sequence (one image per variable) or a
        mapping from variable name/index to image; unmapped variables stay.
        Images may be forms over a different variable set (all images must
        share it) or scalars.
        """
        if isinstance(assignments, Mapping):
            images: list = list(WeightedForm.gens(self.variables, self.weights))
            for key, val in assignments.items():
                idx = self.variables.index(key) if isinstance(key, str) else key
                images[idx] = val
        else:
            images = list(assignments)
            if len(images) != self.nvars:
                raise ValueError("need one image per variable")
        target = next((im for im in images if isinstance(im, WeightedForm)), None)
        if target is None:
            return WeightedForm.constant(self.eval(images), self.variables, self.weights)
        tv, tw = target.variables, target.weights
        images = [im if isinstance(im, WeightedForm) else WeightedForm.constant(im, tv, tw) for im in images]
        for im in images:
            target._check(im)
        powers: dict[tuple[int, int], WeightedForm] = {}

        def power(i, k):
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        result = WeightedForm.zero(tv, tw)
        for e, c in self.terms.items():
            t = WeightedForm.constant(c, tv, tw)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def map_coefficients(self, fn) -> "WeightedForm":
        return self._like({e: fn(c) for e, c in self.terms.items()})

    def with_variables(self, variables: Sequence[str], weights: Sequence[int] | None = None) -> "WeightedForm":
        """Re-embed into a larger (or reordered) variable list by name."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(variables)
            for j, k in zip(idx, e):
                e2[j] = k
            out[tuple(e2)] = c
        return WeightedForm(out, variables, weights)

    # text

    def sorted_terms(self):
        """Terms ordered by weighted degree descending, then exponent descending."""
        return sorted(self.terms.items(), key=lambda t: (-self.weighted_degree(t[0]), tuple(-k for k in t[0])))

    def _format_mono(self, e: Exponent) -> str:
        parts = [f"{v}^{k}" for v, k in zip(self.variables, e) if k]
        return " ".join(parts) if parts else "1"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"[{format_coeff(c)}] * {self._format_mono(e)}" for e, c in self.sorted_terms())

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"WeightedForm({self.to_text()!r}, variables={self.variables}, weights={self.weights})"


_TERM_RE = re.compile(r"\[([^\[\]]+)\] \* ((?:[A-Za-z_]\w*\^\d+)(?: [A-Za-z_]\w*\^\d+)*|1)")


def parse_form(
    text: str,
    variables: Sequence[str] = ("w", "x", "y", "z"),
    weights: Sequence[int] | None = None,
    d: int = DEFAULT_D,
) -> WeightedForm:
    """Parse the canonical text produced by :meth:`WeightedForm.to_text`."""
    variables = tuple(variables)
    text = text.strip()
    if text == "0":
        return WeightedForm.zero(variables, weights)
    terms: dict[Exponent, object] = {}
    pos = 0
    for n, m in enumerate(_TERM_RE.finditer(text)):
        sep = text[pos : m.start()]
        if sep != ("" if n == 0 else " + "):
            raise ValueError(f"bad separator {sep!r} at offset {pos}")
        pos = m.end()
        c = parse_coeff(m.group(1), d)
        e = [0] * len(variables)
        if m.group(2) != "1":
            for factor in m.group(2).split(" "):
                name, k = factor.split("^")
                if name not in variables:
                    raise ValueError(f"unknown variable {name!r}")
                e[variables.index(name)] += int(k)
        e = tuple(e)
        if e in terms:
            raise ValueError(f"repeated monomial {m.group(2)!r}")
        terms[e] = c
    if pos != len(text) or not terms:
        raise ValueError(f"trailing or unparseable text at offset {pos}")
    return WeightedForm(terms, variables, weights)


def format_matrix(rows: Iterable[Sequence]) -> str:
    """Matrices as ``[c, c, c; c, c, c; ...]`` with canonical coefficients in brackets."""
    return "; ".join(", ".join(f"[{format_coeff(c)}]" for c in row) for row in rows)


def parse_matrix(text: str, d: int = DEFAULT_D) -> list[list]:
    rows = []
    for row in text.split(";"):
        entries = re.findall(r"\[([^\[\]]+)\]", row)
        if not entries:
            raise ValueError(f"empty matrix row {row!r}")
        rows.append([parse_coeff(c, d) for c in entries])
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows
