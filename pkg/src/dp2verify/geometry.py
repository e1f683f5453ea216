"""Checks on the branch quartic and the degree 2 del Pezzo double cover.

Quartics are :class:`WeightedForm` objects in ``(x, y, z)``; surfaces are
``w^2 + quartic`` in ``(w, x, y, z)`` with weights ``(2, 1, 1, 1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .exact import QuadExt, Tower, one_like, promote
from .models import PLANE_VARS, SURFACE_VARS, SURFACE_WEIGHTS
from .poly import WeightedForm

SMOOTH = "smooth"
INCONCLUSIVE_AT_P = "inconclusive at p"
NOT_DEFINED_OVER_BASE = "not defined over Q(sqrt -7)"
DEFINED_OVER_BASE = "defined over Q(sqrt -7)"

GOOD_REDUCTION_NOTE = (
    "A plane curve smooth modulo a prime of good reduction is smooth over the number field: "
    "the singular locus is cut out by the partials, and a characteristic-zero singular point "
    "would reduce to a singular point of the reduction. With characteristic != 2, the double "
    "cover w^2 + q = 0 of P^2 is smooth iff the branch quartic q is."
)


def check_ternary_quartic(form: WeightedForm) -> None:
    if form.variables != PLANE_VARS:
        raise ValueError(f"expected a form in {PLANE_VARS}, got {form.variables}")
    if not form.is_weighted_homogeneous(4) or form.is_zero():
        raise ValueError("expected a nonzero homogeneous quartic")


# --- smoothness by reduction ----------------------------------------------------

def _reduce_coeff(c, p: int, root: int) -> int:
    if isinstance(c, Tower):
        if c.v:
            raise ValueError("cannot reduce a coefficient involving i")
        c = c.u
    if isinstance(c, QuadExt):
        return (_reduce_coeff(c.a, p, root) + _reduce_coeff(c.b, p, root) * root) % p
    c = Fraction(c)
    if c.denominator % p == 0:
        raise ValueError(f"{p} divides a coefficient denominator")
    return c.numerator * pow(c.denominator, -1, p) % p


def reduce_mod_p(form: WeightedForm, p: int, root: int) -> list[tuple[tuple[int, ...], int]]:
    """Integer terms of ``form`` mod p, sending sqrt(d) to ``root``."""
    terms = []
    for e, c in form.terms.items():
        r = _reduce_coeff(c, p, root)
        if r:
            terms.append((e, r))
    return terms


def _eval_mod(terms, point, p):
    total = 0
    for e, c in terms:
        t = c
        for x, k in zip(point, e):
            if k:
                t = t * pow(x, k, p) % p
        total += t
    return total % p


def projective_points(p: int, n: int = 3):
    """Normalised representatives of P^(n-1)(F_p): first nonzero coordinate is 1."""
    for lead in range(n):
        for rest in itertools.product(range(p), repeat=n - 1 - lead):
            yield (0,) * lead + (1,) + rest


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass
class GoodReductionResult:
    prime: int
    verdict: str
    per_root: dict[int, str]
    singular_points: dict[int, list[tuple[int, ...]]]
    points_scanned: int
    note: str = GOOD_REDUCTION_NOTE

    @property
    def smooth(self) -> bool:
        return self.verdict == SMOOTH


def singular_points_mod_p(form: WeightedForm, p: int, root: int) -> list[tuple[int, ...]]:
    partials = [reduce_mod_p(form.partial(i), p, root) for i in range(form.nvars)]
    return [pt for pt in projective_points(p, form.nvars) if all(_eval_mod(t, pt, p) == 0 for t in partials)]


def singular_locus_empty_mod_p(form: WeightedForm, p: int, root: int) -> bool:
    """Whether the partials have no common zero over the algebraic closure of F_p.

    Checked chart by chart: with one coordinate set to 1 the dehomogenised
    partials must generate the unit ideal of F_p[u, v].
    """
    syms = sympy.symbols(" ".join(form.variables))
    polys = []
    for i in range(form.nvars):
        terms = reduce_mod_p(form.partial(i), p, root)
        polys.append(sum((c * sympy.Mul(*[v**k for v, k in zip(syms, e)]) for e, c in terms), sympy.Integer(0)))
    for k in range(form.nvars):
        chart = [f.subs(syms[k], 1) for f in polys]
        rest = [v for j, v in enumerate(syms) if j != k]
        if all(f == 0 for f in chart):
            return False
        basis = sympy.groebner([f for f in chart if f != 0], *rest, modulus=p)
        if list(basis.exprs) != [1]:
            return False
    return True


def smooth_via_good_reduction(quartic: WeightedForm, p: int, sqrt_d_mod_p: int) -> GoodReductionResult:
    """Smoothness of the reduction mod p, once per root +-sqrt(d).

    The verdict comes from :func:`singular_locus_empty_mod_p`; the F_p-rational
    singular points are listed as a cross-check. The quartic is smooth over the
    number field as soon as one reduction is.
    """
    check_ternary_quartic(quartic)
    if p == 2 or not _is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    # the root only matters (and is only checked) when sqrt(d) occurs in the coefficients
    d = next((c.d for c in quartic.terms.values() if isinstance(c, (QuadExt, Tower))), None)
    if d is not None and (sqrt_d_mod_p * sqrt_d_mod_p - d) % p:
        raise ValueError(f"{sqrt_d_mod_p}^2 != {d} mod {p}")
    roots = sorted({sqrt_d_mod_p % p, (-sqrt_d_mod_p) % p})
    per_root, singular = {}, {}
    for r in roots:
        pts = singular_points_mod_p(quartic, p, r)
        singular[r] = pts
        empty = singular_locus_empty_mod_p(quartic, p, r)
        if empty and pts:
            raise AssertionError("F_p-rational singular point on a curve found smooth")
        per_root[r] = "smooth mod p" if empty else "singular mod p"
    verdict = SMOOTH if "smooth mod p" in per_root.values() else INCONCLUSIVE_AT_P
    return GoodReductionResult(p, verdict, per_root, singular, p * p + p + 1)


def sqrt_mod_p(a: int, p: int) -> int | None:
    """Smallest square root of a mod p by brute force (p is small here)."""
    a %= p
    return next((t for t in range(p) if t * t % p == a), None)


def exact_singular_candidates(form: WeightedForm, values=(-1, 0, 1)) -> list[tuple[int, ...]]:
    """Points with small integer coordinates where the form and all partials vanish exactly."""
    grads = form.gradient()
    hits = []
    for pt in itertools.product(values, repeat=form.nvars):
        if not any(pt):
            continue
        if form.eval(pt) == 0 and all(g.eval(pt) == 0 for g in grads):
            hits.append(pt)
    return hits


# --- bitangents -----------------------------------------------------------------

BITANGENT = "bitangent"
HYPERFLEX = "hyperflex"
NOT_BITANGENT = "not a bitangent"
COMPONENT = "line is a component"


def linear_coefficients(line: WeightedForm) -> list:
    if line.variables != PLANE_VARS:
        raise ValueError("line must be a form in (x, y, z)")
    if line.is_zero():
        raise ValueError("zero linear form")
    if not line.is_weighted_homogeneous(1):
        raise ValueError("line must be a linear form")
    return [line.coefficient(tuple(int(i == j) for j in range(3))) for i in range(3)]


def line_from_coefficients(a, b, c) -> WeightedForm:
    x, y, z = WeightedForm.gens(PLANE_VARS)
    return x * a + y * b + z * c


def eliminate_on_line(line: WeightedForm) -> tuple[int, WeightedForm]:
    """Index of the eliminated variable and its image in the other two."""
    coeffs = linear_coefficients(line)
    k = max(i for i in range(3) if coeffs[i])
    gens = WeightedForm.gens(PLANE_VARS)
    image = WeightedForm.zero(PLANE_VARS)
    for i in range(3):
        if i != k:
            image = image - gens[i] * (coeffs[i] / coeffs[k])
    return k, image


@dataclass
class BitangentResult:
    verdict: str
    eliminated: str
    restriction: WeightedForm
    q: WeightedForm | None = None
    alpha: object = None

    @property
    def is_bitangent(self) -> bool:
        return self.verdict == BITANGENT


def _binary_coeffs(b: WeightedForm, u: int, v: int) -> list:
    out = []
    for k in range(5):
        e = [0, 0, 0]
        e[u], e[v] = 4 - k, k
        out.append(b.coefficient(tuple(e)))
    return out


def _binary_quadratic(a, b, c, u: int, v: int) -> WeightedForm:
    gens = WeightedForm.gens(PLANE_VARS)
    U, V = gens[u], gens[v]
    return U * U * a + U * V * b + V * V * c


def _square_root_binary_quartic(c: list):
    """(alpha, (a, b, c)) with poly = alpha * (a u^2 + b uv + c v^2)^2, or None."""
    zero = c[0] * 0
    if c[0]:
        n = [x / c[0] for x in c]
        p1 = n[1] / 2
        p2 = (n[2] - p1 * p1) / 2
        if 2 * p1 * p2 == n[3] and p2 * p2 == n[4]:
            return c[0], (one_like(c[0]), p1, p2)
        return None
    if c[4]:
        rev = _square_root_binary_quartic(c[::-1])
        if rev is None:
            return None
        alpha, (a, b, cc) = rev
        return alpha, (cc, b, a)
    if c[2] and not c[1] and not c[3]:
        return c[2], (zero, one_like(c[2]), zero)
    return None


def is_bitangent(line: WeightedForm, quartic: WeightedForm) -> BitangentResult:
    """Restrict the quartic to the line and test for alpha * q^2 with q squarefree."""
    check_ternary_quartic(quartic)
    k, image = eliminate_on_line(line)
    b = quartic.substitute({k: image})
    u, v = [i for i in range(3) if i != k]
    name = PLANE_VARS[k]
    if b.is_zero():
        return BitangentResult(COMPONENT, name, b)
    root = _square_root_binary_quartic([promote(x, max(b.ring_rank, 1)) for x in _binary_coeffs(b, u, v)])
    if root is None:
        return BitangentResult(NOT_BITANGENT, name, b)
    alpha, (qa, qb, qc) = root
    q = _binary_quadratic(qa, qb, qc, u, v)
    assert q * q * alpha == b
    verdict = HYPERFLEX if qb * qb - 4 * qa * qc == 0 else BITANGENT
    return BitangentResult(verdict, name, b, q, alpha)


# --- lines on the double cover --------------------------------------------------

@dataclass(frozen=True)
class BitangentLift:
    """The two lines w = +-mu q over the bitangent ``line`` of the branch quartic.

    ``q`` is a binary quadratic in the two plane variables left after
    eliminating one with the line equation.
    """

    line: WeightedForm
    mu: Tower
    q: WeightedForm

    def __post_init__(self):
        linear_coefficients(self.line)
        if not isinstance(self.mu, Tower):
            object.__setattr__(self, "mu", promote(self.mu, 2))
        if self.q.variables != PLANE_VARS or not self.q.is_weighted_homogeneous(2):
            raise ValueError("q must be a binary quadratic form in the plane variables")
        k, _ = eliminate_on_line(self.line)
        if any(e[k] for e in self.q.terms):
            raise ValueError(f"q must not involve the eliminated variable {PLANE_VARS[k]}")

    def equation(self, sign: int = 1, scale=1) -> WeightedForm:
        """scale * (w - sign * mu * q) in (w, x, y, z)."""
        w = WeightedForm.var("w", SURFACE_VARS, SURFACE_WEIGHTS)
        q = self.q.with_variables(SURFACE_VARS, SURFACE_WEIGHTS)
        return (w - q * (self.mu * sign)) * scale

    def geiser(self) -> "BitangentLift":
        """Image under w -> -w: the lift with mu negated."""
        return BitangentLift(self.line, -self.mu, self.q)


def verify_line_on_surface(lift: BitangentLift, surface: WeightedForm) -> bool:
    """Both w = +mu q and w = -mu q lie on the surface over the line."""
    if surface.variables != SURFACE_VARS:
        raise ValueError("surface must be a form in (w, x, y, z)")
    k, image = eliminate_on_line(lift.line)
    to_surface = lambda f: f.with_variables(SURFACE_VARS, SURFACE_WEIGHTS)
    zvar = PLANE_VARS[k]
    for sign in (1, -1):
        w_image = to_surface(lift.q) * (lift.mu * sign)
        restricted = surface.substitute({"w": w_image, zvar: to_surface(image)})
        if not restricted.is_zero():
            return False
    return True


def geiser_swaps_lifts(lift: BitangentLift) -> bool:
    """w -> -w carries the + line onto the - line (equations up to sign)."""
    w = WeightedForm.var("w", SURFACE_VARS, SURFACE_WEIGHTS)
    image = lift.equation(1).substitute({"w": -w})
    return image == -lift.equation(-1) and lift.geiser().equation(1) == lift.equation(-1)


def form_defined_over_base(form: WeightedForm) -> bool:
    """Whether some nonzero rescaling has all coefficients in Q(sqrt d)."""
    if form.is_zero() or form.ring_rank < 2:
        return True
    terms = form.sorted_terms()
    lead = terms[0][1]
    return all((c / lead).in_base_field() for _, c in terms)


def field_of_definition_check(lift: BitangentLift, surface: WeightedForm, scale=1) -> str:
    """Whether the lifted lines need i: checked on the lift equations after normalising."""
    if not verify_line_on_surface(lift, surface):
        raise ValueError("lift does not lie on the surface")
    eqs = [lift.equation(s, scale) for s in (1, -1)]
    if all(form_defined_over_base(eq) for eq in eqs):
        return DEFINED_OVER_BASE
    return NOT_DEFINED_OVER_BASE


# --- automorphisms ---------------------------------------------------------------

def _det3(m) -> object:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@dataclass(frozen=True)
class ProjectiveAutomorphism:
    """(x, y, z)^T -> M (x, y, z)^T, and w -> w_scale * w on the surface."""

    matrix: tuple[tuple, ...]
    w_scale: object = 1

    def __post_init__(self):
        m = tuple(tuple(row) for row in self.matrix)
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("expects a 3x3 matrix")
        object.__setattr__(self, "matrix", m)
        if _det3(m) == 0:
            raise ValueError("matrix is not invertible")
        if self.w_scale == 0:
            raise ValueError("w scale must be nonzero")

    def __matmul__(self, other: "ProjectiveAutomorphism") -> "ProjectiveAutomorphism":
        a, b = self.matrix, other.matrix
        prod = tuple(tuple(sum((a[i][k] * b[k][j] for k in range(3)), Fraction(0)) for j in range(3)) for i in range(3))
        return ProjectiveAutomorphism(prod, self.w_scale * other.w_scale)

    @classmethod
    def geiser(cls) -> "ProjectiveAutomorphism":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)), -1)


def apply_automorphism(aut: ProjectiveAutomorphism, target: WeightedForm) -> WeightedForm:
    if target.variables == PLANE_VARS:
        gens = WeightedForm.gens(PLANE_VARS)
        offset, images = 0, []
    elif target.variables == SURFACE_VARS:
        gens = WeightedForm.gens(SURFACE_VARS, SURFACE_WEIGHTS)
        offset, images = 1, [gens[0] * aut.w_scale]
    else:
        raise ValueError("target must be a plane quartic or the surface form")
    for row in aut.matrix:
        images.append(sum((gens[offset + j] * row[j] for j in range(3)), WeightedForm.zero(target.variables, target.weights)))
    return target.substitute(images)


def verify_automorphism(aut: ProjectiveAutomorphism, target: WeightedForm) -> tuple[bool, object]:
    """Whether target o aut = c * target for a nonzero constant c; returns (ok, c)."""
    image = apply_automorphism(aut, target)
    e, c0 = target.sorted_terms()[0]
    c = image.coefficient(e) / c0
    if c == 0:
        return False, c
    return image == target * c, c


def signed_permutation_matrices() -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            out.append(tuple(tuple(signs[i] if j == perm[i] else 0 for j in range(3)) for i in range(3)))
    return out


def _projective_key(m) -> tuple:
    # signed permutation matrices: M ~ -M; normalise the first row to a + entry
    lead = next(v for v in m[0] if v)
    s = 1 if lead > 0 else -1
    return tuple(tuple(s * v for v in row) for row in m)


@dataclass
class SymmetryGroup:
    order: int
    elements: list = field(default_factory=list)
    closed: bool = True


def visible_symmetry_group(quartic: WeightedForm) -> SymmetryGroup:
    """Signed permutations preserving the quartic up to a scalar, modulo +-1."""
    check_ternary_quartic(quartic)
    keep = {}
    for m in signed_permutation_matrices():
        ok, _ = verify_automorphism(ProjectiveAutomorphism(m), quartic)
        if ok:
            keep.setdefault(_projective_key(m), m)
    elems = sorted(keep)

    def mul(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3))

    closed = all(_projective_key(mul(a, b)) in keep for a in elems for b in elems)
    return SymmetryGroup(len(elems), elems, closed)
