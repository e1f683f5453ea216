"""The concrete forms of the construction."""

from __future__ import annotations

from fractions import Fraction

from .exact import QuadExt, Tower
from .poly import WeightedForm

SURFACE_VARS = ("w", "x", "y", "z")
SURFACE_WEIGHTS = (2, 1, 1, 1)
PLANE_VARS = ("x", "y", "z")

SQRT_M7 = QuadExt(0, 1, -7)
# (3/2)(1 - sqrt(-7)); the quartic carries it with a minus sign
KLEIN_PARAMETER = Fraction(3, 2) * (1 - SQRT_M7)
# ((1 - sqrt(-7))/2)^2 and the line-lift coefficient i * that
HALF_ROOT_SQUARED = ((1 - SQRT_M7) / 2) ** 2
LIFT_MU = Tower.i(-7) * HALF_ROOT_SQUARED


def _quartic_terms(cross_coefficient, nvars: int, offset: int):
    def e(x, y, z):
        base = [0] * nvars
        base[offset], base[offset + 1], base[offset + 2] = x, y, z
        return tuple(base)

    terms = {e(4, 0, 0): 1, e(0, 4, 0): 1, e(0, 0, 4): 1}
    for ex in (e(2, 2, 0), e(2, 0, 2), e(0, 2, 2)):
        terms[ex] = cross_coefficient
    return terms


def ternary_quartic(cross_coefficient) -> WeightedForm:
    """x^4 + y^4 + z^4 + c (x^2y^2 + x^2z^2 + y^2z^2)."""
    return WeightedForm(_quartic_terms(cross_coefficient, 3, 0), PLANE_VARS)


def branch_quartic() -> WeightedForm:
    """Branch quartic over Q(sqrt -7)."""
    return ternary_quartic(-KLEIN_PARAMETER)


def surface_form(quartic: WeightedForm) -> WeightedForm:
    """w^2 + quartic(x, y, z) in weights (2, 1, 1, 1)."""
    q = quartic.with_variables(SURFACE_VARS, SURFACE_WEIGHTS)
    w = WeightedForm.var("w", SURFACE_VARS, SURFACE_WEIGHTS)
    return w * w + q


def dp2_surface() -> WeightedForm:
    return surface_form(branch_quartic())


def dp64_form() -> WeightedForm:
    """w^2 + x^4 + y^4 + z^4 + 14 (x^2y^2 + x^2z^2 + y^2z^2), the 2-adic image."""
    terms = _quartic_terms(14, 4, 1)
    terms[(2, 0, 0, 0)] = 1
    return WeightedForm(terms, SURFACE_VARS, SURFACE_WEIGHTS)
