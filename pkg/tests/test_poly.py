import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp2verify.exact import QuadExt, Tower
from dp2verify.models import (
    KLEIN_PARAMETER,
    PLANE_VARS,
    SURFACE_VARS,
    SURFACE_WEIGHTS,
    dp64_form,
    branch_quartic,
    dp2_surface,
)
from dp2verify.poly import WeightedForm, format_matrix, parse_form, parse_matrix

W, X, Y, Z = WeightedForm.gens(SURFACE_VARS, SURFACE_WEIGHTS)
x, y, z = WeightedForm.gens(PLANE_VARS)


def test_eval_examples():
    assert (W * W + X**4).eval((0, 0, 0, 0)) == 0
    assert dp64_form().eval((1, 1, 1, 1)) == 46
    assert dp2_surface().eval((0, 1, 0, 0)) == 1


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        dp64_form().eval((1, 2, 3))


def test_partial_examples():
    assert (x**4).partial("x") == 4 * x**3
    assert dp2_surface().partial("w") == 2 * W
    expected = 4 * x**3 - (x * y * y + x * z * z) * (2 * KLEIN_PARAMETER)
    assert branch_quartic().partial(0) == expected


def test_partial_drops_weighted_degree():
    f = dp2_surface()
    assert f.partial("w").is_weighted_homogeneous(2)
    assert f.partial("x").is_weighted_homogeneous(3)


def test_substitute_examples():
    assert (x + y + z).substitute({"z": -x - y}).is_zero()
    lhs = (x**4 + y**4 + z**4).substitute({"z": -(x + y)})
    # (x+y)^4 by the binomial theorem
    binom = x**4 + 4 * x**3 * y + 6 * x**2 * y**2 + 4 * x * y**3 + y**4
    assert lhs == x**4 + y**4 + binom
    assert lhs == 2 * x**4 + 4 * x**3 * y + 6 * x**2 * y**2 + 4 * x * y**3 + 2 * y**4
    S = dp2_surface()
    assert S.substitute({"w": -W}) == S


def _five_point_derivative(f, point, i):
    """Exact derivative of t -> f(p + t e_i) at 0 for polynomials of degree <= 4."""

    def g(t):
        p = list(point)
        p[i] = p[i] + t
        return f.eval(p)

    return (g(-2) - 8 * g(-1) + 8 * g(1) - g(2)) / 12


@pytest.mark.parametrize("form", [dp64_form(), dp2_surface()], ids=["dp64", "surface"])
def test_partial_against_finite_differences(form):
    rng = random.Random(3)
    for _ in range(40):
        pt = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)]
        for i in range(4):
            assert form.partial(i).eval(pt) == _five_point_derivative(form, pt, i)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
plane_polys = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 3), coeffs, max_size=4
).map(lambda t: WeightedForm(t, PLANE_VARS))


@given(plane_polys, plane_polys, st.lists(plane_polys, min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_substitution_is_ring_homomorphism(f, g, images):
    assert (f * g).substitute(images) == f.substitute(images) * g.substitute(images)
    assert (f + g).substitute(images) == f.substitute(images) + g.substitute(images)


@pytest.mark.parametrize(
    "form",
    [
        dp64_form(),
        dp2_surface(),
        branch_quartic(),
        WeightedForm.zero(SURFACE_VARS),
        (W - X * X * Tower(QuadExt(1, 2), QuadExt(Fraction(-1, 3), 0))) * 3 + 1,
    ],
    ids=["dp64", "surface", "quartic", "zero", "tower"],
)
def test_text_round_trip(form):
    text = form.to_text()
    back = parse_form(text, form.variables, form.weights)
    assert back == form
    assert back.to_text() == text


@given(plane_polys)
def test_text_round_trip_random(f):
    assert parse_form(f.to_text(), PLANE_VARS) == f


def test_text_format_sample():
    assert (2 * W * W - Fraction(1, 3) * X**4).to_text() == "[2] * w^2 + [-1/3] * x^4"
    assert parse_form("[1 + 1/2*rt] * x^2 y^2", PLANE_VARS).coefficient((2, 2, 0)) == QuadExt(1, Fraction(1, 2))


@pytest.mark.parametrize("bad", ["[1] * q^2", "[1] * x^2 +[1] * y^2", "[1] * x^2 + [2] * x^2", "x^2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_form(bad, PLANE_VARS)


def test_matrix_round_trip():
    m = [[Fraction(1), QuadExt(0, 1)], [Fraction(-1, 2), Tower.i()]]
    assert parse_matrix(format_matrix(m)) == m


def test_weighted_homogeneity_flags():
    assert dp64_form().is_weighted_homogeneous(4)
    assert not (W * W * X).is_weighted_homogeneous(4)
    assert dp64_form().has_integer_coefficients()
    assert not dp2_surface().has_integer_coefficients()
