import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dp2verify.exact import QuadExt
from dp2verify.models import KLEIN_PARAMETER, SQRT_M7
from dp2verify.padic import (
    INFINITY,
    EmbeddingChoice,
    PadicApprox,
    PrecisionError,
    embed_theta,
    hensel_sqrt,
    is_square_q2,
    val2,
)

nonzero = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4).filter(bool)


def test_val2_examples():
    assert val2(8) == 3
    assert val2(181**2 + 7) == 15
    assert 181**2 + 7 == 2**15
    assert val2(Fraction(3, 2)) == -1
    assert val2(0) == INFINITY


@given(nonzero, nonzero)
def test_valuation_is_ultrametric(a, b):
    assert val2(a * b) == val2(a) + val2(b)
    if a + b:
        assert val2(a + b) >= min(val2(a), val2(b))
        if val2(a) != val2(b):
            assert val2(a + b) == min(val2(a), val2(b))


def test_square_examples():
    assert is_square_q2(PadicApprox.from_rational(-7))
    assert not is_square_q2(PadicApprox.from_rational(2))
    assert is_square_q2(PadicApprox.from_rational(17))
    roots = [t for t in range(1, 128, 2) if (t * t - 17) % 128 == 0]
    assert roots


def test_square_errors():
    with pytest.raises(ValueError):
        is_square_q2(PadicApprox.zero())
    with pytest.raises(PrecisionError):
        is_square_q2(PadicApprox(0, 1, 2))


@pytest.mark.parametrize("k", range(3, 11))
def test_square_criterion_matches_brute_force_on_units(k):
    mod = 1 << k
    squares = {t * t % mod for t in range(1, mod, 2)}
    for u in range(1, mod, 2):
        assert is_square_q2(PadicApprox(0, u, k)) == (u in squares)
        assert not is_square_q2(PadicApprox(1, u, k))


def test_squares_of_1000_random_rationals():
    rng = random.Random(11)
    for _ in range(1000):
        x = Fraction(rng.choice([-1, 1]) * rng.randint(1, 10**6), rng.randint(1, 10**4))
        assert is_square_q2(PadicApprox.from_rational(x * x))


def test_hensel_sqrt_minus_seven():
    t = hensel_sqrt(-7, 7)
    assert t == 53 == 181 % 128
    assert sorted({t, -t % 128}) == [53, 75] == sorted({181 % 128, -181 % 128})
    assert all((r * r + 7) % 128 == 0 for r in (53, 75))
    assert hensel_sqrt(1, 10) == 1


def test_hensel_sqrt_high_precision_against_brute_force():
    t = hensel_sqrt(-7, 20)
    assert (t * t + 7) % (1 << 20) == 0 and t % 4 == 1
    # the 2-adic root mod 2^12 is among the brute-force roots mod 2^13 truncated
    brute = sorted({r % (1 << 12) for r in range(1, 1 << 13, 2) if (r * r + 7) % (1 << 13) == 0 and r % 4 == 1})
    assert t % (1 << 12) in brute


@pytest.mark.parametrize("a", [-7, 1, 17, 9, -15, 33])
def test_hensel_truncation_consistency(a):
    hi = hensel_sqrt(a, 64)
    for k in range(3, 64):
        assert hi % (1 << k) == hensel_sqrt(a, k)


def test_hensel_rejects():
    with pytest.raises(ValueError):
        hensel_sqrt(3, 8)
    with pytest.raises(ValueError):
        hensel_sqrt(-7, 2)


def test_embedding_examples():
    t1 = EmbeddingChoice.make("theta1", 80)
    t2 = EmbeddingChoice.make("theta2", 80)
    assert embed_theta(SQRT_M7, t1).residue(7) == 181 % 128
    assert embed_theta(KLEIN_PARAMETER, t1).residue(6) == 50 == -14 % 64
    assert embed_theta(QuadExt(1, 0), t1).residue(64) == 1
    assert embed_theta(QuadExt(1, 0), t2).residue(64) == 1


def test_conjugate_embeddings_sum_to_zero():
    t1 = EmbeddingChoice.make("theta1", 80)
    t2 = t1.conjugate()
    assert t2.label == "theta2"
    s = embed_theta(SQRT_M7, t1).residue(64) + embed_theta(SQRT_M7, t2).residue(64)
    assert s % (1 << 64) == 0


def test_embedding_precision_errors():
    coarse = EmbeddingChoice.make("theta1", 10)
    with pytest.raises(PrecisionError):
        embed_theta(KLEIN_PARAMETER, coarse, 64)
    with pytest.raises(ValueError):
        EmbeddingChoice("theta1", 3, 7)


def _rand_quad(rng):
    def q():
        return Fraction(rng.randint(-60, 60), rng.choice([1, 2, 3, 4, 5, 7, 8, 16]))

    return QuadExt(q(), q())


def test_embedding_is_homomorphism_1000_pairs():
    rng = random.Random(5)
    theta = EmbeddingChoice.make("theta1", 64 + 24)
    checked = 0
    while checked < 1000:
        a, b = _rand_quad(rng), _rand_quad(rng)
        if not (a and b and a + b):
            continue
        ta, tb = embed_theta(a, theta, 64), embed_theta(b, theta, 64)
        assert embed_theta(a * b, theta, 64).congruent(ta * tb)
        # cancellation in a + b can eat unit bits; compare on what both sides know
        assert embed_theta(a + b, theta, 48).congruent(ta + tb)
        checked += 1


def test_padic_text():
    assert str(PadicApprox.from_rational(12, 5)) == "2^2 * (3 mod 2^5)"
