import itertools
from collections import Counter

import pytest

from dp2verify.local_search import (
    EXTRA_CLASSES,
    INCONCLUSIVE,
    NO_SOLUTION,
    PARITY_CLASSES,
    ResidueSearchSpec,
    descent_reduction_check,
    enumerate_residue_solutions,
    q2_insolubility_certificate,
    residue_profile,
)
from dp2verify.models import SURFACE_VARS, SURFACE_WEIGHTS, dp64_form, dp2_surface
from dp2verify.poly import WeightedForm

W, X, Y, Z = WeightedForm.gens(SURFACE_VARS, SURFACE_WEIGHTS)
PRIMITIVE_64 = 64**4 - 32**4


def oracle_count_w_squared_plus(g, modulus):
    """Primitive roots of w^2 + g(x, y, z) mod m by looping over (x, y, z) in Python.

    For each (x, y, z) count the w with w^2 = -g; when x, y, z are all even
    only odd w keep the tuple primitive.
    """
    sq_all = Counter(w * w % modulus for w in range(modulus))
    sq_odd = Counter(w * w % modulus for w in range(1, modulus, 2))
    total = 0
    for xs in itertools.product(range(modulus), repeat=3):
        target = -g(*xs) % modulus
        total += (sq_all if any(v & 1 for v in xs) else sq_odd)[target]
    return total


def g_dp64(x, y, z):
    return x**4 + y**4 + z**4 + 14 * (x * x * y * y + x * x * z * z + y * y * z * z)


def test_lemma_form_has_no_primitive_root_mod_64():
    res = enumerate_residue_solutions(ResidueSearchSpec(dp64_form(), 64))
    assert res.count == 0 and res.witnesses == []
    assert res.tuples_enumerated == PRIMITIVE_64 == 15_728_640


def test_python_oracle_agrees_mod_64():
    assert oracle_count_w_squared_plus(g_dp64, 64) == 0


@pytest.mark.parametrize("modulus", [4, 8, 16])
def test_kernel_matches_python_oracle_small_moduli(modulus):
    res = enumerate_residue_solutions(ResidueSearchSpec(dp64_form(), modulus))
    assert res.count == oracle_count_w_squared_plus(g_dp64, modulus)


def test_w_squared_mod_4():
    f = WeightedForm({(2,): 1}, ("w",), (2,))
    res = enumerate_residue_solutions(ResidueSearchSpec(f, 4, "none"))
    assert res.count == 2 and res.witnesses == [(0,), (2,)]


def test_all_odd_tuples_mod_8_are_never_roots():
    prof = residue_profile(dp64_form(), 8)
    assert set(prof["all-odd"]) <= {2, 6}
    assert 0 not in prof["all-odd"]


def test_cases_one_and_two_give_plus_minus_two_mod_8():
    prof = residue_profile(dp64_form(), 8)
    assert set(prof["all-odd"]) | set(prof["w-odd-one-of-xyz-odd"]) == {2, 6}
    # each case on its own: all odd gives 1+1+1+1+14*3 = 46 = 6, case 2 gives 2
    assert set(prof["all-odd"]) == {6}
    assert set(prof["w-odd-one-of-xyz-odd"]) == {2}


def test_case_three_with_w_divisible_by_4():
    prof = residue_profile(dp64_form(), 64, EXTRA_CLASSES)
    assert prof["w-0mod4-x-even-yz-odd"] and 0 not in prof["w-0mod4-x-even-yz-odd"]
    # w^2 + 16 + 112 x'^2 + 16 x'^4 mod 64 in case three
    for r in prof["w-even-x-even-yz-odd"]:
        assert r % 4 == 0


def test_zero_form_profile():
    zero = WeightedForm.zero(SURFACE_VARS, SURFACE_WEIGHTS)
    prof = residue_profile(zero, 8)
    assert all(set(c) == {0} for c in prof.values())


def test_parity_classes_partition_primitive_tuples():
    prof = residue_profile(dp64_form(), 64)
    assert sum(sum(c.values()) for c in prof.values()) == PRIMITIVE_64


def test_search_is_deterministic_and_partition_independent():
    spec = ResidueSearchSpec(W * W - X**4, 16)
    a = enumerate_residue_solutions(spec)
    b = enumerate_residue_solutions(spec, chunk=777)
    c = enumerate_residue_solutions(spec, chunk=4096, jobs=2)
    assert a.count == b.count == c.count
    assert a.witnesses == b.witnesses == c.witnesses
    assert a.witnesses == sorted(a.witnesses)


def test_parallel_matches_serial_at_64():
    spec = ResidueSearchSpec(dp64_form(), 64)
    serial = enumerate_residue_solutions(spec)
    parallel = enumerate_residue_solutions(spec, jobs=2)
    assert (serial.count, serial.tuples_enumerated) == (parallel.count, parallel.tuples_enumerated)


def test_moduli_consistency():
    f = dp64_form()
    sols8 = enumerate_residue_solutions(ResidueSearchSpec(f, 8), witness_cap=10**6)
    sols64 = enumerate_residue_solutions(ResidueSearchSpec(f, 64))
    # roots mod 8 exist; none of them lifts to a root mod 64
    assert sols8.count > 0 and sols64.count == 0
    # every root mod 64 would reduce to a root mod 8 (checked on a form that has some)
    g = W * W - X**4
    r8 = set(enumerate_residue_solutions(ResidueSearchSpec(g, 8), witness_cap=10**6).witnesses)
    r32 = enumerate_residue_solutions(ResidueSearchSpec(g, 32), witness_cap=10**6).witnesses
    assert r32 and all(tuple(v % 8 for v in t) in r8 for t in r32)


@pytest.mark.parametrize(
    "form, modulus, msg",
    [
        (dp64_form(), 48, r"2\^k"),
        (dp2_surface(), 8, "integer"),
        (dp64_form().with_variables(("w", "x", "y", "z", "a", "b", "c")), 2, "at most"),
        (dp64_form().with_variables(("w", "x", "y", "z", "a", "b")), 64, "guard"),
    ],
)
def test_spec_guards(form, modulus, msg):
    with pytest.raises(ValueError, match=msg):
        ResidueSearchSpec(form, modulus)


def test_descent_on_lemma_form():
    check = descent_reduction_check(dp64_form(), (2, 1, 1, 1))
    assert check.ok
    assert any("4 | w^2" in line for line in check.trace)


def test_descent_on_w_squared():
    assert descent_reduction_check(W * W, (2, 1, 1, 1)).ok


def test_descent_rejects():
    with pytest.raises(ValueError):
        descent_reduction_check(W * W * X, (2, 1, 1, 1))
    with pytest.raises(ValueError):
        descent_reduction_check(dp64_form(), (1, 1, 1, 1))


def test_descent_fails_with_mixed_w_term():
    check = descent_reduction_check(W * W + W * X * Y + Z**4)
    assert not check.ok


def test_certificate_for_lemma_form():
    cert = q2_insolubility_certificate(dp64_form(), (2, 1, 1, 1))
    assert cert.verdict == NO_SOLUTION
    assert cert.solutions_found == 0 and cert.witnesses == []
    assert cert.tuples_enumerated == PRIMITIVE_64
    assert any("contradiction" in line for line in cert.descent_trace)
    assert set(cert.to_dict()) >= {"form", "modulus", "predicate", "witnesses", "descent_trace", "wall_time"}


def test_certificate_for_diagonal_quartic_matches_loop_oracle():
    f = W * W + X**4 + Y**4 + Z**4
    cert = q2_insolubility_certificate(f)
    expected = oracle_count_w_squared_plus(lambda x, y, z: x**4 + y**4 + z**4, 64)
    assert cert.solutions_found == expected
    assert cert.verdict == (NO_SOLUTION if expected == 0 else INCONCLUSIVE)


def test_certificate_with_witness():
    cert = q2_insolubility_certificate(W * W - X**4)
    assert cert.verdict == INCONCLUSIVE and cert.solutions_found > 0
    assert len(cert.witnesses) == 16
    assert (W * W - X**4).eval((1, 1, 0, 0)) == 0
    assert all((W * W - X**4).eval(t) % 64 == 0 for t in cert.witnesses)
