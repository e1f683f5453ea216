"""The branch quartic, its bitangent x + y + z and the two lines above it."""

from dp2verify import geometry as geo
from dp2verify.models import LIFT_MU, PLANE_VARS, branch_quartic, dp2_surface
from dp2verify.poly import WeightedForm

x, y, z = WeightedForm.gens(PLANE_VARS)
C, S = branch_quartic(), dp2_surface()
print("C:", C.to_text())

# smooth reduction at the split primes, both choices of sqrt(-7) mod p
for p in (11, 23, 29, 37, 43):
    r = geo.smooth_via_good_reduction(C, p, geo.sqrt_mod_p(-7, p))
    print(f"p = {p:2d}: {r.verdict:8s} per root {r.per_root}")

# a rational scan alone can miss singular points defined over F_p^2
two_conics = (x * x + y * y - z * z) * (x * x - 2 * y * y + 3 * z * z)
r = geo.smooth_via_good_reduction(two_conics, 11, 2)
print("two conics mod 11: F_11 singular points", r.singular_points[2], "verdict", r.verdict)

# restrict C to the line and factor as alpha * q^2
bit = geo.is_bitangent(x + y + z, C)
print("x+y+z:", bit.verdict, " q =", bit.q.to_text(), " alpha =", bit.alpha)
print("x = 0:", geo.is_bitangent(x, C).verdict)

# the preimage on S splits as w = +- mu q
lift = geo.BitangentLift(x + y + z, LIFT_MU, bit.q)
print("w - mu q :", lift.equation(1).to_text())
print("both on S:", geo.verify_line_on_surface(lift, S))
print("Geiser swaps them:", geo.geiser_swaps_lifts(lift))
print("field of definition:", geo.field_of_definition_check(lift, S))

# the signed permutations that preserve C
sym = geo.visible_symmetry_group(C)
print("signed-permutation symmetries mod +-1:", sym.order, "closed:", sym.closed)
