"""Square roots of -7 in the 2-adics and the two embeddings of Q(sqrt -7)."""

from dp2verify.models import KLEIN_PARAMETER, SQRT_M7
from dp2verify.padic import EmbeddingChoice, PadicApprox, embed_theta, hensel_sqrt, is_square_q2, val2

# -7 = 1 mod 8, so it is a 2-adic square
print("-7 mod 8 =", -7 % 8, " square in Q2:", is_square_q2(PadicApprox.from_rational(-7)))

# lift a root bit by bit; the two roots mod 128 are t and -t
for k in (3, 7, 20, 64):
    t = hensel_sqrt(-7, k)
    print(f"root mod 2^{k:<2} = {t}")
t = hensel_sqrt(-7, 7)
print("roots mod 128:", sorted({t, -t % 128}), " 181 mod 128 =", 181 % 128)
print("181^2 + 7 = 2^%d" % val2(181**2 + 7))

# theta1 sends sqrt(-7) to the root = 1 mod 4, theta2 to its negative
theta1 = EmbeddingChoice.make("theta1", 96)
theta2 = theta1.conjugate()
print("theta1(sqrt -7) =", embed_theta(SQRT_M7, theta1, 16))
print("theta2(sqrt -7) =", embed_theta(SQRT_M7, theta2, 16))

# the cross coefficient of the branch quartic lands on -14 mod 64
image = embed_theta(KLEIN_PARAMETER, theta1, 64)
print("theta1((3/2)(1 - sqrt -7)) mod 64 =", image.residue(6), "=", -14 % 64)

# products map to products
a, b = SQRT_M7 + 3, (1 - SQRT_M7) / 2
lhs = embed_theta(a * b, theta1, 64)
rhs = embed_theta(a, theta1, 64) * embed_theta(b, theta1, 64)
print("theta1(ab) == theta1(a) theta1(b) mod 2^64:", lhs.congruent(rhs))
