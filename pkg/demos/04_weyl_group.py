"""W(E7) as Z/2 x Sp6(2): enumeration, centralizers and a conjugacy class."""

import time

from dp2verify import groups as grp

t0 = time.perf_counter()
sp6, hit = grp.sp6_group()
print(f"|Sp6(2)| = {sp6.order:,} ({'cache' if hit else 'built'}, {time.perf_counter() - t0:.1f} s)")
print("order formula 2^9 (2^2-1)(2^4-1)(2^6-1) =", 2**9 * 3 * 15 * 63)
W = grp.weyl_e7_model(sp6)
print(f"|W| = {W.order:,} = 2^10 3^4 5 7 = {2**10 * 3**4 * 5 * 7:,}")

# PSL3(2) sits block-diagonally as M -> diag(M, M^-T)
psl = grp.generate_group(grp.psl32_generators())
print("|PSL3(2)| =", psl.order, " simple:", grp.is_simple(psl))
g = grp.embed_psl32(grp.companion_x3_x_1())
print("embedded companion matrix of x^3 + x + 1 (order %d):" % grp.element_order(g))
print(g)
print("symplectic:", grp.is_symplectic(g))

minus = grp.WeylElem.minus_one()
c = grp.centralizer(grp.embedded_psl32_weyl() + [minus], W)
print("centralizer of PSL3(2) x <-1>:", c.order, "contains -1:", minus in c)

rep = grp.order7_representative()
c7 = grp.centralizer([rep], W)
size = grp.conjugacy_class_size(rep, W)
print(f"order-7 element: centralizer {c7.order}, class size {size:,}, product {size * c7.order:,}")
