"""
====================================================================
Characters of G(3,2): indicators, the symplectic criterion, hat(lam)
====================================================================

G(3,2) = <b, c | b^3, c^4, c^-1 b c = b^2> has order 12.  Each of its
irreducibles is listed with its Frobenius-Schur indicator.  The one
quaternionic irreducible is then checked against the closed-form
criterion, and its orthogonal companion hat(lam) is computed.
"""
from rootnum import metacyclic as mc

G = mc.group_new(3, 2)
print(f"{G!r}: order {G.order}, s = {G.s}")
for rep in mc.irreducibles(G):
    ind = mc.fs_indicator(G, rep)
    print(f"  {rep!r:28} dim {rep.dim}  indicator {ind:>2}  criterion {mc.is_symplectic_by_criterion(G, rep)}")

lam = next(r for r in mc.irreducibles(G) if mc.fs_indicator(G, r) == -1)
hat = mc.hat_rep(G, lam)
print(f"\nhat({lam!r}) = {hat!r}")
print(f"  indicator {mc.fs_indicator(G, hat):+d}, <lam, hat> = {mc.inner_product(G, lam, hat)}")

print("\nTheta(d) for d | 3 and their characteristic polynomials at b:")
for d in (1, 3):
    theta = mc.theta_rep(G, d)
    print(f"  Theta({d}) = {theta!r}  charpoly {mc.char_poly_at_b(theta)!r}")
