"""
==========================================================
Grothendieck ledgers and the good-reduction sign formula
==========================================================

A symplectic Weil representation lam is split into the ledger
mu + mu* + 2(mu0 - mu0') + mu_1 + ... + mu_a, recombined exactly, and then fed
into the closed-form sign W(kappa (x) tau) for a few choices of tau.
"""
from fractions import Fraction

from rootnum import metacyclic as mc
from rootnum.root_number import TauData, w_good_reduction, w_rohrlich2
from rootnum.wd_algebra import WeilIrred, WeilRep, grothendieck_decompose, ledger_recombine

G = mc.group_new(3, 2)
quat = next(r for r in mc.irreducibles(G) if mc.fs_indicator(G, r) == -1)
lam = WeilRep([(WeilIrred(quat), 2), (WeilIrred("1"), 2)])
L = grothendieck_decompose(G, lam)
print(f"lambda = {lam!r}")
print(f"  case {L.case_tag}, a = {L.a}, mu = {L.mu!r}")
print(f"  mu_list  = {L.mu_list!r}")
print(f"  hat_list = {L.hat_list!r}")
print(f"  recombines exactly: {ledger_recombine(L) == lam.character(G)}")

one = mc.VirtualChar.of(G, mc.trivial_rep(G))
for label, rep in [("1", one), ("quaternionic", mc.VirtualChar.of(G, quat)), ("1 + eta", one + mc.VirtualChar.of(G, mc.eta_rep(G)))]:
    tau = TauData(G, rep)
    print(f"tau = {label:13} W(kappa x tau) = {w_good_reduction(L, tau):+d}   Rohrlich(quat) = {w_rohrlich2(quat, tau):+d}")

print(f"\nomega exponent only moves the centre: {grothendieck_decompose(G, lam.twist(Fraction(3, 2))).a == L.a}")
