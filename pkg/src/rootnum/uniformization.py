"""Weil-Deligne representation of a Jacobian from symbolic uniformization data.

With kappa the good-reduction block (weight -1/2), chi the lattice character
and r the torus rank, the assembled representation is

    sigma' = kappa + chi (x) omega^-1 (x) sp(2).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import factorint

from .errors import DimensionMismatch, IrrationalRestriction, RankOrder, WeightViolation
from .wd_algebra import (
    SYMPLECTIC,
    WDRep,
    WeilIrred,
    WeilRep,
    form_feasibility,
    twist_omega,
)

KAPPA_BLOCK, TORUS_BLOCK, SIGMA_TOTAL = "kappa_block", "torus_block", "sigma_total"
HALF = Fraction(1, 2)


@dataclass
class SplitData:
    s: int
    chi1: WeilRep
    chi2: WeilRep


@dataclass
class UniformizationInput:
    kappa: WeilRep
    chi: WeilRep
    r: int
    g: int
    q: int
    split: Optional[SplitData] = None


@dataclass
class WeightAudit:
    weight_histogram: dict
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def __bool__(self):
        return self.passed


def is_prime_power(q):
    return q > 1 and len(factorint(q)) == 1


def _check_weight_zero(rep, name):
    for irred in rep:
        if irred.omega_t != 0 or irred.weight != 0:
            raise WeightViolation(f"{name} summand {irred!r} has weight {irred.weight}, expected 0")


def _check_rational(rep, name):
    G = rep.group
    if G is not None and not rep.character(G).is_rational_valued():
        raise IrrationalRestriction(f"{name} does not have a rational character")


def validate_uniformization(u: UniformizationInput, check_rational=True):
    if u.g < 1:
        raise DimensionMismatch("genus must be positive")
    if not is_prime_power(u.q):
        raise ValueError(f"q={u.q} is not a prime power")
    if u.r != u.chi.dim:
        raise DimensionMismatch(f"torus rank {u.r} differs from dim chi = {u.chi.dim}")
    if u.kappa.dim + 2 * u.r != 2 * u.g:
        raise DimensionMismatch(
            f"dim kappa + 2r = {u.kappa.dim + 2 * u.r} but 2g = {2 * u.g}"
        )
    for irred in u.kappa:
        if irred.weight != -HALF:
            raise WeightViolation(f"kappa summand {irred!r} has weight {irred.weight}, expected -1/2")
    _check_weight_zero(u.chi, "chi")
    if check_rational:
        _check_rational(u.chi, "chi")
    if u.split is not None:
        sp_data = u.split
        if sp_data.chi1 + sp_data.chi2 != u.chi:
            raise DimensionMismatch("chi1 + chi2 differs from chi")
        if sp_data.chi1.dim != sp_data.s:
            raise DimensionMismatch(f"dim chi1 = {sp_data.chi1.dim} but s = {sp_data.s}")
        if not 0 <= sp_data.s <= u.r:
            raise RankOrder(f"lattice rank {sp_data.s} exceeds torus rank {u.r}")
    return u


def assemble_sigma(u: UniformizationInput, check_rational=True) -> WDRep:
    validate_uniformization(u, check_rational)
    blocks = [((irred, 1), m) for irred, m in u.kappa.items()]
    blocks += [((irred.twist(-1), 2), m) for irred, m in u.chi.items()]
    sigma = WDRep(blocks)
    assert sigma.dim == 2 * u.g and sigma.nilpotent_rank == u.r
    return sigma


def split_torus_sigma(r: int, s: int) -> WDRep:
    if s < 0 or r < 0:
        raise RankOrder("ranks must be nonnegative")
    if s > r:
        raise RankOrder(f"lattice rank {s} exceeds torus rank {r}")
    w_inv = WeilIrred("1", -1)
    return WDRep([((w_inv, 1), r - s), ((w_inv, 2), s)])


def nonsplit_torus_sigma(chi1: WeilRep, chi2: WeilRep) -> WDRep:
    _check_weight_zero(chi1, "chi1")
    _check_weight_zero(chi2, "chi2")
    blocks = [((i.twist(-1), 1), m) for i, m in chi2.items()]
    blocks += [((i.twist(-1), 2), m) for i, m in chi1.items()]
    return WDRep(blocks)


def weight_audit(a: WDRep, expectation: str) -> WeightAudit:
    audit = WeightAudit(a.weight_histogram())
    for (irred, n), _m in a.items():
        w = irred.weight
        if expectation == KAPPA_BLOCK:
            if n != 1:
                audit.violations.append(f"{irred!r} carries sp({n}) inside the kappa block")
            if w != -HALF:
                audit.violations.append(f"{irred!r}: weight {w} != -1/2")
        elif expectation == TORUS_BLOCK:
            if n > 2:
                audit.violations.append(f"{irred!r} carries sp({n}) inside the torus block")
            if w != 1:
                audit.violations.append(f"{irred!r}: weight {w} != 1")
        elif expectation == SIGMA_TOTAL:
            if n == 1 and w != -HALF:
                audit.violations.append(f"{irred!r}: unipotent-free block of weight {w} != -1/2")
            elif n == 2 and w != 1:
                audit.violations.append(f"{irred!r}(x)sp(2): weight {w} != 1")
            elif n > 2:
                audit.violations.append(f"{irred!r} carries sp({n})")
        else:
            raise ValueError(f"unknown expectation {expectation!r}")
    return audit


def kappa_symplectic_check(u: UniformizationInput) -> bool:
    return form_feasibility(twist_omega(u.kappa, HALF), SYMPLECTIC).feasible
