"""Acceptance suite: ten exact criteria, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from dataclasses import replace
from fractions import Fraction

import pytest
from sympy import divisors

from conftest import ACCEPTANCE
from rootnum import metacyclic as mc
from rootnum import root_number as rn
from rootnum.cyclotomic import cyclotomic_poly
from rootnum.errors import UnsupportedBranch
from rootnum.lattice import det, hnf, matmul, same_lattice, triangular_basis, unit_pivot_change_of_basis
from rootnum.uniformization import (
    KAPPA_BLOCK,
    SIGMA_TOTAL,
    TORUS_BLOCK,
    assemble_sigma,
    nonsplit_torus_sigma,
    split_torus_sigma,
    weight_audit,
)
from rootnum.wd_algebra import (
    GrothendieckLedger,
    WDRep,
    WeilIrred,
    WeilRep,
    dual,
    grothendieck_decompose,
    hat_character,
    ledger_recombine,
    sp,
    twist_omega,
)

import synth

GROUPS_30 = synth.groups(30)


def record(number, failures, summary, started):
    ok = not failures
    detail = f"{summary} ({time.perf_counter() - started:.1f}s)"
    if failures:
        detail += f"; first failure: {failures[0]}"
    ACCEPTANCE[number] = (ok, detail)
    assert ok, detail


def symplectic_irreps():
    for G in GROUPS_30:
        for r in mc.irreducibles(G):
            if mc.is_symplectic_by_criterion(G, r):
                yield G, r


def test_criterion_01_criterion_matches_indicator():
    t0 = time.perf_counter()
    failures, count = [], 0
    for G in GROUPS_30:
        for r in mc.irreducibles(G):
            count += 1
            if mc.is_symplectic_by_criterion(G, r) != (mc.fs_indicator(G, r) == -1):
                failures.append(f"{G!r} {r!r}")
    record(1, failures, f"{count} irreducibles over {len(GROUPS_30)} groups with n <= 30", t0)


def test_criterion_02_character_tables():
    t0 = time.perf_counter()
    failures = []
    for G in GROUPS_30:
        reps = mc.irreducibles(G)
        if sum(r.dim ** 2 for r in reps) != 2 * G.s * G.n:
            failures.append(f"{G!r}: sum of squared dims")
        for i, a in enumerate(reps):
            for b in reps[i:]:
                if mc.inner_product(G, a, b) != (a == b):
                    failures.append(f"{G!r}: <{a!r}, {b!r}>")
    record(2, failures, f"{len(GROUPS_30)} groups orthonormal, sum dim^2 = 2sn", t0)


def test_criterion_03_hat_properties():
    t0 = time.perf_counter()
    failures, count = [], 0
    for G, lam in symplectic_irreps():
        count += 1
        hat = mc.hat_rep(G, lam)
        if mc.fs_indicator(G, hat) != 1 or mc.inner_product(G, lam, hat) != 0:
            failures.append(f"{G!r} {lam!r} -> {hat!r}")
    assert count > 0
    record(3, failures, f"{count} symplectic irreducibles: hat orthogonal with indicator +1", t0)


def test_criterion_04_theta_suite():
    t0 = time.perf_counter()
    failures, count = [], 0
    for G in GROUPS_30:
        thetas = {d: mc.theta_rep(G, d) for d in divisors(G.n)}
        for d, th in thetas.items():
            count += 1
            if mc.char_poly_at_b(th) != cyclotomic_poly(d):
                failures.append(f"{G!r} d={d}: char poly")
            if not th.is_rational_valued():
                failures.append(f"{G!r} d={d}: irrational")
            total = mc.VirtualChar(G)
            for r in divisors(d):
                total = total + thetas[r]
            if not mc.pi_rep(G, d).same_values(total):
                failures.append(f"{G!r} d={d}: pi recursion")
    record(4, failures, f"{count} (group, d) pairs", t0)


def test_criterion_05_grothendieck_round_trip():
    t0 = time.perf_counter()
    failures, tags = [], {}
    rng = random.Random(5)
    for i in range(500):
        G, lam = synth.random_lambda(rng, nmax=20, max_terms=12)
        L = grothendieck_decompose(G, lam)
        tags[L.case_tag] = tags.get(L.case_tag, 0) + 1
        if not ledger_recombine(L).same_values(lam.character(G)):
            failures.append(f"#{i} {G!r}: recombination")
        if not all(mc.is_symplectic_by_criterion(G, m.finite_part) for m in L.mu_list):
            failures.append(f"#{i} {G!r}: mu_i not symplectic")
        if not hat_character(L).is_rational_valued():
            failures.append(f"#{i} {G!r}: hats irrational")
    mix = ", ".join(f"{k} {v}" for k, v in sorted(tags.items()))
    record(5, failures, f"500 random lambda ({mix})", t0)


def test_criterion_06_lattice():
    t0 = time.perf_counter()
    failures, units = [], 0
    rng = random.Random(6)
    for i in range(1000):
        s, r = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-30, 30) for _ in range(r)] for _ in range(s)]
        tb = triangular_basis(M)
        try:
            tb.check()
        except AssertionError as exc:
            failures.append(f"#{i}: {exc}")
        if hnf(tb.basis) != hnf(M):
            failures.append(f"#{i}: lattice changed")
        if tb.rank == s:
            units += 1
            D, pb = unit_pivot_change_of_basis(M)
            if abs(det(D)) != 1 or matmul(D, M) != pb.basis or not same_lattice(pb.basis, M):
                failures.append(f"#{i}: change of basis")
    record(6, failures, f"1000 matrices, {units} full-rank change-of-basis checks", t0)


def random_wd(rng, parts):
    blocks = []
    for _ in range(5):
        irred = WeilIrred(rng.choice(parts), Fraction(rng.randint(-8, 8), rng.randint(1, 4)))
        blocks.append(((irred, rng.randint(1, 4)), rng.randint(1, 3)))
    return WDRep(blocks)


def test_criterion_07_duality_and_twists():
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(7)
    for n in range(1, 13):
        if dual(sp(n)) != twist_omega(sp(n), -(n - 1)):
            failures.append(f"dual sp({n})")
    pool = synth.groups(12)
    for i in range(300):
        G = rng.choice(pool)
        a = random_wd(rng, ["1", "eta"] + list(mc.irreducibles(G)))
        s = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
        t = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
        if dual(dual(a)) != a:
            failures.append(f"#{i}: dual dual")
        if twist_omega(a, 0) != a or twist_omega(twist_omega(a, s), t) != twist_omega(a, s + t):
            failures.append(f"#{i}: twist action")
        if dual(twist_omega(a, s)) != twist_omega(dual(a), -s):
            failures.append(f"#{i}: dual of twist")
    record(7, failures, "300 random 5-block WD representations, sp(1..12)", t0)


def test_criterion_08_uniformization():
    t0 = time.perf_counter()
    failures, seeded = [], 0
    rng = random.Random(8)
    for i in range(300):
        u = synth.random_uniformization(rng)
        sigma = assemble_sigma(u)
        if sigma.dim != 2 * u.g or sigma.nilpotent_rank != u.r:
            failures.append(f"#{i}: dim/rank")
        if not weight_audit(sigma, SIGMA_TOTAL):
            failures.append(f"#{i}: valid sigma rejected")
        if sigma.dim:
            seeded += 1
            if weight_audit(synth.perturb_one_block(rng, sigma), SIGMA_TOTAL):
                failures.append(f"#{i}: seeded sigma violation missed")
        if u.kappa.dim:
            seeded += 1
            if weight_audit(synth.perturb_one_block(rng, WDRep.from_weil(u.kappa)), KAPPA_BLOCK):
                failures.append(f"#{i}: seeded kappa violation missed")
        if u.split is not None:
            torus = nonsplit_torus_sigma(u.split.chi1, u.split.chi2)
            if torus.dim:
                seeded += 1
                if weight_audit(synth.perturb_one_block(rng, torus), TORUS_BLOCK):
                    failures.append(f"#{i}: seeded torus violation missed")
    for r in range(8):
        for s in range(r + 1):
            chi1 = WeilRep([(WeilIrred("1"), s)]) if s else WeilRep()
            chi2 = WeilRep([(WeilIrred("1"), r - s)]) if r > s else WeilRep()
            if nonsplit_torus_sigma(chi1, chi2) != split_torus_sigma(r, s):
                failures.append(f"nonsplit != split at r={r}, s={s}")
    record(8, failures, f"300 valid inputs, {seeded}/{seeded} seeded violations detected", t0)


def test_criterion_09_theorem_gate():
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(9)
    n_proven = 0
    for i in range(120):
        places, tau = synth.proven_instance(rng)
        verdict = rn.theorem_gate(places, tau)
        if not verdict.proven or verdict.value != 1:
            failures.append(f"proven #{i}: {verdict.failed} {verdict.message}")
            continue
        if any(rn.w_local(p)[0] != 1 for p in places):
            failures.append(f"proven #{i}: a local sign is -1")
        n_proven += 1
    n_knock = 0
    for name in synth.KNOCKOUTS:
        for _ in range(10):
            places, tau = synth.knockout(rng, name)
            n_knock += 1
            named = rn.hypothesis_failures(places, tau)
            verdict = rn.theorem_gate(places, tau)
            if named != [name] or verdict.status != "HypothesisFailed" or verdict.failed != name:
                failures.append(f"knockout {name}: violated {named}, verdict {verdict.failed}")
    record(9, failures, f"{n_proven} proven instances, {n_knock} single knockouts", t0)


def test_criterion_10_sign_consistency():
    t0 = time.perf_counter()
    failures = []
    rng = random.Random(10)
    pool = synth.groups(12)
    counts = [0, 0, 0]
    for i in range(200):
        G, lam1 = synth.random_lambda(rng, nmax=12)
        _, lam2 = synth.random_lambda(rng, group=G)
        L1, L2 = grothendieck_decompose(G, lam1), grothendieck_decompose(G, lam2)
        tau = synth.random_tau_data(rng, G)
        a1 = [rng.choice((1, -1)) for _ in range(L1.a)]
        a2 = [rng.choice((1, -1)) for _ in range(L2.a)]
        w = rn.w_good_reduction
        counts[0] += 1
        if w(L1 + L2, tau, a1 + a2) != w(L1, tau, a1) * w(L2, tau, a2):
            failures.append(f"multiplicativity #{i} on {G!r}")

    rohrlich = synth.rohrlich_groups(20)
    for i in range(200):
        G, lams = rng.choice(rohrlich)
        lam = rng.choice(lams)
        tau = synth.random_tau_data(rng, G)
        alpha = rng.choice((1, -1))
        L = GrothendieckLedger(G, mu_list=[WeilIrred(lam)], hat_list=[WeilIrred(mc.hat_rep(G, lam))])
        counts[1] += 1
        if rn.w_rohrlich2(lam, tau, alpha) != rn.w_good_reduction(L, tau, [alpha]):
            failures.append(f"rohrlich #{i} {lam!r}")

    for i in range(200):
        G = rng.choice(pool)
        place = synth.random_free_place(rng, G, bad=rng.random() < 0.3)
        t = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        u = place.uniformization
        moved = replace(
            place,
            uniformization=replace(u, kappa=twist_omega(u.kappa, t), chi=twist_omega(u.chi, t)),
            ledger=None,
        )
        counts[2] += 1
        try:
            before = rn.w_local(place)
        except UnsupportedBranch:
            try:
                rn.w_local(moved)
                failures.append(f"twist #{i}: branch became supported")
            except UnsupportedBranch:
                pass
            continue
        after = rn.w_local(moved)
        if before[0] != after[0] or before[1].factors != after[1].factors:
            failures.append(f"twist #{i} by {t}")
    record(10, failures, f"{sum(counts)} cases (multiplicativity {counts[0]}, "
           f"Rohrlich/singleton {counts[1]}, twist {counts[2]})", t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
