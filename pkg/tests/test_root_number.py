from dataclasses import replace
from fractions import Fraction

import pytest

from rootnum import metacyclic as mc
from rootnum import root_number as rn
from rootnum.errors import DimensionMismatch, LedgerInvalid, NotSymplectic, UnsupportedBranch
from rootnum.root_number import (
    LocalPlace,
    TauData,
    parity_audit,
    tau_hypothesis_check,
    theorem_gate,
    w_archimedean,
    w_global,
    w_good_reduction,
    w_local,
    w_rohrlich2,
    w_sp2_twist,
)
from rootnum.uniformization import UniformizationInput
from rootnum.wd_algebra import (
    GrothendieckLedger,
    WeilIrred,
    WeilRep,
    grothendieck_decompose,
    ledger_empty,
    twist_omega,
)

import synth

HALF = Fraction(1, 2)
G32 = mc.group_new(3, 2)
QUAT32 = next(r for r in mc.irreducibles(G32) if r.d == 3 and r.w == 1)
ONE32 = mc.VirtualChar.of(G32, mc.trivial_rep(G32))
ETA32 = mc.VirtualChar.of(G32, mc.eta_rep(G32))


def tau_on(rep, artin=None, flags=None):
    return TauData(G32, rep, artin, flags)


def singleton_ledger(G, lam):
    return GrothendieckLedger(G, mu_list=[WeilIrred(lam)], hat_list=[WeilIrred(mc.hat_rep(G, lam))])


# ---------------------------------------------------------------------------
# TauData


def test_tau_must_be_real():
    chi = next(r for r in mc.irreducibles(G32) if r.dim == 1 and not mc.VirtualChar.of(G32, r).is_real())
    with pytest.raises(ValueError):
        tau_on(chi)


def test_artin_image_must_be_an_involution():
    with pytest.raises(ValueError):
        tau_on(QUAT32, G32.c)
    assert tau_on(QUAT32).notes and not tau_on(QUAT32, G32.identity).notes


# ---------------------------------------------------------------------------
# closed-form signs


@pytest.mark.parametrize("g, d, sign", [(1, 1, -1), (2, 3, 1), (1, 2, 1), (3, 3, -1)])
def test_w_archimedean(g, d, sign):
    assert w_archimedean(g, d) == sign


def test_w_sp2_twist_examples():
    assert w_sp2_twist(ONE32, tau_on(ONE32), 1) == -1
    assert w_sp2_twist(ONE32, tau_on(ETA32), 1) == 1
    assert w_sp2_twist(ONE32 + ETA32, tau_on(ONE32), 2) == -1
    with pytest.raises(DimensionMismatch):
        w_sp2_twist(ONE32, tau_on(ONE32), 2)


def test_w_rohrlich2_examples():
    assert w_rohrlich2(QUAT32, tau_on(ONE32)) == -1
    assert w_rohrlich2(QUAT32, tau_on(QUAT32)) == 1
    even = tau_on(ONE32 + ETA32)
    assert w_rohrlich2(QUAT32, even, alpha=-1) == w_rohrlich2(QUAT32, even, alpha=1)
    odd = tau_on(ONE32)
    assert w_rohrlich2(QUAT32, odd, alpha=-1) == -w_rohrlich2(QUAT32, odd, alpha=1)
    hat = mc.hat_rep(G32, QUAT32)
    with pytest.raises(NotSymplectic):
        w_rohrlich2(hat, odd)


def test_w_good_reduction_examples():
    assert w_good_reduction(ledger_empty(G32), tau_on(ONE32)) == 1
    assert w_good_reduction(singleton_ledger(G32, QUAT32), tau_on(ONE32), [1]) == -1
    with pytest.raises(LedgerInvalid):
        w_good_reduction(singleton_ledger(G32, QUAT32), tau_on(ONE32), [1, 1])


def test_w_good_reduction_under_hypotheses_is_one():
    tau = tau_on(QUAT32)
    assert tau_hypothesis_check(tau)
    lam = WeilRep([(WeilIrred(QUAT32), 3), (WeilIrred("1"), 2)])
    L = grothendieck_decompose(G32, lam)
    for alphas in ([1] * L.a, [-1] * L.a):
        assert w_good_reduction(L, tau, alphas) == 1


# ---------------------------------------------------------------------------
# consistency identities


@pytest.mark.parametrize("seed", range(40))
def test_good_reduction_multiplicative(seed):
    rng = synth.rng_for(seed)
    G, lam1 = synth.random_lambda(rng, nmax=12)
    _, lam2 = synth.random_lambda(rng, group=G)
    L1, L2 = grothendieck_decompose(G, lam1), grothendieck_decompose(G, lam2)
    tau = synth.random_tau_data(rng, G)
    a1 = [rng.choice((1, -1)) for _ in range(L1.a)]
    a2 = [rng.choice((1, -1)) for _ in range(L2.a)]
    both = w_good_reduction(L1 + L2, tau, a1 + a2)
    assert both == w_good_reduction(L1, tau, a1) * w_good_reduction(L2, tau, a2)


@pytest.mark.parametrize("seed", range(40))
def test_rohrlich_matches_singleton_ledger(seed):
    rng = synth.rng_for(seed)
    G, lams = rng.choice(synth.rohrlich_groups(16))
    lam = rng.choice(lams)
    tau = synth.random_tau_data(rng, G)
    alpha = rng.choice((1, -1))
    assert w_rohrlich2(lam, tau, alpha) == w_good_reduction(singleton_ledger(G, lam), tau, [alpha])


def test_rohrlich_matches_decomposed_ledger():
    checked = 0
    for G, lams in synth.rohrlich_groups(12):
        for lam in lams:
            if not synth.b_restriction_rational(G, mc.VirtualChar.of(G, lam)):
                continue
            L = grothendieck_decompose(G, WeilRep([WeilIrred(lam)]))
            if L.a != 1 or L.mu.summands:
                continue
            for rep in mc.irreducibles(G)[:6]:
                tau = TauData(G, mc.rational_closure(rep) + mc.rational_closure(mc.dual_rep(rep)))
                assert w_rohrlich2(lam, tau) == w_good_reduction(L, tau, [1])
                checked += 1
    assert checked


def twisted(place, t):
    u = place.uniformization
    u2 = replace(u, kappa=twist_omega(u.kappa, t), chi=twist_omega(u.chi, t))
    return replace(place, uniformization=u2, ledger=None)


@pytest.mark.parametrize("seed", range(40))
def test_w_local_twist_invariant(seed):
    rng = synth.rng_for(seed)
    G = rng.choice(synth.groups(10))
    place = synth.random_free_place(rng, G, bad=rng.random() < 0.3)
    t = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    try:
        sign, trace = w_local(place)
    except UnsupportedBranch:
        with pytest.raises(UnsupportedBranch):
            w_local(twisted(place, t))
        return
    sign2, trace2 = w_local(twisted(place, t))
    assert sign2 == sign and trace2.factors == trace.factors


# ---------------------------------------------------------------------------
# places


def finite_place(p, g, tau, kappa_parts, chi=None, r=0, **kw):
    kappa = WeilRep([(WeilIrred(part, HALF), m) for part, m in kappa_parts])
    u = UniformizationInput(kappa, chi or WeilRep(), r, g, p)
    return LocalPlace("finite", g, tau, p=p, uniformization=u, **kw)


def test_w_local_examples():
    tau = tau_on(QUAT32)
    sign, trace = w_local(LocalPlace("complex", 1, tau))
    assert sign == 1 and trace.branch == "archimedean"
    sign, trace = w_local(finite_place(11, 1, tau, [(QUAT32, 1)]))
    assert sign == 1 and trace.branch == "good-reduction-formula"
    with pytest.raises(UnsupportedBranch):
        w_local(finite_place(3, 1, tau_on(ONE32 + ETA32), [(QUAT32, 1)], abelian=True))


def test_small_residue_branch():
    tau = tau_on(2 * ONE32)
    sign, trace = w_local(finite_place(2, 1, tau, [(QUAT32, 1)]))
    assert trace.branch == "small-residue-symplectic"
    assert ("W(kappa x tau)", 1, 1) in trace.factors
    assert sign == 1


def test_place_validation():
    with pytest.raises(ValueError):
        finite_place(4, 1, tau_on(QUAT32), [(QUAT32, 1)])
    with pytest.raises(ValueError):
        LocalPlace("finite", 1, tau_on(QUAT32), p=5, q=9, uniformization=None)
    with pytest.raises(ValueError):
        LocalPlace("adelic", 1, tau_on(QUAT32))


def test_w_global():
    assert w_global([]) == (1, [])
    tau1 = tau_on(ONE32)
    places = [LocalPlace("real", 1, tau_on(QUAT32)), LocalPlace("real", 1, tau1), LocalPlace("complex", 1, tau1)]
    sign, traces = w_global(places)
    assert [t.product for t in traces] == [1, -1, -1] and sign == 1


@pytest.mark.parametrize("seed", range(15))
def test_w_global_is_product_of_local(seed):
    rng = synth.rng_for(seed)
    G = rng.choice(synth.groups(8))
    places = [synth.random_free_place(rng, G) for _ in range(3)]
    sign, traces = w_global(places)
    expected = 1
    for place, trace in zip(places, traces):
        s, again = w_local(place)
        assert again.factors == trace.factors
        expected *= s
    assert sign == expected


# ---------------------------------------------------------------------------
# hypothesis reports


def test_tau_hypothesis_examples():
    assert tau_hypothesis_check(tau_on(QUAT32)).passed
    report = tau_hypothesis_check(tau_on(ONE32))
    failed = {c.name for c in report.checks if not c.passed}
    assert failed == {rn.DIM, rn.INDICATOR}
    chi = next(r for r in mc.irreducibles(G32) if r.dim == 1 and not mc.VirtualChar.of(G32, r).is_real())
    pair = mc.VirtualChar(G32, [(chi, 1), (mc.dual_rep(chi), 1)])
    report = tau_hypothesis_check(tau_on(pair))
    assert report.first_failure.name == rn.INDICATOR


def test_declared_flags_must_agree():
    report = tau_hypothesis_check(tau_on(QUAT32, flags={"det_trivial": False}))
    assert report.first_failure.name == rn.DET and "declared" in report.first_failure.detail
    assert tau_hypothesis_check(tau_on(QUAT32, flags={"det_trivial": True})).passed


def test_parity_examples():
    tau = tau_on(QUAT32)
    audit = parity_audit(tau, [ONE32, mc.VirtualChar.of(G32, mc.hat_rep(G32, QUAT32))])
    assert [e.pairing for e in audit.entries] == [0, 0] and audit.all_even
    audit = parity_audit(tau_on(2 * ONE32), [ONE32], ["1"])
    assert audit.entries[0].pairing == 2 and audit.entries[0].label == "1" and audit
    assert not parity_audit(tau_on(ONE32), [ONE32])


# ---------------------------------------------------------------------------
# theorem gate


def test_gate_proven_example():
    tau = tau_on(QUAT32)
    places = [LocalPlace("complex", 1, tau), finite_place(11, 1, tau, [(QUAT32, 1)])]
    verdict = theorem_gate(places, tau)
    assert verdict.proven and verdict.value == 1
    assert [t.product for t in verdict.traces] == [1, 1]
    assert verdict.notes == [rn.SURROGATE_NOTE]


def test_gate_odd_dimension():
    tau = tau_on(ONE32)
    verdict = theorem_gate([LocalPlace("complex", 1, tau)], tau)
    assert verdict.status == "HypothesisFailed" and verdict.failed == rn.DIM


def test_gate_nonabelian_small_prime():
    tau = tau_on(QUAT32)
    places = [LocalPlace("complex", 1, tau), finite_place(2, 1, tau, [(QUAT32, 1)], abelian=False)]
    verdict = theorem_gate(places, tau)
    assert verdict.failed == rn.ABELIAN


@pytest.mark.parametrize("seed", range(20))
def test_gate_on_synthesized_instances(seed):
    places, tau = synth.proven_instance(synth.rng_for(seed))
    verdict = theorem_gate(places, tau)
    assert verdict.proven, verdict.message
    assert all(t.product == 1 for t in verdict.traces)


@pytest.mark.parametrize("name", synth.KNOCKOUTS)
@pytest.mark.parametrize("seed", range(3))
def test_gate_names_the_knocked_out_hypothesis(name, seed):
    places, tau = synth.knockout(synth.rng_for(seed), name)
    assert rn.hypothesis_failures(places, tau) == [name]
    assert theorem_gate(places, tau).failed == name
