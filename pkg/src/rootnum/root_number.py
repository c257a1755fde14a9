"""Local and global root-number signs and the hypothesis gate.

Every sign is assembled from named factors ``(name, exponent, value)`` with
``value = base ** exponent`` in {+1, -1}; a :class:`SignTrace` keeps them so a
verdict can be audited factor by factor.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import isprime

from . import metacyclic as mc
from .errors import (
    DimensionMismatch,
    GroupMismatch,
    LedgerInvalid,
    NotSymplectic,
    RootnumError,
    UnsupportedBranch,
)
from .uniformization import (
    UniformizationInput,
    assemble_sigma,
    kappa_symplectic_check,
    validate_uniformization,
)
from .wd_algebra import (
    SYMPLECTIC,
    GrothendieckLedger,
    WeilIrred,
    WeilRep,
    form_feasibility,
    grothendieck_decompose,
    hat_character,
    resolve_part,
    twist_omega,
    validate_ledger,
)

# hypothesis names, in the order the gate checks them
DIM = "dim"
DET = "det"
INDICATOR = "indicator"
RATIONAL = "rational"
ABELIAN = "abelian-at-bad-primes"
TAU_LOCAL = "tau-local"
TAU_SYMPLECTIC = "tau-local-symplectic"
KAPPA_SYMPLECTIC = "kappa-symplectic"
CHI_RATIONAL = "chi-rational"
UNIFORMIZATION = "uniformization"
PARITY = "parity"
LOCAL_SIGN = "local-sign"

SURROGATE_NOTE = (
    "m_Q(tau) = 2 is certified through the surrogate: real character, "
    "every constituent of indicator -1, rational character"
)


def _sign(value):
    if value not in (1, -1):
        raise ValueError(f"{value!r} is not a sign")
    return value


@dataclass
class TauData:
    group: mc.MetacyclicGroup
    rep: mc.VirtualChar
    artin_minus_one: Optional[mc.GroupElement] = None
    global_flags: Optional[dict] = None

    def __post_init__(self):
        if isinstance(self.rep, mc.IrrepDescriptor):
            self.rep = mc.VirtualChar.of(self.group, self.rep)
        if self.rep.group != self.group:
            raise GroupMismatch("tau representation lives on another group")
        if not self.rep.is_real():
            raise ValueError("tau must have a real-valued character")
        g = self.artin_minus_one
        if g is not None and self.group.mul(g, g) != self.group.identity:
            raise ValueError(f"image of -1 must square to the identity, got {g!r}")

    @property
    def dim(self):
        return self.rep.dim

    @property
    def minus_one(self):
        return self.artin_minus_one if self.artin_minus_one is not None else self.group.identity

    @property
    def notes(self):
        if self.artin_minus_one is None:
            return ["image of -1 not supplied; identity element used"]
        return []

    def eta(self):
        return mc.VirtualChar.of(self.group, mc.eta_rep(self.group))

    def trivial(self):
        return mc.VirtualChar.of(self.group, mc.trivial_rep(self.group))


def det_at_minus_one(tau: TauData, vc) -> int:
    """det vc(-1) as +1/-1, evaluated at the supplied image of -1."""
    r = mc.det_virtual_exponent(tau.group, vc, tau.minus_one)
    if r == 0:
        return 1
    if r == Fraction(1, 2):
        return -1
    raise ValueError(f"det at the image of -1 is exp(2 pi i {r}), not a sign")


def _pairing(tau, vc):
    return mc.inner_product(tau.group, vc, tau.rep)


def _product(factors):
    out = 1
    for _, _, value in factors:
        out *= value
    return out


def _factor(name, base, exponent):
    return (name, exponent, _sign(base) ** (exponent % 2))


# ---------------------------------------------------------------------------
# closed-form signs


def w_archimedean(g: int, dim_tau: int) -> int:
    return (-1) ** (g * dim_tau % 2)


def _sp2_factors(chi, tau, r):
    if chi.group != tau.group:
        raise GroupMismatch("chi and tau live on different groups")
    if r != chi.dim:
        raise DimensionMismatch(f"r = {r} but dim chi = {chi.dim}")
    if not chi.is_rational_valued():
        raise ValueError("chi must have a rational character")
    return [
        _factor("det tau(-1)^r", det_at_minus_one(tau, tau.rep), r),
        _factor("det chi(-1)^dim tau", det_at_minus_one(tau, chi), tau.dim),
        _factor("(-1)^<chi,tau>", -1, _pairing(tau, chi)),
    ]


def w_sp2_twist(chi, tau: TauData, r: int) -> int:
    """W(chi (x) omega^-1 (x) sp(2) (x) tau)."""
    return _product(_sp2_factors(chi, tau, r))


def _rohrlich_factors(lam, tau, alpha):
    G = tau.group
    if lam.group != G:
        raise GroupMismatch("lambda and tau live on different groups")
    if lam.x != 2 or not mc.is_symplectic_by_criterion(G, lam):
        raise NotSymplectic(f"{lam!r} is not a 2-dimensional symplectic irreducible")
    expo = (
        _pairing(tau, tau.trivial())
        + _pairing(tau, tau.eta())
        + _pairing(tau, mc.VirtualChar.of(G, mc.hat_rep(G, lam)))
    )
    return [
        _factor("det tau(-1)", det_at_minus_one(tau, tau.rep), 1),
        _factor("alpha^dim tau", alpha, tau.dim),
        _factor("(-1)^(<1,tau>+<eta,tau>+<hat,tau>)", -1, expo),
    ]


def w_rohrlich2(lam, tau: TauData, alpha: int = 1) -> int:
    return _product(_rohrlich_factors(lam, tau, alpha))


def _good_reduction_factors(ledger, tau, alpha_list):
    G = tau.group
    if ledger.group != G:
        raise LedgerInvalid("ledger and tau live on different groups")
    validate_ledger(ledger)
    a = ledger.a
    if alpha_list is None:
        alpha_list = [1] * a
    if len(alpha_list) != a:
        raise LedgerInvalid(f"{len(alpha_list)} alpha constants for {a} symplectic components")
    mu = ledger.mu.character(G)
    half_dims = sum(i.dim for i in ledger.mu_list)
    if half_dims % 2:
        raise LedgerInvalid("symplectic components of odd dimension")
    l1 = mu.dim + half_dims // 2
    one, eta = _pairing(tau, tau.trivial()), _pairing(tau, tau.eta())
    hats = sum(
        _pairing(tau, mc.VirtualChar.of(G, resolve_part(G, h.finite_part))) for h in ledger.hat_list
    )
    l2 = a * one + a * eta + hats
    alpha_prod = 1
    for alpha in alpha_list:
        alpha_prod *= _sign(alpha)
    return [
        _factor("det mu(-1)^dim tau", det_at_minus_one(tau, mu), tau.dim),
        _factor("det tau(-1)^l1", det_at_minus_one(tau, tau.rep), l1),
        _factor("prod alpha_i^dim tau", alpha_prod, tau.dim),
        _factor("(-1)^l2", -1, l2),
    ]


def w_good_reduction(ledger: GrothendieckLedger, tau: TauData, alpha_list=None) -> int:
    """W(kappa (x) tau) from the Grothendieck ledger of kappa (x) omega^1/2.

    The (-1) exponent is a<1,tau> + a<eta,tau> + sum_i <hat mu_i, tau>,
    one Rohrlich term per symplectic component, so the sign is
    multiplicative over unions of ledgers.
    """
    return _product(_good_reduction_factors(ledger, tau, alpha_list))


# ---------------------------------------------------------------------------
# places


@dataclass
class LocalPlace:
    kind: str
    g: int
    tau: TauData
    p: Optional[int] = None
    q: Optional[int] = None
    uniformization: Optional[UniformizationInput] = None
    ledger: Optional[GrothendieckLedger] = None
    alpha_list: Optional[list] = None
    abelian: Optional[bool] = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("real", "complex", "finite"):
            raise ValueError(f"unknown place kind {self.kind!r}")
        if self.kind == "finite":
            if self.p is None or not isprime(self.p):
                raise ValueError(f"p={self.p} is not prime")
            q = self.q if self.q is not None else self.p
            while q % self.p == 0 and q > 1:
                q //= self.p
            if q != 1:
                raise ValueError(f"q={self.q} is not a power of p={self.p}")
            if self.q is None:
                self.q = self.p
            if self.uniformization is None:
                raise ValueError("finite places need uniformization data")
        if not self.name:
            self.name = self.kind if self.kind != "finite" else f"p={self.p}"

    @property
    def is_bad(self):
        return self.kind == "finite" and self.p <= 2 * self.g + 1

    @property
    def is_abelian(self):
        return self.tau.group.is_abelian if self.abelian is None else self.abelian

    @property
    def eta(self):
        return self.tau.eta()

    def chi(self):
        return self.uniformization.chi.character(self.tau.group)

    def resolve_ledger(self):
        if self.ledger is not None:
            return self.ledger
        lam = twist_omega(self.uniformization.kappa, Fraction(1, 2))
        return grothendieck_decompose(self.tau.group, lam)


@dataclass
class SignTrace:
    place: str
    branch: str
    factors: list
    product: int
    notes: list = field(default_factory=list)

    def check(self):
        if self.product != _product(self.factors):
            raise AssertionError(f"trace for {self.place} does not multiply out")
        return self


def tau_symplectic(tau: TauData) -> bool:
    if not tau.rep.is_character():
        return False
    rep = WeilRep([(WeilIrred(r), m) for r, m in tau.rep.terms.items()])
    return form_feasibility(rep, SYMPLECTIC, center=0).feasible


def w_local(place: LocalPlace):
    tau = place.tau
    notes = list(tau.notes)
    if place.kind in ("real", "complex"):
        factors = [_factor("(-1)^(g dim tau)", -1, place.g * tau.dim)]
        trace = SignTrace(place.name, "archimedean", factors, _product(factors), notes)
        return trace.product, trace.check()

    u = place.uniformization
    chi = place.chi()
    if not place.is_bad:
        ledger = place.resolve_ledger()
        if place.alpha_list is None and ledger.a:
            notes.append("alpha constants not supplied; +1 used")
        factors = _good_reduction_factors(ledger, tau, place.alpha_list)
        factors += _sp2_factors(chi, tau, u.r)
        branch = "good-reduction-formula"
    else:
        if not tau_symplectic(tau):
            raise UnsupportedBranch(f"{place.name}: tau_v is not symplectic, no formula available")
        if not kappa_symplectic_check(u):
            raise UnsupportedBranch(f"{place.name}: kappa (x) omega^1/2 is not symplectic")
        factors = [("W(kappa x tau)", 1, 1)] + _sp2_factors(chi, tau, u.r)
        branch = "small-residue-symplectic"
    trace = SignTrace(place.name, branch, factors, _product(factors), notes)
    return trace.product, trace.check()


def w_global(places):
    traces = []
    sign = 1
    for place in places:
        s, trace = w_local(place)
        sign *= s
        traces.append(trace)
    return sign, traces


# ---------------------------------------------------------------------------
# hypotheses


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    @property
    def first_failure(self):
        return next((c for c in self.checks if not c.passed), None)


_FLAG_OF = {DIM: "dim_even", DET: "det_trivial", INDICATOR: "indicator_minus1", RATIONAL: "char_rational"}


def tau_hypothesis_check(tau: TauData) -> Report:
    G = tau.group
    rep = tau.rep
    computed = {}
    computed[DIM] = (rep.dim % 2 == 0, f"dim tau = {rep.dim}")
    nontrivial = [g for g in G.elements() if mc.det_virtual_exponent(G, rep, g) != 0]
    computed[DET] = (not nontrivial, f"det nontrivial at {nontrivial[0]!r}" if nontrivial else "")
    bad = [
        (r, m) for r, m in rep.terms.items() if m < 0 or mc.fs_indicator(G, r) != -1
    ]
    computed[INDICATOR] = (
        rep.is_character() and not bad and not rep.is_zero(),
        ", ".join(f"{r!r} (mult {m}, indicator {mc.fs_indicator(G, r)})" for r, m in bad),
    )
    computed[RATIONAL] = (rep.is_rational_valued(), "")
    flags = tau.global_flags or {}
    report = Report()
    for name in (DIM, DET, INDICATOR, RATIONAL):
        ok, detail = computed[name]
        declared = flags.get(_FLAG_OF[name])
        if declared is not None and bool(declared) != ok:
            detail = (detail + "; " if detail else "") + f"declared {_FLAG_OF[name]}={declared}"
            ok = ok and bool(declared)
        report.checks.append(Check(name, ok, detail))
    return report


@dataclass
class ParityEntry:
    label: str
    pairing: int

    @property
    def even(self):
        return self.pairing % 2 == 0


@dataclass
class ParityReport:
    entries: list = field(default_factory=list)

    @property
    def all_even(self):
        return all(e.even for e in self.entries)

    def __bool__(self):
        return self.all_even


def parity_audit(tau: TauData, chars, labels=None) -> ParityReport:
    labels = labels or [f"char[{i}]" for i in range(len(chars))]
    return ParityReport([ParityEntry(l, _pairing(tau, c)) for l, c in zip(labels, chars)])


def place_parity_chars(place: LocalPlace):
    """Characters whose pairing with tau_v must be even at a finite place."""
    chars = [("chi", place.chi())]
    if not place.is_bad:
        tau = place.tau
        ledger = place.resolve_ledger()
        chars += [("1", tau.trivial()), ("eta", tau.eta()), ("sum of hats", hat_character(ledger))]
    return chars


@dataclass
class Verdict:
    status: str
    value: Optional[int]
    failed: Optional[str] = None
    message: str = ""
    traces: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def proven(self):
        return self.status == "Proven"


def _fail(name, message, traces=()):
    return Verdict("HypothesisFailed", None, name, message, list(traces), [SURROGATE_NOTE])


def _local_det_trivial(place):
    loc = place.tau
    return next((g for g in loc.group.elements() if mc.det_virtual_exponent(loc.group, loc.rep, g)), None)


def _uniformization_error(place):
    if place.uniformization.g != place.g:
        return "genus mismatch"
    try:
        # rationality of chi is its own hypothesis
        assemble_sigma(place.uniformization, check_rational=False)
        if not place.is_bad:
            place.resolve_ledger()
    except RootnumError as exc:
        return str(exc)
    return None


def _odd_pairing(place):
    try:
        named = place_parity_chars(place)
    except RootnumError:
        named = [("chi", place.chi())]
    labels, chars = zip(*named)
    audit = parity_audit(place.tau, list(chars), list(labels))
    return next((e for e in audit.entries if not e.even), None)


def hypothesis_checks(places, tau: TauData):
    """Every gate hypothesis, in gate order, each evaluated independently."""
    out = list(tau_hypothesis_check(tau).checks)
    finite = [p for p in places if p.kind == "finite"]

    def add(name, failures):
        out.append(Check(name, not failures, "; ".join(failures)))

    add(ABELIAN, [
        f"{p.name}: decomposition model {p.tau.group!r} is not abelian"
        for p in finite if p.is_bad and not p.is_abelian
    ])
    local = [f"{p.name}: dim tau_v = {p.tau.dim} but dim tau = {tau.dim}" for p in places if p.tau.dim != tau.dim]
    for p in finite:
        g = _local_det_trivial(p)
        if g is not None:
            local.append(f"{p.name}: det tau_v nontrivial at {g!r}")
    add(TAU_LOCAL, local)
    add(TAU_SYMPLECTIC, [f"{p.name}: tau_v is not symplectic" for p in finite if p.is_bad and not tau_symplectic(p.tau)])
    add(KAPPA_SYMPLECTIC, [
        f"{p.name}: kappa (x) omega^1/2 is not symplectic"
        for p in finite if p.is_bad and not kappa_symplectic_check(p.uniformization)
    ])
    add(CHI_RATIONAL, [f"{p.name}: chi has an irrational character" for p in finite if not p.chi().is_rational_valued()])
    add(UNIFORMIZATION, [f"{p.name}: {err}" for p in finite for err in [_uniformization_error(p)] if err])
    add(PARITY, [
        f"{p.name}: <{odd.label}, tau_v> = {odd.pairing} is odd"
        for p in finite for odd in [_odd_pairing(p)] if odd is not None
    ])
    return out


def hypothesis_failures(places, tau: TauData):
    return [c.name for c in hypothesis_checks(places, tau) if not c.passed]


def theorem_gate(places, tau: TauData) -> Verdict:
    """Proven(+1) when every hypothesis holds and every local sign is +1.

    Otherwise HypothesisFailed naming the first violated condition.
    """
    for check in hypothesis_checks(places, tau):
        if not check.passed:
            return _fail(check.name, check.detail)

    traces = []
    for place in places:
        try:
            sign, trace = w_local(place)
        except UnsupportedBranch as exc:
            return _fail(LOCAL_SIGN, str(exc), traces)
        traces.append(trace)
        if sign != 1:
            return _fail(LOCAL_SIGN, f"{place.name}: local sign {sign}", traces)
    return Verdict("Proven", 1, None, "W(X, tau) = +1", traces, [SURROGATE_NOTE])


__all__ = [
    "TauData",
    "LocalPlace",
    "SignTrace",
    "Verdict",
    "w_archimedean",
    "w_sp2_twist",
    "w_rohrlich2",
    "w_good_reduction",
    "w_local",
    "w_global",
    "tau_hypothesis_check",
    "parity_audit",
    "theorem_gate",
    "hypothesis_checks",
    "hypothesis_failures",
    "validate_uniformization",
]
