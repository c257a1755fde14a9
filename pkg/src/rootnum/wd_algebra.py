"""Formal Weil and Weil-Deligne representations.

A :class:`WeilIrred` is a finite-image irreducible twisted by a rational power
of the unramified character omega (omega(Phi) = 1/q).  Finite parts are
metacyclic descriptors or one of the labels ``"1"`` and ``"eta"`` (the
unramified quadratic character).  A :class:`WDRep` is a multiset of blocks
``pi (x) sp(n)``; the nilpotent operator is implicit in the labels ``n``.
"""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cyclotomic import char_poly_factorization, divisors, mult_order
from .errors import (
    GroupMismatch,
    IrrationalRestriction,
    LedgerInvalid,
    NotSymplecticFeasible,
    UndefinedIndicator,
)
from .metacyclic import (
    IrrepDescriptor,
    VirtualChar,
    char_poly_at_b,
    dual_rep,
    eta_rep,
    fs_indicator,
    hat_rep,
    is_symplectic_by_criterion,
    pi_rep,
    theta_rep,
    trivial_rep,
)

ORTHOGONAL, SYMPLECTIC, UNITARY = "orthogonal", "symplectic", "unitary"
FORMS = (ORTHOGONAL, SYMPLECTIC, UNITARY)

_LABELS = {"1": "1", "eta": "eta", "η": "eta"}


def _canonical_part(fp):
    if isinstance(fp, IrrepDescriptor):
        if fp.d == 1 and fp.w == 0:
            return "1"
        if fp.d == 1 and fp.w == fp.group.s:
            return "eta"
        return fp
    try:
        return _LABELS[fp]
    except KeyError:
        raise ValueError(f"unknown finite part {fp!r}") from None


def _part_key(fp):
    if fp == "1":
        return (0,)
    if fp == "eta":
        return (1,)
    return (2, fp.group.n, fp.group.k, fp.d, fp.e, fp.w)


def _part_dim(fp):
    return fp.x if isinstance(fp, IrrepDescriptor) else 1


def _part_dual(fp):
    return dual_rep(fp) if isinstance(fp, IrrepDescriptor) else fp


def _part_group(fp):
    return fp.group if isinstance(fp, IrrepDescriptor) else None


def resolve_part(G, fp):
    """The finite part as a descriptor of G (labels are group-free)."""
    if fp == "1":
        return trivial_rep(G)
    if fp == "eta":
        return eta_rep(G)
    if fp.group != G:
        raise GroupMismatch(f"{fp!r} does not belong to {G!r}")
    return fp


def _part_indicator(fp):
    return fs_indicator(fp.group, fp) if isinstance(fp, IrrepDescriptor) else 1


@dataclass(frozen=True)
class WeilIrred:
    finite_part: object
    omega_t: Fraction = Fraction(0)
    weight: Fraction = None

    def __post_init__(self):
        object.__setattr__(self, "finite_part", _canonical_part(self.finite_part))
        object.__setattr__(self, "omega_t", Fraction(self.omega_t))
        w = -self.omega_t if self.weight is None else Fraction(self.weight)
        object.__setattr__(self, "weight", w)

    @property
    def dim(self):
        return _part_dim(self.finite_part)

    @property
    def group(self):
        return _part_group(self.finite_part)

    def sort_key(self):
        return (_part_key(self.finite_part), self.omega_t, self.weight)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def twist(self, t):
        t = Fraction(t)
        return WeilIrred(self.finite_part, self.omega_t + t, self.weight - t)

    def dual(self):
        return WeilIrred(_part_dual(self.finite_part), -self.omega_t, -self.weight)

    def is_pure_twist(self):
        """Finite image twisted by omega^t: the weight is forced to be -t."""
        return self.weight == -self.omega_t

    def __repr__(self):
        fp = self.finite_part
        text = fp if isinstance(fp, str) else repr(fp)
        if self.omega_t:
            text += f"(x)w^{self.omega_t}"
        if not self.is_pure_twist():
            text += f"[wt {self.weight}]"
        return text


def _common_group(parts):
    groups = {p.group for p in parts if p.group is not None}
    if len(groups) > 1:
        raise GroupMismatch("finite parts from different groups: " + ", ".join(map(repr, groups)))
    return groups.pop() if groups else None


class WeilRep:
    """Semisimple Weil representation: multiset of WeilIrred."""

    __slots__ = ("summands",)

    def __init__(self, summands=()):
        acc = Counter()
        items = summands.items() if isinstance(summands, dict) else summands
        for item in items:
            irred, mult = item if isinstance(item, tuple) else (item, 1)
            if mult < 0:
                raise ValueError("multiplicities must be nonnegative")
            acc[irred] += mult
        _common_group(acc)
        self.summands = {i: acc[i] for i in sorted(acc) if acc[i]}

    @property
    def group(self):
        return _common_group(self.summands)

    @property
    def dim(self):
        return sum(i.dim * m for i, m in self.summands.items())

    def items(self):
        return self.summands.items()

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    def __add__(self, other):
        return WeilRep(list(self.items()) + list(other.items()))

    def __rmul__(self, c):
        return WeilRep([(i, c * m) for i, m in self.items()])

    def __eq__(self, other):
        return isinstance(other, WeilRep) and self.summands == other.summands

    def __hash__(self):
        return hash(tuple(self.summands.items()))

    def __repr__(self):
        if not self.summands:
            return "0"
        return " + ".join(f"{m}*{i!r}" if m > 1 else repr(i) for i, m in self.items())

    def twist(self, t):
        return WeilRep([(i.twist(t), m) for i, m in self.items()])

    def dual(self):
        return WeilRep([(i.dual(), m) for i, m in self.items()])

    def character(self, G):
        """Finite-part virtual character on G (omega is trivial on the finite model)."""
        return VirtualChar(G, [(resolve_part(G, i.finite_part), m) for i, m in self.items()])

    def center(self):
        """Dimension-weighted mean omega exponent."""
        total = sum(i.dim * m for i, m in self.items())
        if not total:
            return Fraction(0)
        return sum((i.omega_t * i.dim * m for i, m in self.items()), Fraction(0)) / total


class WDRep:
    """Multiset of blocks (WeilIrred, n) standing for irred (x) sp(n)."""

    __slots__ = ("blocks",)

    def __init__(self, blocks=()):
        acc = Counter()
        items = blocks.items() if isinstance(blocks, dict) else blocks
        for item in items:
            if len(item) == 2 and isinstance(item[0], tuple):
                (irred, n), mult = item
            elif len(item) == 3:
                irred, n, mult = item
            else:
                (irred, n), mult = item, 1
            if n < 1:
                raise ValueError("sp(n) needs n >= 1")
            if mult < 0:
                raise ValueError("multiplicities must be nonnegative")
            acc[(irred, n)] += mult
        _common_group(i for i, _ in acc)
        self.blocks = {b: acc[b] for b in sorted(acc, key=lambda b: (b[1], b[0].sort_key())) if acc[b]}

    @classmethod
    def from_weil(cls, rep, n=1):
        return cls([((i, n), m) for i, m in rep.items()])

    @property
    def group(self):
        return _common_group(i for i, _ in self.blocks)

    @property
    def dim(self):
        return sum(i.dim * n * m for (i, n), m in self.blocks.items())

    @property
    def nilpotent_rank(self):
        return sum(i.dim * (n - 1) * m for (i, n), m in self.blocks.items())

    def items(self):
        return self.blocks.items()

    def __eq__(self, other):
        return isinstance(other, WDRep) and self.blocks == other.blocks

    def __hash__(self):
        return hash(tuple(self.blocks.items()))

    def __add__(self, other):
        return direct_sum(self, other)

    def __repr__(self):
        if not self.blocks:
            return "0"
        parts = []
        for (i, n), m in self.items():
            text = repr(i) + (f"(x)sp({n})" if n > 1 else "")
            parts.append(f"{m}*{text}" if m > 1 else text)
        return " + ".join(parts)

    def semisimplification(self):
        """The underlying Weil representation: irred (x) (1 + omega + ... + omega^(n-1))."""
        return WeilRep([(i.twist(j), m) for (i, n), m in self.items() for j in range(n)])

    def weight_histogram(self):
        hist = Counter()
        for (i, n), m in self.items():
            for j in range(n):
                hist[i.weight - j] += i.dim * m
        return dict(sorted(hist.items()))

    def by_n(self):
        out = {}
        for (i, n), m in self.items():
            out.setdefault(n, []).append((i, m))
        return out


# ---------------------------------------------------------------------------
# constructors and structural operations


def sp(n: int) -> WDRep:
    return WDRep([((WeilIrred("1"), n), 1)])


def sp_matrix_model(n: int, q=2):
    """sigma(Phi) = diag(q^0, q^-1, ..., q^-(n-1)) and N e_j = e_(j+1)."""
    q = Fraction(q)
    frob = [[q ** (-i) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    nil = [[1 if i == j + 1 else 0 for j in range(n)] for i in range(n)]
    return frob, nil


def direct_sum(a, b):
    if isinstance(a, WeilRep) and isinstance(b, WeilRep):
        return a + b
    a = WDRep.from_weil(a) if isinstance(a, WeilRep) else a
    b = WDRep.from_weil(b) if isinstance(b, WeilRep) else b
    return WDRep(list(a.items()) + list(b.items()))


def twist_omega(a, t):
    t = Fraction(t)
    if isinstance(a, (WeilRep, WeilIrred)):
        return a.twist(t)
    return WDRep([((i.twist(t), n), m) for (i, n), m in a.items()])


def dual(a):
    if isinstance(a, (WeilRep, WeilIrred)):
        return a.dual()
    return WDRep([((i.dual().twist(-(n - 1)), n), m) for (i, n), m in a.items()])


# ---------------------------------------------------------------------------
# invariant forms


@dataclass
class FormWitness:
    """Grouping nu + nu~ + lambda_1^z_1 + ... behind a feasibility verdict.

    ``pairs`` lists (irred, partner, multiplicity) for irreducibles matched
    with their dual; ``doubled`` lists self-dual irreducibles of the wrong
    type together with half their multiplicity; ``free`` lists self-dual
    irreducibles of the form's own type.  Pairing is decided after shifting
    every omega exponent by ``-center``.
    """

    form: str
    center: Fraction
    pairs: list = field(default_factory=list)
    doubled: list = field(default_factory=list)
    free: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def feasible(self):
        return not self.failures

    def __bool__(self):
        return self.feasible


def form_feasibility(a: WeilRep, form: str, center=None) -> FormWitness:
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    for irred in a:
        if not irred.is_pure_twist():
            raise UndefinedIndicator(
                f"{irred!r}: weight {irred.weight} is not carried by the omega exponent"
            )
    center = a.center() if center is None else Fraction(center)
    wit = FormWitness(form, center)
    mults = {(i.finite_part, i.omega_t - center): (i, m) for i, m in a.items()}
    done = set()
    for key in sorted(mults, key=lambda k: (_part_key(k[0]), k[1])):
        if key in done:
            continue
        fp, t = key
        irred, m = mults[key]
        partner_fp = fp if form == UNITARY else _part_dual(fp)
        partner = (partner_fp, -t)
        if partner == key:
            done.add(key)
            if form == UNITARY:
                wit.free.append((irred, m))
                continue
            ind = _part_indicator(fp)
            own = -1 if form == SYMPLECTIC else 1
            if ind == own:
                wit.free.append((irred, m))
            elif m % 2 == 0:
                wit.doubled.append((irred, m // 2))
            else:
                wit.failures.append(f"{irred!r} has indicator {ind} and odd multiplicity {m}")
            continue
        done.update((key, partner))
        other, m2 = mults.get(partner, (None, 0))
        if m != m2:
            wit.failures.append(
                f"{irred!r} occurs {m} times but its dual partner occurs {m2} times"
            )
        else:
            wit.pairs.append((irred, other, m))
    return wit


def admissible_form_check(a: WDRep, form: str, center=None) -> bool:
    """Blockwise form check for a WD representation.

    Blocks are grouped by n; the block pi (x) sp(n) is tested through
    pi (x) omega^((n-1)/2).  The form carried by sp(n) itself pairs e_i with
    e_(n-1-i) with alternating signs, so for even n a bilinear form on the
    block corresponds to the opposite type of form on pi.
    """
    if center is None:
        total = sum(i.dim * n * m for (i, n), m in a.items())
        center = (
            sum((i.dim * n * m * (i.omega_t + Fraction(n - 1, 2)) for (i, n), m in a.items()), Fraction(0))
            / total
            if total
            else Fraction(0)
        )
    for n, members in a.by_n().items():
        rep = WeilRep([(i.twist(Fraction(n - 1, 2)), m) for i, m in members])
        block_form = form
        if n % 2 == 0 and form != UNITARY:
            block_form = ORTHOGONAL if form == SYMPLECTIC else SYMPLECTIC
        if not form_feasibility(rep, block_form, center):
            return False
    return True


# ---------------------------------------------------------------------------
# Grothendieck ledger


@dataclass
class LedgerBlock:
    d: int
    case: str
    v: int


@dataclass
class GrothendieckLedger:
    group: object
    mu: WeilRep = field(default_factory=WeilRep)
    mu0: WeilRep = field(default_factory=WeilRep)
    mu0p: WeilRep = field(default_factory=WeilRep)
    mu_list: list = field(default_factory=list)
    hat_list: list = field(default_factory=list)
    case_tag: str = "case1"
    center: Fraction = Fraction(0)
    blocks: list = field(default_factory=list)

    @property
    def a(self):
        return len(self.mu_list)

    def __add__(self, other):
        return merge_ledgers(self, other)


def _merge_tags(tags):
    tags = set(tags)
    if not tags:
        return "case1"
    return tags.pop() if len(tags) == 1 else "mixed"


def merge_ledgers(first, second):
    if first.group != second.group:
        raise GroupMismatch("ledgers over different groups")
    return GrothendieckLedger(
        group=first.group,
        mu=first.mu + second.mu,
        mu0=first.mu0 + second.mu0,
        mu0p=first.mu0p + second.mu0p,
        mu_list=first.mu_list + second.mu_list,
        hat_list=first.hat_list + second.hat_list,
        case_tag=_merge_tags([first.case_tag, second.case_tag]),
        center=first.center,
        blocks=first.blocks + second.blocks,
    )


def ledger_recombine(ledger: GrothendieckLedger) -> VirtualChar:
    G = ledger.group
    mu = ledger.mu.character(G)
    out = mu + mu.dual() + 2 * (ledger.mu0.character(G) - ledger.mu0p.character(G))
    for irred in ledger.mu_list:
        out = out + VirtualChar.of(G, resolve_part(G, irred.finite_part))
    return out


def hat_character(ledger: GrothendieckLedger) -> VirtualChar:
    G = ledger.group
    return VirtualChar(G, [(resolve_part(G, h.finite_part), 1) for h in ledger.hat_list])


def validate_ledger(ledger: GrothendieckLedger):
    """Raise LedgerInvalid unless the structural ledger invariants hold."""
    G = ledger.group
    if len(ledger.mu_list) != len(ledger.hat_list):
        raise LedgerInvalid("mu_list and hat_list differ in length")
    for mu_i, hat_i in zip(ledger.mu_list, ledger.hat_list):
        fp = mu_i.finite_part
        if not isinstance(fp, IrrepDescriptor) or fp.group != G:
            raise LedgerInvalid(f"{mu_i!r} is not an irreducible of {G!r}")
        if not is_symplectic_by_criterion(G, fp):
            raise LedgerInvalid(f"{mu_i!r} fails the symplectic criterion")
        if resolve_part(G, hat_i.finite_part) != hat_rep(G, fp):
            raise LedgerInvalid(f"{hat_i!r} is not the companion of {mu_i!r}")
    for name in ("mu0", "mu0p"):
        if not form_feasibility(getattr(ledger, name), SYMPLECTIC, center=0):
            raise LedgerInvalid(f"{name} is not symplectic")
    return ledger


def _resolved(G, lam):
    return WeilRep(
        [(WeilIrred(resolve_part(G, i.finite_part), i.omega_t, i.weight), m) for i, m in lam.items()]
    )


def grothendieck_decompose(G, lam: WeilRep) -> GrothendieckLedger:
    """[lam] = [mu] + [mu*] + 2([mu0] - [mu0']) + [mu_1] + ... + [mu_a].

    The symplectic grouping splits lam into nu + nu* and symplectic
    irreducibles lambda_j^(z_j).  Everything with b-eigenvalues of exact
    order d is handled together.  Inside a block the characteristic
    polynomial of b is Phi_d^v.  If nu meets an orbit carrying no symplectic
    irreducible, all z_j are even and mu0 = sum lambda_j^(z_j/2).  Otherwise
    the lambda_j cover every orbit, mu0' = sum lambda_j^((v - z_j)/2) and
    each lambda_j enters mu_list v times.
    """
    lam = _resolved(G, lam)
    wit = form_feasibility(lam, SYMPLECTIC)
    if not wit:
        raise NotSymplecticFeasible("; ".join(wit.failures))
    center = wit.center

    poly = char_poly_at_b(lam.character(G))
    factors = char_poly_factorization(poly, divisors(G.n)) if poly is not None else None
    if factors is None:
        raise IrrationalRestriction("restriction to B does not have a rational character")
    v_of = dict(factors)

    def shift(irred):
        return irred.twist(-center)

    nu = Counter()
    sym = Counter()
    for irred, other, m in wit.pairs:
        pick = min(shift(irred), shift(other))
        nu[pick] += m
    for irred, half in wit.doubled:
        nu[shift(irred)] += half
    for irred, m in wit.free:
        sym[shift(irred)] += m

    def desc(irred):
        return resolve_part(G, irred.finite_part)

    ds = sorted({desc(i).d for i in list(nu) + list(sym)})
    ledger = GrothendieckLedger(group=G, center=center)
    tags = []
    for d in ds:
        nu_d = Counter({i: m for i, m in nu.items() if desc(i).d == d})
        sym_d = sorted((i, m) for i, m in sym.items() if desc(i).d == d)
        sub = GrothendieckLedger(group=G, mu=WeilRep(nu_d), center=center)
        v = v_of.get(d, 0)
        if not sym_d:
            sub.blocks = [LedgerBlock(d, "case1", v)]
        else:
            nu_orbits = {desc(i).e for i in nu_d}
            sym_orbits = {desc(i).e for i, _ in sym_d}
            if not nu_orbits <= sym_orbits:
                if any(z % 2 for _, z in sym_d):
                    raise IrrationalRestriction(f"odd symplectic multiplicity in block d={d}")
                sub.mu0 = WeilRep([(i, z // 2) for i, z in sym_d])
                sub.blocks = [LedgerBlock(d, "case1", v)]
            else:
                x = mult_order(G.k, d)
                orbit_count = sum(1 for u in range(d) if gcd(u, d) == 1) // x
                if len(sym_orbits) != orbit_count:
                    raise IrrationalRestriction(f"symplectic orbits do not cover Phi_{d}")
                alloc = []
                for i, z in sym_d:
                    if (v - z) % 2 or v < z:
                        raise IrrationalRestriction(f"multiplicities in block d={d} are inconsistent")
                    alloc.append((i, (v - z) // 2))
                sub.mu0p = WeilRep(alloc)
                for i, _ in sym_d:
                    sub.mu_list.extend([i] * v)
                sub.blocks = [LedgerBlock(d, "case2", v)]
        sub.hat_list = [WeilIrred(hat_rep(G, desc(i)), i.omega_t) for i in sub.mu_list]
        sub.case_tag = sub.blocks[0].case
        tags.append(sub.case_tag)
        ledger = merge_ledgers(ledger, sub) if ledger.blocks else sub
    ledger.case_tag = _merge_tags(tags)
    ledger.center = center

    if ledger_recombine(ledger) != lam.character(G):
        raise LedgerInvalid("ledger does not recombine to lambda")
    _verify_hat_sum(G, ledger)
    return ledger


def _verify_hat_sum(G, ledger):
    """sum of hats = sum_d v_d * (pi_d - sum_{r | d, r < d} Theta(r))."""
    expected = VirtualChar(G)
    for blk in ledger.blocks:
        if blk.case != "case2":
            continue
        theta_d = pi_rep(G, blk.d)
        for r in divisors(blk.d):
            if r < blk.d:
                theta_d = theta_d - theta_rep(G, r)
        expected = expected + blk.v * theta_d
    got = hat_character(ledger)
    if got != expected or not got.is_rational_valued():
        raise LedgerInvalid("companion sum is not the expected rational character")


def ledger_empty(G):
    return GrothendieckLedger(group=G)
