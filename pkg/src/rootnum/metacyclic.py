"""Metacyclic groups H = <b, c | b^n, c^(2s), c^-1 b c = b^k> and their characters.

Every irreducible of H is induced from a character of B x| <c^x> and is
recorded as an :class:`IrrepDescriptor` ``(d, e, x, w)``: ``xi = zeta_n^e``
has exact order ``d``, ``x`` is the order of ``k`` mod ``d`` and
``psi2(c^x) = zeta_{2s/x}^w``.  In the basis ``e, ce, ..., c^(x-1)e`` the
image of ``b`` is ``diag(xi, xi^k, ..., xi^(k^(x-1)))`` and ``c`` is a cyclic
shift carrying ``psi2(c^x)`` in its corner.

Character values are sums of roots of unity.  The summation routines keep
them as exponent histograms over Z/m and only reduce modulo Phi_m at the end,
so indicator and pairing sums stay in exact integer arithmetic.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from .cyclotomic import (
    CycNum,
    IntPoly,
    _power_matrix,
    divisors,
    is_rational,
    mult_order,
    totient,
    zeta,
)
from .errors import (
    GroupMismatch,
    IndicatorNotIntegral,
    NotADivisor,
    NotAUnit,
    NotSymplectic,
)


@dataclass(frozen=True)
class MetacyclicGroup:
    n: int
    k: int
    s: int = field(init=False, compare=False)
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        n, k = self.n, self.k
        if n < 1:
            raise ValueError("n must be positive")
        if gcd(k % n, n) != 1:
            raise NotAUnit(f"k={k} is not a unit mod n={n}")
        object.__setattr__(self, "k", k % n if n > 1 else 1)
        s = mult_order(self.k, n)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "order", 2 * s * n)

    def __repr__(self):
        return f"G({self.n},{self.k})"

    @property
    def is_abelian(self):
        return self.k % self.n == 1 % self.n

    # elements -------------------------------------------------------------

    @property
    def identity(self):
        return GroupElement(0, 0)

    @property
    def b(self):
        return GroupElement(1 % self.n, 0)

    @property
    def c(self):
        return GroupElement(0, 1 % (2 * self.s))

    def element(self, t, v):
        return GroupElement(t % self.n, v % (2 * self.s))

    def elements(self):
        return [GroupElement(t, v) for v in range(2 * self.s) for t in range(self.n)]

    def index(self, g):
        return g.v * self.n + g.t

    def mul(self, g, h):
        kinv = pow(self.k, -1, self.n) if self.n > 1 else 1
        t = (g.t + h.t * pow(kinv, g.v, self.n)) % self.n
        return GroupElement(t, (g.v + h.v) % (2 * self.s))

    def inv(self, g):
        # (b^t c^v)^-1 = c^-v b^-t = b^(-t k^v) c^-v
        return GroupElement((-g.t * pow(self.k, g.v, self.n)) % self.n, (-g.v) % (2 * self.s))

    def power(self, g, e):
        out, base = self.identity, g
        if e < 0:
            base, e = self.inv(g), -e
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def conjugate(self, g, h):
        """h g h^-1."""
        return self.mul(self.mul(h, g), self.inv(h))


def group_new(n: int, k: int) -> MetacyclicGroup:
    return MetacyclicGroup(n, k)


@dataclass(frozen=True, order=True)
class GroupElement:
    t: int
    v: int

    def __repr__(self):
        return f"b^{self.t}c^{self.v}"


@dataclass(frozen=True)
class IrrepDescriptor:
    group: MetacyclicGroup
    d: int
    e: int
    x: int
    w: int

    @property
    def dim(self):
        return self.x

    @property
    def psi2_order(self):
        """Order of the cyclic group <c^x> in H, i.e. 2s/x."""
        return 2 * self.group.s // self.x

    @property
    def conductor(self):
        return lcm(self.d, self.psi2_order)

    def sort_key(self):
        return (self.d, self.e, self.w)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"{self.group!r}[d={self.d},e={self.e},x={self.x},w={self.w}]"


# ---------------------------------------------------------------------------
# descriptors and enumeration


def orbit(G, e):
    """The <k>-orbit of the exponent e mod n, in visiting order."""
    out, cur = [], e % G.n
    while cur not in out:
        out.append(cur)
        cur = cur * G.k % G.n
    return out


def exponent_order(G, e):
    return G.n // gcd(e, G.n)


def descriptor(G, e, w, d=None, x=None):
    """Canonical descriptor for xi = zeta_n^e and psi2 exponent w."""
    e %= G.n
    d_true = exponent_order(G, e)
    x_true = mult_order(G.k, d_true)
    if d is not None and d != d_true:
        raise ValueError(f"zeta_{G.n}^{e} has order {d_true}, not {d}")
    if x is not None and x != x_true:
        raise ValueError(f"order of k mod {d_true} is {x_true}, not {x}")
    return IrrepDescriptor(G, d_true, min(orbit(G, e)), x_true, w % (2 * G.s // x_true))


@lru_cache(maxsize=None)
def _irreducibles(G):
    out = []
    for d in divisors(G.n):
        x = mult_order(G.k, d)
        seen = set()
        for u in range(d):
            if gcd(u, d) != 1:
                continue
            e = u * (G.n // d)
            if e in seen:
                continue
            orb = orbit(G, e)
            seen.update(orb)
            for w in range(2 * G.s // x):
                out.append(IrrepDescriptor(G, d, min(orb), x, w))
    return tuple(out)


def irreducibles(G):
    return list(_irreducibles(G))


def trivial_rep(G):
    return IrrepDescriptor(G, 1, 0, 1, 0)


def eta_rep(G):
    """b -> 1, c -> -1."""
    return IrrepDescriptor(G, 1, 0, 1, G.s)


def dual_rep(rep):
    return descriptor(rep.group, -rep.e, -rep.w)


def galois_conjugate(rep, a):
    """Apply zeta -> zeta^a to every matrix entry (a a unit mod the conductor)."""
    if gcd(a, rep.conductor) != 1:
        raise NotAUnit(f"{a} is not a unit mod {rep.conductor}")
    return descriptor(rep.group, a * rep.e, a * rep.w)


def galois_orbit(rep):
    m = rep.conductor
    return sorted({galois_conjugate(rep, a) for a in range(1, m + 1) if gcd(a, m) == 1})


def rational_closure(rep):
    """Sum of the Galois conjugates of rep: the smallest rational-valued character containing it."""
    return VirtualChar(rep.group, [(r, 1) for r in galois_orbit(rep)])


def psi2_is_minus_one(rep):
    m = rep.psi2_order
    return m % 2 == 0 and rep.w == m // 2


# ---------------------------------------------------------------------------
# exponent bookkeeping


@lru_cache(maxsize=None)
def _element_arrays(G):
    ts = np.tile(np.arange(G.n, dtype=np.int64), 2 * G.s)
    vs = np.repeat(np.arange(2 * G.s, dtype=np.int64), G.n)
    kinv = pow(G.k, -1, G.n) if G.n > 1 else 1
    kinv_pow = np.array([pow(kinv, v, G.n) for v in range(2 * G.s)], dtype=np.int64)
    # y^2 = b^(t + t k^-v) c^(2v)
    t2 = (ts + ts * kinv_pow[vs]) % G.n
    v2 = (2 * vs) % (2 * G.s)
    return ts, vs, t2, v2


def _term_exponents(rep, ts, vs, m):
    """Root exponents (mod m) of the character terms at elements (ts, vs).

    Returns (mask, exps): rows of ``exps`` list the x exponents for the
    elements selected by ``mask``; all other elements have value 0.
    """
    G = rep.group
    mask = vs % rep.x == 0
    t_sel, v_sel = ts[mask], vs[mask]
    e_d = rep.e // (G.n // rep.d)
    kpow = np.array([pow(G.k, j, rep.d) for j in range(rep.x)], dtype=np.int64)
    psi_part = (rep.w * (v_sel // rep.x)) % rep.psi2_order * (m // rep.psi2_order)
    xi_part = (e_d * ((t_sel[:, None] * kpow[None, :]) % rep.d)) % rep.d * (m // rep.d)
    return mask, (psi_part[:, None] + xi_part) % m


def _counts_table(rep, m):
    """Integer array (|H|, m): row g holds the exponent histogram of chi(g)."""
    ts, vs, _, _ = _element_arrays(rep.group)
    table = np.zeros((len(ts), m), dtype=np.int64)
    mask, exps = _term_exponents(rep, ts, vs, m)
    rows = np.nonzero(mask)[0]
    np.add.at(table, (np.repeat(rows, rep.x), exps.ravel()), 1)
    return table


def _exact_integer(m, counts, den, what):
    val = is_rational(CycNum.from_root_counts(m, counts, den))
    if val is None or val.denominator != 1:
        raise IndicatorNotIntegral(f"{what} evaluated to {CycNum.from_root_counts(m, counts, den)!r}")
    return int(val)


# ---------------------------------------------------------------------------
# characters


def character_value(G, rep, g):
    _check_rep(G, rep)
    m = rep.conductor
    mask, exps = _term_exponents(rep, np.array([g.t]), np.array([g.v]), m)
    counts = np.zeros(m, dtype=np.int64)
    if mask[0]:
        np.add.at(counts, exps[0], 1)
    return CycNum.from_root_counts(m, counts)


def rep_matrix(G, rep, g):
    """Explicit monomial matrix of rep at g (list of rows of CycNum)."""
    _check_rep(G, rep)
    x, m = rep.x, rep.conductor
    xi = zeta(rep.d, rep.e // (G.n // rep.d))
    psi = zeta(rep.psi2_order, rep.w)
    zero = CycNum.rational(0, m)
    mat = [[zero] * x for _ in range(x)]
    for j in range(x):
        i, wraps = (j + g.v) % x, (j + g.v) // x
        mat[i][j] = (psi ** wraps) * (xi ** (g.t * pow(G.k, i, rep.d)))
    return mat


def fs_indicator(G, rep):
    """(1/|H|) sum_y chi(y^2), summed over every element of H."""
    _check_rep(G, rep)
    return _fs_indicator(rep)


@lru_cache(maxsize=None)
def _fs_indicator(rep):
    G = rep.group
    _, _, t2, v2 = _element_arrays(G)
    m = rep.conductor
    _, exps = _term_exponents(rep, t2, v2, m)
    counts = np.bincount(exps.ravel(), minlength=m)
    val = _exact_integer(m, counts, G.order, "Frobenius-Schur sum")
    if val not in (-1, 0, 1):
        raise IndicatorNotIntegral(f"indicator {val} outside {{-1, 0, 1}}")
    return val


def is_symplectic_by_criterion(G, rep):
    _check_rep(G, rep)
    if rep.d in (1, 2) or rep.x % 2:
        return False
    if not psi2_is_minus_one(rep):
        return False
    return (1 + pow(G.k, rep.x // 2, rep.d)) % rep.d == 0


def hat_rep(G, rep):
    if not is_symplectic_by_criterion(G, rep):
        raise NotSymplectic(f"{rep!r} does not satisfy the symplectic criterion")
    m = rep.psi2_order
    return IrrepDescriptor(G, rep.d, rep.e, rep.x, (rep.w + m // 2) % m)


@lru_cache(maxsize=None)
def _pair(a, b):
    """(1/|H|) sum_g chi_a(g) conj(chi_b(g)) by explicit summation."""
    G = a.group
    ts, vs, _, _ = _element_arrays(G)
    L = lcm(a.conductor, b.conductor)
    step = lcm(a.x, b.x)
    sel = vs % step == 0
    ts, vs = ts[sel], vs[sel]
    _, ea = _term_exponents(a, ts, vs, L)
    _, eb = _term_exponents(b, ts, vs, L)
    diff = (ea[:, :, None] - eb[:, None, :]) % L
    counts = np.bincount(diff.ravel(), minlength=L)
    return _exact_integer(L, counts, G.order, "character pairing")


def det_character_value(G, rep, g):
    """Determinant of the monomial matrix of rep at g."""
    _check_rep(G, rep)
    x, m = rep.x, rep.conductor
    e_d = rep.e // (G.n // rep.d)
    total = 0
    for j in range(x):
        i, wraps = (j + g.v) % x, (j + g.v) // x
        total += rep.w * wraps * (m // rep.psi2_order)
        total += e_d * g.t * pow(G.k, i, rep.d) * (m // rep.d)
    # rotation by v on x points has gcd(x, v) cycles
    sign = -1 if (x - gcd(x, g.v % x if x else 0)) % 2 else 1
    return zeta(m, total % m) * sign


def det_exponent(G, rep, g):
    """det rep(g) as r in Q/Z with det = exp(2 pi i r)."""
    val = det_character_value(G, rep, g)
    m = val.m
    for j in range(m):
        if zeta(m, j) == val:
            return Fraction(j, m)
    raise AssertionError("determinant is not a root of unity")


def _check_rep(G, rep):
    if rep.group != G:
        raise GroupMismatch(f"{rep!r} does not belong to {G!r}")


# ---------------------------------------------------------------------------
# virtual characters


class VirtualChar:
    """Z-linear combination of irreducible characters of one group."""

    __slots__ = ("group", "terms")

    def __init__(self, group, terms=None):
        self.group = group
        acc = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for rep, mult in items:
            _check_rep(group, rep)
            acc[rep] = acc.get(rep, 0) + int(mult)
        self.terms = {r: acc[r] for r in sorted(acc) if acc[r]}

    @classmethod
    def of(cls, group, *reps):
        return cls(group, [(r, 1) for r in reps])

    def _same(self, other):
        if self.group != other.group:
            raise GroupMismatch(f"{self.group!r} vs {other.group!r}")

    def __add__(self, other):
        self._same(other)
        return VirtualChar(self.group, list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        return VirtualChar(self.group, [(r, -m) for r, m in self.terms.items()])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return VirtualChar(self.group, [(r, c * m) for r, m in self.terms.items()])

    def __eq__(self, other):
        return (
            isinstance(other, VirtualChar)
            and self.group == other.group
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.group, tuple(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"0[{self.group!r}]"
        return " + ".join(f"{m}*{r!r}" for r, m in self.terms.items())

    @property
    def dim(self):
        return sum(r.x * m for r, m in self.terms.items())

    def is_zero(self):
        return not self.terms

    def is_character(self):
        return all(m > 0 for m in self.terms.values())

    def dual(self):
        return VirtualChar(self.group, [(dual_rep(r), m) for r, m in self.terms.items()])

    conjugate = dual

    def is_real(self):
        return self.dual() == self

    def value(self, g):
        m = self.conductor
        out = CycNum.rational(0, m)
        for rep, mult in self.terms.items():
            out = out + character_value(self.group, rep, g) * mult
        return out

    @property
    def conductor(self):
        return lcm(1, *(r.conductor for r in self.terms))

    def value_table(self, m=None):
        """(m, int array |H| x phi(m)) of power-basis coordinates at every element."""
        m = m or self.conductor
        table, bound = _power_matrix(m)
        ts, vs, _, _ = _element_arrays(self.group)
        weight = sum(abs(mult) * rep.x for rep, mult in self.terms.items())
        if weight * max(bound, 1) >= 2**62:
            table = table.astype(object)
        out = np.zeros((len(ts), table.shape[1]), dtype=table.dtype)
        # each row has at most dim nonzero root counts: gather table rows
        for rep, mult in self.terms.items():
            mask, exps = _term_exponents(rep, ts, vs, m)
            out[mask] += mult * table[exps].sum(axis=1)
        return m, out

    def is_rational_valued(self):
        _, tab = self.value_table()
        return not tab[:, 1:].any()

    def rational_values(self):
        """Integer values at every element, or None when some value is irrational."""
        _, tab = self.value_table()
        if tab[:, 1:].any():
            return None
        return [int(v) for v in tab[:, 0]]

    def same_values(self, other):
        """Value-by-value comparison over every group element."""
        self._same(other)
        m = lcm(self.conductor, other.conductor)
        return bool(np.array_equal(self.value_table(m)[1], other.value_table(m)[1]))


def _as_virtual(G, a):
    if isinstance(a, IrrepDescriptor):
        return VirtualChar.of(G, a)
    return a


def inner_product(G, a, b):
    a, b = _as_virtual(G, a), _as_virtual(G, b)
    if a.group != G or b.group != G:
        raise GroupMismatch("pairing of characters from different groups")
    total = 0
    for ra, ma in a.terms.items():
        for rb, mb in b.terms.items():
            total += ma * mb * _pair(ra, rb)
    return total


def det_virtual_exponent(G, a, g):
    """det of a virtual character at g, as an exponent in Q/Z."""
    a = _as_virtual(G, a)
    return sum((m * det_exponent(G, r, g) for r, m in a.terms.items()), Fraction(0)) % 1


# ---------------------------------------------------------------------------
# rational representations


def theta_rep(G, r):
    if r < 1 or G.n % r:
        raise NotADivisor(f"{r} does not divide {G.n}")
    return VirtualChar(G, [(rep, 1) for rep in _irreducibles(G) if rep.d == r and rep.w == 0])


def _induced_trivial_values(G, d):
    """Ind_L^H 1 for L = <b^d> x| C: count the h with h g h^-1 in L, divide by |L|."""
    ts, vs, _, _ = _element_arrays(G)
    kinv = pow(G.k, -1, G.n) if G.n > 1 else 1
    kinv_pow = np.array([pow(kinv, v, G.n) for v in range(2 * G.s)], dtype=np.int64)
    # (b^a c^u) b^t c^v (b^a c^u)^-1 = b^(a (1 - k^-v) + t k^-u) c^v
    a, u = ts[None, :], vs[None, :]
    t, v = ts[:, None], vs[:, None]
    conj_t = (a * (1 - kinv_pow[v]) + t * kinv_pow[u]) % G.n
    hits = (conj_t % d == 0).sum(axis=1)
    size_L = (G.n // d) * 2 * G.s
    assert not (hits % size_L).any()
    return [int(h) for h in hits // size_L]


def decompose_class_function(G, values):
    """VirtualChar with the given integer values at every element (ordered as G.elements())."""
    ts, vs, _, _ = _element_arrays(G)
    weights = np.asarray(values, dtype=np.int64)
    terms = []
    for rep in _irreducibles(G):
        m = rep.conductor
        mask, exps = _term_exponents(rep, ts, vs, m)
        counts = np.zeros(m, dtype=np.int64)
        w = np.repeat(weights[mask], rep.x)
        np.add.at(counts, (-exps.ravel()) % m, w)
        mult = _exact_integer(m, counts, G.order, "multiplicity")
        if mult:
            terms.append((rep, mult))
    vc = VirtualChar(G, terms)
    if vc.rational_values() != [int(v) for v in values]:
        raise ValueError("values are not a virtual character of the group")
    return vc


def pi_rep(G, d):
    if d < 1 or G.n % d:
        raise NotADivisor(f"{d} does not divide {G.n}")
    return _pi_rep(G, d)


@lru_cache(maxsize=None)
def _pi_rep(G, d):
    return decompose_class_function(G, _induced_trivial_values(G, d))


def b_eigen_exponents(vc, t=1):
    """Multiset {exponent mod n: multiplicity} of eigenvalues of vc(b^t)."""
    G = vc.group
    out = {}
    for rep, mult in vc.terms.items():
        for j in range(rep.x):
            a = rep.e * t * pow(G.k, j, G.n) % G.n
            out[a] = out.get(a, 0) + mult
    return out


def _poly_from_roots(n, exponents):
    """Coefficients (low to high, CycNum) of prod (X - zeta_n^a)."""
    coeffs = [CycNum.rational(1, n)]
    for a in exponents:
        z = zeta(n, a)
        shifted = [CycNum.rational(0, n)] + coeffs
        coeffs = [shifted[i] - (z * coeffs[i] if i < len(coeffs) else 0) for i in range(len(shifted))]
    return coeffs


def char_poly_at_b(vc, t=1):
    """Characteristic polynomial of vc(b^t) as an IntPoly, or None if not rational.

    The eigenvalues are split into layers {a : mult(a) >= j}; a product of
    linear factors over roots of unity is rational exactly when every layer
    is, since a Galois-stable multiset has Galois-stable layers.
    """
    eig = b_eigen_exponents(vc, t)
    if any(m < 0 for m in eig.values()):
        raise ValueError("characteristic polynomial of a virtual character")
    n = vc.group.n
    out = IntPoly([1])
    level = 1
    while True:
        layer = sorted(a for a, m in eig.items() if m >= level)
        if not layer:
            return out
        coeffs = [is_rational(c) for c in _poly_from_roots(n, layer)]
        if any(c is None or c.denominator != 1 for c in coeffs):
            return None
        out = out * IntPoly([int(c) for c in coeffs])
        level += 1


# ---------------------------------------------------------------------------
# twisting off the centre


@dataclass(frozen=True)
class TwistFactor:
    """lambda = lambda0 (x) phi with phi(b) = 1 and phi(c) = exp(2 pi i * phi_c)."""

    lambda0: IrrepDescriptor
    phi_c: Fraction
    scalar: Fraction

    @property
    def phi_c_value(self):
        return zeta(self.phi_c.denominator, self.phi_c.numerator)

    @property
    def scalar_value(self):
        return zeta(self.scalar.denominator, self.scalar.numerator)


def factor_one_dim_twist(n, k, e, psi2):
    """Split an irreducible of B x| C (C infinite) into an H-rep and a twist.

    The representation is induced from xi = zeta_n^e on B and the value
    exp(2 pi i * psi2) of c^x on the inducing line; psi2 is any rational.
    c^s then acts by the scalar exp(2 pi i * psi2 * s / x).  The s-th root
    of that scalar with the smallest nonnegative exponent is taken for phi(c).
    """
    G = MetacyclicGroup(n, k)
    e %= G.n
    x = mult_order(G.k, exponent_order(G, e))
    psi2 = Fraction(psi2) % 1
    scalar = (psi2 * G.s / x) % 1
    phi_c = scalar / G.s
    rest = (psi2 - x * phi_c) % 1
    w = rest * (2 * G.s // x)
    assert w.denominator == 1
    return TwistFactor(descriptor(G, e, int(w)), phi_c, scalar)
