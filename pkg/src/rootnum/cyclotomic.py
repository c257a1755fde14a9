"""Exact arithmetic in cyclotomic fields Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(phi(m)-1) of
Q[X]/(Phi_m).  Internally the coordinates are integer numerators over one
positive common denominator, which keeps the hot paths in integer arithmetic.
"""
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm

import numpy as np
from sympy import divisors as _sympy_divisors
from sympy import factorint

from .errors import NotMonic

Rat = Fraction

__all__ = [
    "Rat",
    "IntPoly",
    "CycNum",
    "cyclotomic_poly",
    "zeta",
    "is_rational",
    "char_poly_factorization",
    "totient",
    "divisors",
    "mobius",
    "mult_order",
]


# ---------------------------------------------------------------------------
# small number-theory helpers


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple:
    return tuple(int(d) for d in _sympy_divisors(n))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    out = n
    for p in factorint(n):
        out = out // p * (p - 1)
    return int(out)


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def mult_order(k: int, n: int) -> int:
    """Order of k in (Z/n)^x; n = 1 gives 1."""
    if n == 1:
        return 1
    k %= n
    if gcd(k, n) != 1:
        raise ValueError(f"{k} is not a unit mod {n}")
    x, acc = 1, k
    while acc != 1:
        acc = acc * k % n
        x += 1
    return x


# ---------------------------------------------------------------------------
# integer polynomials


class IntPoly:
    """Polynomial with integer coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x_power_minus_one(cls, n):
        return cls([-1] + [0] * (n - 1) + [1])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        return IntPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)
        )

    def __neg__(self):
        return IntPoly(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPoly(out)

    def __pow__(self, e):
        return reduce(lambda acc, _: acc * self, range(e), IntPoly([1]))

    def divmod_monic(self, divisor):
        """Quotient and remainder by a monic divisor."""
        if not divisor.is_monic():
            raise NotMonic("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPoly(), IntPoly(rem)
        quot = [0] * (len(rem) - dd)
        dc = divisor.coeffs
        for i in range(len(rem) - 1, dd - 1, -1):
            q = rem[i]
            if q:
                quot[i - dd] = q
                for j in range(dd + 1):
                    rem[i - dd + j] -= q * dc[j]
        return IntPoly(quot), IntPoly(rem[:dd])

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if mono and abs(a) == 1:
                body = mono
            else:
                body = f"{abs(a)}{'*' + mono if mono else ''}"
            sign = "-" if a < 0 else "+"
            terms.append((sign, body))
        head_sign, head = terms[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> IntPoly:
    """Phi_d, obtained by exact division of X^d - 1 by the lower Phi_e."""
    if d < 1:
        raise ValueError("d must be positive")
    p = IntPoly.x_power_minus_one(d)
    for e in divisors(d):
        if e < d:
            p, r = p.divmod_monic(cyclotomic_poly(e))
            assert r.is_zero()
    return p


def char_poly_factorization(p: IntPoly, roots_orders=None):
    """Write p as a product of cyclotomic polynomials.

    Returns a list of (d, multiplicity) sorted by d, or None when p is not
    such a product.  ``roots_orders`` restricts the candidate d; when it is
    empty or None every d with phi(d) <= deg p is tried.
    """
    if not p.is_monic():
        raise NotMonic(f"{p!r} is not monic")
    deg = p.degree
    if roots_orders:
        candidates = sorted(set(int(d) for d in roots_orders))
    else:
        # phi(d) >= sqrt(d/2) bounds the search
        candidates = [d for d in range(1, 2 * deg * deg + 3) if totient(d) <= deg]
    out = []
    for d in candidates:
        phi = cyclotomic_poly(d)
        mult = 0
        while p.degree >= phi.degree:
            q, r = p.divmod_monic(phi)
            if not r.is_zero():
                break
            p = q
            mult += 1
        if mult:
            out.append((d, mult))
    return out if p == IntPoly([1]) else None


# ---------------------------------------------------------------------------
# reduction tables


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple:
    """Row j holds the coordinates of X^j mod Phi_m for 0 <= j < m."""
    phi_poly = cyclotomic_poly(m).coeffs
    f = len(phi_poly) - 1
    rows = []
    cur = [0] * f
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(f):
                cur[i] -= top * phi_poly[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _power_matrix(m: int):
    table = np.array(_power_table(m), dtype=np.int64).reshape(m, totient(m))
    return table, int(np.abs(table).max()) if table.size else 0


def _reduce_counts(m: int, counts) -> list:
    """Coordinates of sum_j counts[j] z_m^j for an integer vector of length m."""
    table, bound = _power_matrix(m)
    arr = np.asarray(counts)
    if arr.dtype != object and arr.size:
        total = int(np.abs(arr).sum())
        if total * max(bound, 1) < 2**62:
            return [int(v) for v in arr.astype(np.int64) @ table]
    rows = _power_table(m)
    out = [0] * totient(m)
    for j, cj in enumerate(counts):
        cj = int(cj)
        if cj:
            for i, r in enumerate(rows[j]):
                if r:
                    out[i] += cj * r
    return out


# ---------------------------------------------------------------------------
# field elements


def _normalize(num, den):
    g = reduce(gcd, num, den)
    if den < 0:
        g = -g
    if g != 1:
        num = [a // g for a in num]
        den //= g
    return tuple(num), den


class CycNum:
    """Immutable element of Q(zeta_m)."""

    __slots__ = ("m", "_num", "_den", "_hash")

    def __init__(self, m: int, coeffs=None, _raw=None):
        if m < 1:
            raise ValueError("conductor must be positive")
        self.m = m
        self._hash = None
        if _raw is not None:
            self._num, self._den = _raw
            return
        f = totient(m)
        coeffs = [0] * f if coeffs is None else list(coeffs)
        if len(coeffs) != f:
            raise ValueError(f"expected {f} coordinates for conductor {m}")
        fr = [Fraction(c) for c in coeffs]
        den = reduce(lcm, (c.denominator for c in fr), 1)
        self._num, self._den = _normalize([int(c * den) for c in fr], den)

    # constructors ---------------------------------------------------------

    @classmethod
    def _make(cls, m, num, den=1):
        return cls(m, _raw=_normalize(list(num), den))

    @classmethod
    def rational(cls, value, m: int = 1):
        value = Fraction(value)
        num = [0] * totient(m)
        num[0] = value.numerator
        return cls._make(m, num, value.denominator)

    @classmethod
    def from_root_counts(cls, m: int, counts, den: int = 1):
        """sum_j counts[j] * z_m^j / den, counts indexed by exponent mod m."""
        return cls._make(m, _reduce_counts(m, counts), den)

    # views ---------------------------------------------------------------

    @property
    def coeffs(self):
        return tuple(Fraction(a, self._den) for a in self._num)

    @property
    def conductor(self):
        return self.m

    def is_zero(self):
        return not any(self._num)

    # conductor handling ---------------------------------------------------

    def embed(self, big_m: int):
        """The same number written in conductor big_m (a multiple of m)."""
        if big_m == self.m:
            return self
        if big_m % self.m:
            raise ValueError(f"{big_m} is not a multiple of {self.m}")
        step = big_m // self.m
        counts = [0] * big_m
        for j, a in enumerate(self._num):
            counts[j * step] += a
        return CycNum._make(big_m, _reduce_counts(big_m, counts), self._den)

    def _common(self, other):
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.m)
        if other.m == self.m:
            return self, other
        big = lcm(self.m, other.m)
        return self.embed(big), other.embed(big)

    def galois(self, u: int):
        """Image under z_m -> z_m^u (u a unit mod m)."""
        counts = [0] * self.m
        for j, a in enumerate(self._num):
            counts[j * u % self.m] += a
        return CycNum._make(self.m, _reduce_counts(self.m, counts), self._den)

    def reduce_conductor(self):
        """Equal element written in the smallest possible conductor."""
        m = self.m
        units = [u for u in range(1, m + 1) if gcd(u, m) == 1]
        for sub in divisors(m):
            if sub % 4 == 2 or sub == m:
                continue
            if all(self.galois(u) == self for u in units if (u - 1) % sub == 0):
                return self._solve_in(sub)
        return self

    def _solve_in(self, sub):
        f_sub = totient(sub)
        columns = [CycNum(sub, [1 if i == j else 0 for i in range(f_sub)]).embed(self.m)
                   for j in range(f_sub)]
        target = list(self.coeffs)
        rows = [[columns[j].coeffs[i] for j in range(f_sub)] + [target[i]]
                for i in range(len(target))]
        sol = _solve_rational(rows, f_sub)
        return CycNum(sub, sol)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        a, b = self._common(other)
        den = lcm(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        return CycNum._make(a.m, [x * fa + y * fb for x, y in zip(a._num, b._num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.m, _raw=(tuple(-a for a in self._num), self._den))

    def __sub__(self, other):
        return self + (-other if isinstance(other, CycNum) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycNum):
            other = Fraction(other)
            return CycNum._make(
                self.m, [a * other.numerator for a in self._num], self._den * other.denominator
            )
        a, b = self._common(other)
        m = a.m
        counts = [0] * m
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        counts[(i + j) % m] += x * y
        return CycNum._make(m, _reduce_counts(m, counts), a._den * b._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CycNum):
            return self * other.inverse()
        other = Fraction(other)
        return CycNum._make(
            self.m, [a * other.denominator for a in self._num], self._den * other.numerator
        )

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        prod = CycNum.rational(1, self.m)
        for u in range(2, self.m):
            if gcd(u, self.m) == 1:
                prod = prod * self.galois(u)
        norm = is_rational(prod * self)
        return prod / norm

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = CycNum.rational(1, self.m), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self):
        return self.galois(-1)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return is_rational(self) == other
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._common(other)
        return a._num == b._num and a._den == b._den

    def __hash__(self):
        # the normalized trace does not depend on the conductor
        if self._hash is None:
            m = self.m
            tr = Fraction(0)
            for j, a in enumerate(self._num):
                if a:
                    sub = m // gcd(j, m)
                    tr += Fraction(a * mobius(sub), totient(sub))
            self._hash = hash(tr / self._den)
        return self._hash

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if j == 0 else (f"z{self.m}" if j == 1 else f"z{self.m}^{j}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _solve_rational(rows, nvars):
    """Solve an overdetermined consistent system given as augmented rows."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(nvars):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / Fraction(rows[r][col])
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    sol = [Fraction(0)] * nvars
    for i, col in enumerate(pivots):
        sol[col] = rows[i][-1]
    return sol


def zeta(m: int, e: int = 1) -> CycNum:
    """The root of unity zeta_m^e."""
    counts = [0] * m
    counts[e % m] = 1
    return CycNum.from_root_counts(m, counts)


def is_rational(a: CycNum):
    """The rational value of a, or None when a is irrational."""
    if any(a._num[1:]):
        return None
    return Fraction(a._num[0], a._den)
