"""Pivot bases for subgroups of Z^r.

Matrices are lists of integer rows.  Column indices reported in ``pivots``
are 1-based.
"""
from dataclasses import dataclass

from .errors import DimensionMismatch, RankDeficient


def as_matrix(rows):
    rows = [[int(x) for x in row] for row in rows]
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("rows of unequal length")
    return rows


def _ncols(rows):
    return len(rows[0]) if rows else 0


@dataclass
class PivotBasis:
    basis: list
    pivots: tuple

    @property
    def rank(self):
        return len(self.basis)

    def check(self):
        cols = [p - 1 for p in self.pivots]
        if len(cols) != len(self.basis) or any(a >= b for a, b in zip(cols, cols[1:])):
            raise AssertionError("pivots are not strictly increasing")
        for i, c in enumerate(cols):
            if self.basis[i][c] == 0:
                raise AssertionError(f"zero pivot in row {i + 1}")
            if any(self.basis[l][c] for l in range(i + 1, len(cols))):
                raise AssertionError(f"nonzero entry below pivot in column {c + 1}")
        return True


def _sweep(rows, track=False):
    """Greedy left-to-right Euclidean echelon sweep.

    Returns (echelon rows, 0-based pivot columns, transform) where the
    transform T satisfies T * rows = echelon, zero rows last.
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    T = [[int(i == j) for j in range(m)] for i in range(m)] if track else None

    def swap(i, j):
        rows[i], rows[j] = rows[j], rows[i]
        if track:
            T[i], T[j] = T[j], T[i]

    def addmul(dst, src, q):
        rows[dst] = [a - q * b for a, b in zip(rows[dst], rows[src])]
        if track:
            T[dst] = [a - q * b for a, b in zip(T[dst], T[src])]

    def negate(i):
        rows[i] = [-a for a in rows[i]]
        if track:
            T[i] = [-a for a in T[i]]

    top, pivots = 0, []
    for col in range(_ncols(rows)):
        if top == m:
            break
        while True:
            live = [i for i in range(top, m) if rows[i][col]]
            if not live:
                break
            piv = min(live, key=lambda i: (abs(rows[i][col]), i))
            for i in live:
                if i != piv:
                    addmul(i, piv, rows[i][col] // rows[piv][col])
            if len(live) == 1 or all(rows[i][col] == 0 for i in live if i != piv):
                if piv != top:
                    swap(piv, top)
                break
        if rows[top][col] == 0:
            continue
        if rows[top][col] < 0:
            negate(top)
        pivots.append(col)
        top += 1
    return rows, pivots, T


def triangular_basis(gens) -> PivotBasis:
    rows = as_matrix(gens)
    echelon, pivots, _ = _sweep(rows)
    basis = echelon[: len(pivots)]
    return PivotBasis(basis, tuple(p + 1 for p in pivots))


def rank(gens) -> int:
    return len(triangular_basis(gens).pivots)


def hnf(gens):
    """Canonical row Hermite normal form (zero rows dropped).

    Built by a column-by-column gcd elimination on the full row set, then
    entries above each pivot are reduced into [0, pivot).
    """
    rows = [r for r in as_matrix(gens) if any(r)]
    out, col, ncols = [], 0, _ncols(rows)
    while rows and col < ncols:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            head = nz[0]
            nz = [head] + [
                r for r in ([a - (r[col] // head[col]) * b for a, b in zip(r, head)] for r in nz[1:])
                if any(r)
            ]
            rest += [r for r in nz[1:] if not r[col]]
            nz = [r for r in nz if r[col]]
        head = nz[0]
        if head[col] < 0:
            head = [-a for a in head]
        out.append((col, head))
        rows = rest
        col += 1
    for i, (c, row) in enumerate(out):
        for j in range(i):
            cj, above = out[j]
            q = above[c] // row[c]
            if q:
                out[j] = (cj, [a - q * b for a, b in zip(above, row)])
    return [row for _, row in out]


def same_lattice(a, b) -> bool:
    return hnf(a) == hnf(b)


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def det(a) -> int:
    """Exact integer determinant by fraction-free Bareiss elimination."""
    a = [list(r) for r in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def unit_pivot_change_of_basis(valuations):
    """Unimodular D with D * valuations in pivot form.

    Rows are valuation vectors of a basis of a discrete subgroup of
    (K^x)^r, so they must be linearly independent.
    """
    rows = as_matrix(valuations)
    echelon, pivots, D = _sweep(rows, track=True)
    if len(pivots) < len(rows):
        raise RankDeficient(f"row rank {len(pivots)} < {len(rows)}")
    return D, PivotBasis(echelon, tuple(p + 1 for p in pivots))
