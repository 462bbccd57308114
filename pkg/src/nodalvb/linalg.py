"""Exact rational linear algebra: just enough for the morphism oracle.

Matrices are dense lists of lists of ``Fraction``; vectors are lists.
Everything is over Q — no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def copy(a: Matrix) -> Matrix:
    return [row[:] for row in a]


def shape(a: Matrix) -> tuple:
    return (len(a), len(a[0]) if a else 0)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch: {ra}x{ca} * {rb}x{cb}")
    out = zeros(ra, cb)
    for i in range(ra):
        arow = a[i]
        orow = out[i]
        for k in range(ca):
            aik = arow[k]
            if aik == 0:
                continue
            brow = b[k]
            for j in range(cb):
                if brow[j] != 0:
                    orow[j] += aik * brow[j]
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c: Fraction, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and all(ra == rb for ra, rb in zip(a, b))


def rref(a: Matrix) -> tuple:
    """Reduced row echelon form (copy) and the list of pivot columns."""
    m = copy(a)
    rows, cols = shape(m)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, cols: int) -> list:
    """Basis of the right kernel of ``a`` (``cols`` columns, may have 0 rows)."""
    if not a:
        return [unit_vector(cols, j) for j in range(cols)]
    red, pivots = rref(a)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [ZERO] * cols
        v[j] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][j]
        basis.append(v)
    return basis


def unit_vector(n: int, j: int) -> list:
    v = [ZERO] * n
    v[j] = ONE
    return v


def det(a: Matrix) -> Fraction:
    rows, cols = shape(a)
    if rows != cols:
        raise ValueError("determinant of a non-square matrix")
    if rows == 0:
        return ONE
    m = copy(a)
    d = ONE
    for c in range(rows):
        p = next((i for i in range(c, rows) if m[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        inv = ONE / m[c][c]
        for i in range(c + 1, rows):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def is_invertible(a: Matrix) -> bool:
    rows, cols = shape(a)
    return rows == cols and (rows == 0 or det(a) != 0)


def inverse(a: Matrix) -> Matrix:
    rows, cols = shape(a)
    if rows != cols:
        raise ValueError("inverse of a non-square matrix")
    aug = [row[:] + unit_vector(rows, i) for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots != list(range(rows)):
        raise ValueError("matrix is singular")
    return [row[rows:] for row in red]


class SpanSolver:
    """Expresses vectors in the span of a fixed basis (each a flat list)."""

    def __init__(self, basis: list):
        self.basis = basis
        self.dim = len(basis)
        self.ncols = len(basis[0]) if basis else 0
        # Row-reduce the basis once; remember which original combination
        # produces each reduced row so coordinates can be read off.
        aug = [list(v) + unit_vector(self.dim, i) for i, v in enumerate(basis)]
        red, _ = rref(aug)
        self.reduced = []
        for row in red:
            if any(x != 0 for x in row[: self.ncols]):
                lead = next(j for j in range(self.ncols) if row[j] != 0)
                self.reduced.append((lead, row[: self.ncols], row[self.ncols :]))

    def coordinates(self, v: list) -> list:
        """Coordinates of ``v`` in the original basis, or None if outside."""
        residue = list(v)
        coeffs = [ZERO] * self.dim
        for lead, row, combo in self.reduced:
            if residue[lead] != 0:
                f = residue[lead] / row[lead]
                residue = [x - f * y for x, y in zip(residue, row)]
                coeffs = [c + f * k for c, k in zip(coeffs, combo)]
        if any(x != 0 for x in residue):
            return None
        return coeffs
