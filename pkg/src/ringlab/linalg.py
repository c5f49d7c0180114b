"""Exact linear algebra: echelon forms, kernels, solving, and Smith/Hermite
normal forms over the coefficient domains.

Matrices are immutable row-major tuples; all routines are pure functions.
Field routines (rref, kernel_basis, solve) require a field domain; the
integer routines (smith_normal_form, hermite and the integer solve/kernel)
require INTEGERS.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domains import Domain, ZZ, require_field
from .errors import DimensionMismatch, NonFieldDomain


@dataclass(frozen=True)
class Matrix:
    domain: Domain
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(domain: Domain, rows) -> "Matrix":
        rows = [tuple(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
        flat = tuple(x for r in rows for x in r)
        return Matrix(domain, len(rows), ncols, flat)

    @staticmethod
    def from_cols(domain: Domain, cols) -> "Matrix":
        cols = [tuple(c) for c in cols]
        nrows = len(cols[0]) if cols else 0
        return Matrix.from_rows(domain, [[c[i] for c in cols] for i in range(nrows)])

    @staticmethod
    def identity(domain: Domain, n: int) -> "Matrix":
        z, o = domain.zero(), domain.one()
        return Matrix(domain, n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))

    @staticmethod
    def zero(domain: Domain, rows: int, cols: int) -> "Matrix":
        z = domain.zero()
        return Matrix(domain, rows, cols, (z,) * (rows * cols))

    def get(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(self.domain, [self.col(j) for j in range(self.cols)])

    def is_zero(self) -> bool:
        return all(self.domain.is_zero(x) for x in self.entries)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Matrix.from_rows(
            self.domain, [self.row(i) + other.row(i) for i in range(self.rows)]
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack needs equal column counts")
        return Matrix(
            self.domain, self.rows + other.rows, self.cols, self.entries + other.entries
        )

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix.from_rows(
            self.domain, [[self.get(i, j) for j in col_idx] for i in row_idx]
        )

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        d = self.domain
        out = []
        ot = other.transpose()
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                c = ot.row(j)
                acc = d.zero()
                for x, y in zip(r, c):
                    acc = d.add(acc, d.mul(x, y))
                out.append(acc)
        return Matrix(d, self.rows, other.cols, tuple(out))

    def apply(self, vec) -> tuple:
        """Matrix times coordinate sequence."""
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector length {len(vec)} != {self.cols} columns")
        d = self.domain
        out = []
        for i in range(self.rows):
            acc = d.zero()
            for x, y in zip(self.row(i), vec):
                acc = d.add(acc, d.mul(x, y))
            out.append(acc)
        return tuple(out)

    def add(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        d = self.domain
        return Matrix(
            d, self.rows, self.cols,
            tuple(d.add(x, y) for x, y in zip(self.entries, other.entries)),
        )

    def sub(self, other: "Matrix") -> "Matrix":
        d = self.domain
        return self.add(
            Matrix(d, other.rows, other.cols, tuple(d.neg(x) for x in other.entries))
        )

    def scale(self, c) -> "Matrix":
        d = self.domain
        return Matrix(d, self.rows, self.cols, tuple(d.mul(c, x) for x in self.entries))

    def eq(self, other: "Matrix") -> bool:
        return (
            (self.rows, self.cols) == (other.rows, other.cols)
            and all(self.domain.eq(x, y) for x, y in zip(self.entries, other.entries))
        )


def vec_add(domain, a, b):
    return tuple(domain.add(x, y) for x, y in zip(a, b))


def vec_sub(domain, a, b):
    return tuple(domain.sub(x, y) for x, y in zip(a, b))


def vec_scale(domain, c, a):
    return tuple(domain.mul(c, x) for x in a)


def vec_is_zero(domain, a):
    return all(domain.is_zero(x) for x in a)


# -- field linear algebra --------------------------------------------------


def rref(m: Matrix):
    """Reduced row-echelon form over a field: (matrix, pivot columns, rank)."""
    require_field(m.domain, "rref")
    d = m.domain
    rows = m.row_list()
    pivots = []
    piv_row = 0
    for col in range(m.cols):
        sel = None
        for r in range(piv_row, m.rows):
            if not d.is_zero(rows[r][col]):
                sel = r
                break
        if sel is None:
            continue
        rows[piv_row], rows[sel] = rows[sel], rows[piv_row]
        inv = d.inv(rows[piv_row][col])
        rows[piv_row] = [d.mul(inv, x) for x in rows[piv_row]]
        for r in range(m.rows):
            if r == piv_row:
                continue
            factor = rows[r][col]
            if d.is_zero(factor):
                continue
            rows[r] = [d.sub(x, d.mul(factor, y)) for x, y in zip(rows[r], rows[piv_row])]
        pivots.append(col)
        piv_row += 1
        if piv_row == m.rows:
            break
    return Matrix.from_rows(d, rows), tuple(pivots), len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning {x : m.x = 0}, over a field; cols - rank columns."""
    reduced, pivots, rk = rref(m)
    d = m.domain
    free_cols = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for fc in free_cols:
        vec = [d.zero()] * m.cols
        vec[fc] = d.one()
        for r, pc in enumerate(pivots):
            vec[pc] = d.neg(reduced.get(r, fc))
        basis.append(vec)
    return Matrix.from_cols(d, basis) if basis else Matrix(d, m.cols, 0, ())


def solve(m: Matrix, b):
    """Particular solution of m.x = b plus a kernel basis, or None.

    b is a coordinate sequence of length m.rows.
    """
    require_field(m.domain, "solve")
    if len(b) != m.rows:
        raise DimensionMismatch(f"rhs length {len(b)} != {m.rows} rows")
    d = m.domain
    aug = m.hstack(Matrix.from_cols(d, [b]))
    reduced, pivots, _ = rref(aug)
    if m.cols in pivots:
        return None
    x = [d.zero()] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = reduced.get(r, m.cols)
    return tuple(x), kernel_basis(m)


def inverse(m: Matrix) -> Matrix:
    require_field(m.domain, "inverse")
    if m.rows != m.cols:
        raise DimensionMismatch("only square matrices invert")
    aug = m.hstack(Matrix.identity(m.domain, m.rows))
    reduced, pivots, rk = rref(aug)
    if rk < m.rows or any(p >= m.rows for p in pivots):
        raise ZeroDivisionError("matrix is singular")
    return reduced.submatrix(range(m.rows), range(m.rows, 2 * m.rows))


def column_space_basis(m: Matrix) -> Matrix:
    """Pivot columns of m: a basis of its column space."""
    _, pivots, _ = rref(m)
    return m.submatrix(range(m.rows), pivots)


def echelon_row_basis(m: Matrix) -> Matrix:
    """Nonzero rows of rref(m): the canonical basis of the row space."""
    reduced, _, rk = rref(m)
    return reduced.submatrix(range(rk), range(m.cols))


def in_column_space(m: Matrix, vec) -> bool:
    return solve(m, vec) is not None


def extend_to_basis(m: Matrix) -> Matrix:
    """Append standard basis columns to the columns of m until full rank."""
    d = m.domain
    cols = [m.col(j) for j in range(m.cols)]
    current = m
    for i in range(m.rows):
        if rank(current) == m.rows:
            break
        e = tuple(d.one() if k == i else d.zero() for k in range(m.rows))
        candidate = current.hstack(Matrix.from_cols(d, [e]))
        if rank(candidate) > rank(current):
            cols.append(e)
            current = candidate
    return Matrix.from_cols(d, cols)


# -- integer linear algebra -------------------------------------------------


def _check_int(m: Matrix, what: str):
    if m.domain != ZZ:
        raise NonFieldDomain(f"{what} requires the INTEGERS domain")


def det_int(m: Matrix) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    _check_int(m, "det_int")
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(m.row(i)) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: Matrix):
    """(U, D, V) with U.m.V = D, U and V unimodular, D diagonal with
    nonnegative d_i and d_i | d_{i+1}."""
    _check_int(m, "smith_normal_form")
    a = [list(m.row(i)) for i in range(m.rows)]
    nr, nc = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nr, nc):
        # find smallest nonzero entry in the remaining block
        pivot = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = abs(a[i][j])
                if x != 0 and (best is None or x < best):
                    best = x
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)
        # clear row and column t; restart if a remainder shrinks the pivot
        dirty = False
        for i in range(t + 1, nr):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                add_row(t, i, -q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, nc):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                add_col(t, j, -q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # force divisibility: fold any non-multiple into column t
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1

    return (
        Matrix.from_rows(ZZ, u),
        Matrix.from_rows(ZZ, a),
        Matrix.from_rows(ZZ, v),
    )


def snf_diagonal(m: Matrix):
    _, d, _ = smith_normal_form(m)
    return tuple(d.get(i, i) for i in range(min(d.rows, d.cols)))


def hermite_column_form(m: Matrix) -> Matrix:
    """Column-style Hermite normal form of the integer column lattice.

    Zero columns are dropped; pivots are positive, entries above are not
    reduced -- entries to the *right* of each pivot row are reduced into
    [0, pivot).  Canonical generators for a column lattice.
    """
    _check_int(m, "hermite_column_form")
    cols = [list(m.col(j)) for j in range(m.cols)]
    n = m.rows
    placed = 0
    for row in range(n):
        # gcd-combine columns beyond `placed` until one nonzero entry remains
        while True:
            nz = [k for k in range(placed, len(cols)) if cols[k][row] != 0]
            if not nz:
                break
            k0 = min(nz, key=lambda k: (abs(cols[k][row]), k))
            cols[placed], cols[k0] = cols[k0], cols[placed]
            clean = True
            for k in range(placed + 1, len(cols)):
                if cols[k][row] != 0:
                    q = cols[k][row] // cols[placed][row]
                    cols[k] = [x - q * y for x, y in zip(cols[k], cols[placed])]
                    if cols[k][row] != 0:
                        clean = False
            if clean:
                break
        if placed >= len(cols) or cols[placed][row] == 0:
            continue
        if cols[placed][row] < 0:
            cols[placed] = [-x for x in cols[placed]]
        # reduce earlier columns' entries on this row into [0, pivot)
        p = cols[placed][row]
        for k in range(placed):
            q = cols[k][row] // p
            if q:
                cols[k] = [x - q * y for x, y in zip(cols[k], cols[placed])]
        placed += 1
    kept = [c for c in cols if any(x != 0 for x in c)]
    if not kept:
        return Matrix(ZZ, n, 0, ())
    return Matrix.from_cols(ZZ, kept)


def kernel_basis_int(m: Matrix) -> Matrix:
    """Columns forming a lattice basis of {x in Z^cols : m.x = 0}."""
    _check_int(m, "kernel_basis_int")
    _, d, v = smith_normal_form(m)
    free = [j for j in range(m.cols) if j >= min(m.rows, m.cols) or d.get(j, j) == 0]
    if not free:
        return Matrix(ZZ, m.cols, 0, ())
    return v.submatrix(range(m.cols), free)


def solve_int(m: Matrix, b):
    """Integer solution of m.x = b plus a kernel lattice basis, or None."""
    _check_int(m, "solve_int")
    if len(b) != m.rows:
        raise DimensionMismatch(f"rhs length {len(b)} != {m.rows} rows")
    u, d, v = smith_normal_form(m)
    c = u.apply(tuple(b))
    y = [0] * m.cols
    r = min(m.rows, m.cols)
    for i in range(m.rows):
        di = d.get(i, i) if i < r else 0
        if di == 0:
            if i < len(c) and c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    x = v.apply(tuple(y))
    return tuple(x), kernel_basis_int(m)
