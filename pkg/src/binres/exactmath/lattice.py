"""Integer matrices and lattice linear algebra (column echelon form, kernels, solving)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import SingularMatrix


@dataclass(frozen=True)
class IntegerMatrix:
    rows: Tuple[Tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntegerMatrix":
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int | None = None) -> "IntegerMatrix":
        cols = [tuple(int(v) for v in c) for c in cols]
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def col(self, j: int) -> Tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    @property
    def columns(self) -> List[Tuple[int, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "IntegerMatrix":
        return IntegerMatrix.from_rows(self.columns, self.nrows)

    def submatrix_columns(self, idx: Sequence[int]) -> "IntegerMatrix":
        return IntegerMatrix.from_columns([self.col(j) for j in idx], self.nrows)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = [self.apply(c) for c in other.columns]
            return IntegerMatrix.from_columns(cols, self.nrows)
        return self.apply(other)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * v for a, v in zip(r, vec)) for r in self.rows)

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.rows]


def _as_rows(M) -> List[List[int]]:
    if isinstance(M, IntegerMatrix):
        return M.tolist()
    return [list(map(int, r)) for r in M]


def rank(M) -> int:
    """Rank over Q; rows may hold ints or Fractions."""
    src = M.tolist() if isinstance(M, IntegerMatrix) else M
    rows = [[Fraction(v) for v in r] for r in src]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk]
        for i in range(len(rows)):
            if i != rk and rows[i][c]:
                f = rows[i][c] / p[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], p)]
        rk += 1
        if rk == len(rows):
            break
    return rk


def vectors_rank(vectors: Sequence[Sequence[int]], dim: int) -> int:
    """Rank of a family of column vectors living in Z^dim."""
    if not vectors or dim == 0:
        return 0
    return rank([list(v) for v in vectors])


def det(M) -> int:
    """Signed determinant by fraction-free Bareiss elimination."""
    a = _as_rows(M)
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
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
    return sign * a[n - 1][n - 1]


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def column_echelon(M) -> Tuple[List[List[int]], List[List[int]], int]:
    """Return (H, U, r) with M U = H, U unimodular and H in lower column echelon form.

    The first ``r`` columns of H carry the pivots; the remaining columns are zero,
    so the last columns of U form a Z-basis of the integer kernel of M.
    """
    H = _as_rows(M)
    nr = len(H)
    nc = len(H[0]) if H else (M.ncols if isinstance(M, IntegerMatrix) else 0)
    U = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def colop(p: int, j: int, s: int, t: int, u: int, v: int) -> None:
        # (col_p, col_j) <- (s col_p + t col_j, u col_p + v col_j)
        for mat in (H, U):
            for row in mat:
                cp, cj = row[p], row[j]
                row[p] = s * cp + t * cj
                row[j] = u * cp + v * cj

    piv = 0
    for i in range(nr):
        if piv == nc:
            break
        for j in range(piv + 1, nc):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][piv]
            g, s, t = _xgcd(a, b)
            colop(piv, j, s, t, -b // g, a // g)
        if H[i][piv] != 0:
            if H[i][piv] < 0:
                for mat in (H, U):
                    for row in mat:
                        row[piv] = -row[piv]
            # reduce earlier pivot columns' entries in this row for a canonical-ish form
            for k in range(piv):
                q = H[i][k] // H[i][piv]
                if q:
                    colop(k, piv, 1, -q, 0, 1)
            piv += 1
    return H, U, piv


def lattice_kernel(M) -> IntegerMatrix:
    """Columns form a Z-basis of {u in Z^cols : M u = 0}."""
    H, U, r = column_echelon(M)
    nc = len(U)
    cols = [[U[i][j] for i in range(nc)] for j in range(r, nc)]
    return IntegerMatrix.from_columns(cols, nc)


def solve_rational(M, b: Sequence) -> Tuple[Fraction, ...]:
    """Unique rational solution of the square system M x = b."""
    a = [[Fraction(v) for v in r] + [Fraction(bb)] for r, bb in zip(_as_rows(M), b)]
    n = len(a)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [v / p for v in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(r[n] for r in a)


def solve_in_lattice(M_I, gamma: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Integer nu with M_I nu = gamma, or None when the rational solution is not integral."""
    nu = solve_rational(M_I, gamma)
    if all(v.denominator == 1 for v in nu):
        return tuple(int(v) for v in nu)
    return None


def integer_solution(A, b: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Some integer v with A v = b (A of any shape), or None if there is none."""
    H, U, r = column_echelon(A)
    nr = len(H)
    nc = len(U)
    y = [0] * nc
    k = 0
    for i in range(nr):
        partial = sum(H[i][j] * y[j] for j in range(k))
        if k < r and H[i][k] != 0:
            q, rem = divmod(b[i] - partial, H[i][k])
            if rem:
                return None
            y[k] = q
            k += 1
        elif partial != b[i]:
            return None
    return tuple(sum(U[i][j] * y[j] for j in range(nc)) for i in range(nc))


class KernelCoordinates:
    """Maps lattice vectors u = B lam back to coordinates lam (B of full column rank)."""

    def __init__(self, B: IntegerMatrix):
        self.B = B
        m = B.ncols
        self.rows_used: List[int] = []
        chosen: List[Tuple[int, ...]] = []
        for i, row in enumerate(B.rows):
            if rank(chosen + [row]) > len(chosen):
                chosen.append(row)
                self.rows_used.append(i)
            if len(chosen) == m:
                break
        if len(chosen) != m:
            raise ValueError("kernel basis is not of full column rank")
        self._square = chosen

    def __call__(self, u: Sequence[int]) -> Optional[Tuple[int, ...]]:
        if self.B.ncols == 0:
            return () if not any(u) else None
        lam = solve_rational(self._square, [u[i] for i in self.rows_used])
        if any(v.denominator != 1 for v in lam):
            return None
        lam = tuple(int(v) for v in lam)
        if self.B.apply(lam) != tuple(u):
            return None
        return lam
