"""Dense arbitrary-precision integer matrices and Smith normal form.

Everything in this package is exact: entries are Python ints, there is no
floating point anywhere. The Smith normal form is the homology backend for
the whole artifact (chain complexes of handle decompositions, linking
matrices of surgery presentations).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple


class IntMatrix:
    """A rows x cols matrix of Python ints, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence[int]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[0] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("ragged data")
            self.data = [[int(x) for x in row] for row in data]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return cls(n, m, rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, self.data)

    def __getitem__(self, rc: Tuple[int, int]) -> int:
        return self.data[rc[0]][rc[1]]

    def __setitem__(self, rc: Tuple[int, int], v: int) -> None:
        self.data[rc[0]][rc[1]] = int(v)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.data})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [[self.data[r][c] for r in range(self.rows)] for c in range(self.cols)])

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = IntMatrix(self.rows, other.cols)
        for i in range(self.rows):
            ai = self.data[i]
            oi = out.data[i]
            for k in range(self.cols):
                a = ai[k]
                if a:
                    bk = other.data[k]
                    for j in range(other.cols):
                        oi[j] += a * bk[j]
        return out

    def column(self, j: int) -> List[int]:
        return [self.data[i][j] for i in range(self.rows)]

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.data[i][j] == self.data[j][i] for i in range(self.rows) for j in range(i))


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors d_1 | d_2 | ... | d_r plus the count of zero diagonal slots.

    factors are positive and form a divisibility chain; zero_count is
    min(rows, cols) - r. coker(m) = Z^(rows - r) + sum of Z/d_k.
    """

    factors: Tuple[int, ...]
    zero_count: int

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")
        if any(f <= 0 for f in self.factors):
            raise ValueError("invariant factors must be positive")


def _find_pivot(a: IntMatrix, k: int) -> Tuple[int, int] | None:
    # smallest nonzero absolute value; ties to lowest (row, col)
    best = None
    for i in range(k, a.rows):
        for j in range(k, a.cols):
            v = a.data[i][j]
            if v:
                key = (abs(v), i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
    if best is None:
        return None
    return best[1], best[2]


def smith_normal_form(m: IntMatrix, transforms: bool = False):
    """Smith normal form of m.

    Returns SnfResult, or (SnfResult, U, V) with U*m*V diagonal and
    U, V unimodular when transforms is True. Pivoting is deterministic:
    smallest nonzero absolute value, ties by lowest (row, col).
    """
    a = m.copy()
    u = IntMatrix.identity(a.rows) if transforms else None
    v = IntMatrix.identity(a.cols) if transforms else None

    def swap_rows(i, j):
        if i != j:
            a.data[i], a.data[j] = a.data[j], a.data[i]
            if u is not None:
                u.data[i], u.data[j] = u.data[j], u.data[i]

    def swap_cols(i, j):
        if i != j:
            for row in a.data:
                row[i], row[j] = row[j], row[i]
            if v is not None:
                for row in v.data:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        ad, asr = a.data[dst], a.data[src]
        for j in range(a.cols):
            ad[j] += q * asr[j]
        if u is not None:
            ud, usr = u.data[dst], u.data[src]
            for j in range(u.cols):
                ud[j] += q * usr[j]

    def add_col(dst, src, q):
        for row in a.data:
            row[dst] += q * row[src]
        if v is not None:
            for row in v.data:
                row[dst] += q * row[src]

    def negate_row(i):
        a.data[i] = [-x for x in a.data[i]]
        if u is not None:
            u.data[i] = [-x for x in u.data[i]]

    n = min(a.rows, a.cols)
    k = 0
    while k < n:
        p = _find_pivot(a, k)
        if p is None:
            break
        swap_rows(k, p[0])
        swap_cols(k, p[1])
        # clear row and column k, restarting whenever a remainder survives
        while True:
            pivot = a.data[k][k]
            dirty = False
            for i in range(k + 1, a.rows):
                if a.data[i][k]:
                    q = a.data[i][k] // pivot
                    add_row(i, k, -q)
                    if a.data[i][k]:
                        dirty = True
            for j in range(k + 1, a.cols):
                if a.data[k][j]:
                    q = a.data[k][j] // pivot
                    add_col(j, k, -q)
                    if a.data[k][j]:
                        dirty = True
            if dirty:
                p = _find_pivot(a, k)
                swap_rows(k, p[0])
                swap_cols(k, p[1])
                continue
            # divisibility sweep: pivot must divide the rest of the block
            bad = None
            for i in range(k + 1, a.rows):
                for j in range(k + 1, a.cols):
                    if a.data[i][j] % pivot != 0:
                        bad = (i, j)
                        break
                if bad:
                    break
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if a.data[k][k] < 0:
            negate_row(k)
        k += 1

    factors = tuple(a.data[i][i] for i in range(k) if a.data[i][i])
    res = SnfResult(factors=factors, zero_count=n - len(factors))
    if transforms:
        return res, u, v
    return res


def cokernel(m: IntMatrix) -> Tuple[int, Tuple[int, ...]]:
    """coker(m: Z^cols -> Z^rows) as (free rank, torsion factors > 1)."""
    s = smith_normal_form(m)
    free = m.rows - len(s.factors)
    torsion = tuple(f for f in s.factors if f > 1)
    return free, torsion


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of ker(m: Z^cols -> Z^rows)."""
    res, u, v = smith_normal_form(m, transforms=True)
    r = len(res.factors)
    # U m V = D, so the last cols - r columns of V span the kernel
    cols = []
    for j in range(r, m.cols):
        cols.append([v.data[i][j] for i in range(m.cols)])
    out = IntMatrix(m.cols, len(cols))
    for j, col in enumerate(cols):
        for i in range(m.cols):
            out.data[i][j] = col[i]
    return out


def solve_exact(a: IntMatrix, b: List[int]) -> List[int]:
    """Solve a x = b over Z; a must have full column rank. Raises if unsolvable."""
    res, u, v = smith_normal_form(a, transforms=True)
    if res.zero_count or len(res.factors) != a.cols:
        raise ValueError("matrix does not have full column rank")
    ub = [sum(u.data[i][k] * b[k] for k in range(a.rows)) for i in range(a.rows)]
    y = []
    for i, d in enumerate(res.factors):
        if ub[i] % d != 0:
            raise ValueError("no integral solution")
        y.append(ub[i] // d)
    for i in range(len(res.factors), a.rows):
        if ub[i] != 0:
            raise ValueError("no solution")
    return [sum(v.data[i][k] * y[k] for k in range(len(y))) for i in range(a.cols)]


def homology(d_in: IntMatrix, d_out: IntMatrix) -> Tuple[int, Tuple[int, ...]]:
    """ker(d_out) / im(d_in) as (free rank, torsion), for d_out ∘ d_in = 0.

    d_in: C_{k+1} -> C_k, d_out: C_k -> C_{k-1}; both over the same C_k.
    """
    if d_in.rows != d_out.cols:
        raise ValueError("chain group dimension mismatch")
    kb = kernel_basis(d_out)  # C_k x k
    if kb.cols == 0:
        return 0, ()
    # express each image column in the kernel basis
    coords = IntMatrix(kb.cols, d_in.cols)
    for j in range(d_in.cols):
        col = d_in.column(j)
        x = solve_exact(kb, col)
        for i in range(kb.cols):
            coords.data[i][j] = x[i]
    return cokernel(coords)


def signature_of_symmetric(m: IntMatrix) -> int:
    """Signature of a symmetric integer matrix, computed exactly over Q."""
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")
    n = m.rows
    a = [[Fraction(m.data[i][j]) for j in range(n)] for i in range(n)]
    sig = 0
    idx = list(range(n))
    k = 0
    while k < n:
        # find a nonzero diagonal pivot at or after k
        p = None
        for i in range(k, n):
            if a[i][i] != 0:
                p = i
                break
        if p is None:
            # all diagonal zero: find off-diagonal nonzero, else done
            q = None
            for i in range(k, n):
                for j in range(i + 1, n):
                    if a[i][j] != 0:
                        q = (i, j)
                        break
                if q:
                    break
            if q is None:
                break
            i, j = q
            # row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            continue
        if p != k:
            a[k], a[p] = a[p], a[k]
            for row in a:
                row[k], row[p] = row[p], row[k]
        piv = a[k][k]
        sig += 1 if piv > 0 else -1
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] / piv
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        for j in range(k + 1, n):
            a[k][j] = Fraction(0)
        k += 1
    return sig
