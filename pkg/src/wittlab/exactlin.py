"""
Exact linear algebra over F2 and the integers.

F2 matrices are stored with one Python int per row (bit j is column j), so
row operations are single XORs on arbitrary-width words.  Integer matrices
use Python ints throughout; Smith normal form never touches fixed-width
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "BitMatrix",
    "IntMatrix",
    "SNFResult",
    "rank_f2",
    "kernel_f2",
    "rank_of_rows",
    "snf",
    "invariant_factors",
    "rank_q",
    "integer_homology",
]


@dataclass(frozen=True)
class BitMatrix:
    """Dense matrix over F2 with bit-packed rows."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count does not match storage")
        mask = ~((1 << self.cols) - 1)
        for word in self.data:
            if word < 0 or word & mask:
                raise ValueError("row has bits outside the column range")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "BitMatrix":
        if cols is None:
            cols = len(entries[0]) if entries else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise ValueError("ragged rows")
            word = 0
            for j, x in enumerate(row):
                if x & 1:
                    word |= 1 << j
            data.append(word)
        return cls(len(data), cols, tuple(data))

    @classmethod
    def from_ints(cls, words: Iterable[int], cols: int) -> "BitMatrix":
        data = tuple(words)
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(w >> j) & 1 for j in range(self.cols)] for w in self.data]

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, word in enumerate(self.data):
            bit = 1 << i
            while word:
                low = word & -word
                out[low.bit_length() - 1] |= bit
                word ^= low
        return BitMatrix(self.cols, self.rows, tuple(out))

    def apply(self, v: int) -> int:
        """Return M v for a column vector v packed as an int."""
        out = 0
        for i, word in enumerate(self.data):
            if (word & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for word in self.data:
            acc = 0
            while word:
                low = word & -word
                acc ^= other.data[low.bit_length() - 1]
                word ^= low
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def rank_of_rows(words: Iterable[int]) -> int:
    """F2 rank of a collection of packed row vectors."""
    pivots: dict[int, int] = {}
    for w in words:
        while w:
            top = w.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = w
                break
            w ^= p
    return len(pivots)


def rank_f2(M: BitMatrix) -> int:
    """Dimension of the row space of M."""
    return rank_of_rows(M.data)


def _rref(words: Sequence[int]) -> tuple[list[int], list[int]]:
    rows = [w for w in words if w]
    pivots: list[int] = []
    out: list[int] = []
    for w in rows:
        for p, piv in zip(pivots, out):
            if (w >> p) & 1:
                w ^= piv
        if not w:
            continue
        low = (w & -w).bit_length() - 1
        for k, piv in enumerate(out):
            if (piv >> low) & 1:
                out[k] = piv ^ w
        pivots.append(low)
        out.append(w)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [out[k] for k in order], [pivots[k] for k in order]


def kernel_f2(M: BitMatrix) -> BitMatrix:
    """Basis of {v : M v = 0}, returned as rows."""
    reduced, pivots = _rref(M.data)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for p, row in zip(pivots, reduced):
            if (row >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return BitMatrix(len(basis), M.cols, tuple(basis))


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix stored as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in entries)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, int]]) -> "IntMatrix":
        buf = [[0] * cols for _ in range(rows)]
        for i, j, x in triplets:
            buf[i][j] += x
        return cls.from_lists(buf, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_lists([[int(i == j) for j in range(n)] for i in range(n)], n)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(r, c)) for c in cols_t] for r in self.entries]
        return IntMatrix.from_lists(out, other.cols)

    def mod2(self) -> BitMatrix:
        return BitMatrix.from_lists([[x & 1 for x in r] for r in self.entries], self.cols)

    def transpose(self) -> "IntMatrix":
        if not self.rows:
            return IntMatrix(self.cols, 0, tuple(() for _ in range(self.cols)))
        return IntMatrix.from_lists([list(c) for c in zip(*self.entries)], self.rows)


@dataclass(frozen=True)
class SNFResult:
    diagonal: list[int]
    U: IntMatrix | None = None
    V: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def snf(M: IntMatrix, transforms: bool = False) -> SNFResult:
    """Smith normal form D = U M V with d_1 | d_2 | ... and all d_i >= 0.

    The diagonal has min(rows, cols) entries.  With ``transforms`` the
    unimodular U and V are returned as well.
    """
    m, n = M.rows, M.cols
    A = [list(r) for r in M.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def row_combine(i, k, a, b, c, d):
        # rows (i, k) <- (a*ri + b*rk, c*ri + d*rk)
        for mat in (A, U) if U is not None else (A,):
            ri, rk = mat[i], mat[k]
            mat[i] = [a * x + b * y for x, y in zip(ri, rk)]
            mat[k] = [c * x + d * y for x, y in zip(ri, rk)]

    def col_combine(j, k, a, b, c, d):
        # cols (j, k) <- (a*cj + b*ck, c*cj + d*ck)
        for mat in (A, V) if V is not None else (A,):
            for r in mat:
                x, y = r[j], r[k]
                r[j] = a * x + b * y
                r[k] = c * x + d * y

    def swap_rows(i, k):
        for mat in (A, U) if U is not None else (A,):
            mat[i], mat[k] = mat[k], mat[i]

    def swap_cols(j, k):
        for mat in (A, V) if V is not None else (A,):
            for r in mat:
                r[j], r[k] = r[k], r[j]

    t = 0
    keep_pivot = False
    while t < min(m, n):
        if keep_pivot:
            best = (abs(A[t][t]), t, t)
            keep_pivot = False
        else:
            best = None
        for i in range(t, m) if best is None else ():
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for k in range(t + 1, m):
                if A[k][t]:
                    a, b = A[t][t], A[k][t]
                    if b % a == 0:
                        row_combine(t, k, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = _egcd(a, b)
                        row_combine(t, k, x, y, -b // g, a // g)
                    changed = True
            for k in range(t + 1, n):
                if A[t][k]:
                    a, b = A[t][t], A[t][k]
                    if b % a == 0:
                        col_combine(t, k, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = _egcd(a, b)
                        col_combine(t, k, x, y, -b // g, a // g)
                    changed = True
            if not changed:
                break
            if all(A[k][t] == 0 for k in range(t + 1, m)):
                break
        p = A[t][t]
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            # fold the offending row into the pivot row and redo this step
            row_combine(t, bad, 1, 1, 0, 1)
            keep_pivot = True
            continue
        if p < 0:
            for mat in (A, U) if U is not None else (A,):
                mat[t] = [-x for x in mat[t]]
        t += 1

    diag = [A[i][i] for i in range(min(m, n))]
    if not transforms:
        return SNFResult(diag)
    return SNFResult(diag, IntMatrix.from_lists(U, m), IntMatrix.from_lists(V, n))


def _sparse_rows(M: IntMatrix) -> list[dict[int, int]]:
    return [{j: x for j, x in enumerate(r) if x} for r in M.entries]


def _eliminate_units(rows: list[dict[int, int]]) -> tuple[int, list[dict[int, int]]]:
    """Pivot on +-1 entries until none remain.

    Each unit pivot contributes an invariant factor 1 and removes one row and
    one column without changing the remaining invariant factors.
    """
    rows = [r for r in rows if r]
    colidx: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            colidx.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    ones = 0
    while True:
        best = None
        for i in alive:
            r = rows[i]
            rl = len(r) - 1
            for j, x in r.items():
                if x == 1 or x == -1:
                    cost = rl * (len(colidx[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows[pi]
        pval = prow[pj]
        for k in list(colidx[pj]):
            if k == pi:
                continue
            rk = rows[k]
            f = rk[pj] * pval  # pval is a unit so pval == 1/pval
            for j, x in prow.items():
                y = rk.get(j, 0) - f * x
                if y:
                    if j not in rk:
                        colidx.setdefault(j, set()).add(k)
                    rk[j] = y
                elif j in rk:
                    del rk[j]
                    colidx[j].discard(k)
            if not rk:
                alive.discard(k)
        for j in prow:
            colidx[j].discard(pi)
        del colidx[pj]
        alive.discard(pi)
        rows[pi] = {}
        ones += 1
    return ones, [rows[i] for i in sorted(alive) if rows[i]]


def invariant_factors(M: IntMatrix) -> list[int]:
    """Nonzero invariant factors of M in divisibility order.

    Unit pivots are removed sparsely first; the dense Smith form runs only
    on what remains.
    """
    ones, rest = _eliminate_units(_sparse_rows(M))
    if not rest:
        return [1] * ones
    cols = sorted({j for r in rest for j in r})
    pos = {j: k for k, j in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for j, x in r.items():
            dense[i][pos[j]] = x
    tail = snf(IntMatrix.from_lists(dense, len(cols))).diagonal
    return [1] * ones + [d for d in tail if d]


def rank_q(M: IntMatrix) -> int:
    """Rank over the rationals by fraction-free elimination on sparse rows."""
    pivots: dict[int, dict[int, int]] = {}
    for r in M.entries:
        row = {j: x for j, x in enumerate(r) if x}
        while row:
            lead = min(row)
            p = pivots.get(lead)
            if p is None:
                g = 0
                for x in row.values():
                    g = gcd(g, x)
                pivots[lead] = {j: x // g for j, x in row.items()}
                break
            a, b = p[lead], row[lead]
            new = {}
            for j in set(row) | set(p):
                y = a * row.get(j, 0) - b * p.get(j, 0)
                if y:
                    new[j] = y
            g = 0
            for x in new.values():
                g = gcd(g, x)
            row = {j: x // g for j, x in new.items()} if g > 1 else new
    return len(pivots)


def integer_homology(outgoing: IntMatrix | None, incoming: IntMatrix | None, dim: int) -> tuple[int, list[int]]:
    """Homology ker(outgoing) / im(incoming) of a middle module Z^dim.

    Matrices act on column vectors: ``outgoing`` is (target x dim) and
    ``incoming`` is (dim x source).  Returns (free rank, torsion factors).
    Since ker(outgoing) is a saturated sublattice containing the image, the
    torsion is read off the invariant factors of ``incoming`` alone.
    """
    rank_out = rank_q(outgoing) if outgoing is not None and outgoing.rows and outgoing.cols else 0
    if incoming is not None and incoming.rows and incoming.cols:
        factors = invariant_factors(incoming)
    else:
        factors = []
    free = dim - rank_out - len(factors)
    return free, [d for d in factors if d > 1]
