"""
Two chain-complex engines.

NilpotentKoszul is K^{p,q} = Lambda^p V (x) Lambda^q(Lambda^2 V) with

    d(theta (x) w_1 ... w_q) = sum_i (-1)^{i+1} (theta ^ w_i) (x) (w_1 ... w_i^ ... w_q),

of bidegree (2, -1).  Bases are p-subsets of {0..n-1} in colex order times
q-subsets of the pairs (i < j), the pairs listed lexicographically.

TorComplex is the Koszul complex of the k-invariants over F2[x1..xn]:
Lambda^q(u_1..u_r) (x) F2[x]_e with d(u_t) = kappa_t.  A generator u_t has
internal degree 2, and a Tor_q class of internal degree d is placed in
cohomological degree d - q.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import IO, Literal

from wittlab.errors import BudgetExceeded
from wittlab.exactlin import IntMatrix, invariant_factors, rank_of_rows, rank_q
from wittlab.forms import KInvariantSet
from wittlab.milnor import monomial_index, monomials, quadric_terms

__all__ = [
    "NilpotentKoszul",
    "KoszulEntry",
    "KoszulTable",
    "koszul_homology",
    "TorComplex",
    "TorTable",
    "tor_dims",
]

Coefficients = Literal["integers", "rationals", "F2"]

MAX_N = {"integers": 5, "rationals": 6, "F2": 6}


def _colex(n: int, k: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), k), key=lambda s: tuple(reversed(s)))


class NilpotentKoszul:
    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n >= 1 required")
        self.n = n
        self.pairs = list(combinations(range(n), 2))
        self.N = len(self.pairs)

    @lru_cache(maxsize=None)
    def basis(self, p: int, q: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        if not (0 <= p <= self.n and 0 <= q <= self.N):
            return ()
        return tuple((s, w) for s in _colex(self.n, p) for w in _colex(self.N, q))

    def dim(self, p: int, q: int) -> int:
        if not (0 <= p <= self.n and 0 <= q <= self.N):
            return 0
        return comb(self.n, p) * comb(self.N, q)

    @lru_cache(maxsize=None)
    def _index(self, p: int, q: int) -> dict:
        return {b: i for i, b in enumerate(self.basis(p, q))}

    def differential(self, p: int, q: int) -> IntMatrix:
        """d: K^{p,q} -> K^{p+2,q-1} as a (target x source) integer matrix."""
        src = self.basis(p, q)
        tgt_index = self._index(p + 2, q - 1)
        rows, cols = len(tgt_index), len(src)
        buf = [[0] * cols for _ in range(rows)]
        for col, (theta, omega) in enumerate(src):
            for pos, k in enumerate(omega):
                a, b = self.pairs[k]
                if a in theta or b in theta:
                    continue
                sign = -1 if pos % 2 else 1
                sign *= -1 if sum(1 for s in theta if s > a) % 2 else 1
                sign *= -1 if (sum(1 for s in theta if s > b) + (a > b)) % 2 else 1
                new_theta = tuple(sorted(theta + (a, b)))
                rest = omega[:pos] + omega[pos + 1:]
                buf[tgt_index[(new_theta, rest)]][col] += sign
        return IntMatrix.from_lists(buf, cols)

    def check_d_squared(self) -> bool:
        for p in range(self.n + 1):
            for q in range(self.N + 1):
                if self.dim(p + 4, q - 2) == 0 or self.dim(p, q) == 0:
                    continue
                if any(any(r) for r in (self.differential(p + 2, q - 1) @ self.differential(p, q)).entries):
                    return False
        return True


@dataclass(frozen=True)
class KoszulEntry:
    rank: int
    torsion: tuple[int, ...] = ()
    f2_rank: int | None = None

    @property
    def has_2_torsion(self) -> bool:
        return any(d % 2 == 0 for d in self.torsion)


@dataclass
class KoszulTable:
    n: int
    coefficients: str
    entries: dict[tuple[int, int], KoszulEntry] = field(default_factory=dict)

    def total_dims(self) -> list[int]:
        top = max((p + q for p, q in self.entries), default=0)
        out = [0] * (top + 1)
        for (p, q), e in self.entries.items():
            out[p + q] += e.rank
        return poly_strip(out)

    def torsion_bidegrees(self) -> list[tuple[int, int]]:
        return sorted(k for k, e in self.entries.items() if e.has_2_torsion)

    def write_csv(self, out: IO[str]) -> None:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["p", "q", "free_rank", "torsion"])
        for (p, q) in sorted(self.entries):
            e = self.entries[(p, q)]
            w.writerow([p, q, e.rank, " ".join(map(str, e.torsion))])


def poly_strip(xs: list[int]) -> list[int]:
    while len(xs) > 1 and xs[-1] == 0:
        xs.pop()
    return xs


def koszul_homology(
    n: int,
    coefficients: Coefficients = "rationals",
    bidegrees: list[tuple[int, int]] | None = None,
    allow_large: bool = False,
) -> KoszulTable:
    """Homology of K at each (p, q), or only at ``bidegrees`` if given.

    For integers each entry holds the free rank, the torsion invariant
    factors and the F2 rank of the same bidegree.
    """
    if coefficients not in MAX_N:
        raise ValueError(f"unknown coefficients {coefficients!r}")
    if n > MAX_N[coefficients] and not allow_large:
        raise BudgetExceeded(f"n={n} is above the {coefficients} budget of {MAX_N[coefficients]}")
    K = NilpotentKoszul(n)
    if bidegrees is None:
        bidegrees = [(p, q) for p in range(n + 1) for q in range(K.N + 1)]
    table = KoszulTable(n, coefficients)
    for p, q in bidegrees:
        dim = K.dim(p, q)
        if dim == 0:
            continue
        out = K.differential(p, q) if K.dim(p + 2, q - 1) else None
        inc = K.differential(p - 2, q + 1) if K.dim(p - 2, q + 1) else None
        if coefficients == "F2":
            r_out = rank_of_rows(out.mod2().data) if out is not None else 0
            r_in = rank_of_rows(inc.mod2().data) if inc is not None else 0
            table.entries[(p, q)] = KoszulEntry(dim - r_out - r_in)
            continue
        r_out = rank_q(out) if out is not None else 0
        if coefficients == "rationals":
            r_in = rank_q(inc) if inc is not None else 0
            table.entries[(p, q)] = KoszulEntry(dim - r_out - r_in)
            continue
        factors = invariant_factors(inc) if inc is not None else []
        f2_out = rank_of_rows(out.mod2().data) if out is not None else 0
        f2_in = rank_of_rows(inc.mod2().data) if inc is not None else 0
        table.entries[(p, q)] = KoszulEntry(
            dim - r_out - len(factors),
            tuple(d for d in factors if d > 1),
            dim - f2_out - f2_in,
        )
    return table


class TorComplex:
    """Lambda(u_1..u_r) (x) F2[x1..xn] with d(u_t) = kappa_t."""

    def __init__(self, S: KInvariantSet):
        self.S = S
        self.n = S.n
        self.r = S.r
        self._terms = [quadric_terms(q) for q in S.forms]

    def basis(self, q: int, e: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        if q < 0 or q > self.r or e < 0:
            return []
        return [(T, m) for T in _colex(self.r, q) for m in monomials(self.n, e)]

    def differential_rows(self, q: int, e: int) -> list[int]:
        """Rows of d: Lambda^q (x) S_e -> Lambda^{q-1} (x) S_{e+2}, packed over the target basis."""
        if q < 1:
            return []
        target = {T: k for k, T in enumerate(_colex(self.r, q - 1))}
        mono_idx = monomial_index(self.n, e + 2)
        width = len(mono_idx)
        rows = []
        for T in _colex(self.r, q):
            for m in monomials(self.n, e):
                w = 0
                for t in T:
                    base = target[tuple(s for s in T if s != t)] * width
                    for term in self._terms[t]:
                        w ^= 1 << (base + mono_idx[tuple(a + b for a, b in zip(m, term))])
                rows.append(w)
        return rows

    def homology(self, q: int, d: int) -> int:
        """dim Tor_q in internal degree d."""
        e = d - 2 * q
        size = comb(self.r, q) * len(monomials(self.n, e)) if 0 <= q <= self.r and e >= 0 else 0
        if size == 0:
            return 0
        r_out = rank_of_rows(self.differential_rows(q, e))
        r_in = rank_of_rows(self.differential_rows(q + 1, e - 2)) if e >= 2 and q + 1 <= self.r else 0
        return size - r_out - r_in

    def check_d_squared(self, max_e: int = 4) -> bool:
        for q in range(2, self.r + 1):
            for e in range(max_e + 1):
                upper = self.differential_rows(q, e)
                lower = self.differential_rows(q - 1, e + 2)
                for w in upper:
                    acc = 0
                    while w:
                        low = w & -w
                        acc ^= lower[low.bit_length() - 1]
                        w ^= low
                    if acc:
                        return False
        return True


@dataclass
class TorTable:
    dims: dict[tuple[int, int], int]
    series: list[int]


def tor_dims(S: KInvariantSet, cutoff: int) -> TorTable:
    """Tor_q dims per internal degree, collapsed along i = d - q for i <= cutoff."""
    cx = TorComplex(S)
    dims: dict[tuple[int, int], int] = {}
    series = [0] * (cutoff + 1)
    for i in range(cutoff + 1):
        for q in range(min(i, cx.r) + 1):
            d = i + q
            h = cx.homology(q, d)
            if h:
                dims[(q, d)] = h
            series[i] += h
    return TorTable(dims, series)
