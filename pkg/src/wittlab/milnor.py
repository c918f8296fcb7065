"""
Graded pieces of F2[x1..xn] / (k-invariants), degree by degree.

Everything is plain linear algebra on monomial bases; n and the degrees
involved are small enough that no Groebner machinery is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

from wittlab.errors import FormallyRealInput
from wittlab.exactlin import rank_of_rows
from wittlab.forms import KInvariantSet, LinearForm, QuadraticForm, pair_slots
from wittlab.wgroup import WGroup

__all__ = [
    "GradedQuotient",
    "monomials",
    "monomial_index",
    "quadric_terms",
    "graded_dims",
    "graded_quotient",
    "nilpotence_height",
    "level",
    "top_degree",
]

Monomial = tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[Monomial, ...]:
    """Exponent vectors of degree d in n variables, lexicographically decreasing."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[Monomial, int]:
    return {m: k for k, m in enumerate(monomials(n, d))}


def quadric_terms(q: QuadraticForm) -> list[Monomial]:
    n = q.n
    out = []
    for i in range(n):
        if (q.diag >> i) & 1:
            e = [0] * n
            e[i] = 2
            out.append(tuple(e))
    upper = q.upper
    for i, j in pair_slots(n):
        if (i, j) in upper:
            e = [0] * n
            e[i] = e[j] = 1
            out.append(tuple(e))
    return out


def _ideal_rows(S: KInvariantSet, d: int) -> list[int]:
    """Degree-d part of the ideal, as packed vectors over the monomial basis."""
    if d < 2:
        return []
    n = S.n
    idx = monomial_index(n, d)
    terms = [quadric_terms(q) for q in S.forms]
    rows = []
    for m in monomials(n, d - 2):
        for t in terms:
            w = 0
            for e in t:
                w ^= 1 << idx[tuple(x + y for x, y in zip(m, e))]
            rows.append(w)
    return rows


@dataclass(frozen=True)
class GradedQuotient:
    n: int
    I: KInvariantSet
    dims: tuple[int, ...]


def graded_dims(I: KInvariantSet, cutoff: int) -> list[int]:
    """dim of the degree-d part of the quotient ring, d = 0..cutoff."""
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    n = I.n
    return [len(monomials(n, d)) - rank_of_rows(_ideal_rows(I, d)) for d in range(cutoff + 1)]


def graded_quotient(I: KInvariantSet, cutoff: int) -> GradedQuotient:
    return GradedQuotient(I.n, I, tuple(graded_dims(I, cutoff)))


def _power(l: LinearForm, m: int) -> int:
    """l^m packed over the degree-m monomial basis."""
    n = l.n
    poly: dict[Monomial, int] = {(0,) * n: 1}
    support = [i for i in range(n) if (l.coeffs >> i) & 1]
    for _ in range(m):
        nxt: dict[Monomial, int] = {}
        for e in poly:
            for i in support:
                f = list(e)
                f[i] += 1
                f = tuple(f)
                nxt[f] = nxt.get(f, 0) ^ 1
        poly = {e: 1 for e, c in nxt.items() if c}
    idx = monomial_index(n, m)
    w = 0
    for e in poly:
        w |= 1 << idx[e]
    return w


def nilpotence_height(I: KInvariantSet, l: LinearForm, cutoff: int) -> int | None:
    """Smallest m <= cutoff with l^m = 0 in the quotient, or None."""
    for m in range(1, cutoff + 1):
        target = _power(l, m)
        rows = _ideal_rows(I, m)
        if rank_of_rows(rows + [target]) == rank_of_rows(rows):
            return m
    return None


def level(I: KInvariantSet, minus_one: LinearForm, cutoff: int) -> int | None:
    """2^(h-1) where h is the nilpotence height of the class of -1."""
    h = nilpotence_height(I, minus_one, cutoff)
    return None if h is None else 1 << (h - 1)


def top_degree(I: KInvariantSet, cutoff: int | None = None) -> int:
    """Largest d <= cutoff with a nonzero degree-d piece (non-formally-real input only)."""
    if WGroup(I).is_formally_real():
        raise FormallyRealInput("the quotient ring of a formally real input has no top degree")
    if cutoff is None:
        cutoff = I.n + 2
    dims = graded_dims(I, cutoff)
    return max(d for d, x in enumerate(dims) if x)
