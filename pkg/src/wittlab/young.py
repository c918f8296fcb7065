"""
Self-conjugate Young diagrams with p diagonal boxes and p + 2q boxes.

Such a diagram is fixed by its principal arm lengths a_1 > ... > a_p >= 0
with sum q: row i has a_i + i boxes for i <= p, and rows below the
diagonal block are read off by symmetry.  Shapes use the row convention;
the transpose convention gives the same diagrams because they are
self-conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial, prod

from wittlab.errors import BudgetExceeded

__all__ = [
    "SymmetricHookDiagram",
    "enumerate_diagrams",
    "dimension",
    "ssyt_count",
    "coefficient_lower_bound",
    "diagram_sum",
    "diagram_dimension_sum",
    "asymptotic_bound",
]

SSYT_MAX_BOXES = 10
SSYT_MAX_N = 6


@dataclass(frozen=True)
class SymmetricHookDiagram:
    arms: tuple[int, ...]

    def __post_init__(self):
        a = self.arms
        if any(x < 0 for x in a) or any(a[i] <= a[i + 1] for i in range(len(a) - 1)):
            raise ValueError("arms must be strictly decreasing and nonnegative")

    @property
    def p(self) -> int:
        return len(self.arms)

    @property
    def q(self) -> int:
        return sum(self.arms)

    @cached_property
    def shape(self) -> tuple[int, ...]:
        p = self.p
        rows = [a + i + 1 for i, a in enumerate(self.arms)]
        i = p + 1
        while True:
            length = sum(1 for j, a in enumerate(self.arms) if a + j + 1 >= i)
            if not length:
                break
            rows.append(length)
            i += 1
        return tuple(rows)

    @property
    def boxes(self) -> int:
        return sum(self.shape)

    def conjugate(self) -> tuple[int, ...]:
        shape = self.shape
        return tuple(sum(1 for r in shape if r > j) for j in range(shape[0] if shape else 0))

    def cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.shape) for j in range(r)]

    def hook(self, i: int, j: int) -> int:
        return self.shape[i] - j + self.conjugate()[j] - i - 1

    def content(self, i: int, j: int) -> int:
        return j - i


def _distinct_parts(total: int, parts: int, below: int) -> list[tuple[int, ...]]:
    """Strictly decreasing tuples of ``parts`` nonnegative ints < below summing to total."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(min(total, below - 1), -1, -1):
        # the remaining parts-1 values are at most first-1, ..., first-parts+1
        if first * parts - comb(parts, 2) < total:
            break
        for rest in _distinct_parts(total - first, parts - 1, first):
            out.append((first,) + rest)
    return out


def enumerate_diagrams(p: int, q: int) -> list[SymmetricHookDiagram]:
    """All diagrams with p diagonal boxes and arm sum q, arms in decreasing lexicographic order."""
    if p < 0 or q < 0:
        raise ValueError("p, q >= 0 required")
    return [SymmetricHookDiagram(a) for a in _distinct_parts(q, p, q + 1)]


def dimension(d: SymmetricHookDiagram, n: int) -> int:
    """Hook-content formula for dim S_lambda(F^n)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    if len(d.shape) > n:
        return 0
    value = Fraction(1)
    for i, j in d.cells():
        value *= Fraction(n + d.content(i, j), d.hook(i, j))
    if value.denominator != 1:
        raise ArithmeticError(f"hook-content product for {d.shape} is not an integer")
    return int(value)


def ssyt_count(d: SymmetricHookDiagram, n: int) -> int:
    """Count semistandard fillings with entries 1..n by direct enumeration."""
    if d.boxes > SSYT_MAX_BOXES or n > SSYT_MAX_N:
        raise BudgetExceeded("semistandard enumeration is limited to small diagrams")
    cells = d.cells()
    filling: dict[tuple[int, int], int] = {}

    def place(k: int) -> int:
        if k == len(cells):
            return 1
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        total = 0
        for x in range(lo, n + 1):
            filling[(i, j)] = x
            total += place(k + 1)
        filling.pop((i, j), None)
        return total

    return place(0)


def coefficient_lower_bound(n: int, k: int) -> int:
    """Sum of dimension(., n) over all diagrams with p + q = k."""
    if k < 0 or k > n + comb(n, 2):
        raise ValueError("k must lie in 0..n + C(n,2)")
    return diagram_sum(n, k)


def diagram_sum(n: int, k: int) -> int:
    """The same sum without the range check; it vanishes for large k."""
    if k < 0:
        raise ValueError("k >= 0 required")
    return sum(diagram_dimension_sum(n, p, k - p) for p in range(k + 1))


def diagram_dimension_sum(n: int, p: int, q: int) -> int:
    return sum(dimension(d, n) for d in enumerate_diagrams(p, q))


def asymptotic_bound(n: int, k: int) -> Fraction:
    """(n+k-1)(n+k-2)...(n-k+1) / ((2k-1) ((k-1)!)^2)."""
    if k < 1:
        raise ValueError("k >= 1 required")
    top = prod(range(n - k + 1, n + k))
    return Fraction(top, (2 * k - 1) * factorial(k - 1) ** 2)
