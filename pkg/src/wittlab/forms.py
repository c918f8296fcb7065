"""
Linear and quadratic forms over F2.

A quadratic form in n variables lives in the degree-2 part of F2[x1..xn],
which has n + C(n,2) monomials.  Coefficients are packed into one int in
"slot order": the squares x1^2..xn^2 first, then x_i x_j for i < j in
lexicographic order.  Squares are kept distinct from linear terms because
these are cohomology classes, not functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from wittlab.errors import BudgetExceeded, InputTooLarge, NoProductBasis
from wittlab.exactlin import rank_of_rows

__all__ = [
    "LinearForm",
    "QuadraticForm",
    "KInvariantSet",
    "slot_count",
    "pair_slots",
    "factor_quadric",
    "product_basis",
    "parse_linear",
    "parse_quadratic",
]

FACTOR_LIMIT = 16


def slot_count(n: int) -> int:
    return n + n * (n - 1) // 2


@lru_cache(maxsize=None)
def pair_slots(n: int) -> tuple[tuple[int, int], ...]:
    """Variable pairs (i, j), i < j, in slot order (0-based)."""
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: n + k for k, p in enumerate(pair_slots(n))}


@dataclass(frozen=True, order=True)
class LinearForm:
    """A linear form sum c_i x_i; bit i of ``coeffs`` is the coefficient of x_{i+1}."""

    n: int
    coeffs: int

    def __post_init__(self):
        if self.coeffs < 0 or self.coeffs >> self.n:
            raise ValueError(f"coefficients out of range for {self.n} variables")

    @classmethod
    def var(cls, n: int, i: int) -> "LinearForm":
        return cls(n, 1 << i)

    @classmethod
    def zero(cls, n: int) -> "LinearForm":
        return cls(n, 0)

    def __call__(self, a: int) -> int:
        return (self.coeffs & a).bit_count() & 1

    def __add__(self, other: "LinearForm") -> "LinearForm":
        _same_n(self, other)
        return LinearForm(self.n, self.coeffs ^ other.coeffs)

    def __mul__(self, other: "LinearForm") -> "QuadraticForm":
        _same_n(self, other)
        n = self.n
        u, v = self.coeffs, other.coeffs
        word = u & v
        idx = _pair_index(n)
        for i, j in pair_slots(n):
            if ((u >> i) & (v >> j) ^ (u >> j) & (v >> i)) & 1:
                word |= 1 << idx[(i, j)]
        return QuadraticForm(n, word)

    def square(self) -> "QuadraticForm":
        return QuadraticForm(self.n, self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def to_text(self) -> str:
        terms = [f"x{i + 1}" for i in range(self.n) if (self.coeffs >> i) & 1]
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class QuadraticForm:
    """A degree-2 class; ``coeffs`` is packed in slot order."""

    n: int
    coeffs: int

    def __post_init__(self):
        if self.coeffs < 0 or self.coeffs >> slot_count(self.n):
            raise ValueError(f"coefficients out of range for {self.n} variables")

    @classmethod
    def from_parts(cls, n: int, diag: Iterable[int], upper: Iterable[tuple[int, int]]) -> "QuadraticForm":
        """Build from the 0-based indices carrying x_i^2 and the pairs carrying x_i x_j."""
        word = 0
        for i in diag:
            word ^= 1 << i
        idx = _pair_index(n)
        for i, j in upper:
            if i == j:
                word ^= 1 << i
            else:
                word ^= 1 << idx[(min(i, j), max(i, j))]
        return cls(n, word)

    @property
    def diag(self) -> int:
        return self.coeffs & ((1 << self.n) - 1)

    @property
    def upper(self) -> frozenset[tuple[int, int]]:
        n = self.n
        return frozenset(p for k, p in enumerate(pair_slots(n)) if (self.coeffs >> (n + k)) & 1)

    def slot_tuple(self) -> tuple[int, ...]:
        return tuple((self.coeffs >> k) & 1 for k in range(slot_count(self.n)))

    def evaluate(self, a: int) -> int:
        """Value on a point of F2^n, using a_i^2 = a_i."""
        s = (self.diag & a).bit_count()
        for i, j in self.upper:
            s += (a >> i) & (a >> j) & 1
        return s & 1

    def polarize(self, a: int, b: int) -> int:
        s = 0
        for i, j in self.upper:
            s += ((a >> i) & (b >> j) ^ (a >> j) & (b >> i)) & 1
        return s & 1

    def cocycle(self, a: int, b: int) -> int:
        """Upper-triangular cocycle: sum diag_i a_i b_i + sum_{i<j} c_ij a_i b_j."""
        s = (self.diag & a & b).bit_count()
        for i, j in self.upper:
            s += (a >> i) & (b >> j) & 1
        return s & 1

    def polar_rows(self) -> list[int]:
        """Rows of the symmetric polarization matrix as bitmasks."""
        rows = [0] * self.n
        for i, j in self.upper:
            rows[i] ^= 1 << j
            rows[j] ^= 1 << i
        return rows

    def substitute(self, images: Sequence[LinearForm]) -> "QuadraticForm":
        """Apply the ring map x_i -> images[i]."""
        m = images[0].n if images else 0
        word = 0
        for i in range(self.n):
            if (self.diag >> i) & 1:
                word ^= images[i].square().coeffs
        for i, j in self.upper:
            word ^= (images[i] * images[j]).coeffs
        return QuadraticForm(m, word)

    def embed(self, m: int) -> "QuadraticForm":
        """The same polynomial viewed in m >= n variables."""
        return self.substitute([LinearForm.var(m, i) for i in range(self.n)])

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        _same_n(self, other)
        return QuadraticForm(self.n, self.coeffs ^ other.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def to_text(self) -> str:
        terms = [f"x{i + 1}*x{i + 1}" for i in range(self.n) if (self.diag >> i) & 1]
        terms += [f"x{i + 1}*x{j + 1}" for i, j in pair_slots(self.n) if (i, j) in self.upper]
        return " + ".join(terms) if terms else "0"

    def __str__(self) -> str:
        return self.to_text()


def _same_n(a, b):
    if a.n != b.n:
        raise ValueError(f"variable counts differ: {a.n} vs {b.n}")


_MONOMIAL = re.compile(r"^x(\d+)(?:\^2|\*x(\d+))?$")
_VARIABLE = re.compile(r"^x(\d+)$")


def _index(tok: str, n: int) -> int:
    i = int(tok) - 1
    if not 0 <= i < n:
        raise ValueError(f"variable x{tok} outside x1..x{n}")
    return i


def parse_quadratic(text: str, n: int) -> QuadraticForm:
    """Parse e.g. ``"x1*x1 + x2*x3"`` (also ``x1^2``); repeated terms cancel."""
    body = re.sub(r"\s+", "", text)
    if body in ("", "0"):
        return QuadraticForm(n, 0)
    word = 0
    idx = _pair_index(n)
    for term in body.split("+"):
        m = _MONOMIAL.match(term)
        if not m or (m.group(2) is None and "^" not in term):
            raise ValueError(f"cannot parse quadratic monomial {term!r}")
        i = _index(m.group(1), n)
        j = _index(m.group(2), n) if m.group(2) else i
        word ^= 1 << (i if i == j else idx[(min(i, j), max(i, j))])
    return QuadraticForm(n, word)


def parse_linear(text: str, n: int) -> LinearForm:
    body = re.sub(r"\s+", "", text)
    if body in ("", "0"):
        return LinearForm(n, 0)
    word = 0
    for term in body.split("+"):
        m = _VARIABLE.match(term)
        if not m:
            raise ValueError(f"cannot parse linear term {term!r}")
        word ^= 1 << _index(m.group(1), n)
    return LinearForm(n, word)


@dataclass(frozen=True)
class KInvariantSet:
    """An ordered, linearly independent list of quadratic forms."""

    n: int
    forms: tuple[QuadraticForm, ...]

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(self.forms))
        if self.n < 1:
            raise ValueError("need at least one variable")
        for q in self.forms:
            if q.n != self.n:
                raise ValueError("form has the wrong number of variables")
        if rank_of_rows(q.coeffs for q in self.forms) != len(self.forms):
            raise ValueError("k-invariants are linearly dependent")

    @classmethod
    def from_text(cls, n: int, forms: Iterable[str]) -> "KInvariantSet":
        return cls(n, tuple(parse_quadratic(s, n) for s in forms))

    @property
    def r(self) -> int:
        return len(self.forms)

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self) -> Iterator[QuadraticForm]:
        return iter(self.forms)

    def same_span(self, other: "KInvariantSet") -> bool:
        """Row-space equality; equal spans define isomorphic extensions."""
        if self.n != other.n or self.r != other.r:
            return False
        words = [q.coeffs for q in self.forms]
        return rank_of_rows(words + [q.coeffs for q in other.forms]) == len(words)

    def transform(self, images: Sequence[LinearForm]) -> "KInvariantSet":
        """Change of variables x_i -> images[i] (must be invertible)."""
        return KInvariantSet(images[0].n, tuple(q.substitute(images) for q in self.forms))

    def to_text(self) -> list[str]:
        return [q.to_text() for q in self.forms]


def factor_quadric(q: QuadraticForm) -> tuple[LinearForm, LinearForm] | None:
    """Write q = u v with u, v linear, or return None.

    F2[x] is a UFD, so the factors are unique up to order; the pair is
    returned with u <= v as integers (x1 is the least significant bit).
    The polarization matrix of u v is u v^T + v u^T, so it is zero when
    u = v and otherwise has rank 2 with row space spanned by u and v.
    """
    n = q.n
    if n > FACTOR_LIMIT:
        raise InputTooLarge(f"factor_quadric supports n <= {FACTOR_LIMIT}, got {n}")
    rows = q.polar_rows()
    span: set[int] = {0}
    for w in rows:
        if w and w not in span:
            span |= {w ^ s for s in span}
            if len(span) > 4:
                return None
    if len(span) == 1:
        d = LinearForm(n, q.diag)
        return (d, d)
    if len(span) != 4:
        return None
    best = None
    for u, v in combinations(sorted(s for s in span if s), 2):
        lu, lv = LinearForm(n, u), LinearForm(n, v)
        if (lu * lv).coeffs == q.coeffs and (best is None or (u, v) < best):
            best = (u, v)
    if best is None:
        return None
    return LinearForm(n, best[0]), LinearForm(n, best[1])


def _span_candidates(S: KInvariantSet, limit: int) -> Iterator[int]:
    words = [q.coeffs for q in S.forms]
    yield from words
    seen = 0
    for weight in range(2, S.r + 1):
        batch = []
        for combo in combinations(range(S.r), weight):
            seen += 1
            if seen > limit:
                raise BudgetExceeded(f"product basis search exceeded {limit} span elements")
            w = 0
            for k in combo:
                w ^= words[k]
            batch.append(w)
        n_slots = slot_count(S.n)
        # lexicographic on the slot tuple: slot 0 is the most significant
        batch.sort(key=lambda w: tuple((w >> k) & 1 for k in range(n_slots)))
        yield from batch


def product_basis(S: KInvariantSet, limit: int = 1 << 22) -> tuple[KInvariantSet, list[tuple[LinearForm, LinearForm]]]:
    """A spanning set of the same subspace made of products of linear forms.

    Candidates are tried greedily: the original forms first, then sums of
    two, three, ... originals.  Since the factorable elements of the span
    form a set whose spanning subsets are exactly detected by greedy
    independence, failure is conclusive.
    """
    chosen: list[int] = []
    pairs: list[tuple[LinearForm, LinearForm]] = []
    pivots: dict[int, int] = {}
    for w in _span_candidates(S, limit) if S.r else ():
        red = w
        while red:
            top = red.bit_length() - 1
            if top not in pivots:
                break
            red ^= pivots[top]
        if not red:
            continue
        f = factor_quadric(QuadraticForm(S.n, w))
        if f is None:
            continue
        pivots[red.bit_length() - 1] = red
        chosen.append(w)
        pairs.append(f)
        if len(chosen) == S.r:
            break
    if len(chosen) < S.r:
        raise NoProductBasis("no spanning set of products of linear forms exists in this span")
    return KInvariantSet(S.n, tuple(QuadraticForm(S.n, w) for w in chosen)), pairs
