"""
W-groups as explicit central extensions.

Elements are pairs (a, b) with a in F2^n packed as an int and b in F2^r
packed as an int whose bit t is the coordinate of the t-th k-invariant.
The group law uses the upper-triangular cocycle of each form, so that
(a, b)^2 = (0, Q(a)) and the commutator of (a, .) and (a', .) is
(0, B(a, a')) where B is the polarization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from wittlab.errors import GroupTooSmall, InputTooLarge, MixedGroups
from wittlab.forms import KInvariantSet

__all__ = ["WGroup", "WElement", "ElementaryAbelian", "multiply"]

ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class ElementaryAbelian:
    """A maximal elementary abelian subgroup: Phi together with lifts of a subspace A."""

    rank: int
    basis: tuple[int, ...]
    coset_reps: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class WGroup:
    S: KInvariantSet
    _squares: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.S.n > ENUMERATION_LIMIT:
            raise InputTooLarge(f"W-group scans support n <= {ENUMERATION_LIMIT}")
        squares = []
        for a in range(1 << self.S.n):
            word = 0
            for t, q in enumerate(self.S.forms):
                if q.evaluate(a):
                    word |= 1 << t
            squares.append(word)
        object.__setattr__(self, "_squares", tuple(squares))

    def __eq__(self, other) -> bool:
        return isinstance(other, WGroup) and self.S == other.S

    def __hash__(self) -> int:
        return hash(self.S)

    @property
    def n(self) -> int:
        return self.S.n

    @property
    def r(self) -> int:
        return self.S.r

    @property
    def order(self) -> int:
        return 1 << (self.n + self.r)

    def Q(self, a: int) -> int:
        """Square map: (a, b)^2 = (0, Q(a))."""
        return self._squares[a]

    def B(self, a: int, c: int) -> int:
        """Commutator pairing, one bit per k-invariant."""
        return self._squares[a ^ c] ^ self._squares[a] ^ self._squares[c]

    def F(self, a: int, c: int) -> int:
        word = 0
        for t, q in enumerate(self.S.forms):
            if q.cocycle(a, c):
                word |= 1 << t
        return word

    def element(self, a: int, b: int = 0) -> "WElement":
        if not (0 <= a < 1 << self.n and 0 <= b < 1 << self.r):
            raise ValueError("element coordinates out of range")
        return WElement(self, a, b)

    def identity(self) -> "WElement":
        return WElement(self, 0, 0)

    def elements(self) -> Iterator["WElement"]:
        for a in range(1 << self.n):
            for b in range(1 << self.r):
                yield WElement(self, a, b)

    def singular_vectors(self) -> list[int]:
        """Nonzero a with Q(a) = 0, i.e. cosets of Phi that contain involutions."""
        return [a for a in range(1, 1 << self.n) if self._squares[a] == 0]

    def is_2C(self) -> bool:
        """Every involution central."""
        full = 1 << self.n
        for a in self.singular_vectors():
            if any(self.B(a, c) for c in range(full)):
                return False
        return True

    def is_formally_real(self) -> bool:
        if self.n + self.r <= 1:
            raise GroupTooSmall("need |G| > 2")
        return bool(self.singular_vectors())

    def count_orderings(self) -> int:
        return len(self.singular_vectors())

    def frattini_rank(self) -> int:
        return self.r

    def maximal_elementary_abelian(self) -> list[ElementaryAbelian]:
        """All maximal elementary abelian subgroups.

        Each contains the central subgroup Phi, so they correspond to the
        maximal subspaces A of F2^n on which Q vanishes identically.  The
        rank is r + dim A.
        """
        singular = self.singular_vectors()
        found: dict[tuple[int, ...], tuple[int, ...]] = {}

        def echelon(basis: list[int]) -> tuple[int, ...]:
            rows = []
            for w in basis:
                for p in rows:
                    if w ^ p < w:
                        w ^= p
                if w:
                    rows = [p ^ w if p ^ w < p else p for p in rows]
                    rows.append(w)
            return tuple(sorted(rows, reverse=True))

        visited: set[tuple[int, ...]] = set()

        def grow(basis: list[int], span: set[int]) -> None:
            key = echelon(basis)
            if key in visited:
                return
            visited.add(key)
            extended = False
            for a in singular:
                if a in span or any(self.B(a, c) for c in basis):
                    continue
                extended = True
                grow(basis + [a], span | {a ^ s for s in span})
            if not extended:
                found[key] = tuple(sorted(span))

        grow([], {0})
        out = [
            ElementaryAbelian(self.r + len(key), key, reps)
            for key, reps in sorted(found.items())
        ]
        return out


@dataclass(frozen=True)
class WElement:
    group: WGroup
    a: int
    b: int

    def __mul__(self, other: "WElement") -> "WElement":
        return multiply(self, other)

    def inverse(self) -> "WElement":
        return WElement(self.group, self.a, self.b ^ self.group.Q(self.a))

    def __pow__(self, k: int) -> "WElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.group.identity()
        for _ in range(k):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0


def multiply(g: WElement, h: WElement) -> WElement:
    if g.group is not h.group and g.group != h.group:
        raise MixedGroups("elements belong to different W-groups")
    G = g.group
    return WElement(G, g.a ^ h.a, g.b ^ h.b ^ G.F(g.a, h.a))
