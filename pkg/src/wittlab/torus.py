"""
The torus model: E_n acting on a product of r circles.

Coordinate t carries a pair of linear forms (u_t, v_t) with u_t v_t equal
to the t-th k-invariant.  An element g acts on that circle by

    z -> (-1)^{u(g)} z       if u(g) = v(g)
    z -> (-1)^{u(g)} conj(z) otherwise

so the four possible maps are z, conj(z), -conj(z), -z.  Fixed sets are
tracked symbolically: everything, {+1, -1}, {+i, -i}, or nothing.

Swapping u and v on a coordinate exchanges the roles of conj(z) and
-conj(z); both choices give equivariantly homeomorphic models.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from itertools import combinations

from wittlab.errors import NotFree
from wittlab.forms import KInvariantSet, LinearForm, product_basis

__all__ = [
    "Symbol",
    "Fixed",
    "CircleAction",
    "TorusModel",
    "SingularComponent",
]


class Symbol(IntEnum):
    """How an element acts on one circle; value = sign bit + 2 * conjugation bit."""

    ID = 0  # z
    NEG = 1  # -z
    CONJ = 2  # conj(z)
    NEG_CONJ = 3  # -conj(z)

    @property
    def sign(self) -> int:
        return self & 1

    @property
    def conj(self) -> int:
        return self >> 1


class Fixed(IntEnum):
    ALL = 0
    REAL = 1  # {1, -1}
    IMAG = 2  # {i, -i}
    NONE = 3


_FIXED = {Symbol.ID: Fixed.ALL, Symbol.CONJ: Fixed.REAL, Symbol.NEG_CONJ: Fixed.IMAG, Symbol.NEG: Fixed.NONE}


def _meet(a: Fixed, b: Fixed) -> Fixed:
    if a == Fixed.ALL:
        return b
    if b == Fixed.ALL:
        return a
    return a if a == b else Fixed.NONE


@dataclass(frozen=True)
class CircleAction:
    u: LinearForm
    v: LinearForm

    def symbol(self, g: int) -> Symbol:
        s = self.u(g)
        c = s ^ self.v(g)
        return Symbol(s | (c << 1))

    def fixed(self, g: int) -> Fixed:
        return _FIXED[self.symbol(g)]


@dataclass(frozen=True)
class SingularComponent:
    """Fixed set of one isotropy element: 2^points subtori of the given dimension."""

    g: int
    fixed: tuple[Fixed, ...]
    components: int
    dimension: int


@dataclass(frozen=True)
class TorusModel:
    n: int
    coords: tuple[CircleAction, ...]

    @classmethod
    def from_kinvariants(cls, S: KInvariantSet) -> "TorusModel":
        """Build from any k-invariant set by first passing to a product basis."""
        _, pairs = product_basis(S)
        return cls(S.n, tuple(CircleAction(u, v) for u, v in pairs))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "TorusModel":
        return cls(n, tuple(CircleAction(u, v) for u, v in pairs))

    @property
    def r(self) -> int:
        return len(self.coords)

    def kinvariants(self) -> KInvariantSet:
        return KInvariantSet(self.n, tuple(c.u * c.v for c in self.coords))

    def symbols(self, g: int) -> tuple[Symbol, ...]:
        return tuple(c.symbol(g) for c in self.coords)

    def fixed_symbols(self, g: int) -> tuple[Fixed, ...]:
        return tuple(c.fixed(g) for c in self.coords)

    def has_fixed_point(self, g: int) -> bool:
        return all(c.fixed(g) != Fixed.NONE for c in self.coords)

    def isotropy_elements(self) -> list[int]:
        return [g for g in range(1, 1 << self.n) if self.has_fixed_point(g)]

    def is_free(self) -> bool:
        return not self.isotropy_elements()

    def stabilizer_cyclicity_check(self) -> bool:
        """No point is fixed by two distinct nonidentity elements."""
        iso = [(g, self.fixed_symbols(g)) for g in self.isotropy_elements()]
        for (g, fg), (h, fh) in combinations(iso, 2):
            if all(_meet(a, b) != Fixed.NONE for a, b in zip(fg, fh)):
                return False
        return True

    def singular_components(self) -> list[SingularComponent]:
        out = []
        for g in self.isotropy_elements():
            fx = self.fixed_symbols(g)
            points = sum(1 for f in fx if f in (Fixed.REAL, Fixed.IMAG))
            dim = sum(1 for f in fx if f == Fixed.ALL)
            out.append(SingularComponent(g, fx, 1 << points, dim))
        return out

    def free_direct_factor(self) -> tuple[int, ...]:
        """Lexicographically first n coordinates on which E_n already acts freely."""
        if not self.is_free():
            raise NotFree("the action has isotropy")
        full = 1 << self.n
        for subset in combinations(range(self.r), self.n):
            if all(any(self.coords[t].symbol(g) == Symbol.NEG for t in subset) for g in range(1, full)):
                return subset
        raise AssertionError("free action without a free direct factor")

    def free_subgroup(self) -> list[int]:
        """Basis of a maximal subgroup acting freely, chosen greedily from 1, 2, 3, ...

        A subgroup acts freely iff it contains no isotropy element.
        """
        iso = set(self.isotropy_elements())
        span = {0}
        basis: list[int] = []
        for g in range(1, 1 << self.n):
            if g in span:
                continue
            extended = {g ^ s for s in span}
            if extended & iso:
                continue
            basis.append(g)
            span |= extended
        return basis
