"""
Exact Poincare series: an integer numerator over a product of (1 - t^m)^k.

Denominators stay factored; expansion divides by one (1 - t^m) factor at a
time, which is a running sum with stride m.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

__all__ = [
    "PoincareSeries",
    "expand",
    "is_palindromic",
    "recover_p_from_q",
    "poly_mul",
    "poly_trim",
    "format_polynomial",
    "t_family_series",
]


def poly_trim(p: Sequence[int]) -> list[int]:
    out = list(p)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out or [0]


def poly_mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    if not p or not q:
        return [0]
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(out)


def poly_pow(p: Sequence[int], k: int) -> list[int]:
    out = [1]
    for _ in range(k):
        out = poly_mul(out, p)
    return out


@dataclass(frozen=True)
class PoincareSeries:
    """num(t) / prod_m (1 - t^m)^den[m]."""

    num: tuple[int, ...]
    den: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for m, k in self.den:
            if m < 1 or k < 0:
                raise ValueError("denominator factors must be (1 - t^m)^k with m >= 1, k >= 0")
            merged[m] = merged.get(m, 0) + k
        object.__setattr__(self, "num", tuple(poly_trim(self.num)))
        object.__setattr__(self, "den", tuple(sorted((m, k) for m, k in merged.items() if k)))

    @classmethod
    def polynomial(cls, coeffs: Iterable[int]) -> "PoincareSeries":
        return cls(tuple(coeffs))

    @classmethod
    def rational(cls, num: Iterable[int], den: Mapping[int, int] | Iterable[tuple[int, int]]) -> "PoincareSeries":
        items = den.items() if isinstance(den, Mapping) else den
        return cls(tuple(num), tuple(items))

    def expand(self, D: int) -> list[int]:
        return expand(self, D)

    def __mul__(self, other: "PoincareSeries") -> "PoincareSeries":
        return PoincareSeries(tuple(poly_mul(self.num, other.num)), self.den + other.den)

    def times_denominator(self, m: int, k: int = 1) -> "PoincareSeries":
        """Multiply by (1 - t^m)^k, cancelling a stored factor when possible."""
        den = dict(self.den)
        have = den.get(m, 0)
        cancel = min(have, k)
        den[m] = have - cancel
        num = list(self.num)
        factor = [1] + [0] * (m - 1) + [-1]
        for _ in range(k - cancel):
            num = poly_mul(num, factor)
        return PoincareSeries(tuple(num), tuple(den.items()))

    def is_polynomial(self) -> bool:
        return not self.den

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": [[m, k] for m, k in self.den]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PoincareSeries":
        return cls(tuple(data["num"]), tuple((int(m), int(k)) for m, k in data.get("den", [])))

    def __str__(self) -> str:
        top = format_polynomial(self.num)
        if not self.den:
            return top
        parts = []
        for m, k in self.den:
            base = "(1-t)" if m == 1 else f"(1-t^{m})"
            parts.append(base if k == 1 else f"{base}^{k}")
        return f"({top}) / {''.join(parts)}"


def format_polynomial(coeffs: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if i == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def expand(s: PoincareSeries, D: int) -> list[int]:
    """First D + 1 coefficients of the power series."""
    if D < 0:
        return []
    coeffs = list(s.num[: D + 1]) + [0] * max(0, D + 1 - len(s.num))
    for m, k in s.den:
        for _ in range(k):
            for i in range(m, D + 1):
                coeffs[i] += coeffs[i - m]
    return coeffs


def is_palindromic(q: Sequence[int], d: int | None = None) -> bool:
    """a_i = a_{d-i}; d defaults to the actual degree."""
    coeffs = poly_trim(q)
    if d is None:
        d = len(coeffs) - 1
    if len(coeffs) - 1 > d:
        return False
    coeffs = coeffs + [0] * (d + 1 - len(coeffs))
    return all(coeffs[i] == coeffs[d - i] for i in range(d + 1))


def recover_p_from_q(q: Sequence[int], r: int) -> PoincareSeries:
    """q(t) / (1 - t^2)^r."""
    return PoincareSeries(tuple(q), ((2, r),) if r else ())


def t_family_series(n: int, s_n: Sequence[int]) -> PoincareSeries:
    """((1-t) s_n(t) + n 2^C(n-1,2) t^(C(n,2)+1)) / ((1-t^2)^C(n,2) (1-t))."""
    r = comb(n, 2)
    num = poly_mul([1, -1], s_n)
    num = num + [0] * max(0, r + 2 - len(num))
    num[r + 1] += n * 2 ** comb(n - 1, 2)
    return PoincareSeries(tuple(num), ((1, 1), (2, r)))
