"""
Named k-invariant sets.

Families W(n), T(n) and S(n) are generated; single fields ship as JSON in
``wittlab/data``.  Wherever a field has a distinguished class of -1 it is
the variable x1.  A preset file has the keys

    name, n, forms (list of strings), minus_one (optional string), expected (dict)

with forms in the text format of :mod:`wittlab.forms`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Any, Mapping

from wittlab.errors import UnknownPreset
from wittlab.exactlin import rank_of_rows
from wittlab.forms import KInvariantSet, LinearForm, QuadraticForm, parse_linear
from wittlab.series import poly_pow

__all__ = [
    "FieldPreset",
    "get",
    "names",
    "catalog",
    "laurent_extension",
    "load_preset",
    "W_SERIES",
    "random_product_set",
    "random_invertible",
    "random_field_like",
]

W_SERIES = {
    1: [1, 1],
    2: [1, 2, 2, 1],
    3: [1, 3, 8, 12, 8, 3, 1],
    4: [1, 4, 20, 56, 84, 90, 84, 56, 20, 4, 1],
    5: [1, 5, 40, 176, 440, 835, 1423, 1980, 1980, 1423, 835, 440, 176, 40, 5, 1],
}

MAX_FAMILY_N = 10


@dataclass(frozen=True)
class FieldPreset:
    name: str
    S: KInvariantSet
    minus_one: LinearForm | None = None
    expected: Mapping[str, Any] = field(default_factory=dict)
    notes: str = ""

    @property
    def n(self) -> int:
        return self.S.n

    @property
    def r(self) -> int:
        return self.S.r

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "n": self.n, "forms": self.S.to_text()}
        if self.minus_one is not None:
            out["minus_one"] = self.minus_one.to_text()
        if self.notes:
            out["notes"] = self.notes
        out["expected"] = dict(self.expected)
        return out


def _from_dict(data: Mapping[str, Any]) -> FieldPreset:
    try:
        n = int(data["n"])
        S = KInvariantSet.from_text(n, data["forms"])
        name = str(data["name"])
    except KeyError as exc:
        raise ValueError(f"preset is missing field {exc}") from None
    m = data.get("minus_one")
    minus_one = parse_linear(m, n) if m is not None else None
    return FieldPreset(name, S, minus_one, dict(data.get("expected", {})), data.get("notes", ""))


def load_preset(source: str | Path | Mapping[str, Any]) -> FieldPreset:
    """Read a preset from a JSON file path or an already-parsed dict."""
    if isinstance(source, Mapping):
        return _from_dict(source)
    with open(source, encoding="utf-8") as fh:
        return _from_dict(json.load(fh))


def _shipped(name: str) -> FieldPreset:
    text = resources.files("wittlab").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return _from_dict(json.loads(text))


def _W(n: int) -> FieldPreset:
    forms = [QuadraticForm.from_parts(n, [i], []) for i in range(n)]
    forms += [QuadraticForm.from_parts(n, [], [p]) for p in combinations(range(n), 2)]
    expected: dict[str, Any] = {"r": n + comb(n, 2), "formally_real": False, "orderings": 0}
    expected["milnor_dims"] = [1, n, 0, 0]
    if n in W_SERIES:
        expected["quotient_series"] = W_SERIES[n]
    return FieldPreset(f"W({n})", KInvariantSet(n, tuple(forms)), None, expected,
                       "the full degree-2 subspace: every x_i^2 and x_i x_j")


def _T(n: int) -> FieldPreset:
    forms = [QuadraticForm.from_parts(n, [], [p]) for p in combinations(range(n), 2)]
    expected: dict[str, Any] = {
        "r": comb(n, 2),
        "formally_real": True,
        "orderings": n,
        "milnor_dims": [1] + [n] * 5,
        "borel_stable_value": n * 2 ** comb(n - 1, 2),
    }
    if n == 2:
        expected["borel_series"] = {"num": [1, 1], "den": [[1, 1]]}
    elif n == 3:
        expected["borel_series"] = {"num": [1, 2, 2, 1], "den": [[1, 1]]}
    elif n == 4:
        expected["borel_values"] = {"7": 32}
    return FieldPreset(f"T({n})", KInvariantSet(n, tuple(forms)), None, expected,
                       "pythagorean SAP field with n orderings; k-invariants x_i x_j, i < j")


def _S(n: int) -> FieldPreset:
    forms = [QuadraticForm.from_parts(n, [t], [(0, t)]) for t in range(1, n)]
    expected = {
        "r": n - 1,
        "formally_real": True,
        "orderings": 2 ** (n - 1),
        "borel_series": {"num": poly_pow([1, 1], n - 1), "den": [[1, 1]]},
    }
    return FieldPreset(f"S({n})", KInvariantSet(n, tuple(forms)), LinearForm.var(n, 0), expected,
                       "superpythagorean field; x1 is -1 and the k-invariants are x_t (x_t + x1)")


def laurent_extension(P: FieldPreset, minus_one: LinearForm) -> FieldPreset:
    """Pass from K to K((t)): add a variable x_{n+1} for t and the form x_{n+1}^2 + x_{n+1} * minus_one.

    ``minus_one`` is the class of -1 in K and must always be given; the
    zero form is allowed and describes a K in which -1 is a square.
    """
    n = P.n
    if minus_one.n != n:
        raise ValueError("minus_one must be a linear form in the preset's variables")
    m = n + 1
    new_var = LinearForm.var(m, n)
    lifted = LinearForm(m, minus_one.coeffs)
    forms = tuple(q.embed(m) for q in P.S.forms) + ((new_var * (new_var + lifted)),)
    expected: dict[str, Any] = {"r": P.r + 1}
    if "formally_real" in P.expected:
        expected["formally_real"] = P.expected["formally_real"]
    return FieldPreset(f"{P.name}((t))", KInvariantSet(m, forms), lifted, expected,
                       f"Laurent series over {P.name}")


_TOWER_SERIES = {3: [1, 3, 3, 1], 4: [1, 4, 6, 4, 1]}


def _tower(n: int) -> FieldPreset:
    P = _shipped("Fp")
    for _ in range(n - 1):
        P = laurent_extension(P, P.minus_one)
    expected = dict(P.expected)
    expected["formally_real"] = False
    expected["orderings"] = 0
    if n in _TOWER_SERIES:
        expected["quotient_series"] = _TOWER_SERIES[n]
    name = "Fp" + "((t))" * (n - 1)
    return FieldPreset(name, P.S, P.minus_one, expected, "iterated Laurent series over F_p, p = 3 mod 4")


def _k_laurent_w2(minus_one: LinearForm | str | None) -> FieldPreset:
    if minus_one is None:
        raise UnknownPreset("K((t)) over a field with W-group W(2) needs an explicit minus_one form")
    base = _W(2)
    if isinstance(minus_one, str):
        minus_one = parse_linear(minus_one, 2)
    P = laurent_extension(base, minus_one)
    expected = dict(P.expected)
    expected["formally_real"] = False
    expected["candidate_series"] = [1, 3, 4, 3, 1]
    return FieldPreset("W(2)((t))", P.S, P.minus_one, expected,
                       "Laurent series over a field K whose W-group is W(2); the class of -1 in K is user supplied")


FAMILIES = {"W": (_W, 1), "T": (_T, 2), "S": (_S, 2), "Fp_tower": (_tower, 1)}
SHIPPED = ("Q2", "Fp", "W2_alt")


def names() -> list[str]:
    return sorted(FAMILIES) + list(SHIPPED) + ["K_laurent_W2"]


def get(name: str, n: int | None = None, minus_one: LinearForm | str | None = None) -> FieldPreset:
    """Look up a preset by name; families take ``n``."""
    if name in FAMILIES:
        build, low = FAMILIES[name]
        if n is None or not low <= n <= MAX_FAMILY_N:
            raise UnknownPreset(f"{name} needs n in {low}..{MAX_FAMILY_N}")
        return build(n)
    if name in SHIPPED:
        return _shipped(name)
    if name == "K_laurent_W2":
        return _k_laurent_w2(minus_one)
    raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(names())}")


def catalog() -> list[FieldPreset]:
    """Every concrete preset exercised by the verification suite."""
    out = [get("W", k) for k in (1, 2, 3)]
    out += [get("T", k) for k in (2, 3, 4)]
    out += [get("S", k) for k in (2, 3, 4)]
    out += [get("Fp_tower", k) for k in (2, 3, 4)]
    out += [get(s) for s in SHIPPED]
    return out


def random_product_set(rng, n: int, r: int) -> KInvariantSet:
    """Up to r independent products u v of random nonzero linear forms."""
    forms: list[QuadraticForm] = []
    words: list[int] = []
    attempts = 0
    while len(forms) < r and attempts < 50 * r:
        attempts += 1
        u = LinearForm(n, int(rng.integers(1, 1 << n)))
        v = LinearForm(n, int(rng.integers(1, 1 << n)))
        q = u * v
        if _independent(words, q.coeffs):
            forms.append(q)
            words.append(q.coeffs)
    return KInvariantSet(n, tuple(forms))


def random_invertible(rng, n: int) -> list[LinearForm]:
    """Images of x_1..x_n under a uniformly random invertible substitution."""
    while True:
        cols = [int(rng.integers(1, 1 << n)) for _ in range(n)]
        if rank_of_rows(cols) == n:
            return [LinearForm(n, c) for c in cols]


def random_field_like(rng) -> KInvariantSet:
    """A catalog preset or a Laurent tower over one, in random coordinates."""
    base = catalog()
    P = base[int(rng.integers(len(base)))]
    for _ in range(int(rng.integers(0, 2))):
        if P.n >= 5:
            break
        m = P.minus_one if P.minus_one is not None else LinearForm(P.n, int(rng.integers(0, 1 << P.n)))
        P = laurent_extension(P, m)
    return P.S.transform(random_invertible(rng, P.n))


def _independent(words: list[int], w: int) -> bool:
    return rank_of_rows(words + [w]) == len(words) + 1
