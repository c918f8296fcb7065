"""
Equivariant cellular chains on the torus model and their cohomology.

Each circle gets 8 cells: vertices v_j = i^j and arcs a_j from v_j to
v_{j+1}, j = 0..3.  Every one of z, -z, conj(z), -conj(z) permutes these
cells, so the product structure on (S^1)^r is equivariant.  A product cell
is encoded in base 8, one digit per circle: digit = 4 * is_arc + j.

For free actions the quotient complex is built from orbit representatives.
For the Borel construction we first divide by a subgroup H that acts
freely (this does not change equivariant cohomology), then tensor with the
standard periodic resolution of the remaining elementary abelian group G
and pass to coinvariants.  After untwisting the diagonal action, the
coinvariant complex has F2-basis (k, y) with k a multi-index and y a cell
of X/H, and

    d(k, y) = sum_{i : k_i > 0} [(k - e_i, y) + (k - e_i, g_i y)] + sum_{y' in dy} (k, y').
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import IO, Iterable, Sequence

import numpy as np

from wittlab.errors import BudgetExceeded, NotFree
from wittlab.exactlin import rank_of_rows
from wittlab.series import PoincareSeries, poly_pow
from wittlab.torus import TorusModel

__all__ = [
    "EquivariantChainComplex",
    "CohomologySeries",
    "circle_table",
    "cell_images",
    "build_complex",
    "group_algebra_boundary",
    "quotient_cohomology",
    "borel_cohomology",
    "borel_complex",
    "singular_series_T",
    "f2_betti",
    "export_triplets",
]

DEFAULT_QUOTIENT_MAX_R = 7
DEFAULT_BOREL_BUDGET = 3_000_000


def circle_table(symbol: int) -> np.ndarray:
    """Image of each of the 8 circle cells under z -> (-1)^s conj^c(z), symbol = s + 2c."""
    s, c = symbol & 1, symbol >> 1
    out = np.empty(8, dtype=np.int64)
    for code in range(8):
        arc, j = code >> 2, code & 3
        if arc:
            jj = (-j - 1 if c else j) + 2 * s
        else:
            jj = (-j if c else j) + 2 * s
        out[code] = 4 * arc + jj % 4
    return out


_TABLES = [circle_table(s) for s in range(4)]


def cell_images(model: TorusModel, g: int, ids: np.ndarray | None = None) -> np.ndarray:
    """Image of every product cell (or of ``ids``) under g."""
    if ids is None:
        ids = np.arange(8 ** model.r, dtype=np.int64)
    out = np.zeros_like(ids)
    for t, sym in enumerate(model.symbols(g)):
        out += _TABLES[int(sym)][(ids >> (3 * t)) & 7] << (3 * t)
    return out


def cell_dims(r: int, ids: np.ndarray) -> np.ndarray:
    dim = np.zeros_like(ids)
    for t in range(r):
        dim += (ids >> (3 * t + 2)) & 1
    return dim


def cell_faces(cell: int, r: int) -> list[int]:
    """Boundary of a product cell over F2 (Leibniz rule, no signs)."""
    faces = []
    for t in range(r):
        shift = 3 * t
        code = (cell >> shift) & 7
        if code & 4:
            base = cell - (code << shift)
            j = code & 3
            faces.append(base + (j << shift))
            faces.append(base + (((j + 1) & 3) << shift))
    return faces


def _span(basis: Sequence[int]) -> list[int]:
    span = [0]
    for g in basis:
        span += [g ^ s for s in span]
    return span


@dataclass
class EquivariantChainComplex:
    """Cells of X/H with the residual action of generators g_1..g_m.

    ``cells[k]`` lists representative product-cell ids of degree k,
    ``boundary[k][i]`` the degree-(k-1) local indices in the boundary of
    cell i (with multiplicity already reduced mod 2), and
    ``action[s][k][i]`` the local index of g_s applied to cell i.
    """

    n: int
    r: int
    quotient_by: tuple[int, ...]
    generators: tuple[int, ...]
    cells: list[np.ndarray]
    boundary: list[list[list[int]]]
    action: list[list[np.ndarray]]

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    def cell_count(self) -> int:
        return sum(len(c) for c in self.cells)

    def boundary_rows(self, k: int) -> list[int]:
        return [_pack(faces) for faces in self.boundary[k]] if 0 < k <= self.top else []

    def check_d_squared(self) -> bool:
        for k in range(2, self.top + 1):
            below = self.boundary[k - 1]
            for faces in self.boundary[k]:
                acc = 0
                for f in faces:
                    acc ^= _pack(below[f])
                if acc:
                    return False
        return True


def _pack(indices: Iterable[int]) -> int:
    w = 0
    for i in indices:
        w ^= 1 << i
    return w


def build_complex(model: TorusModel, H: Sequence[int] = (), generators: Sequence[int] = ()) -> EquivariantChainComplex:
    """Cellular chains of X/H, with the action of ``generators`` on its cells.

    H must act freely; ``generators`` should commute with H (always true in
    an elementary abelian group).
    """
    r = model.r
    ids = np.arange(8 ** r, dtype=np.int64)
    span = _span(H)
    if span != [0]:
        rep = np.minimum.reduce([cell_images(model, h, ids) for h in span])
        reps = np.unique(rep)
        if len(reps) * len(span) != len(ids):
            raise NotFree("the subgroup used for the quotient has fixed cells")
        orbit = np.searchsorted(reps, rep)
    else:
        reps = ids
        orbit = ids
    dims = cell_dims(r, reps)
    local = np.empty(len(reps), dtype=np.int64)
    cells = []
    for k in range(r + 1):
        sel = np.nonzero(dims == k)[0]
        local[sel] = np.arange(len(sel))
        cells.append(reps[sel])
    boundary: list[list[list[int]]] = [[[] for _ in cells[0]]]
    for k in range(1, r + 1):
        rows = []
        for c in cells[k].tolist():
            acc = 0
            for f in cell_faces(c, r):
                acc ^= 1 << int(local[orbit[f]])
            rows.append(_unpack(acc))
        boundary.append(rows)
    action = []
    for g in generators:
        per_deg = []
        for k in range(r + 1):
            img = cell_images(model, g, cells[k])
            per_deg.append(local[orbit[img]])
        action.append(per_deg)
    return EquivariantChainComplex(model.n, r, tuple(H), tuple(generators), cells, boundary, action)


def group_algebra_boundary(model: TorusModel, k: int) -> list[dict[int, frozenset[int]]]:
    """Boundary of the free E_n-module of cellular k-chains.

    For a free action each degree-k orbit representative c has
    d(c) = sum over orbit representatives c' of (sum of h) c', where the
    inner sum runs over the group elements h with h c' a face of c.
    Returns one {target index: coefficient set} per representative.
    """
    if not model.is_free():
        raise NotFree("orbit representatives form a module basis only for free actions")
    cx = build_complex(model, [1 << i for i in range(model.n)])
    if not 0 < k <= cx.top:
        return []
    lower = cx.cells[k - 1]
    images = {int(h): cell_images(model, h, lower) for h in range(1 << model.n)}
    where = {}
    for h, img in images.items():
        for idx, cell in enumerate(img.tolist()):
            where[cell] = (idx, h)
    out = []
    for c in cx.cells[k].tolist():
        coeff: dict[int, set[int]] = {}
        for f in cell_faces(c, model.r):
            idx, h = where[f]
            coeff.setdefault(idx, set()).symmetric_difference_update({h})
        out.append({idx: frozenset(hs) for idx, hs in coeff.items() if hs})
    return out


def _unpack(w: int) -> list[int]:
    out = []
    while w:
        low = w & -w
        out.append(low.bit_length() - 1)
        w ^= low
    return out


def f2_betti(sizes: Sequence[int], boundary_rows: Sequence[Sequence[int]]) -> list[int]:
    """Betti numbers from degree sizes and packed boundary rows d_k: C_k -> C_{k-1}.

    ``boundary_rows[k]`` holds one packed row per basis element of C_k;
    index 0 is ignored.
    """
    top = len(sizes) - 1
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        ranks[k] = rank_of_rows(boundary_rows[k])
    return [sizes[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]


@dataclass(frozen=True)
class CohomologySeries:
    dims: tuple[int, ...]
    cutoff: int
    free: bool
    stable_value: int | None = None

    def __getitem__(self, i: int) -> int:
        return self.dims[i]

    def __len__(self) -> int:
        return len(self.dims)


def _quotient_budget(model: TorusModel, budget_cells: int | None) -> None:
    cells = 8 ** model.r
    if budget_cells is None:
        if model.r > DEFAULT_QUOTIENT_MAX_R:
            raise BudgetExceeded(f"quotient complex with r={model.r} exceeds the default r <= {DEFAULT_QUOTIENT_MAX_R}")
    elif cells > budget_cells:
        raise BudgetExceeded(f"{cells} cells exceed the budget of {budget_cells}")


def quotient_cohomology(model: TorusModel, budget_cells: int | None = None) -> CohomologySeries:
    """Mod-2 Betti numbers of X/E_n for a free action."""
    if not model.is_free():
        raise NotFree("quotient cohomology needs a free action")
    _quotient_budget(model, budget_cells)
    basis = [1 << i for i in range(model.n)]
    cx = build_complex(model, basis)
    sizes = [len(c) for c in cx.cells]
    dims = f2_betti(sizes, [cx.boundary_rows(k) for k in range(cx.top + 1)])
    return CohomologySeries(tuple(dims), cx.top, True, 0)


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def _complement(H: Sequence[int], n: int) -> list[int]:
    span = set(_span(H))
    out = []
    for i in range(n):
        g = 1 << i
        if g not in span:
            out.append(g)
            span |= {g ^ s for s in span}
    return out


@dataclass
class _BorelLayout:
    offsets: dict[tuple[tuple[int, ...], int], int]
    size: int


def borel_complex(cx: EquivariantChainComplex, D: int) -> tuple[list[int], list[list[int]]]:
    """Sizes and packed boundary rows of the coinvariant Borel complex in degrees 0..D."""
    m = len(cx.generators)
    top = cx.top
    layouts = []
    for d in range(D + 1):
        offsets = {}
        pos = 0
        for j in range(min(d, top) + 1):
            for k in _compositions(d - j, m):
                offsets[(k, j)] = pos
                pos += len(cx.cells[j])
        layouts.append(_BorelLayout(offsets, pos))
    rows_by_degree: list[list[int]] = [[]]
    packed_faces = [[_pack(f) for f in cx.boundary[j]] if j else [] for j in range(top + 1)]
    for d in range(1, D + 1):
        below = layouts[d - 1].offsets
        rows = []
        for (k, j), _ in sorted(layouts[d].offsets.items(), key=lambda kv: kv[1]):
            count = len(cx.cells[j])
            lowered = []
            for i in range(m):
                if k[i]:
                    kk = k[:i] + (k[i] - 1,) + k[i + 1:]
                    lowered.append((below[(kk, j)], cx.action[i][j]))
            same = below.get((k, j - 1)) if j else None
            faces = packed_faces[j]
            for y in range(count):
                w = 0
                for base, act in lowered:
                    w ^= (1 << (base + y)) ^ (1 << (base + int(act[y])))
                if same is not None:
                    w ^= faces[y] << same
                rows.append(w)
        rows_by_degree.append(rows)
    return [lay.size for lay in layouts], rows_by_degree


def _borel_cells(model: TorusModel, H: Sequence[int], D: int) -> int:
    m = model.n - len(H)
    per_degree = [comb(model.r, j) * 4 ** model.r // (1 << len(H)) for j in range(model.r + 1)]
    total = 0
    for d in range(D + 2):
        for j in range(min(d, model.r) + 1):
            total += comb(m + d - j - 1, d - j) * per_degree[j] if m else (per_degree[j] if d == j else 0)
    return total


def borel_cohomology(
    model: TorusModel,
    cutoff: int | None = None,
    reduce: bool = True,
    budget_cells: int | None = None,
) -> CohomologySeries:
    """Dimensions of H^i of the Borel construction, i = 0..cutoff.

    With ``reduce`` the computation runs over X/H for a maximal freely
    acting subgroup H; without it H is trivial and the full resolution of
    E_n is used.  Both give the same answer.
    """
    if cutoff is None:
        cutoff = model.r + model.n + 4
    H = model.free_subgroup() if reduce else []
    budget = DEFAULT_BOREL_BUDGET if budget_cells is None else budget_cells
    estimate = _borel_cells(model, H, cutoff)
    if estimate > budget:
        raise BudgetExceeded(f"Borel complex needs about {estimate} basis elements (budget {budget})")
    gens = _complement(H, model.n)
    cx = build_complex(model, H, gens)
    sizes, rows = borel_complex(cx, cutoff + 1)
    dims = f2_betti(sizes, rows)[: cutoff + 1]
    free = not gens
    stable = None
    if free:
        stable = 0
    elif cutoff > model.r:
        tail = dims[model.r + 1:]
        if len(set(tail)) == 1:
            stable = tail[0]
    return CohomologySeries(tuple(dims), cutoff, free, stable)


def singular_series_T(n: int) -> PoincareSeries:
    """n (1+t)^C(n-1,2) / (1-t)."""
    if n < 2:
        raise ValueError("n >= 2 required")
    num = [n * c for c in poly_pow([1, 1], comb(n - 1, 2))]
    return PoincareSeries(tuple(num), ((1, 1),))


def export_triplets(rows: Sequence[int], out: IO[str]) -> None:
    """Write a packed F2 matrix as 'row col 1' lines."""
    for i, w in enumerate(rows):
        for j in _unpack(w):
            out.write(f"{i} {j} 1\n")
