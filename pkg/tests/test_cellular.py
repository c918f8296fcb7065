import io

import numpy as np
import pytest

from wittlab import presets
from wittlab.cellular import (
    borel_cohomology,
    build_complex,
    cell_faces,
    circle_table,
    export_triplets,
    f2_betti,
    group_algebra_boundary,
    quotient_cohomology,
    singular_series_T,
)
from wittlab.errors import BudgetExceeded, NotFree
from wittlab.forms import LinearForm
from wittlab.milnor import graded_dims
from wittlab.series import expand, is_palindromic
from wittlab.torus import TorusModel


def model(name, n=None):
    return TorusModel.from_kinvariants(presets.get(name, n).S)


def test_circle_tables_are_cellular_involutions():
    for s in range(4):
        t = circle_table(s)
        assert sorted(t.tolist()) == list(range(8))
        assert (t[t] == np.arange(8)).all()
        # arcs go to arcs and the endpoints of an arc go to the endpoints of its image
        for code in range(4, 8):
            img = int(t[code])
            assert img >= 4
            ends = {int(t[f]) for f in cell_faces(code, 1)}
            assert ends == set(cell_faces(img, 1))


def test_full_torus_homology():
    for r in (1, 2, 3):
        M = TorusModel.from_pairs(1, [(LinearForm(1, 0), LinearForm(1, 0))] * r)
        cx = build_complex(M)
        assert cx.check_d_squared()
        sizes = [len(c) for c in cx.cells]
        from math import comb
        assert f2_betti(sizes, [cx.boundary_rows(k) for k in range(r + 1)]) == [comb(r, k) for k in range(r + 1)]


@pytest.mark.parametrize("name,n", [("W", 2), ("W", 3), ("Q2", None), ("T", 3), ("S", 3), ("W2_alt", None)])
def test_d_squared(name, n):
    M = model(name, n)
    assert build_complex(M).check_d_squared()
    H = M.free_subgroup()
    if H:
        assert build_complex(M, H).check_d_squared()


@pytest.mark.parametrize("name,n", [("W", 2), ("Q2", None), ("Fp_tower", 3)])
def test_group_algebra_d_squared(name, n):
    M = model(name, n)
    top = M.r
    for k in range(2, top + 1):
        upper = group_algebra_boundary(M, k)
        lower = group_algebra_boundary(M, k - 1)
        for coeffs in upper:
            acc: dict[int, set] = {}
            for mid, hs in coeffs.items():
                for tgt, ks in lower[mid].items():
                    for h in hs:
                        for kk in ks:
                            acc.setdefault(tgt, set()).symmetric_difference_update({h ^ kk})
            assert all(not s for s in acc.values())
    with pytest.raises(NotFree):
        group_algebra_boundary(model("T", 2), 1)


def test_quotient_series():
    assert quotient_cohomology(model("W", 2)).dims == (1, 2, 2, 1)
    assert quotient_cohomology(model("W", 3)).dims == (1, 3, 8, 12, 8, 3, 1)
    assert quotient_cohomology(model("Q2")).dims == (1, 3, 6, 6, 3, 1)
    assert quotient_cohomology(model("W2_alt")).dims == (1, 2, 2, 1)
    with pytest.raises(NotFree):
        quotient_cohomology(model("T", 3))
    with pytest.raises(BudgetExceeded):
        quotient_cohomology(model("W", 3), budget_cells=1000)


FREE_PRESETS = [P for P in presets.catalog()
                if P.n + P.r > 1 and P.r <= 6 and TorusModel.from_kinvariants(P.S).is_free()]


@pytest.mark.parametrize("P", FREE_PRESETS, ids=lambda P: P.name)
def test_free_case_structure(P):
    M = TorusModel.from_kinvariants(P.S)
    dims = list(quotient_cohomology(M).dims)
    assert sum((-1) ** i * d for i, d in enumerate(dims)) == 0
    assert is_palindromic(dims, P.r)
    assert dims[0] == 1 and dims[1] == P.n
    D = P.r + 2
    assert list(borel_cohomology(M, D).dims) == (dims + [0] * D)[: D + 1]


def test_borel_examples():
    T3 = borel_cohomology(model("T", 3), 10)
    assert list(T3.dims) == [1, 3, 5] + [6] * 8
    assert T3.stable_value == 6
    S3 = borel_cohomology(model("S", 3), 10)
    assert list(S3.dims) == [1, 3] + [4] * 9
    assert list(borel_cohomology(model("W", 2), 6).dims) == [1, 2, 2, 1, 0, 0, 0]
    assert list(borel_cohomology(model("T", 2), 8).dims) == [1] + [2] * 8


@pytest.mark.parametrize("name,n", [("T", 2), ("T", 3), ("S", 2), ("S", 3), ("W", 2), ("Fp_tower", 2)])
def test_reduction_does_not_change_answer(name, n):
    M = model(name, n)
    assert borel_cohomology(M, 7).dims == borel_cohomology(M, 7, reduce=False).dims


def test_one_circle_each_symbol():
    # n = 1 acting on a single circle by z, -z, conj z and -conj z
    expected = {
        (0, 0): [1] + [2] * 5,  # trivial action: H*(BZ/2) (x) H*(S^1)
        (1, 1): [1, 1, 0, 0, 0, 0],  # antipodal: free quotient is a circle
        (0, 1): [1] + [2] * 5,  # reflection with two fixed points
        (1, 0): [1] + [2] * 5,  # reflection through {i, -i}
    }
    for (u, v), dims in expected.items():
        M = TorusModel.from_pairs(1, [(LinearForm(1, u), LinearForm(1, v))])
        assert list(borel_cohomology(M, 5).dims) == dims


def test_untwisted_borel_against_dense_brute_force():
    # cochains of Hom_G(W (x) C(X), F2) written with a dense G-equivariance solve
    for pairs in ([(1, 1), (0, 1)], [(0, 1), (1, 0)], [(1, 1)]):
        M = TorusModel.from_pairs(1, [(LinearForm(1, u), LinearForm(1, v)) for u, v in pairs])
        assert list(borel_cohomology(M, 4, reduce=False).dims) == _dense_borel(M, 4)


def _dense_borel(M, D):
    """Borel cohomology for n = 1 from the bar-type resolution, using full (unreduced) cell sets."""
    r = M.r
    cx = build_complex(M, (), (1,))
    cells = cx.cells
    act = cx.action[0]
    # basis of degree d: pairs (k, y) with k + dim y = d and y in cells[dim y]
    def basis(d):
        return [(d - j, j, y) for j in range(min(d, r) + 1) if d - j >= 0 for y in range(len(cells[j]))]

    def boundary_matrix(d):
        src, tgt = basis(d), basis(d - 1)
        index = {b: i for i, b in enumerate(tgt)}
        mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for col, (k, j, y) in enumerate(src):
            if k:
                mat[index[(k - 1, j, y)], col] += 1
                mat[index[(k - 1, j, int(act[j][y]))], col] += 1
            if j:
                for f in cx.boundary[j][y]:
                    mat[index[(k, j - 1, f)], col] += 1
        return mat % 2

    def rank2(mat):
        m = mat.copy() % 2
        rank = 0
        rows, cols = m.shape
        for c in range(cols):
            piv = next((i for i in range(rank, rows) if m[i, c]), None)
            if piv is None:
                continue
            m[[rank, piv]] = m[[piv, rank]]
            for i in range(rows):
                if i != rank and m[i, c]:
                    m[i] ^= m[rank]
            rank += 1
        return rank

    out = []
    for d in range(D + 1):
        size = len(basis(d))
        r_out = rank2(boundary_matrix(d)) if d else 0
        r_in = rank2(boundary_matrix(d + 1))
        out.append(size - r_out - r_in)
    return out


def test_t_singular_series():
    for n in (2, 3):
        tail = expand(singular_series_T(n), 12)
        dims = borel_cohomology(model("T", n), 12).dims
        assert dims[-1] == tail[-1] == n * 2 ** ((n - 1) * (n - 2) // 2)
    assert expand(singular_series_T(4), 10)[7] == 32


@pytest.mark.parametrize("P", [P for P in presets.catalog() if P.n + P.r > 1 and P.r <= 6], ids=lambda P: P.name)
def test_milnor_below_cohomology(P):
    M = TorusModel.from_kinvariants(P.S)
    D = 6
    dims = list(borel_cohomology(M, D).dims)
    for a, b in zip(graded_dims(P.S, D), dims):
        assert a <= b
    assert dims[0] == 1 and dims[1] == P.n


def test_borel_budget():
    with pytest.raises(BudgetExceeded):
        borel_cohomology(model("T", 4), 8, budget_cells=100)


def test_export_triplets():
    buf = io.StringIO()
    export_triplets([0b101, 0b010], buf)
    assert buf.getvalue() == "0 0 1\n0 2 1\n1 1 1\n"
