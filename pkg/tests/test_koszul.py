import io
import random

import pytest

from wittlab import presets
from wittlab.errors import BudgetExceeded
from wittlab.exactlin import rank_q
from wittlab.forms import KInvariantSet, QuadraticForm
from wittlab.koszul import NilpotentKoszul, TorComplex, koszul_homology, tor_dims
from wittlab.presets import W_SERIES
from wittlab.series import is_palindromic
from wittlab.young import coefficient_lower_bound, diagram_dimension_sum


@pytest.mark.parametrize("n", [2, 3, 4])
def test_d_squared(n):
    assert NilpotentKoszul(n).check_d_squared()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rational_totals(n):
    dims = koszul_homology(n, "rationals").total_dims()
    assert dims == W_SERIES[n]
    assert is_palindromic(dims)


def test_euler_characteristic_per_total_degree():
    # alternating sum over the chain dims equals the same sum over homology, along each d-orbit
    for n in (2, 3, 4):
        K = NilpotentKoszul(n)
        table = koszul_homology(n, "rationals")
        # d has bidegree (2, -1), so p + 2q is constant on each complex; q indexes position
        for s in range(n + 2 * K.N + 1):
            chain = sum((-1) ** q * K.dim(s - 2 * q, q) for q in range(K.N + 1) if 0 <= s - 2 * q <= n)
            homol = sum((-1) ** q * table.entries.get((s - 2 * q, q), None).rank
                        for q in range(K.N + 1) if (s - 2 * q, q) in table.entries)
            assert chain == homol


def test_integer_n4_full_scan():
    table = koszul_homology(4, "integers")
    assert table.torsion_bidegrees() == []
    assert table.total_dims() == W_SERIES[4]
    for e in table.entries.values():
        # universal coefficients: without 2-torsion the F2 and rational ranks coincide
        assert e.f2_rank == e.rank


def test_low_degree_torsion_free():
    for n in range(2, 6):
        bideg = [(p, q) for p in range(n + 1) for q in range(4) if p + q <= 4]
        assert koszul_homology(n, "integers", bideg).torsion_bidegrees() == []


def test_f2_mode_matches_for_small_n():
    for n in (2, 3):
        a = koszul_homology(n, "F2")
        b = koszul_homology(n, "rationals")
        assert {k: e.rank for k, e in a.entries.items()} == {k: e.rank for k, e in b.entries.items()}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_young_matches_koszul_per_total_degree(n):
    table = koszul_homology(n, "rationals")
    dims = table.total_dims()
    r = n + n * (n - 1) // 2
    for k in range(r + 1):
        assert coefficient_lower_bound(n, k) == dims[k]
    # finer: the homology at (p, q) is the diagram sum with p diagonal boxes and arm sum q
    K = NilpotentKoszul(n)
    for p in range(n + 1):
        for q in range(K.N + 1):
            e = table.entries.get((p, q))
            assert (e.rank if e else 0) == diagram_dimension_sum(n, p, q)


def test_budget():
    with pytest.raises(BudgetExceeded):
        koszul_homology(6, "integers")
    with pytest.raises(ValueError):
        koszul_homology(3, "reals")


def test_csv():
    buf = io.StringIO()
    koszul_homology(2, "integers").write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "p,q,free_rank,torsion"
    assert "0,0,1," in lines


def test_tor_d_squared():
    for name, n in (("W", 2), ("Q2", None), ("T", 3), ("S", 3)):
        assert TorComplex(presets.get(name, n).S).check_d_squared()
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(2, 3)
        from wittlab.exactlin import rank_of_rows
        words = []
        for _ in range(rng.randint(1, 4)):
            w = rng.randrange(1, 1 << (n + n * (n - 1) // 2))
            if rank_of_rows(words + [w]) == len(words) + 1:
                words.append(w)
        S = KInvariantSet(n, tuple(QuadraticForm(n, w) for w in words))
        assert TorComplex(S).check_d_squared(3)


def test_tor_series():
    assert tor_dims(presets.get("W", 2).S, 6).series == [1, 2, 2, 1, 0, 0, 0]
    assert tor_dims(presets.get("Q2").S, 6).series == [1, 3, 6, 6, 3, 1, 0]
    assert tor_dims(presets.get("T", 3).S, 8).series == [1, 3, 5, 6, 6, 6, 6, 6, 6]
    assert tor_dims(presets.get("S", 3).S, 6).series == [1, 3, 4, 4, 4, 4, 4]
    T = tor_dims(presets.get("Q2").S, 4)
    assert T.dims[(0, 0)] == 1 and T.dims[(0, 1)] == 3 and T.dims[(0, 2)] == 1


def test_rank_q_on_koszul_blocks():
    K = NilpotentKoszul(3)
    M = K.differential(1, 1)
    assert rank_q(M) <= min(M.rows, M.cols)
