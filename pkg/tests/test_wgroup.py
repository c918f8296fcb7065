import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittlab import presets
from wittlab.errors import GroupTooSmall, MixedGroups
from wittlab.forms import KInvariantSet, QuadraticForm
from wittlab.milnor import graded_dims
from wittlab.wgroup import WGroup, multiply


def table_oracle(S: KInvariantSet):
    """Multiplication (a, b)(c, d) written out from the monomials of each form."""
    mons = []
    for q in S.forms:
        mons.append([(i, i) for i in range(q.n) if (q.diag >> i) & 1] + sorted(q.upper))

    def mul(x, y):
        (a, b), (c, d) = x, y
        f = 0
        for t, ms in enumerate(mons):
            bit = sum(((a >> i) & 1) * ((c >> j) & 1) for i, j in ms) & 1
            f |= bit << t
        return (a ^ c, b ^ d ^ f)

    return mul


def genuine_presets():
    return [P for P in presets.catalog() if P.n + P.r > 1]


def test_w2_square_and_commutator():
    G = WGroup(presets.get("W", 2).S)
    e1, e2 = G.element(0b01), G.element(0b10)
    sq = e1 * e1
    assert (sq.a, sq.b) == (0, 0b001)
    comm = e1 * e2 * e1.inverse() * e2.inverse()
    assert (comm.a, comm.b) == (0, 0b100)
    assert G.order == 32


@pytest.mark.parametrize("P", genuine_presets(), ids=lambda P: P.name)
def test_multiplication_matches_table_oracle(P):
    G = WGroup(P.S)
    mul = table_oracle(P.S)
    elems = list(G.elements())
    for g in elems:
        for h in elems[:: max(1, len(elems) // 64)]:
            gh = g * h
            assert (gh.a, gh.b) == mul((g.a, g.b), (h.a, h.b))


@pytest.mark.parametrize("name,n", [("W", 2), ("W", 4), ("T", 3), ("T", 4), ("S", 4), ("Q2", None), ("W2_alt", None)])
def test_associativity_exhaustive(name, n):
    # b-parts add linearly, so every a-triple covers the whole group
    P = presets.get(name, n)
    G = WGroup(P.S)
    rng = random.Random(n or 0)
    for a, c, e in product(range(1 << P.n), repeat=3):
        g, h, k = (G.element(x, rng.randrange(1 << P.r)) for x in (a, c, e))
        assert (g * h) * k == g * (h * k)


@pytest.mark.parametrize("P", genuine_presets(), ids=lambda P: P.name)
def test_exponent_four_and_squares(P):
    G = WGroup(P.S)
    for a in range(1 << P.n):
        g = G.element(a, (a * 7) % (1 << P.r))
        assert (g ** 4).is_identity()
        sq = g * g
        assert (sq.a, sq.b) == (0, G.Q(a))
        assert (g * g.inverse()).is_identity()


def test_formally_real_examples():
    for n in (2, 3, 4):
        assert WGroup(presets.get("T", n).S).is_formally_real()
        assert WGroup(presets.get("S", n).S).is_formally_real()
        assert WGroup(presets.get("W", n).S).is_2C()
    assert not WGroup(presets.get("T", 2).S).is_2C()
    assert not WGroup(presets.get("Q2").S).is_formally_real()
    Z4 = WGroup(KInvariantSet.from_text(1, ["x1*x1"]))
    assert Z4.order == 4 and Z4.is_2C() and not Z4.is_formally_real()


def test_group_too_small():
    with pytest.raises(GroupTooSmall):
        WGroup(KInvariantSet(1, ())).is_formally_real()


@pytest.mark.parametrize("P", genuine_presets(), ids=lambda P: P.name)
def test_2c_iff_not_formally_real(P):
    G = WGroup(P.S)
    assert G.is_formally_real() != G.is_2C()


def test_orderings():
    for n in (2, 3, 4, 5):
        assert WGroup(presets.get("T", n).S).count_orderings() == n
        assert WGroup(presets.get("S", n).S).count_orderings() == 2 ** (n - 1)
        assert WGroup(presets.get("W", n).S).count_orderings() == 0


def test_s_orderings_brute_force():
    for n in (2, 3, 4):
        P = presets.get("S", n)
        count = sum(1 for a in range(1, 1 << n) if all(not q.evaluate(a) for q in P.S.forms))
        assert count == 2 ** (n - 1)


def test_maximal_elementary_abelian():
    for n in (2, 3, 4):
        tori = WGroup(presets.get("T", n).S).maximal_elementary_abelian()
        assert len(tori) == n and all(t.rank == n * (n - 1) // 2 + 1 for t in tori)
        tori = WGroup(presets.get("W", n).S).maximal_elementary_abelian()
        assert [t.rank for t in tori] == [n + n * (n - 1) // 2]
    assert {t.rank for t in WGroup(presets.get("S", 3).S).maximal_elementary_abelian()} == {3}


def brute_max_elementary_ranks(G):
    """Maximal sets of commuting involutions outside Phi, by clique search over singular vectors."""
    sing = G.singular_vectors()
    best = []

    def extend(chosen, span):
        grown = False
        for a in sing:
            if a in span or any(G.B(a, c) for c in chosen):
                continue
            grown = True
            extend(chosen + [a], span | {a ^ s for s in span})
        if not grown:
            best.append(frozenset(span))

    extend([], {0})
    return sorted(G.r + len(s).bit_length() - 1 for s in set(best))


@pytest.mark.parametrize("P", genuine_presets(), ids=lambda P: P.name)
def test_max_elementary_abelian_against_clique_search(P):
    G = WGroup(P.S)
    assert sorted(t.rank for t in G.maximal_elementary_abelian()) == brute_max_elementary_ranks(G)


@pytest.mark.parametrize("P", genuine_presets(), ids=lambda P: P.name)
def test_frattini_rank_matches_milnor_degree_two(P):
    G = WGroup(P.S)
    n = P.n
    assert G.frattini_rank() == n + n * (n - 1) // 2 - graded_dims(P.S, 2)[2]


@pytest.mark.parametrize("P", genuine_presets(), ids=lambda P: P.name)
def test_krull_dimension_proxy(P):
    G = WGroup(P.S)
    top = max(t.rank for t in G.maximal_elementary_abelian())
    assert top == P.r + (1 if G.is_formally_real() else 0)


def test_mixed_groups():
    G = WGroup(presets.get("W", 2).S)
    H = WGroup(presets.get("T", 2).S)
    with pytest.raises(MixedGroups):
        multiply(G.element(1), H.element(1))


@settings(max_examples=40)
@given(st.data())
def test_random_associativity(data):
    n = data.draw(st.integers(1, 4))
    words = data.draw(st.lists(st.integers(1, (1 << (n + n * (n - 1) // 2)) - 1), min_size=1, max_size=4, unique=True))
    from wittlab.exactlin import rank_of_rows
    indep = []
    for w in words:
        if rank_of_rows(indep + [w]) == len(indep) + 1:
            indep.append(w)
    G = WGroup(KInvariantSet(n, tuple(QuadraticForm(n, w) for w in indep)))
    pick = st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << G.r) - 1))
    g, h, k = (G.element(*data.draw(pick)) for _ in range(3))
    assert (g * h) * k == g * (h * k)
