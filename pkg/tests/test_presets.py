import json

import numpy as np
import pytest

from wittlab import presets
from wittlab.cellular import borel_cohomology, quotient_cohomology
from wittlab.errors import UnknownPreset
from wittlab.forms import KInvariantSet, LinearForm, parse_linear
from wittlab.milnor import graded_dims, level
from wittlab.torus import TorusModel
from wittlab.wgroup import WGroup


def test_family_contents():
    assert presets.get("W", 2).S.to_text() == ["x1*x1", "x2*x2", "x1*x2"]
    assert presets.get("T", 3).S.to_text() == ["x1*x2", "x1*x3", "x2*x3"]
    q2 = presets.get("Q2")
    assert q2.S.to_text() == ["x2*x2", "x3*x3", "x1*x2", "x1*x3", "x1*x1 + x2*x3"]
    assert q2.minus_one == LinearForm.var(3, 0)


def test_unknown():
    with pytest.raises(UnknownPreset):
        presets.get("nope")
    with pytest.raises(UnknownPreset):
        presets.get("W")
    with pytest.raises(UnknownPreset):
        presets.get("K_laurent_W2")


@pytest.mark.parametrize("P", presets.catalog(), ids=lambda P: P.name)
def test_catalog_metadata(P):
    exp = P.expected
    assert P.r == exp["r"]
    if P.n + P.r > 1:
        G = WGroup(P.S)
        assert G.is_formally_real() == exp["formally_real"]
        if "orderings" in exp:
            assert G.count_orderings() == exp["orderings"]
    if "milnor_dims" in exp:
        assert graded_dims(P.S, len(exp["milnor_dims"]) - 1) == exp["milnor_dims"]
    M = TorusModel.from_kinvariants(P.S)
    if "quotient_series" in exp and P.r <= 6:
        assert list(quotient_cohomology(M).dims) == exp["quotient_series"]
    if "level" in exp:
        assert level(P.S, P.minus_one, 6) == exp["level"]
    if "borel_stable_value" in exp and P.r <= 3:
        assert borel_cohomology(M, P.r + 3).dims[-1] == exp["borel_stable_value"]


def test_tower():
    t3, t4 = presets.get("Fp_tower", 3), presets.get("Fp_tower", 4)
    assert (t3.n, t3.r) == (3, 3) and (t4.n, t4.r) == (4, 4)
    assert quotient_cohomology(TorusModel.from_kinvariants(t4.S)).dims == (1, 4, 6, 4, 1)
    assert graded_dims(t4.S, 2)[2] == 6


def test_laurent_requires_minus_one_and_all_choices_match():
    with pytest.raises(UnknownPreset):
        presets.get("K_laurent_W2")
    seen = set()
    for c in range(4):
        P = presets.get("K_laurent_W2", minus_one=LinearForm(2, c))
        M = TorusModel.from_kinvariants(P.S)
        assert M.is_free()
        seen.add(quotient_cohomology(M).dims)
    assert seen == {(1, 3, 4, 3, 1)}
    P = presets.get("K_laurent_W2", minus_one="x1 + x2")
    assert P.minus_one == parse_linear("x1 + x2", 3)


def test_json_round_trip(tmp_path):
    for P in presets.catalog():
        data = json.loads(json.dumps(P.to_json()))
        Q = presets.load_preset(data)
        assert Q.S == P.S and Q.minus_one == P.minus_one and dict(Q.expected) == dict(P.expected)
        path = tmp_path / "p.json"
        path.write_text(json.dumps(data))
        assert presets.load_preset(path).S == P.S


def test_malformed_preset():
    with pytest.raises(ValueError):
        presets.load_preset({"name": "x", "n": 2})
    with pytest.raises(ValueError):
        presets.load_preset({"name": "x", "n": 2, "forms": ["x3*x3"]})


def test_dimension_three_and_four_tables():
    dim3, dim4 = set(), set()
    for P in presets.catalog():
        if P.n + P.r <= 1 or WGroup(P.S).is_formally_real():
            continue
        dims = quotient_cohomology(TorusModel.from_kinvariants(P.S)).dims if P.r <= 6 else None
        if P.r == 3:
            dim3.add(dims)
        if P.r == 4:
            dim4.add(dims)
    assert dim3 == {(1, 2, 2, 1), (1, 3, 3, 1)}
    assert dim4 == {(1, 4, 6, 4, 1)}


def test_random_generators_are_deterministic():
    a = [presets.random_field_like(np.random.default_rng(5)).to_text() for _ in range(2)]
    assert a[0] == a[1]
    S = presets.random_product_set(np.random.default_rng(6), 3, 4)
    assert isinstance(S, KInvariantSet) and S.r <= 4
