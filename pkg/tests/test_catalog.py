import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilcoset import catalog
from nilcoset.catalog import PcPresentation, PresentationError
from nilcoset.groups import center, is_two_engel, lower_central_series, nilpotency_class


def test_u4_orders_and_labels():
    for p, order in ((2, 64), (3, 729)):
        G = catalog.build_u4(p)
        assert G.order == order
        assert G.labels[0] == (0,) * 6
        a, b, c = G.generators
        assert G.labels[a] == (1, 0, 0, 0, 0, 0)
        assert G.labels[b] == (0, 0, 0, 1, 0, 0)
        assert G.labels[c] == (0, 0, 0, 0, 0, 1)


def test_u4_matrix_multiplication_matches_table(u4f3):
    G = u4f3
    rng = np.random.default_rng(0)
    for x, y in rng.integers(0, G.order, size=(50, 2)):
        mx = catalog.u4_matrix(G.labels[x], 3)
        my = catalog.u4_matrix(G.labels[y], 3)
        mz = catalog.u4_matrix(G.labels[G.mul(x, y)], 3)
        assert np.array_equal((mx @ my) % 3, mz)


def test_u4_gamma3_is_e14(u4f2):
    g3 = lower_central_series(u4f2.whole()).terms[2]
    labels = {u4f2.labels[i] for i in g3.elements}
    assert labels == {(0,) * 6, (0, 0, 1, 0, 0, 0)}


def test_burnside_battery(b33):
    res = b33.battery
    assert res.ok
    assert res.checks["gamma2_order"]["actual"] == 81
    assert res.checks["gamma3_order"]["actual"] == 3


def test_burnside_presentation_consistent():
    assert catalog.burnside33_presentation().consistency_failures() == []


def test_he9_family(he9_family):
    he, ext = he9_family
    assert he.order == 729 and nilpotency_class(he.whole()) == 2
    assert ext.order == 6561 and nilpotency_class(ext.whole()) == 3
    assert ext.battery.ok
    assert center(ext).order == 9
    assert not is_two_engel(ext).ok


def test_inconsistent_presentation_rejected():
    # with [g3, g2] = g4 the overlap (g2^2) g1 collects two different ways
    pres = PcPresentation.from_dict({"orders": [2, 2, 2, 2], "comm_tails": {"2,1": {"3": 1}, "3,2": {"4": 1}}})
    assert pres.consistency_failures()
    with pytest.raises(PresentationError):
        catalog.build_pc_group(pres)


def test_malformed_tail_rejected():
    with pytest.raises(PresentationError):
        PcPresentation.from_dict({"orders": [3, 3], "comm_tails": {"2,1": {"1": 1}}})


def test_direct_product(small_groups):
    S3, C2 = small_groups["S3"], small_groups["C2"]
    P = catalog.build_direct_product(C2, S3)
    assert P.order == 12 and P.check_axioms()
    assert center(P).order == 2


def test_elementary_abelian_encoding():
    V = catalog.elementary_abelian(3, 3)
    assert V.order == 27 and V.is_abelian()
    # id = sum v_i 3^i
    assert V.labels[1 + 2 * 3 + 1 * 9] == (1, 2, 1)
    assert V.mul(1, 2) == 0


def test_group_spec_roundtrip(tmp_path):
    spec = {"kind": "product", "factors": [{"kind": "named", "name": "C2"}, {"kind": "matrix_u4", "p": 2}]}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(spec))
    G, parsed = catalog.load_group_spec(path)
    assert G.order == 128 and parsed == spec


def test_group_spec_battery_failure(tmp_path):
    spec = {"kind": "named", "name": "S3", "battery": {"order": 7}}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(spec))
    with pytest.raises(PresentationError):
        catalog.load_group_spec(path)


def test_group_spec_pc(tmp_path):
    spec = {
        "kind": "pc",
        "name": "Heis3",
        "orders": [3, 3, 3],
        "comm_tails": {"2,1": {"3": 1}},
        "battery": {"order": 27, "class": 2, "exponent": 3},
    }
    path = tmp_path / "h.json"
    path.write_text(json.dumps(spec))
    G, _ = catalog.load_group_spec(path)
    assert G.order == 27


@given(st.lists(st.integers(0, 2), min_size=7, max_size=7), st.lists(st.integers(0, 2), min_size=7, max_size=7),
       st.lists(st.integers(0, 2), min_size=7, max_size=7))
def test_collection_is_associative(u, v, w):
    pres = catalog.burnside33_presentation()
    u, v, w = tuple(u), tuple(v), tuple(w)
    assert pres.multiply(pres.multiply(u, v), w) == pres.multiply(u, pres.multiply(v, w))


@given(st.lists(st.integers(0, 2), min_size=7, max_size=7))
def test_burnside_exponent_three(u):
    pres = catalog.burnside33_presentation()
    u = tuple(u)
    assert pres.multiply(pres.multiply(u, u), u) == (0,) * 7
