import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilcoset import catalog
from nilcoset.groups import (
    GroupError,
    center,
    class_at_most_two,
    from_generators,
    from_table,
    is_affinely_nil,
    is_two_engel,
    lower_central_series,
    nilpotency_class,
    quotient_group,
    sweep,
)


# frozen oracles: (order, class, |Z|, LCS orders)
ORACLES = {
    "U4F2": (64, 3, 2, [64, 8, 2, 1]),
    "U4F3": (729, 3, 3, [729, 27, 3, 1]),
    "B33": (2187, 3, 3, [2187, 81, 3, 1]),
    "S3": (6, None, 1, [6, 3]),
    "D8": (8, 2, 2, [8, 2, 1]),
    "A4": (12, None, 1, [12, 4]),
    "D16": (16, 3, 2, [16, 4, 2, 1]),
    "C4": (4, 1, 4, [4, 1]),
}


@pytest.mark.parametrize("name", sorted(ORACLES))
def test_structure_oracles(name):
    order, cl, zorder, lcs = ORACLES[name]
    G = catalog.named_group(name)
    assert G.order == order
    assert nilpotency_class(G.whole()) == cl
    assert center(G).order == zorder
    assert [H.order for H in lower_central_series(G.whole()).terms] == lcs


def test_table_axioms(small_groups, u4f2):
    for G in list(small_groups.values()) + [u4f2]:
        assert G.check_axioms()


def test_commutator_convention(u4f2):
    G = u4f2
    x, y = G.generators[:2]
    want = G.mul_many(G.inv(x), G.inv(y), x, y)
    assert G.commutator(x, y) == want
    # [a, b] = I + E13 in U4(F2)
    assert G.labels[G.commutator(x, y)] == (0, 1, 0, 0, 0, 0)


def test_element_order_and_power(u4f3):
    G = u4f3
    for g in range(0, G.order, 37):
        k = G.element_order(g)
        assert G.power(g, k) == 0
        assert k in (1, 3, 9)


def test_two_engel_flags(b33, u4f3):
    assert is_two_engel(b33).ok
    res = is_two_engel(u4f3)
    assert not res.ok
    x, y = res.witness
    assert u4f3.commutator3(x, y, y) != 0


def test_sweep_exhaustive_and_sampled():
    dom = np.arange(10)
    full = sweep(2, dom, lambda a, b: a + b >= 0, budget=1000)
    assert full.status == "pass" and full.checked == 100
    samp = sweep(3, dom, lambda a, b, c: a + b + c >= 0, budget=50, seed=3)
    assert samp.status == "sampled-pass" and samp.checked == 50
    bad = sweep(2, dom, lambda a, b: a + b < 17, budget=1000)
    assert not bad.ok and bad.witness == (8, 9)


def test_sweep_seed_determinism():
    dom = np.arange(50)
    a = sweep(2, dom, lambda x, y: x * y != 1147, budget=100, seed=7)
    b = sweep(2, dom, lambda x, y: x * y != 1147, budget=100, seed=7)
    assert a == b


def test_affinely_nil(u4f2, b33):
    G = u4f2
    a, b, c = G.generators
    assert is_affinely_nil(G, [a, b, 0], 3)
    assert not is_affinely_nil(G, [a, b, c, 0], 2)
    # translation invariance: g*(tuple)
    g = 17
    tup = [a, b, 0]
    moved = [G.mul(g, t) for t in tup]
    assert is_affinely_nil(G, tup, 2) == is_affinely_nil(G, moved, 2)
    with pytest.raises(GroupError):
        is_affinely_nil(G, [], 2)


def test_class_at_most_two(b33):
    g = b33.generators
    assert class_at_most_two(b33, [g[0], g[1]])
    assert not class_at_most_two(b33, [g[0], g[1], g[2]])


def test_quotient_group(u4f3):
    G = u4f3
    N = lower_central_series(G.whole()).terms[1]
    Q, proj = quotient_group(G, N)
    assert Q.order == 27 and Q.is_abelian()
    x, y = 100, 523
    assert proj[G.mul(x, y)] == Q.mul(proj[x], proj[y])


def test_from_generators_cyclic():
    G = from_generators([1], lambda a, b: (a + b) % 12, 0, name="Z12")
    assert G.order == 12 and G.is_abelian()
    assert G.element_order(G.index(1)) == 12


def test_from_table_rejects_non_group():
    with pytest.raises(GroupError):
        from_table(np.array([[0, 1], [1, 1]]))
    # a Latin square that is not associative
    loop = np.array([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    assert not from_table(loop, generators=[1, 2]).check_axioms()


def test_normal_closure(small_groups):
    S3 = small_groups["S3"]
    trans = next(g for g in range(S3.order) if S3.element_order(g) == 2)
    assert S3.subgroup([trans]).order == 2
    assert S3.normal_closure([trans]).order == 6


GROUP_NAMES = ["S3", "D8", "A4", "D16", "U4F2"]


@given(st.sampled_from(GROUP_NAMES), st.data())
def test_commutator_identities(name, data):
    G = catalog.named_group(name)
    el = st.integers(0, G.order - 1)
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert G.inv(G.commutator(x, y)) == G.commutator(y, x)
    # [xy, z] = [x, z]^y [y, z]
    lhs = G.commutator(G.mul(x, y), z)
    rhs = G.mul(G.conj(G.commutator(x, z), y), G.commutator(y, z))
    assert lhs == rhs
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))


@given(st.sampled_from(GROUP_NAMES), st.data())
def test_subgroup_closure_is_subgroup(name, data):
    G = catalog.named_group(name)
    gens = data.draw(st.lists(st.integers(0, G.order - 1), min_size=1, max_size=3))
    H = G.subgroup(gens)
    el = H.elements
    assert G.order % H.order == 0
    prods = G.table[np.ix_(el, el)]
    assert np.all(H.mask[prods])
    assert np.all(H.mask[G.inverse[el]])
