import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcoset import catalog
from nilcoset.families import SubgroupFamily, all_subgroups_family, enumerate_subgroups, family_nil_q
from nilcoset.groups import is_affinely_nil, lower_central_series
from nilcoset.poset import (
    BudgetExceeded,
    affinely_nil_tuples,
    build_coset_poset,
    chain_counts,
    connected_components,
    count_affinely_nil,
    euler_characteristic,
    join_decompose,
    moore_complex_small,
    order_complex,
)


def _mobius_p_minus_one(G):
    """P_G(-1) = sum mu(H, G) [G:H] from the subgroup lattice."""
    subs = sorted(enumerate_subgroups(G), key=lambda H: -H.order)
    mu = {}
    for H in subs:
        if H.order == G.order:
            mu[H.key] = 1
            continue
        mu[H.key] = -sum(mu[K.key] for K in subs if K.order > H.order and K.mask[H.elements].all())
    return sum(mu[H.key] * (G.order // H.order) for H in subs)


@pytest.mark.parametrize("name", ["C4", "S3", "D8", "A4", "D16"])
def test_proper_coset_poset_chi_matches_mobius(name):
    # reduced chi of the proper coset poset is -P_G(-1)
    G = catalog.named_group(name)
    poset = build_coset_poset(G, all_subgroups_family(G, proper=True))
    chi_enum, chi_w = euler_characteristic(poset)
    assert chi_enum == chi_w == 1 - _mobius_p_minus_one(G)


def test_structure_of_poset(small_groups):
    D8 = small_groups["D8"]
    fam = all_subgroups_family(D8)
    poset = build_coset_poset(D8, fam)
    assert poset.n_nodes == sum(8 // H.order for H in fam)
    top = poset.maximum()
    assert top is not None and poset.node_elements(top).size == 8
    for v in range(poset.n_nodes):
        el = set(poset.node_elements(v).tolist())
        for u in poset.up(v):
            assert el < set(poset.node_elements(u).tolist())
    # node_of round trip
    for i, H in enumerate(fam):
        for g in range(8):
            v = poset.node_of(i, g)
            assert g in poset.node_elements(v)


@pytest.mark.parametrize("name", ["S3", "D8", "A4"])
def test_chain_counts_match_order_complex(name):
    G = catalog.named_group(name)
    poset = build_coset_poset(G, family_nil_q(G, 2))
    cx = order_complex(poset, 10)
    assert cx.complete
    assert cx.counts == chain_counts(poset)
    assert cx.euler_characteristic() == euler_characteristic(poset)[0]


def test_order_complex_budget(u4f2):
    poset = build_coset_poset(u4f2, family_nil_q(u4f2, 2))
    with pytest.raises(BudgetExceeded):
        order_complex(poset, 3, budget=10**4)


def test_connected_components_f3():
    # proper subspaces of F_3^2: four lines, 12 cosets, 9 points; connected
    V = catalog.elementary_abelian(3, 2)
    fam = all_subgroups_family(V, proper=True)
    poset = build_coset_poset(V, fam)
    assert len(connected_components(poset)) == 1
    # only the trivial subgroup: 9 isolated points
    triv = SubgroupFamily(V, None, [fam.members[0]])
    assert len(connected_components(build_coset_poset(V, triv))) == 9


@pytest.mark.parametrize("p", [2, 3])
def test_fp2_subspace_poset(p):
    V = catalog.elementary_abelian(p, 2)
    poset = build_coset_poset(V, all_subgroups_family(V, proper=True))
    res = order_complex(poset, 2).homology()
    want = (p * p - 1) * (p - 1)
    assert res.betti == [1, want]
    assert euler_characteristic(poset) == (1 - want, 1 - want)


def test_join_decomposition_s3(small_groups):
    # proper subgroups of S3 split along A3: two points joined with nine
    S3 = small_groups["S3"]
    fam = all_subgroups_family(S3, proper=True)
    N = lower_central_series(S3.whole()).terms[1]
    jd = join_decompose(S3, fam, N)
    assert jd.divides.divides
    assert jd.quotient_group.order == 2 and jd.quotient.n_nodes == 2
    assert jd.upper.n_nodes == 9 and len(connected_components(jd.upper)) == 9
    total = order_complex(build_coset_poset(S3, fam), 3).homology()
    assert total.reduced_betti()[:2] == [0, 8]


def test_join_decomposition_needs_upper_part(u4f2):
    fam = family_nil_q(u4f2, 2)
    N = lower_central_series(u4f2.whole()).terms[2]
    with pytest.raises(ValueError, match="empty"):
        join_decompose(u4f2, fam, N)


def test_join_decomposition_rejects_nondividing():
    # Z/4 with only the trivial subgroup and N = 2Z/4: HN = N is missing
    C4 = catalog.named_group("C4")
    subs = enumerate_subgroups(C4)
    fam = SubgroupFamily(C4, None, [H for H in subs if H.order in (1, 4)])
    N = next(H for H in subs if H.order == 2)
    with pytest.raises(ValueError, match="divide"):
        join_decompose(C4, fam, N)


def test_moore_matches_poset_s3(small_groups):
    S3 = small_groups["S3"]
    m = moore_complex_small(S3, 2, 3)
    hm = m.homology()
    cx = order_complex(build_coset_poset(S3, family_nil_q(S3, 2)), 3)
    hp = cx.homology()
    assert hm.betti[:1] == hp.betti[:1] == [1]
    assert hm.betti[1] == hp.betti[1]
    assert m.counts[0] == 6


def test_moore_budget(u4f2):
    with pytest.raises(BudgetExceeded):
        moore_complex_small(u4f2, 2, 4)


@pytest.mark.parametrize("a,b", [("C2", "S3"), ("C4", "S3"), ("D8", "S3")])
def test_product_counts(a, b):
    G, H = catalog.named_group(a), catalog.named_group(b)
    P = catalog.build_direct_product(G, H)
    for k in range(3):
        assert count_affinely_nil(P, k, 2) == count_affinely_nil(G, k, 2) * count_affinely_nil(H, k, 2)


def test_nil_tuples_vectorised_agrees(small_groups):
    A4 = small_groups["A4"]
    for q in (1, 2):
        tup = affinely_nil_tuples(A4, 2, q)
        got = {tuple(r) for r in tup.tolist()}
        want = {(x, y, z) for x in range(12) for y in range(12) for z in range(12) if is_affinely_nil(A4, [x, y, z], q)}
        assert got == want


def test_nil_tuples_abelian_are_everything(small_groups):
    C4 = small_groups["C4"]
    assert count_affinely_nil(C4, 3, 1) == 4**4


@settings(max_examples=25)
@given(st.sampled_from(["S3", "D8", "A4", "D16"]), st.data())
def test_nil_tuples_translation_invariant(name, data):
    G = catalog.named_group(name)
    tup = affinely_nil_tuples(G, 2, 2)
    row = tup[data.draw(st.integers(0, tup.shape[0] - 1))]
    g = data.draw(st.integers(0, G.order - 1))
    moved = G.table[g, row]
    assert is_affinely_nil(G, list(moved), 2)
    # faces stay nil
    for i in range(3):
        assert is_affinely_nil(G, list(np.delete(row, i)), 2)
