"""The twelve acceptance criteria, one test each.

Every test runs the corresponding preset (or library calls), asserts the
frozen expected values and the runtime bound, and requires that each
acceptance-relevant check is an exhaustive pass.  A one-line verdict per
criterion is printed in the terminal summary (see conftest.py).
"""

import time

import pytest

from nilcoset import catalog
from nilcoset.homology import compare_wedge_suspension
from nilcoset.linear import burnside_counts, burnside_m_closed
from nilcoset.poset import count_affinely_nil
from nilcoset.presets import RunConfig, run_preset

_CACHE: dict = {}


def run(name):
    if name not in _CACHE:
        t = time.perf_counter()
        rep = run_preset(name, RunConfig())
        _CACHE[name] = (rep, time.perf_counter() - t)
    return _CACHE[name]


def status(rep, name):
    return rep.check(name).status


def assert_all_exact(rep):
    bad = [(c.name, c.status) for c in rep.checks if c.acceptance and c.status not in ("pass", "info")]
    assert not bad, bad
    assert rep.ok


def reduced(rep):
    return [row["reduced_betti"] for row in rep.homology]


def torsion(rep):
    return [row["torsion"] for row in rep.homology]


@pytest.mark.criterion(1, "U4(F2) reduced route: reduced H = (0, 0, Z^3)")
def test_criterion_01_u4f2_reduced():
    rep, dt = run("u4-f2-reduced")
    assert_all_exact(rep)
    assert reduced(rep) == [0, 0, 3]
    assert torsion(rep) == [[], [], []]
    assert rep.poset["counts"] == [44, 136, 96]
    assert dt < 5


@pytest.mark.slow
@pytest.mark.criterion(2, "U4(F2) direct route: b = (1, 0, 3), certificates pass")
def test_criterion_02_u4f2_direct():
    rep, dt = run("u4-f2-direct")
    assert_all_exact(rep)
    betti = [row["betti"] for row in rep.homology]
    assert betti[:3] == [1, 0, 3]
    for name in ("quotient_precondition", "quotient_fiber_maxima"):
        assert status(rep, name) == "pass"
    red, _ = run("u4-f2-reduced")
    # same reduced homology through degree 2 as the reduced route
    assert [b - (i == 0) for i, b in enumerate(betti[:3])] == reduced(red)
    assert rep.chi["enumerated"] == rep.chi["weighted"] == red.chi["enumerated"] == 4
    assert dt < 600


@pytest.mark.criterion(3, "U4(F3): reduced Betti (0, 72, 8), counts (153, 540, 324), chi -63")
def test_criterion_03_u4f3_reduced():
    rep, dt = run("u4-f3-reduced")
    assert_all_exact(rep)
    assert reduced(rep) == [0, 72, 8]
    assert torsion(rep) == [[], [], []]
    assert rep.poset["counts"] == [153, 540, 324]
    assert rep.chi["enumerated"] == rep.chi["weighted"] == -63
    # the one sampled check is labelled as such and kept out of acceptance
    c = rep.check("beta_general_triples")
    assert c.status == "sampled-pass" and not c.acceptance
    assert dt < 30


@pytest.mark.criterion(4, "join decomposition along W = <e1, e2>")
def test_criterion_04_join():
    t = time.perf_counter()
    r2, _ = run("u4-f2-reduced")
    r3, _ = run("u4-f3-reduced")
    up2, up3 = r2.sections["join_upper"], r3.sections["join_upper"]
    assert status(r2, "upper_connected") == "pass"
    assert up2["chi"] == -2 and up2["reduced_betti"][0] == 0
    assert up3["isolated_points"] == 36
    assert status(r3, "upper_big_component_b1") == "pass"
    assert r3.check("upper_big_component_b1").detail == 4
    for rep, p, up in ((r2, 2, up2), (r3, 3, up3)):
        assert status(rep, "W_divides_family") == "pass"
        assert status(rep, "quotient_piece_is_p_points") == "pass"
        assert up["quotient_points"] == p
        assert status(rep, "wedge_of_suspensions") == "pass"
        assert compare_wedge_suspension(reduced(rep), up["reduced_betti"], p - 1)
    assert time.perf_counter() - t < 10


@pytest.mark.criterion(5, "B(3,3): battery, family of dim <= 2 subspaces, reduced Betti (0, 0, 416)")
def test_criterion_05_burnside_r3():
    rep, dt = run("burnside-r3")
    assert_all_exact(rep)
    bat = rep.check("battery").detail
    assert bat == {"order": 2187, "exponent": 3, "two_engel": True, "class": 3, "gamma2_order": 81, "gamma3_order": 3}
    for name in ("family_is_all_dim_le_2", "plane_preimages_class_le_2", "full_preimage_class_3"):
        assert status(rep, name) == "pass"
    assert reduced(rep) == [0, 0, 416]
    assert rep.poset["counts"] == [183, 1170, 1404]
    assert rep.chi["enumerated"] == rep.chi["weighted"] == 417 == burnside_m_closed(3) + 1
    assert dt < 300


@pytest.mark.criterion(6, "Burnside counting: m(r) closed form for r = 3..8")
def test_criterion_06_burnside_counts():
    t = time.perf_counter()
    for r in range(3, 9):
        assert burnside_counts(r).m == burnside_m_closed(r)
    c = burnside_counts(4)
    assert (c.n0, c.n1, c.n2) == (2331, 27810, 42120) and c.m == 16640
    rep, _ = run("burnside-r4-counts")
    assert_all_exact(rep)
    assert rep.poset["counts"] == [2331, 27810, 42120]
    assert time.perf_counter() - t < 1


@pytest.mark.criterion(7, "cocycle battery: w1 on U4(F3) and G_ext, U4(F2) error, w2 on B(3,3)")
def test_criterion_07_cocycles():
    rep, dt = run("cocycle-battery")
    assert_all_exact(rep)
    assert status(rep, "w1_U4F3") == "pass"
    assert status(rep, "w1_He9ext") == "pass"
    err = rep.check("w1_U4F2_hypothesis_error")
    assert err.status == "pass" and err.witness
    assert rep.check("w2_B33").detail["checked"] == 531441
    assert status(rep, "w2_quadruple_images_531441") == "pass"
    assert status(rep, "w2_trilinearity_certificate") == "pass"
    cert = rep.check("w2_nil2_form_certificate")
    assert cert.status == "sampled-pass" and cert.detail["samples"] >= 10**5
    he, _ = run("he9-ext-hypotheses")
    assert_all_exact(he)
    assert he.check("battery").detail["gamma3_exponent"] == 9
    assert dt < 900


@pytest.mark.criterion(8, "2-Engel linkage: B(3,3) H1 = 0, U4(F3) H1(Z/3) != 0, pairings, He(Z/9)")
def test_criterion_08_engel():
    rep, dt = run("engel-battery")
    assert_all_exact(rep)
    for name in (
        "u4f3_not_two_engel",
        "u4f3_c2_pairing_nonzero",
        "u4f3_H1_mod3_nonzero",
        "b33_two_engel",
        "b33_H1_zero_over_Z",
        "b33_H1_zero_mod3",
        "b33_c3_pairing_nonzero",
        "he9_class_2",
        "he9_poset_has_maximum",
        "he9_reduced_homology_zero",
    ):
        assert status(rep, name) == "pass", name
    assert rep.check("u4f3_c2_pairing_nonzero").witness
    assert rep.check("b33_c3_pairing_nonzero").witness
    assert dt < 300


@pytest.mark.criterion(9, "identity suite: Hall-Witt, trilinearity, cyclic identity")
def test_criterion_09_identities():
    rep, dt = run("identity-suite")
    assert_all_exact(rep)
    assert rep.check("U4(F2):hall_witt").detail == {"scope": "all of G", "checked": 64**3}
    for slot in (1, 2, 3):
        assert rep.check(f"U4(F2):trilinear_slot{slot}").detail["scope"] == "all of G"
        assert rep.check(f"B(3,3):trilinear_slot{slot}").detail["scope"] == "lifts of G/Gamma^2"
    assert status(rep, "B(3,3):cyclic_two_engel") == "pass"
    assert not rep.failed()
    assert dt < 300


@pytest.mark.criterion(10, "Moore complex of E(3,G) vs C(N_3,G) in degrees 0..2")
def test_criterion_10_moore():
    rep, dt = run("moore-crosscheck-s3")
    assert_all_exact(rep)
    for g in ("S3", "D8", "A4"):
        assert status(rep, f"moore_equals_poset_{g}") == "pass"
        sec = rep.sections[g]
        assert sec["moore_betti"] == sec["poset_betti"]
        assert len(sec["moore_betti"]) == 3
    assert dt < 120


@pytest.mark.criterion(11, "product count |E_k(3, GxH)| = |E_k(3,G)| |E_k(3,H)|, k <= 2")
def test_criterion_11_products():
    t = time.perf_counter()
    for a, b in (("C2", "S3"), ("D8", "S3")):
        G, H = catalog.named_group(a), catalog.named_group(b)
        P = catalog.build_direct_product(G, H)
        for k in range(3):
            assert count_affinely_nil(P, k, 2) == count_affinely_nil(G, k, 2) * count_affinely_nil(H, k, 2)
    rep, _ = run("moore-crosscheck-s3")
    assert all(c.status == "pass" for c in rep.checks if c.name.startswith("product_count"))
    assert time.perf_counter() - t < 60


@pytest.mark.criterion(12, "(F_p)^2 subspace poset: chi = 1 - (p^2-1)(p-1), H1 != 0")
def test_criterion_12_subspace_poset():
    rep, dt = run("subspace-poset-fp2")
    assert_all_exact(rep)
    for p in (2, 3, 5):
        want = (p * p - 1) * (p - 1)
        sec = rep.sections[f"p={p}"]
        assert sec["chi"] == sec["chi_weighted"] == 1 - want
        assert sec["betti"] == [1, want]
        assert status(rep, f"H1_nonzero_p{p}") == "pass"
    assert any("(p^2-1)(p-1) + 1" in n for n in rep.notes)
    assert dt < 10
