from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilcoset.homology import (
    ChainComplexError,
    SparseIntMatrix,
    compare_wedge_suspension,
    compare_wedge_suspension_results,
    homology,
    rank_mod_p,
    smith_normal_form,
)

SNF_ORACLES = [
    ([[2, 0], [0, 3]], [1, 6]),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
    ([[0, 0], [0, 0]], []),
    ([[4, 0], [0, 6]], [2, 12]),
    ([[1, 2, 3], [4, 5, 6], [7, 8, 9]], [1, 3]),
]


@pytest.mark.parametrize("dense,want", SNF_ORACLES)
def test_snf_oracles(dense, want):
    assert smith_normal_form(SparseIntMatrix.from_dense(dense)) == want


def _det(rows):
    # exact Gaussian elimination over Q
    a = [[Fraction(v) for v in r] for r in rows]
    n, det = len(a), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def _gcd_minors(rows, k):
    from math import gcd

    g = 0
    n, m = len(rows), len(rows[0])
    for rs in combinations(range(n), k):
        for cs in combinations(range(m), k):
            g = gcd(g, _det([[rows[r][c] for c in cs] for r in rs]))
    return g


small_matrices = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=n, max_size=n)
    )
)


@given(small_matrices)
def test_snf_determinantal_divisors(rows):
    # d_1 ... d_k = gcd of k x k minors
    f = smith_normal_form(SparseIntMatrix.from_dense(rows))
    for i in range(len(f) - 1):
        assert f[i + 1] % f[i] == 0
    prod = 1
    for k in range(1, min(len(rows), len(rows[0])) + 1):
        g = _gcd_minors(rows, k)
        if k <= len(f):
            prod *= f[k - 1]
            assert g == prod
        else:
            assert g == 0


@given(small_matrices, st.sampled_from([2, 3, 5]))
def test_rank_mod_p_matches_snf(rows, p):
    M = SparseIntMatrix.from_dense(rows)
    f = smith_normal_form(M)
    assert rank_mod_p(M, p) == sum(1 for d in f if d % p)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=4, max_size=4),
       st.permutations(range(4)), st.permutations(range(5)))
def test_snf_permutation_invariant(rows, rp, cp):
    M = SparseIntMatrix.from_dense(rows)
    assert smith_normal_form(M) == smith_normal_form(M.permuted(list(rp), list(cp)))


def _rp2():
    # cellular: Z <-0- Z <-2- Z <-- 0
    d1 = SparseIntMatrix.from_dense([[0]])
    d2 = SparseIntMatrix.from_dense([[2]])
    d3 = SparseIntMatrix(1, 0)
    return [d1, d2, d3], [1, 1, 1, 0]


def test_rp2_torsion_and_coefficients():
    bds, dims = _rp2()
    res = homology(bds, dims, modulus=2)
    assert res.betti == [1, 0, 0]
    assert res.torsion == [[], [2], []]
    assert res.coefficients == [[2], [2], [2]]
    res3 = homology(bds, dims, modulus=3)
    assert res3.coefficients == [[3], [], []]


def _simplicial_boundaries(simplices_by_dim):
    out = []
    for k in range(1, len(simplices_by_dim)):
        faces = {s: i for i, s in enumerate(simplices_by_dim[k - 1])}
        M = SparseIntMatrix(len(simplices_by_dim[k - 1]), len(simplices_by_dim[k]))
        for j, s in enumerate(simplices_by_dim[k]):
            for i in range(len(s)):
                M.entries[(faces[s[:i] + s[i + 1:]], j)] = (-1) ** i
        out.append(M)
    return out


def test_circle_and_sphere():
    circle = [[(0,), (1,), (2,)], [(0, 1), (0, 2), (1, 2)], []]
    res = homology(_simplicial_boundaries(circle))
    assert res.betti == [1, 1] and res.euler_characteristic() == 0
    sphere_tris = list(combinations(range(4), 3))
    sphere = [[(i,) for i in range(4)], list(combinations(range(4), 2)), sphere_tris, []]
    res = homology(_simplicial_boundaries(sphere))
    assert res.betti == [1, 0, 1]
    assert res.reduced_betti() == [0, 0, 1]


def test_bad_complex_rejected():
    d1 = SparseIntMatrix.from_dense([[1, 1]])
    d2 = SparseIntMatrix.from_dense([[1], [0]])
    with pytest.raises(ChainComplexError):
        homology([d1, d2])
    with pytest.raises(ChainComplexError):
        homology([d1, SparseIntMatrix.from_dense([[1]])])


def test_text_roundtrip(tmp_path):
    M = SparseIntMatrix.from_dense([[0, -1, 3], [2, 0, 0]])
    assert SparseIntMatrix.from_text(M.to_text()) == M
    M.save(tmp_path / "m.smat")
    assert SparseIntMatrix.load(tmp_path / "m.smat") == M
    assert np.array_equal(M.to_dense(), [[0, -1, 3], [2, 0, 0]])


def test_wedge_suspension_comparisons():
    assert compare_wedge_suspension([0, 0, 3], [0, 1], 3)
    assert not compare_wedge_suspension([0, 0, 2], [0, 1], 3)
    circle = homology(_simplicial_boundaries([[(0,), (1,), (2,)], [(0, 1), (0, 2), (1, 2)], []]))
    two_points = homology([SparseIntMatrix(2, 0)], [2, 0])
    # suspension of two points is a circle
    assert compare_wedge_suspension_results(circle, two_points, 1)
    assert not compare_wedge_suspension_results(circle, two_points, 2)
