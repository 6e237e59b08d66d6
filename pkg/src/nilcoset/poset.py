"""Coset posets, their order complexes, and Moore complexes of E_*(q+1, G)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .families import DividesResult, SubgroupFamily, divides_check, image
from .groups import FiniteGroup, Subgroup, quotient_group
from .homology import HomologyResult, SparseIntMatrix, homology

DEFAULT_NODE_BUDGET = 10**6
DEFAULT_MOORE_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class CosetPoset:
    """Left cosets gH (H in the family) ordered by inclusion.

    Node ids are grouped by family member: member i owns ids
    ``offsets[i] .. offsets[i+1]-1``, one per coset, ordered by the least
    element of the coset (``reps``).  ``up`` is the strict order relation in
    CSR form: ``up_indices[up_ptr[v]:up_ptr[v+1]]`` are all nodes strictly
    above v, sorted.
    """

    group: FiniteGroup
    family: SubgroupFamily
    offsets: np.ndarray
    node_member: np.ndarray
    node_rep: np.ndarray
    coset_of: list
    up_ptr: np.ndarray
    up_indices: np.ndarray
    supersets: list

    @property
    def n_nodes(self) -> int:
        return int(self.node_member.size)

    def up(self, v: int) -> np.ndarray:
        return self.up_indices[self.up_ptr[v] : self.up_ptr[v + 1]]

    def node_elements(self, v: int) -> np.ndarray:
        H = self.family.members[self.node_member[v]]
        return np.sort(self.group.table[self.node_rep[v], H.elements])

    def node_of(self, member: int, g: int) -> int:
        """Node id of the coset g H_member."""
        return int(self.offsets[member] + self.coset_of[member][g])

    def maximum(self) -> int | None:
        """The node above all others, if there is one."""
        tops = np.flatnonzero(np.diff(self.up_ptr) == 0)
        return int(tops[0]) if tops.size == 1 else None


def build_coset_poset(G: FiniteGroup, family: SubgroupFamily, budget: int = DEFAULT_NODE_BUDGET) -> CosetPoset:
    members = family.members
    total = sum(G.order // H.order for H in members)
    if total > budget:
        raise BudgetExceeded(f"{total} cosets exceed node budget {budget}")
    offsets = np.zeros(len(members) + 1, dtype=np.int64)
    coset_of, reps = [], []
    for i, H in enumerate(members):
        cid = np.full(G.order, -1, dtype=np.int64)
        rep = []
        for x in range(G.order):
            if cid[x] < 0:
                cid[G.table[x, H.elements]] = len(rep)
                rep.append(x)
        coset_of.append(cid)
        reps.append(np.asarray(rep, dtype=np.int64))
        offsets[i + 1] = offsets[i] + len(rep)
    masks = [H.mask for H in members]
    supersets = [
        [j for j in range(len(members)) if members[j].order > H.order and masks[j][H.elements].all()]
        for H in members
    ]
    node_member = np.repeat(np.arange(len(members)), np.diff(offsets))
    node_rep = np.concatenate(reps) if reps else np.zeros(0, dtype=np.int64)
    src, dst = [], []
    for i in range(len(members)):
        ids = np.arange(offsets[i], offsets[i + 1])
        for j in supersets[i]:
            src.append(ids)
            dst.append(offsets[j] + coset_of[j][reps[i]])
    n = int(offsets[-1])
    if src:
        src = np.concatenate(src)
        dst = np.concatenate(dst)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    up_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(up_ptr, src + 1, 1)
    up_ptr = np.cumsum(up_ptr)
    return CosetPoset(G, family, offsets, node_member, node_rep, coset_of, up_ptr, dst.astype(np.int64), supersets)


# -- order complex -----------------------------------------------------------


@dataclass
class OrderComplex:
    """Strictly increasing chains of nodes; ``simplices[k]`` has shape (n_k, k+1)."""

    poset: CosetPoset | None
    simplices: list
    complete: bool
    n_vertices: int

    @property
    def counts(self) -> list[int]:
        return [int(s.shape[0]) for s in self.simplices]

    @property
    def max_dim(self) -> int:
        return len(self.simplices) - 1

    def boundary(self, k: int) -> SparseIntMatrix:
        return simplicial_boundary(self.simplices[k - 1], self.simplices[k], self.n_vertices)

    def boundaries(self) -> list[SparseIntMatrix]:
        return [self.boundary(k) for k in range(1, len(self.simplices))]

    def homology(self, modulus: int = 0) -> HomologyResult:
        """Degrees 0..max_dim-1, plus max_dim when no higher simplices exist."""
        bds = self.boundaries()
        dims = self.counts
        if self.complete:
            bds.append(SparseIntMatrix(dims[-1], 0))
            dims = dims + [0]
        if not bds:
            raise ValueError("truncated at dimension 0; no degree is exact")
        return homology(bds, dims, modulus)

    def euler_characteristic(self) -> int:
        if not self.complete:
            raise ValueError("complex truncated; Euler characteristic needs all simplices")
        return sum((-1) ** k * n for k, n in enumerate(self.counts))


def _encode(chains: np.ndarray, base: int) -> np.ndarray:
    code = np.zeros(chains.shape[0], dtype=np.int64)
    for j in range(chains.shape[1]):
        code = code * base + chains[:, j]
    return code


def simplicial_boundary(faces: np.ndarray, simplices: np.ndarray, base: int, skip_missing: bool = False) -> SparseIntMatrix:
    """Alternating-sum boundary; rows index ``faces`` (sorted lexicographically)."""
    m, width = simplices.shape
    face_codes = _encode(faces, base)
    if face_codes.size > 1 and not np.all(np.diff(face_codes) > 0):
        raise ValueError("faces must be sorted and unique")
    rows, cols, vals = [], [], []
    colidx = np.arange(m)
    for i in range(width):
        f = np.delete(simplices, i, axis=1)
        codes = _encode(f, base)
        pos = np.searchsorted(face_codes, codes)
        pos_c = np.minimum(pos, max(face_codes.size - 1, 0))
        found = (pos < face_codes.size) & (face_codes[pos_c] == codes) if face_codes.size else np.zeros(m, bool)
        if not skip_missing and not found.all():
            raise ValueError("a face is missing from the face list")
        rows.append(pos_c[found])
        cols.append(colidx[found])
        vals.append(np.full(int(found.sum()), -1 if i % 2 else 1))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    v = np.concatenate(vals)
    # repeated faces (possible for degenerate-free Moore tuples with equal non-adjacent entries) add up
    M = SparseIntMatrix(faces.shape[0], m)
    acc: dict = {}
    for a, b, x in zip(r.tolist(), c.tolist(), v.tolist()):
        acc[(a, b)] = acc.get((a, b), 0) + x
    M.entries = {k: x for k, x in acc.items() if x}
    return M


def _extend_chains(chains: np.ndarray, ptr: np.ndarray, idx: np.ndarray) -> np.ndarray:
    ends = chains[:, -1]
    starts = ptr[ends]
    cnt = ptr[ends + 1] - starts
    total = int(cnt.sum())
    if total == 0:
        return np.zeros((0, chains.shape[1] + 1), dtype=np.int64)
    rep = np.repeat(np.arange(chains.shape[0]), cnt)
    offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    new = idx[starts[rep] + offs]
    return np.column_stack([chains[rep], new])


def order_complex(poset: CosetPoset, max_dim: int, budget: int = 5 * 10**7) -> OrderComplex:
    chains = [np.arange(poset.n_nodes, dtype=np.int64)[:, None]]
    complete = False
    while True:
        nxt = _extend_chains(chains[-1], poset.up_ptr, poset.up_indices)
        if nxt.shape[0] == 0:
            complete = True
            break
        if len(chains) > max_dim:
            break
        if nxt.size > budget:
            raise BudgetExceeded(f"{nxt.shape[0]} chains of length {nxt.shape[1]} exceed budget")
        chains.append(nxt)
    return OrderComplex(poset, chains, complete, poset.n_nodes)


def chain_counts(poset: CosetPoset) -> list[int]:
    """Simplex counts in every dimension, by dynamic programming over nodes.

    ``paths[v][k]`` = number of chains of length k+1 starting at v.
    """
    n = poset.n_nodes
    sizes = np.array([H.order for H in poset.family.members])[poset.node_member]
    order = np.argsort(-sizes, kind="stable")
    counts: list = [None] * n
    for v in order:
        acc = [1]
        for u in poset.up(v):
            cu = counts[u]
            for k, c in enumerate(cu):
                if k + 1 >= len(acc):
                    acc.append(0)
                acc[k + 1] += c
        counts[v] = acc
    total: list[int] = []
    for c in counts:
        for k, x in enumerate(c):
            if k >= len(total):
                total.append(0)
            total[k] += x
    return total


def euler_characteristic(poset: CosetPoset) -> tuple[int, int]:
    """(chi from simplex counts, chi from the weighted flag formula).

    The second route never looks at cosets: it sums (-1)^k [G:H_0] over
    chains H_0 < ... < H_k of family members.
    """
    counts = chain_counts(poset)
    chi_enum = sum((-1) ** k * n for k, n in enumerate(counts))
    return chi_enum, weighted_flag_chi(poset.group, poset.family, poset.supersets)


def weighted_flag_counts(G: FiniteGroup, family: SubgroupFamily, supersets=None) -> list[int]:
    members = family.members
    if supersets is None:
        masks = [H.mask for H in members]
        supersets = [
            [j for j in range(len(members)) if members[j].order > H.order and masks[j][H.elements].all()]
            for H in members
        ]
    flags: list = [None] * len(members)
    for i in sorted(range(len(members)), key=lambda i: -members[i].order):
        acc = [1]
        for j in supersets[i]:
            for k, c in enumerate(flags[j]):
                if k + 1 >= len(acc):
                    acc.append(0)
                acc[k + 1] += c
        flags[i] = acc
    total: list[int] = []
    for i, H in enumerate(members):
        idx = G.order // H.order
        for k, c in enumerate(flags[i]):
            if k >= len(total):
                total.append(0)
            total[k] += idx * c
    return total


def weighted_flag_chi(G: FiniteGroup, family: SubgroupFamily, supersets=None) -> int:
    return sum((-1) ** k * n for k, n in enumerate(weighted_flag_counts(G, family, supersets)))


def connected_components(poset: CosetPoset) -> list[np.ndarray]:
    n = poset.n_nodes
    src = np.repeat(np.arange(n), np.diff(poset.up_ptr))
    adj = csr_matrix((np.ones(src.size), (src, poset.up_indices)), shape=(n, n))
    k, labels = _cc(adj, directed=False)
    comps = [np.flatnonzero(labels == i) for i in range(k)]
    return sorted(comps, key=lambda c: (c.size, int(c[0])))


# -- join decomposition ------------------------------------------------------


@dataclass
class JoinDecomposition:
    divides: DividesResult
    upper: CosetPoset  # C(F^N, G)
    quotient: CosetPoset  # C(bar F_N, G/N)
    quotient_group: FiniteGroup


def join_decompose(G: FiniteGroup, family: SubgroupFamily, N: Subgroup) -> JoinDecomposition:
    div = divides_check(G, family, N)
    if not div.divides:
        raise ValueError(f"N does not divide the family: {div.witness[0]}")
    if not div.upper:
        raise ValueError("F^N is empty")
    upper = build_coset_poset(G, SubgroupFamily(G, family.q, list(div.upper)))
    Q, proj = quotient_group(G, N)
    low = {}
    for H in div.lower:
        U = image(Q, proj, H)
        low[U.key] = U
    quot = build_coset_poset(Q, SubgroupFamily(Q, family.q, list(low.values())))
    return JoinDecomposition(div, upper, quot, Q)


# -- Moore complex of E_*(q+1, G) --------------------------------------------


def _nil_mask(G: FiniteGroup, tuples: np.ndarray, q: int) -> np.ndarray:
    """Affinely nil-q test on rows of ``tuples`` (q in {1, 2} vectorised)."""
    m, w = tuples.shape
    if w <= 1:
        return np.ones(m, dtype=bool)
    last = G.inverse[tuples[:, -1]]
    diffs = [G.table[last, tuples[:, i]] for i in range(w - 1)]
    ok = np.ones(m, dtype=bool)
    if q == 1:
        for a in diffs:
            for b in diffs:
                ok &= G.commutator(a, b) == 0
        return ok
    if q == 2:
        for a in diffs:
            for b in diffs:
                cm = G.commutator(a, b)
                for c in diffs:
                    ok &= G.commutator(cm, c) == 0
        return ok
    from .groups import is_affinely_nil

    return np.array([is_affinely_nil(G, list(row), q) for row in tuples])


def affinely_nil_tuples(G: FiniteGroup, k: int, q: int, normalized: bool = False) -> np.ndarray:
    """All of E_k(q+1, G) (or its nondegenerate part) in lexicographic order."""
    cur = np.arange(G.order, dtype=np.int64)[:, None]
    for _ in range(k):
        m = cur.shape[0]
        rep = np.repeat(np.arange(m), G.order)
        nxt = np.column_stack([cur[rep], np.tile(np.arange(G.order), m)])
        keep = _nil_mask(G, nxt, q)
        if normalized:
            keep &= nxt[:, -1] != nxt[:, -2]
        cur = nxt[keep]
    return cur


def count_affinely_nil(G: FiniteGroup, k: int, q: int) -> int:
    return int(affinely_nil_tuples(G, k, q).shape[0])


@dataclass
class MooreComplexSlice:
    group: FiniteGroup
    q: int
    tuples: list  # nondegenerate k-simplices, k = 0..max_dim
    boundaries: list = field(default_factory=list)

    @property
    def counts(self) -> list[int]:
        return [int(t.shape[0]) for t in self.tuples]

    def homology(self, modulus: int = 0) -> HomologyResult:
        return homology(self.boundaries, self.counts, modulus)


def moore_complex_small(G: FiniteGroup, q: int, max_dim: int, budget: int = DEFAULT_MOORE_BUDGET) -> MooreComplexSlice:
    """Normalised Moore complex of E_*(q+1, G) in dimensions 0..max_dim.

    Degenerate tuples (equal adjacent entries) are dropped along with
    degenerate faces; homology in degrees < max_dim is exact.
    """
    if G.order ** (max_dim + 1) > budget:
        raise BudgetExceeded(f"|G|^{max_dim + 1} exceeds Moore budget {budget}")
    tuples = [affinely_nil_tuples(G, k, q, normalized=True) for k in range(max_dim + 1)]
    bds = [simplicial_boundary(tuples[k - 1], tuples[k], G.order, skip_missing=True) for k in range(1, max_dim + 1)]
    return MooreComplexSlice(G, q, tuples, bds)

