"""Linear models over F_p: subspaces, the commutator trilinear form, counting."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .groups import FiniteGroup, Subgroup


def gaussian_binomial(r: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^r."""
    if k < 0 or k > r:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (r - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def rref(vectors: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form (nonzero rows only), pivots leftmost."""
    a = [[int(x) % p for x in v] for v in vectors]
    if not a:
        return ()
    ncols = len(a[0])
    lead = 0
    rows = len(a)
    for c in range(ncols):
        piv = next((i for i in range(lead, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[lead], a[piv] = a[piv], a[lead]
        inv = pow(a[lead][c], -1, p)
        a[lead] = [(x * inv) % p for x in a[lead]]
        for i in range(rows):
            if i != lead and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[lead])]
        lead += 1
        if lead == rows:
            break
    return tuple(tuple(row) for row in a[:lead])


@dataclass(frozen=True)
class SubspaceFp:
    p: int
    r: int
    basis: tuple  # RREF rows

    @classmethod
    def span(cls, vectors, p: int, r: int) -> "SubspaceFp":
        return cls(p, r, rref(list(vectors), p))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def key(self) -> bytes:
        return bytes([self.p, self.r]) + bytes(x for row in self.basis for x in row)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.basis)

    def vectors(self) -> np.ndarray:
        """All p^dim elements as an (p^dim, r) array."""
        if not self.basis:
            return np.zeros((1, self.r), dtype=np.int64)
        B = np.asarray(self.basis, dtype=np.int64)
        coeffs = np.asarray(list(itertools.product(range(self.p), repeat=self.dim)), dtype=np.int64)
        return (coeffs @ B) % self.p

    def contains(self, v) -> bool:
        return rref(list(self.basis) + [list(v)], self.p) == self.basis

    def __le__(self, other: "SubspaceFp") -> bool:
        return all(other.contains(v) for v in self.basis)

    def coset_rep(self, v) -> tuple[int, ...]:
        """Canonical affine representative: zero in every pivot coordinate."""
        v = [int(x) % self.p for x in v]
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [(x - f * y) % self.p for x, y in zip(v, row)]
        return tuple(v)

    def ids(self) -> np.ndarray:
        """Element ids in the ``elementary_abelian(p, r)`` encoding."""
        return np.sort(self.vectors() @ (self.p ** np.arange(self.r)))

    def to_subgroup(self, V: FiniteGroup) -> Subgroup:
        return Subgroup(self.ids(), (), V)

    def __repr__(self):
        return f"<{', '.join(''.join(map(str, row)) for row in self.basis) or '0'}>"


def enumerate_subspaces(p: int, r: int, k: int, budget: int = 10**6) -> list[SubspaceFp]:
    """All k-dim subspaces of F_p^r, one per RREF pivot profile and free-entry choice."""
    if gaussian_binomial(r, k, p) > budget:
        raise ValueError("subspace count exceeds budget")
    out = []
    for pivots in itertools.combinations(range(r), k):
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, r) if c not in pivots]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * r for _ in range(k)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            out.append(SubspaceFp(p, r, tuple(tuple(row) for row in rows)))
    if len(out) != gaussian_binomial(r, k, p):
        raise AssertionError("RREF enumeration disagrees with the Gaussian binomial")
    return out


def all_subspaces(p: int, r: int, max_dim: int | None = None) -> list[SubspaceFp]:
    top = r if max_dim is None else max_dim
    return [U for k in range(top + 1) for U in enumerate_subspaces(p, r, k)]


def vector_ids(vectors: np.ndarray, p: int) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=np.int64) % p
    return vectors @ (p ** np.arange(vectors.shape[-1]))


# -- trilinear forms --------------------------------------------------------


PHI_DIAG = (-1, 0, 1)


def phi(v, p: int) -> np.ndarray:
    """The linear map e1 -> -e1, e2 -> 0, e3 -> e3."""
    return (np.asarray(v) * np.asarray(PHI_DIAG)) % p


def beta_closed_form(x, y, z, p: int):
    """det(x | y | phi(z)) mod p; broadcasts over leading axes."""
    x, y, z = (np.asarray(a, dtype=np.int64) for a in (x, y, z))
    w = phi(z, p)
    det = (
        x[..., 0] * (y[..., 1] * w[..., 2] - y[..., 2] * w[..., 1])
        - x[..., 1] * (y[..., 0] * w[..., 2] - y[..., 2] * w[..., 0])
        + x[..., 2] * (y[..., 0] * w[..., 1] - y[..., 1] * w[..., 0])
    )
    return det % p


def u4_triple_formula(xl, yl, zl, p: int):
    """y23 (x12 z34 + x34 z12) - x23 (y12 z34 + y34 z12), on U4 entry labels."""
    xl, yl, zl = (np.asarray(a, dtype=np.int64) for a in (xl, yl, zl))
    x12, x23, x34 = xl[..., 0], xl[..., 3], xl[..., 5]
    y12, y23, y34 = yl[..., 0], yl[..., 3], yl[..., 5]
    z12, z34 = zl[..., 0], zl[..., 5]
    return (y23 * (x12 * z34 + x34 * z12) - x23 * (y12 * z34 + y34 * z12)) % p


@dataclass
class TrilinearForm:
    p: int
    tensor: np.ndarray  # tensor[i, j, k] = beta(e_i, e_j, e_k)
    provenance: str

    def __call__(self, x, y, z):
        x, y, z = (np.asarray(a, dtype=np.int64) for a in (x, y, z))
        return np.einsum("...i,...j,...k,ijk->...", x, y, z, self.tensor) % self.p

    @property
    def r(self) -> int:
        return self.tensor.shape[0]

    def vanishes_on(self, U: SubspaceFp) -> bool:
        B = np.asarray(U.basis, dtype=np.int64).reshape(-1, self.r)
        if B.shape[0] == 0:
            return True
        sub = np.einsum("ai,bj,ck,ijk->abc", B, B, B, self.tensor) % self.p
        return not sub.any()


def closed_form_u4_tensor(p: int) -> TrilinearForm:
    e = np.eye(3, dtype=np.int64)
    t = np.zeros((3, 3, 3), dtype=np.int64)
    for i, j, k in itertools.product(range(3), repeat=3):
        t[i, j, k] = beta_closed_form(e[i], e[j], e[k], p)
    return TrilinearForm(p, t, "closed-form")


class FormMismatch(AssertionError):
    pass


def beta_tensor(G: FiniteGroup, samples: int = 10**6, seed: int = 0) -> TrilinearForm:
    """The U4 commutator form read off the group and checked against both formulas.

    [x, y, z] lies in Gamma^3 = {I + t E14}; its value is the (1,4) entry t.
    Basis triples use the generators a, b, c; general triples are checked
    exhaustively when |G|^3 <= ``samples`` and on ``samples`` random triples
    otherwise.
    """
    p = G.p
    lab = np.asarray(G.labels, dtype=np.int64)
    gens = G.generators
    t = np.zeros((3, 3, 3), dtype=np.int64)
    for i, j, k in itertools.product(range(3), repeat=3):
        c = int(G.commutator3(gens[i], gens[j], gens[k]))
        t[i, j, k] = lab[c, 2]
    form = TrilinearForm(p, t, "from-group")
    if not np.array_equal(t, closed_form_u4_tensor(p).tensor):
        raise FormMismatch("basis values differ from det(x|y|phi(z))")
    n = G.order
    if n**3 <= samples:
        idx = np.arange(n**3)
        x, y, z = idx // (n * n), (idx // n) % n, idx % n
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, samples))
    c = G.commutator3(x, y, z)
    if np.any(lab[c][:, [0, 1, 3, 4, 5]] != 0):
        raise FormMismatch("triple commutator left Gamma^3")
    val = lab[c, 2]
    ab = lab[:, [0, 3, 5]]
    if not np.array_equal(val, beta_closed_form(ab[x], ab[y], ab[z], p)):
        raise FormMismatch("group values differ from det(x|y|phi(z))")
    if not np.array_equal(val, u4_triple_formula(lab[x], lab[y], lab[z], p)):
        raise FormMismatch("group values differ from the coordinate formula")
    return form


def isotropic_family(
    form: TrilinearForm,
    shortcut: Callable[[SubspaceFp], bool] | None = None,
    max_dim: int | None = None,
) -> list[SubspaceFp]:
    """Subspaces U with beta|U^3 == 0, by brute force over all vectors of U.

    When ``shortcut`` is given (a dimension-2 criterion) it must agree on
    every plane.  Members are sorted by (dim, basis).
    """
    p, r = form.p, form.r
    out = []
    for U in all_subspaces(p, r, max_dim):
        vecs = U.vectors()
        vals = form(vecs[:, None, None, :], vecs[None, :, None, :], vecs[None, None, :, :])
        brute = not vals.any()
        if brute != form.vanishes_on(U):
            raise FormMismatch(f"basis and brute-force tests disagree on {U}")
        if shortcut is not None and U.dim == 2 and shortcut(U) != brute:
            raise FormMismatch(f"dimension-2 shortcut disagrees on {U}")
        if brute:
            out.append(U)
    return out


def phi_invariant(U: SubspaceFp) -> bool:
    return all(U.contains(phi(v, U.p)) for v in U.basis)


def isotropic_family_u4(p: int, form: TrilinearForm | None = None) -> list[SubspaceFp]:
    return isotropic_family(form or closed_form_u4_tensor(p), shortcut=phi_invariant)


# -- Burnside counts ---------------------------------------------------------


@dataclass(frozen=True)
class BurnsideCounts:
    r: int
    n0: int
    n1: int
    n2: int

    @property
    def chi(self) -> int:
        return self.n0 - self.n1 + self.n2

    @property
    def m(self) -> int:
        return self.chi - 1


def burnside_counts(r: int) -> BurnsideCounts:
    """Simplex counts of the coset poset of all subspaces of dim <= 2 in F_3^r."""
    if r < 3:
        raise ValueError("r >= 3 required")
    g1, g2, g21 = gaussian_binomial(r, 1, 3), gaussian_binomial(r, 2, 3), gaussian_binomial(2, 1, 3)
    n0 = 3**r + 3 ** (r - 1) * g1 + 3 ** (r - 2) * g2
    n1 = 3**r * g1 + 3**r * g2 + 3 ** (r - 1) * g21 * g2
    n2 = 3**r * g21 * g2
    return BurnsideCounts(r, n0, n1, n2)


def burnside_m_closed(r: int) -> int:
    return 3 ** (r - 3) * (9**r - 13 * 3**r + 39) - 1


# -- quotient groups as vector spaces -----------------------------------------


@dataclass
class LinearModel:
    """G/N = F_p^r with coordinates read in the basis of chosen generator images."""

    group: FiniteGroup
    kernel: Subgroup
    p: int
    basis_elements: tuple  # elements of G whose images form the basis
    coords: np.ndarray  # (|G|, r)
    space: FiniteGroup

    @property
    def r(self) -> int:
        return self.coords.shape[1]

    @property
    def projection(self) -> np.ndarray:
        return vector_ids(self.coords, self.p)

    def preimage(self, U: SubspaceFp) -> Subgroup:
        return Subgroup(np.flatnonzero(np.isin(self.projection, U.ids())), (), self.group)


def linear_model(G: FiniteGroup, N: Subgroup, p: int, basis=None) -> LinearModel:
    """Coordinates on G/N, which must be elementary abelian of exponent p.

    ``basis`` defaults to a greedy choice among the generators of G.
    """
    from .catalog import elementary_abelian
    from .groups import quotient_group

    Q, proj = quotient_group(G, N)
    if not Q.is_abelian() or any(Q.power(x, p) != 0 for x in range(Q.order)):
        raise ValueError("G/N is not elementary abelian of the given exponent")
    r = round(np.log(Q.order) / np.log(p))
    if p**r != Q.order:
        raise ValueError("|G/N| is not a power of p")
    if basis is None:
        basis, span = [], np.zeros(1, dtype=np.int64)
        for g in G.generators:
            if len(basis) == r:
                break
            if proj[g] not in span:
                basis.append(int(g))
                span = Q.closure_mask([int(proj[b]) for b in basis]).nonzero()[0]
    basis = tuple(int(b) for b in basis)
    if len(basis) != r:
        raise ValueError("generator images do not span G/N")
    code = np.full(Q.order, -1, dtype=np.int64)
    vecs = np.asarray(list(itertools.product(range(p), repeat=r)), dtype=np.int64)
    for v in vecs:
        q = 0
        for b, c in zip(basis, v):
            q = Q.mul(q, Q.power(int(proj[b]), int(c)))
        if code[q] >= 0:
            raise ValueError("basis images are dependent")
        code[q] = vector_ids(v, p)
    flat = code[proj]
    coords = (flat[:, None] // (p ** np.arange(r))[None, :]) % p
    return LinearModel(G, N, p, basis, coords, elementary_abelian(p, r))
