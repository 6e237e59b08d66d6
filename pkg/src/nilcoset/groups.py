"""Finite groups as multiplication tables over element ids.

Every group here is finite and small enough (a few thousand elements) to
hold its Cayley table in memory.  Elements are integers ``0..order-1`` and
id 0 is always the identity, so subgroup closure, commutators and central
series are all vectorised table lookups.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

# Cayley tables above this order would not fit comfortably in memory.
TABLE_CAP = 8000
DEFAULT_SWEEP_BUDGET = 10**8


class GroupError(ValueError):
    pass


def _dtype_for(n: int):
    return np.int16 if n < 2**15 else np.int32


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``labels[i]`` is the backend's native representation of element ``i``
    (a matrix entry tuple, an exponent vector, a permutation...).
    """

    def __init__(
        self,
        table: np.ndarray,
        generators: Sequence[int],
        labels: Sequence[Hashable] | None = None,
        backend: str = "explicit-table",
        name: str = "",
    ):
        table = np.asarray(table)
        n = table.shape[0]
        if table.shape != (n, n):
            raise GroupError("multiplication table must be square")
        if not np.array_equal(table[0], np.arange(n)) or not np.array_equal(table[:, 0], np.arange(n)):
            raise GroupError("id 0 must be the identity")
        self.table = table.astype(_dtype_for(n), copy=False)
        self.table.setflags(write=False)
        self.order = n
        self.generators = tuple(int(g) for g in generators)
        self.labels = list(labels) if labels is not None else list(range(n))
        self.backend = backend
        self.name = name or f"G{n}"
        rows, cols = np.nonzero(self.table == 0)
        if rows.size != n or np.unique(rows).size != n:
            raise GroupError("every row needs exactly one identity entry")
        inv = np.empty(n, dtype=np.int64)
        inv[rows] = cols
        self.inverse = inv
        self._index = None
        self._whole = None

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order}, backend={self.backend!r})"

    # -- element access -------------------------------------------------

    def index(self, label) -> int:
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        return self._index[label]

    def mul(self, x, y):
        return self.table[x, y]

    def inv(self, x):
        return self.inverse[x]

    def mul_many(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.table[out, x]
        return out

    def power(self, x: int, k: int) -> int:
        k %= self.element_order(x)
        out = 0
        for _ in range(k):
            out = int(self.table[out, x])
        return out

    def element_order(self, x: int) -> int:
        k, y = 1, int(x)
        while y != 0:
            y = int(self.table[y, x])
            k += 1
        return k

    def conj(self, x, g):
        """``g^-1 x g``."""
        return self.table[self.table[self.inverse[g], x], g]

    def commutator(self, x, y):
        """``[x, y] = x^-1 y^-1 x y``; works elementwise on arrays."""
        t = self.table
        return t[t[self.inverse[x], self.inverse[y]], t[x, y]]

    def commutator3(self, x, y, z):
        return self.commutator(self.commutator(x, y), z)

    # -- subgroups ------------------------------------------------------

    def whole(self) -> "Subgroup":
        if self._whole is None:
            self._whole = Subgroup(np.arange(self.order), self.generators, self)
        return self._whole

    def trivial(self) -> "Subgroup":
        return Subgroup(np.zeros(1, dtype=np.int64), (), self)

    def closure_mask(self, gens: Iterable[int], start: np.ndarray | None = None) -> np.ndarray:
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.zeros(1, dtype=np.int64)
        if start is not None:
            mask[start] = True
            frontier = np.asarray(start, dtype=np.int64)
        if gens.size == 0:
            return mask
        mask[gens] = True
        frontier = np.union1d(frontier, gens)
        while frontier.size:
            cand = self.table[np.ix_(frontier, gens)].ravel()
            cand = cand[~mask[cand]]
            if cand.size == 0:
                break
            cand = np.unique(cand)
            mask[cand] = True
            frontier = cand
        return mask

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        gens = tuple(int(g) for g in gens)
        return Subgroup(np.flatnonzero(self.closure_mask(gens)), gens, self)

    def normal_closure(self, gens: Iterable[int], within: "Subgroup | None" = None) -> "Subgroup":
        """Smallest subgroup containing ``gens`` normalised by ``within`` (default G)."""
        gens = [int(g) for g in gens]
        conj_by = (within or self.whole()).gens_or_all()
        mask = self.closure_mask(gens)
        while True:
            elems = np.flatnonzero(mask)
            c = self.conj(elems[:, None], conj_by[None, :]).ravel()
            new = np.unique(c[~mask[c]])
            if new.size == 0:
                break
            gens.extend(int(v) for v in new)
            mask = self.closure_mask(gens, start=elems)
        return Subgroup(np.flatnonzero(mask), tuple(gens), self)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check_axioms(self, budget: int = 256**3, seed: int = 0) -> bool:
        """Associativity (exhaustive when ``order**3 <= budget``, else sampled)."""
        n, t = self.order, self.table
        ident = np.arange(n)
        if n * n <= budget:
            if not (np.all(np.sort(t, axis=1) == ident) and np.all(np.sort(t, axis=0) == ident[:, None])):
                return False
        if n**3 <= budget:
            for x in range(n):
                lhs = t[t[x][:, None], np.arange(n)[None, :]]  # (x*y)*z
                rhs = t[x][t]  # x*(y*z)
                if not np.array_equal(lhs, rhs):
                    return False
        else:
            rng = np.random.default_rng(seed)
            x, y, z = rng.integers(0, n, size=(3, budget // 100 or 1))
            if not np.array_equal(t[t[x, y], z], t[x, t[y, z]]):
                return False
        return bool(np.all(t[np.arange(n), self.inverse] == 0))


@dataclass(frozen=True, eq=False)
class Subgroup:
    elements: np.ndarray
    generators: tuple
    group: FiniteGroup = field(repr=False)

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=np.int64)
        el.setflags(write=False)
        object.__setattr__(self, "elements", el)

    @property
    def order(self) -> int:
        return int(self.elements.size)

    @property
    def key(self) -> bytes:
        return self.elements.tobytes()

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.elements] = True
        return m

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.elements, x)
        return bool(i < self.elements.size and self.elements[i] == x)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.elements]))

    def __repr__(self):
        return f"Subgroup(order={self.order}, gens={self.generators})"

    def gens_or_all(self) -> np.ndarray:
        if self.generators:
            return np.asarray(self.generators, dtype=np.int64)
        return self.elements

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self) -> bool:
        G = self.group
        g = np.asarray(G.generators, dtype=np.int64)
        c = G.conj(self.elements[:, None], g[None, :])
        return bool(self.mask[c].all())

    def commutator_with(self, other: "Subgroup") -> "Subgroup":
        """``[self, other]``, assuming ``other`` normalises ``self``-commutators (true for LCS terms)."""
        G = self.group
        b = other.gens_or_all()
        c = np.unique(G.commutator(self.elements[:, None], b[None, :]).ravel())
        c = c[c != 0]
        return G.normal_closure(c, within=other)


@dataclass(frozen=True)
class CentralSeries:
    terms: tuple
    nilpotency_class: int | None  # None: not nilpotent

    @property
    def nilpotent(self) -> bool:
        return self.nilpotency_class is not None


def lower_central_series(H: Subgroup) -> CentralSeries:
    """Gamma^1 = H, Gamma^{k+1} = [Gamma^k, H]; stops at 1 or at stabilisation."""
    terms = [H]
    while not terms[-1].is_trivial():
        nxt = terms[-1].commutator_with(H)
        if nxt.order == terms[-1].order:
            return CentralSeries(tuple(terms), None)
        terms.append(nxt)
    return CentralSeries(tuple(terms), len(terms) - 1)


def nilpotency_class(H: Subgroup) -> int | None:
    return lower_central_series(H).nilpotency_class


def class_at_most_two(G: FiniteGroup, gens: Sequence[int]) -> bool:
    """cl<gens> <= 2 iff every [g_i, g_j, g_k] on generators is trivial."""
    g = np.asarray(gens, dtype=np.int64)
    if g.size < 2:
        return True
    c = G.commutator(g[:, None], g[None, :])
    return bool(np.all(G.commutator(c[:, :, None], g[None, None, :]) == 0))


def center(G: FiniteGroup) -> Subgroup:
    gens = np.asarray(G.generators, dtype=np.int64)
    t = G.table
    mask = np.all(t[:, gens] == t[gens, :].T, axis=1)
    return Subgroup(np.flatnonzero(mask), (), G)


@dataclass
class SweepResult:
    """Outcome of a universally quantified check over tuples of elements."""

    ok: bool
    witness: tuple | None = None
    checked: int = 0
    sampled: bool = False

    def __bool__(self):
        return self.ok

    @property
    def status(self) -> str:
        if not self.ok:
            return "fail"
        return "sampled-pass" if self.sampled else "pass"


def sweep(
    n_args: int,
    domain: np.ndarray,
    predicate: Callable[..., np.ndarray],
    budget: int = DEFAULT_SWEEP_BUDGET,
    seed: int = 0,
    chunk: int = 2**20,
) -> SweepResult:
    """Check ``predicate(*args)`` on all of ``domain**n_args``.

    ``predicate`` receives equal-length arrays and returns a boolean array.
    Above ``budget`` tuples a seeded random sample of size ``budget`` is used
    and the result is flagged as sampled.  The witness is the
    lexicographically first failing tuple in the order visited.
    """
    domain = np.asarray(domain, dtype=np.int64)
    m = domain.size
    total = m**n_args
    if total <= budget:
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            args = []
            for _ in range(n_args):
                args.append(idx % m)
                idx = idx // m
            args = [domain[a] for a in reversed(args)]
            good = np.asarray(predicate(*args), dtype=bool)
            if not good.all():
                j = int(np.argmin(good))
                return SweepResult(False, tuple(int(a[j]) for a in args), start + j + 1)
        return SweepResult(True, None, total)
    rng = np.random.default_rng(seed)
    done = 0
    while done < budget:
        k = min(chunk, budget - done)
        args = [domain[rng.integers(0, m, size=k)] for _ in range(n_args)]
        good = np.asarray(predicate(*args), dtype=bool)
        if not good.all():
            j = int(np.argmin(good))
            return SweepResult(False, tuple(int(a[j]) for a in args), done + j + 1, True)
        done += k
    return SweepResult(True, None, done, True)


def is_two_engel(G: FiniteGroup, budget: int = DEFAULT_SWEEP_BUDGET, seed: int = 0) -> SweepResult:
    return sweep(2, np.arange(G.order), lambda x, y: G.commutator3(x, y, y) == 0, budget, seed)


def is_affinely_nil(G: FiniteGroup, tup: Sequence[int], q: int) -> bool:
    """All coordinates lie in one left coset of a subgroup of class <= q."""
    if len(tup) == 0:
        raise GroupError("tuple must be nonempty")
    last = G.inverse[int(tup[-1])]
    diffs = [int(G.table[last, int(x)]) for x in tup[:-1]]
    if q == 2:
        return class_at_most_two(G, diffs)
    c = nilpotency_class(G.subgroup(diffs))
    return c is not None and c <= q


def from_generators(
    gens: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable,
    backend: str = "generated",
    name: str = "",
    cap: int = TABLE_CAP,
) -> FiniteGroup:
    """Enumerate ``<gens>`` breadth first and build its Cayley table.

    Ids are assigned in BFS order (identity first).  Only right
    multiplication by generators is evaluated with ``mul``; the full table
    is then filled column by column along the BFS tree, since
    ``x * (y g) = (x * y) * g``.
    """
    labels = [identity]
    index = {identity: 0}
    parent: list[tuple[int, int]] = [(-1, -1)]
    right: list[list[int]] = [[] for _ in gens]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        x = labels[i]
        for k, g in enumerate(gens):
            y = mul(x, g)
            j = index.get(y)
            if j is None:
                j = len(labels)
                if j >= cap:
                    raise GroupError(f"group order exceeds cap {cap}")
                index[y] = j
                labels.append(y)
                parent.append((i, k))
                queue.append(j)
            right[k].append(j)
    n = len(labels)
    R = np.asarray(right, dtype=np.int64)  # R[k, x] = x * g_k
    table = np.empty((n, n), dtype=_dtype_for(n))
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        p, k = parent[j]
        table[:, j] = R[k][table[:, p]]
    gen_ids = [index[g] for g in gens]
    G = FiniteGroup(table, gen_ids, labels, backend, name)
    G._index = index
    return G


def from_table(table: np.ndarray, generators: Sequence[int] | None = None, name: str = "") -> FiniteGroup:
    table = np.asarray(table)
    if generators is None:
        generators = _greedy_generators(table)
    return FiniteGroup(table, generators, None, "explicit-table", name)


def _greedy_generators(table: np.ndarray) -> list[int]:
    n = table.shape[0]
    G = FiniteGroup(table, [], None)
    gens: list[int] = []
    mask = G.closure_mask([])
    for x in range(n):
        if not mask[x]:
            gens.append(x)
            mask = G.closure_mask(gens)
    return gens


def quotient_group(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """``G/N`` on coset ids (ordered by least element) and the projection array."""
    if not N.is_normal():
        raise GroupError("subgroup is not normal")
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if proj[x] < 0:
            proj[G.table[x, N.elements]] = len(reps)
            reps.append(x)
    reps = np.asarray(reps)
    qt = proj[G.table[np.ix_(reps, reps)]]
    gens = sorted({int(proj[g]) for g in G.generators} - {0})
    Q = FiniteGroup(qt, gens, [int(r) for r in reps], "explicit-table", f"{G.name}/N{N.order}")
    return Q, proj
