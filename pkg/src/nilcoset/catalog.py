"""Concrete groups: unitriangular matrices, power-commutator groups, products.

Power-commutator (pc) presentations use generators ``g_0..g_{n-1}`` with
relative orders ``e_i``; every element has a unique normal form
``g_0^a_0 ... g_{n-1}^a_{n-1}`` with ``0 <= a_i < e_i``.  Multiplication is
collection from the left.  Tails are stored as exponent vectors and must
only involve generators of larger index.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    from_generators,
    from_table,
    is_two_engel,
    lower_central_series,
    nilpotency_class,
    quotient_group,
    _dtype_for,
)


class PresentationError(GroupError):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


# -- power-commutator collection -----------------------------------------


@dataclass
class PcPresentation:
    orders: Sequence[int]
    power_tails: dict = field(default_factory=dict)  # i -> exponent vector of g_i^{e_i}
    comm_tails: dict = field(default_factory=dict)  # (j, i), j > i -> exponent vector of [g_j, g_i]
    names: Sequence[str] | None = None

    @property
    def n(self) -> int:
        return len(self.orders)

    def __post_init__(self):
        self.orders = tuple(int(e) for e in self.orders)
        n = self.n
        self.power_tails = {int(i): tuple(v) for i, v in self.power_tails.items()}
        self.comm_tails = {(int(j), int(i)): tuple(v) for (j, i), v in self.comm_tails.items()}
        for i, v in self.power_tails.items():
            self._check_tail(v, i)
        for (j, i), v in self.comm_tails.items():
            if not j > i:
                raise PresentationError(f"commutator tail key ({j},{i}) needs j > i")
            self._check_tail(v, j)
        if self.names is None:
            self.names = [f"g{i + 1}" for i in range(n)]

    def _check_tail(self, v, above):
        if len(v) != self.n:
            raise PresentationError("tail has wrong length")
        for k, a in enumerate(v):
            if not 0 <= a < self.orders[k]:
                raise PresentationError("tail exponent out of range")
            if a and k <= above:
                raise PresentationError(f"tail for generator {above} involves g{k}")

    def word(self, vec) -> list[int]:
        return [k for k, a in enumerate(vec) for _ in range(a)]

    def collect(self, state, letters) -> tuple:
        """Multiply normal form ``state`` by the word ``letters`` (generator indices)."""
        e = self.orders
        n = self.n
        a = list(state)
        stack = list(reversed(list(letters)))
        zero = (0,) * n
        steps = 0
        while stack:
            k = stack.pop()
            steps += 1
            if steps > 10**6:
                raise PresentationError("collection does not terminate")
            # a * g_k = g_0^a_0 .. g_k^(a_k+1) * (suffix)^{g_k}
            suffix = a[k + 1 :]
            for j in range(k + 1, n):
                a[j] = 0
            pending: list[int] = []
            a[k] += 1
            if a[k] == e[k]:
                a[k] = 0
                pending.extend(self.word(self.power_tails.get(k, zero)))
            for off, s in enumerate(suffix):
                j = k + 1 + off
                if s:
                    conj = [j] + self.word(self.comm_tails.get((j, k), zero))
                    pending.extend(conj * s)
            stack.extend(reversed(pending))
        return tuple(a)

    def multiply(self, u, v) -> tuple:
        return self.collect(u, self.word(v))

    def generator(self, i: int) -> tuple:
        v = [0] * self.n
        v[i] = 1
        return tuple(v)

    def consistency_failures(self) -> list[str]:
        """Standard overlap tests; an empty list means the presentation is consistent."""
        n, e = self.n, self.orders
        g = self.generator
        c = self.collect
        zero = (0,) * n
        fails = []
        for k, j, i in itertools.combinations(range(n - 1, -1, -1), 3):
            lhs = c(c(g(k), [j]), [i])
            rhs = c(g(k), self.word(c(g(j), [i])))
            if lhs != rhs:
                fails.append(f"g{k+1}(g{j+1}g{i+1})")
        for j in range(n):
            for i in range(j):
                pj = c(zero, [j] * e[j])
                lhs = c(pj, [i])
                rhs = c(c(zero, [j] * (e[j] - 1)), self.word(c(g(j), [i])))
                if lhs != rhs:
                    fails.append(f"(g{j+1}^{e[j]})g{i+1}")
                lhs = c(g(j), [i] * e[i])
                rhs = c(c(g(j), [i]), [i] * (e[i] - 1))
                if lhs != rhs:
                    fails.append(f"g{j+1}(g{i+1}^{e[i]})")
        for i in range(n):
            lhs = c(c(zero, [i] * e[i]), [i])
            rhs = c(g(i), self.word(c(zero, [i] * e[i])))
            if lhs != rhs:
                fails.append(f"(g{i+1}^{e[i]})g{i+1}")
        return fails

    @classmethod
    def from_dict(cls, d: dict) -> "PcPresentation":
        n = len(d["orders"])

        def vec(spec):
            if isinstance(spec, dict):
                v = [0] * n
                for k, a in spec.items():
                    v[int(k) - 1] = int(a)
                return tuple(v)
            return tuple(spec)

        power = {int(i) - 1: vec(v) for i, v in d.get("power_tails", {}).items()}
        comm = {}
        for key, v in d.get("comm_tails", {}).items():
            j, i = (int(t) - 1 for t in key.split(","))
            comm[(j, i)] = vec(v)
        return cls(d["orders"], power, comm, d.get("names"))


def build_pc_group(pres: PcPresentation, name: str = "pc") -> FiniteGroup:
    fails = pres.consistency_failures()
    if fails:
        raise PresentationError(f"inconsistent presentation; first failing overlap {fails[0]}")
    expected = int(np.prod(pres.orders))
    gens = [pres.generator(i) for i in range(pres.n)]
    G = from_generators(gens, pres.multiply, (0,) * pres.n, "power-commutator", name)
    if G.order != expected:
        raise PresentationError(f"realised order {G.order} != product of relative orders {expected}")
    G.presentation = pres
    return G


# -- matrix groups ---------------------------------------------------------


U4_ENTRIES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _u4_mul(p):
    def mul(x, y):
        x12, x13, x14, x23, x24, x34 = x
        y12, y13, y14, y23, y24, y34 = y
        return (
            (x12 + y12) % p,
            (x13 + x12 * y23 + y13) % p,
            (x14 + x12 * y24 + x13 * y34 + y14) % p,
            (x23 + y23) % p,
            (x24 + x23 * y34 + y24) % p,
            (x34 + y34) % p,
        )

    return mul


def u4_matrix(label, p) -> np.ndarray:
    m = np.eye(4, dtype=np.int64)
    for (i, j), v in zip(U4_ENTRIES, label):
        m[i, j] = v
    return m


def build_u4(p: int, max_p: int = 7) -> FiniteGroup:
    """Upper unitriangular 4x4 matrices over F_p, generated by I+E12, I+E23, I+E34.

    Labels are the strictly-upper entries (x12, x13, x14, x23, x24, x34).
    """
    if not _is_prime(p):
        raise GroupError(f"{p} is not prime")
    if p > max_p:
        raise GroupError(f"p={p} exceeds memory guard {max_p}")
    a = (1, 0, 0, 0, 0, 0)
    b = (0, 0, 0, 1, 0, 0)
    c = (0, 0, 0, 0, 0, 1)
    from .groups import TABLE_CAP

    G = from_generators([a, b, c], _u4_mul(p), (0,) * 6, "matrix-over-F_p", f"U4(F{p})", cap=max(TABLE_CAP, p**6))
    G.p = p
    return G


def u4_abelianization(G: FiniteGroup) -> np.ndarray:
    """Rows ``(x12, x23, x34)`` for each element: the map onto F_p^3."""
    lab = np.asarray(G.labels, dtype=np.int64)
    return lab[:, [0, 3, 5]]


# -- named pc groups -------------------------------------------------------


def elementary_abelian_pc(p: int, r: int) -> PcPresentation:
    return PcPresentation([p] * r)


def cyclic_pc(n: int) -> PcPresentation:
    return PcPresentation([n])


def burnside33_presentation() -> PcPresentation:
    """B(3,3): g1,g2,g3; g4=[g2,g1], g5=[g3,g1], g6=[g3,g2]; g7 spans Gamma^3."""

    def v(**kw):
        out = [0] * 7
        for k, a in kw.items():
            out[int(k[1:]) - 1] = a
        return tuple(out)

    comm = {
        (1, 0): v(g4=1),
        (2, 0): v(g5=1),
        (2, 1): v(g6=1),
        (3, 2): v(g7=1),
        (4, 1): v(g7=2),
        (5, 0): v(g7=1),
    }
    return PcPresentation([3] * 7, {}, comm, ["g1", "g2", "g3", "g4", "g5", "g6", "g7"])


def he9_presentation() -> PcPresentation:
    """Heisenberg group over Z/9: [g2, g1] = g3 central, all of order 9."""
    return PcPresentation([9, 9, 9], {}, {(1, 0): (0, 0, 1)}, ["x", "y", "c"])


def he9_extension_presentation() -> PcPresentation:
    """Central extension of He(Z/9) by <z> = C_9 with [x,y,y] = [y,x,x] = z.

    Generators x, y, c = [y, x], z.  From [y,x,x] = z we get [c,x] = z, and
    [x,y,y] = [c^-1, y] = [c, y]^-1 = z gives [c, y] = z^-1.
    """
    comm = {
        (1, 0): (0, 0, 1, 0),  # [y, x] = c
        (2, 0): (0, 0, 0, 1),  # [c, x] = z
        (2, 1): (0, 0, 0, 8),  # [c, y] = z^-1
    }
    return PcPresentation([9, 9, 9, 9], {}, comm, ["x", "y", "c", "z"])


@dataclass
class BatteryResult:
    checks: dict

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.checks.values())

    def failures(self):
        return {k: v for k, v in self.checks.items() if not v["ok"]}


def _exponent(G: FiniteGroup, H: Subgroup | None = None) -> int:
    from math import lcm

    el = range(G.order) if H is None else H.elements
    out = 1
    for x in el:
        out = lcm(out, G.element_order(int(x)))
    return out


def run_battery(G: FiniteGroup, expect: dict) -> BatteryResult:
    """Evaluate the invariants named in ``expect`` and compare.

    Supported keys: order, exponent, two_engel, class, gamma2_order,
    gamma3_order, gamma3_exponent.
    """
    series = lower_central_series(G.whole())
    terms = series.terms
    actual = {}
    for key in expect:
        if key == "order":
            actual[key] = G.order
        elif key == "exponent":
            actual[key] = _exponent(G)
        elif key == "two_engel":
            actual[key] = bool(is_two_engel(G))
        elif key == "class":
            actual[key] = series.nilpotency_class
        elif key == "gamma2_order":
            actual[key] = terms[1].order if len(terms) > 1 else 1
        elif key == "gamma3_order":
            actual[key] = terms[2].order if len(terms) > 2 else 1
        elif key == "gamma3_exponent":
            actual[key] = _exponent(G, terms[2]) if len(terms) > 2 else 1
        else:
            raise KeyError(f"unknown battery check {key!r}")
    return BatteryResult({k: {"expected": expect[k], "actual": actual[k], "ok": actual[k] == expect[k]} for k in expect})


BURNSIDE33_BATTERY = {
    "order": 3**7,
    "exponent": 3,
    "two_engel": True,
    "class": 3,
    "gamma2_order": 81,
    "gamma3_order": 3,
}

HE9_EXT_BATTERY = {"order": 3**8, "class": 3, "gamma3_exponent": 9}


def build_burnside33() -> FiniteGroup:
    G = build_pc_group(burnside33_presentation(), "B(3,3)")
    res = run_battery(G, BURNSIDE33_BATTERY)
    if not res.ok:
        raise PresentationError(f"B(3,3) validation failed: {res.failures()}")
    G.battery = res
    return G


def build_he9_family() -> tuple[FiniteGroup, FiniteGroup]:
    he = build_pc_group(he9_presentation(), "He(Z/9)")
    if he.order != 729 or nilpotency_class(he.whole()) != 2:
        raise PresentationError("He(Z/9) validation failed")
    ext = build_pc_group(he9_extension_presentation(), "He9-ext")
    res = run_battery(ext, HE9_EXT_BATTERY)
    pres = ext.presentation
    z = ext.index(pres.generator(3))
    Q, _ = quotient_group(ext, ext.subgroup([z]))
    res.checks["quotient_order"] = {"expected": 729, "actual": Q.order, "ok": Q.order == 729}
    qcl = nilpotency_class(Q.whole())
    res.checks["quotient_class"] = {"expected": 2, "actual": qcl, "ok": qcl == 2}
    xy = ext.subgroup([ext.index(pres.generator(0)), ext.index(pres.generator(1))])
    res.checks["generated_by_xy"] = {"expected": ext.order, "actual": xy.order, "ok": xy.order == ext.order}
    if not res.ok:
        raise PresentationError(f"He(Z/9) extension validation failed: {res.failures()}")
    ext.battery = res
    return he, ext


# -- products and small explicit groups -------------------------------------


def build_direct_product(G: FiniteGroup, H: FiniteGroup, cap: int = 8000) -> FiniteGroup:
    """Componentwise product; element (i, j) gets id ``i*|H| + j``."""
    n, m = G.order, H.order
    if n * m > cap:
        raise GroupError(f"product order {n * m} exceeds cap {cap}")
    ids = np.arange(n * m)
    gi, hj = ids // m, ids % m
    table = G.table[np.ix_(gi, gi)].astype(np.int64) * m + H.table[np.ix_(hj, hj)]
    gens = [g * m for g in G.generators] + list(H.generators)
    labels = [(G.labels[i], H.labels[j]) for i, j in zip(gi, hj)]
    P = FiniteGroup(table.astype(_dtype_for(n * m)), gens, labels, "direct-product", f"{G.name}x{H.name}")
    P.factors = (G, H)
    return P


def group_from_elements(elements: Sequence, op, name: str) -> FiniteGroup:
    """Explicit table from a list of hashable elements (identity first)."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.array([[index[op(a, b)] for b in elements] for a in elements])
    G = from_table(table, name=name)
    G.labels = list(elements)
    return G


def _compose(p, q):
    """Permutation product: apply p first, then q."""
    return tuple(q[i] for i in p)


def symmetric_group(n: int) -> FiniteGroup:
    ident = tuple(range(n))
    perms = [ident] + [p for p in itertools.permutations(range(n)) if p != ident]
    return group_from_elements(perms, _compose, f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0

    ident = tuple(range(n))
    perms = [ident] + [p for p in itertools.permutations(range(n)) if p != ident and even(p)]
    return group_from_elements(perms, _compose, f"A{n}")


def dihedral_group(order: int) -> FiniteGroup:
    """Dihedral group of the given order, elements (k, s) = r^k s^s."""
    m = order // 2
    elems = [(k, s) for s in (0, 1) for k in range(m)]

    def op(a, b):
        k1, s1 = a
        k2, s2 = b
        return ((k1 + (-k2 if s1 else k2)) % m, s1 ^ s2)

    return group_from_elements(elems, op, f"D{order}")


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_elements(list(range(n)), lambda a, b: (a + b) % n, f"C{n}")


def elementary_abelian(p: int, r: int) -> FiniteGroup:
    """F_p^r with id = sum v_i p^i (so id 0 is the zero vector)."""
    n = p**r
    ids = np.arange(n)
    digits = np.stack([(ids // p**i) % p for i in range(r)], axis=1)
    s = (digits[:, None, :] + digits[None, :, :]) % p
    table = (s * (p ** np.arange(r))).sum(axis=2)
    G = FiniteGroup(table, [p**i for i in range(r)], [tuple(int(x) for x in d) for d in digits], "explicit-table", f"F{p}^{r}")
    G.p = p
    return G


# -- group-spec files --------------------------------------------------------


def load_group_spec(path: str | Path) -> tuple[FiniteGroup, dict]:
    """Build a group from a JSON spec file; returns the group and the parsed spec.

    Schema::

        {"kind": "matrix_u4", "p": 3}
        {"kind": "pc", "orders": [...], "power_tails": {"i": {...}},
         "comm_tails": {"j,i": {"k": a, ...}}, "names": [...]}
        {"kind": "product", "factors": [<spec>, <spec>]}
        {"kind": "named", "name": "S3" | "A4" | "D16" | "C5" | "B33" | "He9" | "He9ext"}

    An optional ``"battery"`` object lists expected invariants (see
    :func:`run_battery`); a mismatch raises :class:`PresentationError`.
    Indices in ``power_tails``/``comm_tails`` are 1-based.
    """
    try:
        spec = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise PresentationError(f"{path}: not valid JSON ({e})") from None
    if not isinstance(spec, dict):
        raise PresentationError(f"{path}: top level must be an object")
    return build_from_spec(spec), spec


def build_from_spec(spec: dict) -> FiniteGroup:
    try:
        G = _build_from_spec(spec)
    except (KeyError, TypeError, ValueError) as e:
        raise PresentationError(f"malformed group spec: {e!r}") from None
    if "battery" in spec:
        try:
            res = run_battery(G, spec["battery"])
        except KeyError as e:
            raise PresentationError(str(e)) from None
        if not res.ok:
            raise PresentationError(f"battery failed: {res.failures()}")
    return G


def _build_from_spec(spec: dict) -> FiniteGroup:
    kind = spec["kind"]
    if kind == "matrix_u4":
        G = build_u4(int(spec["p"]))
    elif kind == "pc":
        G = build_pc_group(PcPresentation.from_dict(spec), spec.get("name", "pc"))
    elif kind == "product":
        a, b = (build_from_spec(s) for s in spec["factors"])
        G = build_direct_product(a, b)
    elif kind == "named":
        G = named_group(spec["name"])
    else:
        raise GroupError(f"unknown group kind {kind!r}")
    return G


def named_group(name: str) -> FiniteGroup:
    if name == "B33":
        return build_burnside33()
    if name == "He9":
        return build_he9_family()[0]
    if name == "He9ext":
        return build_he9_family()[1]
    if name.startswith("U4F"):
        return build_u4(int(name[3:]))
    makers = {"S": symmetric_group, "A": alternating_group, "D": dihedral_group, "C": cyclic_group}
    if len(name) < 2 or name[0] not in makers or not name[1:].isdigit():
        raise GroupError(f"unknown group name {name!r}")
    return makers[name[0]](int(name[1:]))
