"""Gamma^3-valued cochains, their cocycle conditions, and the pairing cycles."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .families import (
    bracket_factors_through,
    central_coset_reps,
    centrality_hypothesis_check,
    check_central_shift_invariance,
    pair_class_two,
)
from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    SweepResult,
    is_two_engel,
    lower_central_series,
    nilpotency_class,
    quotient_group,
    sweep,
)

OBSTRUCTION_BUDGET = 5 * 10**8


class HypothesisError(GroupError):
    """A lemma hypothesis fails; ``witness`` holds the offending elements."""

    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: witness {witness}")
        self.witness = witness


# -- Gamma^3 ------------------------------------------------------------------


def abelian_basis(A: Subgroup) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(orders, basis) of an abelian group in invariant-factor-compatible form.

    Cyclic groups are detected directly.  Otherwise elements are taken
    greedily by decreasing order whenever they split off a direct factor
    of the current span; the result is verified and an error raised if the
    greedy pass does not reach all of A.
    """
    G = A.group
    els = [int(x) for x in A.elements]
    orders = {x: G.element_order(x) for x in els}
    if A.order == 1:
        return (), ()
    gen = max(els, key=lambda x: (orders[x], -x))
    if orders[gen] == A.order:
        return (A.order,), (gen,)
    basis: list[int] = []
    span = np.zeros(1, dtype=np.int64)
    for x in sorted(els, key=lambda x: (-orders[x], x)):
        if orders[x] == 1:
            continue
        new = np.flatnonzero(G.closure_mask(basis + [x]))
        if new.size == span.size * orders[x]:
            basis.append(x)
            span = new
            if span.size == A.order:
                break
    if span.size != A.order:
        raise GroupError("greedy basis search did not split the abelian group")
    basis.sort(key=lambda x: (orders[x], x))
    return tuple(orders[b] for b in basis), tuple(basis)


@dataclass
class Gamma3Data:
    group: FiniteGroup
    subgroup: Subgroup
    orders: tuple
    basis: tuple
    table: np.ndarray  # (|G|, k) coordinates; -1 outside Gamma^3

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def rank(self) -> int:
        return len(self.orders)

    def log(self, x) -> np.ndarray:
        v = self.table[np.asarray(x)]
        if np.any(v < 0):
            raise GroupError("element outside Gamma^3")
        return v

    def reduce(self, v) -> np.ndarray:
        return np.asarray(v) % np.asarray(self.orders, dtype=np.int64)

    def value(self, v) -> "CochainValue":
        return CochainValue(tuple(int(a) for a in self.reduce(v)), self.orders)


@dataclass(frozen=True)
class CochainValue:
    coords: tuple
    orders: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % o for c, o in zip(self.coords, self.orders)))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "CochainValue") -> "CochainValue":
        return CochainValue(tuple(a + b for a, b in zip(self.coords, other.coords)), self.orders)

    def __neg__(self) -> "CochainValue":
        return CochainValue(tuple(-a for a in self.coords), self.orders)

    def __sub__(self, other):
        return self + (-other)


def gamma3_data(G: FiniteGroup) -> Gamma3Data:
    cached = getattr(G, "_gamma3", None)
    if cached is not None:
        return cached
    series = lower_central_series(G.whole())
    if series.nilpotency_class is None or series.nilpotency_class > 3:
        raise GroupError("Gamma^3 data needs cl(G) <= 3")
    g3 = series.terms[2] if len(series.terms) > 2 else G.trivial()
    orders, basis = abelian_basis(g3)
    table = np.full((G.order, len(orders)), -1, dtype=np.int64)
    table[0] = 0
    for coeffs in itertools.product(*(range(o) for o in orders)):
        x = 0
        for b, c in zip(basis, coeffs):
            x = G.mul(x, G.power(b, c))
        table[x] = coeffs
    covered = np.count_nonzero(table[:, 0] >= 0) if orders else 1
    if covered != g3.order:
        raise GroupError("discrete log table does not cover Gamma^3")
    data = Gamma3Data(G, g3, orders, basis, table)
    G._gamma3 = data
    return data


def _omega1_log(G, data, x, y):
    return data.log(G.commutator3(x, y, G.mul(x, y)))


def _omega2_log(G, data, x, y, z):
    return data.log(G.commutator3(x, y, z))


def omega1(G: FiniteGroup, x: int, y: int) -> CochainValue:
    """omega_1(x, y) = [x, y, xy]."""
    data = gamma3_data(G)
    return data.value(_omega1_log(G, data, x, y))


def omega2(G: FiniteGroup, x: int, y: int, z: int) -> CochainValue:
    """omega_2(x, y, z) = [x, y, z]."""
    data = gamma3_data(G)
    return data.value(_omega2_log(G, data, x, y, z))


# -- cocycle checks ---------------------------------------------------------


@dataclass
class CocycleResult:
    ok: bool
    route: str
    checked: int = 0
    sampled: bool = False
    witness: tuple | None = None
    certificates: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    @property
    def status(self) -> str:
        if not self.ok:
            return "fail"
        return "sampled-pass" if self.sampled else "pass"


def cocycle_check_w1(
    G: FiniteGroup,
    budget: int = OBSTRUCTION_BUDGET,
    seed: int = 0,
    route: str = "central",
) -> CocycleResult:
    """omega_1(y,z) - omega_1(x,z) + omega_1(x,y) = 0 on every affinely nil-2 triple.

    The hypothesis ([x,y]^3 central whenever cl<x,y> <= 2) is checked first
    and a :class:`HypothesisError` carrying the witness pair is raised when
    it fails.  With ``route="central"`` elements are taken modulo Z(G):
    commutators, omega_1 and the class-2 test are all blind to central
    shifts, which is checked before the sweep.  Triples are written
    (z u, z v, z) with cl<u, v> <= 2 and swept over all translates z.
    """
    hyp = centrality_hypothesis_check(G, budget, seed)
    if not hyp.ok:
        raise HypothesisError("[x,y]^3 is not central for a class-2 pair", hyp.witness)
    data = gamma3_data(G)
    certs = {"centrality_hypothesis": hyp.status}
    if route == "central":
        Z, reps = central_coset_reps(G)
        if not check_central_shift_invariance(G, Z, reps):
            raise GroupError("commutators changed under a central shift")
        Q, _ = quotient_group(G, Z)
        certs["omega1_central_shift"] = _omega1_shift_check(G, data, Z, reps).status
    elif route == "direct":
        Q, reps = G, np.arange(G.order)
    else:
        raise ValueError(f"unknown route {route!r}")
    if any(v == "fail" for v in certs.values()):
        return CocycleResult(False, route, certificates=certs)
    n = reps.size
    W = _omega1_log(G, data, reps[:, None], reps[None, :])
    N2 = pair_class_two(G, reps[:, None], reps[None, :])
    u, v = np.nonzero(N2)
    orders = np.asarray(data.orders, dtype=np.int64)
    total = u.size * n
    zs = np.arange(n)
    sampled = total > budget
    if sampled:
        rng = np.random.default_rng(seed)
        zs = np.sort(rng.choice(n, size=max(1, budget // max(u.size, 1)), replace=False))
    step = max(1, 10**7 // max(u.size, 1))
    checked = 0
    for s in range(0, zs.size, step):
        z = zs[s : s + step][:, None]
        x = Q.table[z, u[None, :]]
        y = Q.table[z, v[None, :]]
        zz = np.broadcast_to(z, x.shape)
        F = (W[y, zz] - W[x, zz] + W[x, y]) % orders
        bad = F.any(axis=-1)
        checked += x.size
        if bad.any():
            i, j = np.argwhere(bad)[0]
            wit = (int(reps[x[i, j]]), int(reps[y[i, j]]), int(reps[zz[i, j]]))
            return CocycleResult(False, route, checked, sampled, wit, certs)
    return CocycleResult(True, route, checked, sampled, None, certs)


def _omega1_shift_check(G, data, Z, reps) -> SweepResult:
    x = reps[:, None, None]
    y = reps[None, :, None]
    c = Z.elements[None, None, :]
    base = _omega1_log(G, data, x, y)
    a = _omega1_log(G, data, G.mul(x, c), y)
    b = _omega1_log(G, data, x, G.mul(y, c))
    n = reps.size**2 * Z.order * 2
    return SweepResult(bool(np.all(a == base) and np.all(b == base)), None, n)


def cocycle_check_w2(
    G: FiniteGroup,
    budget: int = OBSTRUCTION_BUDGET,
    seed: int = 0,
    lift_samples: int = 10**5,
    closure_samples: int = 300,
    route: str | None = None,
) -> CocycleResult:
    """[y,z,w] - [x,z,w] + [x,y,w] - [x,y,z] = 0 on every affinely nil-2 quadruple.

    Routes:
      * "vacuous": cl(G) <= 2, every term is zero.
      * "quotient": V = G/Gamma^2 elementary abelian.  Certificates: (a) the
        bracket factors through V (exhaustive over coset reps and Gamma^2),
        (b) nil-2 of a quadruple matches vanishing of the form on its
        difference triple (sampled lifts, plus full closures on a subset).
        Then all |V|^4 quadruple images are checked.
      * "direct": all of G^4, when |G|^4 fits the budget.
    """
    eng = is_two_engel(G, budget, seed)
    if not eng.ok:
        raise HypothesisError("G is not 2-Engel", eng.witness)
    certs = {"two_engel": eng.status}
    cl = nilpotency_class(G.whole())
    if route is None:
        route = "vacuous" if cl is not None and cl <= 2 else ("direct" if G.order**4 <= 10**6 else "quotient")
    data = gamma3_data(G)
    if route == "vacuous":
        if data.subgroup.order != 1:
            raise GroupError("vacuous route needs class <= 2")
        return CocycleResult(True, route, 0, False, None, certs)
    if route == "direct":
        return _w2_direct(G, data, budget, seed, certs)
    if route != "quotient":
        raise ValueError(f"unknown route {route!r}")
    return _w2_quotient(G, data, budget, seed, lift_samples, closure_samples, certs)


def _w2_identity(d0, d1, d2, d3, orders):
    return ((d0 - d1 + d2 - d3) % orders).any(axis=-1)


def _w2_direct(G, data, budget, seed, certs):
    orders = np.asarray(data.orders, dtype=np.int64)

    def pred(x, y, z, w):
        lw = G.inverse[w]
        a, b, c = G.table[lw, x], G.table[lw, y], G.table[lw, z]
        nil = np.ones(x.shape, dtype=bool)
        for s in (a, b, c):
            for t in (a, b, c):
                cm = G.commutator(s, t)
                for r in (a, b, c):
                    nil &= G.commutator(cm, r) == 0
        bad = _w2_identity(
            _omega2_log(G, data, y, z, w),
            _omega2_log(G, data, x, z, w),
            _omega2_log(G, data, x, y, w),
            _omega2_log(G, data, x, y, z),
            orders,
        )
        return ~nil | ~bad

    res = sweep(4, np.arange(G.order), pred, budget, seed)
    return CocycleResult(res.ok, "direct", res.checked, res.sampled, res.witness, certs)


def _w2_quotient(G, data, budget, seed, lift_samples, closure_samples, certs):
    from .linear import linear_model

    series = lower_central_series(G.whole())
    N = series.terms[1]
    Q, _ = quotient_group(G, N)
    p = Q.element_order(int(Q.generators[0])) if Q.generators else 1
    model = linear_model(G, N, p)
    factor = bracket_factors_through(G, N)
    certs["trilinearity_through_gamma2"] = factor.status
    if not factor.ok:
        return CocycleResult(False, "quotient", factor.checked, False, factor.witness, certs)
    V = model.space
    proj = model.projection
    lift = np.unique(proj, return_index=True)[1]
    n = V.order
    orders = np.asarray(data.orders, dtype=np.int64)
    a = lift[:, None, None]
    b = lift[None, :, None]
    c = lift[None, None, :]
    omega = _omega2_log(G, data, a, b, c)  # (n, n, n, k)
    zero = ~omega.any(axis=-1)

    # nil-2 of a difference triple, exactly from the factored bracket
    def nil_on_images(d):
        ok = np.ones(d[0].shape, dtype=bool)
        for s in d:
            for t in d:
                for r in d:
                    ok &= zero[s, t, r]
        return ok

    rng = np.random.default_rng(seed)
    quad = rng.integers(0, G.order, size=(lift_samples, 4))
    from .poset import _nil_mask

    direct = _nil_mask(G, quad, 2)
    lw = G.inverse[quad[:, 3]]
    diffs = [proj[G.table[lw, quad[:, i]]] for i in range(3)]
    via_form = zero[diffs[0], diffs[1], diffs[2]]
    mismatch = np.flatnonzero(direct != via_form)
    certs["nil2_iff_form_vanishes"] = "sampled-pass" if mismatch.size == 0 else "fail"
    certs["nil2_samples"] = int(lift_samples)
    certs["nil2_samples_positive"] = int(direct.sum())
    if mismatch.size:
        return CocycleResult(False, "quotient", lift_samples, True, tuple(int(v) for v in quad[mismatch[0]]), certs)
    for i, row in enumerate(quad[:closure_samples]):
        last = G.inverse[row[3]]
        H = G.subgroup([int(G.table[last, v]) for v in row[:3]])
        cl = nilpotency_class(H)
        if (cl is not None and cl <= 2) != bool(direct[i]):
            certs["nil2_full_closure"] = "fail"
            return CocycleResult(False, "quotient", lift_samples, True, tuple(int(v) for v in row), certs)
    certs["nil2_full_closure"] = f"pass ({min(closure_samples, lift_samples)} closures)"

    total = n**4
    if total > budget:
        raise GroupError("quadruple image sweep exceeds the budget")
    idx = np.arange(total)
    x, y, z, w = idx // n**3, (idx // n**2) % n, (idx // n) % n, idx % n
    neg_w = V.inverse[w]
    d = [V.table[x, neg_w], V.table[y, neg_w], V.table[z, neg_w]]
    nil = nil_on_images(d)
    form_zero = zero[d[0], d[1], d[2]]
    if not np.array_equal(nil, form_zero):
        j = int(np.flatnonzero(nil != form_zero)[0])
        certs["alternating_form_criterion"] = "fail"
        return CocycleResult(False, "quotient", total, False, (int(x[j]), int(y[j]), int(z[j]), int(w[j])), certs)
    certs["alternating_form_criterion"] = "pass"
    bad = nil & _w2_identity(omega[y, z, w], omega[x, z, w], omega[x, y, w], omega[x, y, z], orders)
    certs["quadruple_images"] = int(total)
    certs["nil2_quadruple_images"] = int(nil.sum())
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        wit = tuple(int(lift[t[j]]) for t in (x, y, z, w))
        return CocycleResult(False, "quotient", total, False, wit, certs)
    return CocycleResult(True, "quotient", total, False, None, certs)


# -- cycles and pairings ------------------------------------------------------


def chain_boundary(chain: dict) -> dict:
    out: dict = {}
    for simplex, c in chain.items():
        for i in range(len(simplex)):
            face = simplex[:i] + simplex[i + 1 :]
            out[face] = out.get(face, 0) + (-1) ** i * c
    return {k: v for k, v in out.items() if v}


def _accumulate(terms) -> dict:
    out: dict = {}
    for simplex, c in terms:
        out[simplex] = out.get(simplex, 0) + c
    return {k: v for k, v in out.items() if v}


def cycle_c2(x: int, y: int) -> dict:
    """(x,y) + (y,1) + (1,x)."""
    return _accumulate([((x, y), 1), ((y, 0), 1), ((0, x), 1)])


def cycle_c3(x: int, y: int, z: int) -> dict:
    """(x,y,z) - (1,y,z) + (1,x,z) - (1,x,y)."""
    return _accumulate([((x, y, z), 1), ((0, y, z), -1), ((0, x, z), 1), ((0, x, y), -1)])


@dataclass
class PairingResult:
    mode: str
    args: tuple
    chain: dict
    value: CochainValue

    @property
    def nonzero(self) -> bool:
        return not self.value.is_zero


def cycle_pairing(G: FiniteGroup, mode: str, args) -> PairingResult:
    """Evaluate omega_1 on c(x,y) (mode c2) or omega_2 on c(x,y,z) (mode c3)."""
    from .poset import _nil_mask

    args = tuple(int(a) for a in args)
    data = gamma3_data(G)
    if mode == "c2":
        chain, omega = cycle_c2(*args), _omega1_log
    elif mode == "c3":
        chain, omega = cycle_c3(*args), _omega2_log
        simplices = np.asarray(list(chain), dtype=np.int64).reshape(-1, 3)
        if simplices.size and not _nil_mask(G, simplices, 2).all():
            raise HypothesisError("c3 cycle has a face that is not affinely nil-2", args)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if chain_boundary(chain):
        raise AssertionError("cycle has nonzero boundary")
    total = np.zeros(data.rank, dtype=np.int64)
    for simplex, c in chain.items():
        total += c * omega(G, data, *simplex)
    return PairingResult(mode, args, chain, data.value(total))


def engel_pairing_witness(G: FiniteGroup, budget: int = OBSTRUCTION_BUDGET, seed: int = 0) -> PairingResult | None:
    """A pair with nonzero c2 pairing, or None when G is 2-Engel.

    From an Engel failure [u,v,v] != 1 the pair (u, u^-1 v) works:
    omega_1(u, u^-1 v) = [u, u^-1 v, v] = [u, v, v].
    """
    eng = is_two_engel(G, budget, seed)
    if eng.ok:
        return None
    u, v = eng.witness
    res = cycle_pairing(G, "c2", (u, G.mul(G.inv(u), v)))
    if not res.nonzero:
        raise AssertionError("Engel substitution produced a zero pairing")
    return res


def class_three_pairing_witness(G: FiniteGroup) -> PairingResult | None:
    """First generator triple with nonzero c3 pairing (2-Engel G), or None."""
    for x, y, z in itertools.product(G.generators, repeat=3):
        if G.commutator3(x, y, z) != 0:
            return cycle_pairing(G, "c3", (x, y, z))
    return None


# -- identities ---------------------------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    result: SweepResult
    scope: str

    @property
    def status(self) -> str:
        return self.result.status


@dataclass
class IdentityReport:
    group: str
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.result.ok for c in self.checks)

    @property
    def exhaustive(self) -> bool:
        return all(not c.result.sampled for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.result.ok]


def identity_suite(
    G: FiniteGroup,
    budget: int = OBSTRUCTION_BUDGET,
    seed: int = 0,
    mode: str | None = None,
    direct_samples: int = 10**6,
) -> IdentityReport:
    """Hall-Witt, trilinearity, the Gamma^2 shift, and (2-Engel) the cyclic identity.

    ``mode="exhaustive"`` sweeps G directly.  ``mode="quotient"`` first
    certifies that the bracket factors through G/Gamma^2 and then sweeps
    lifts of all image tuples, adding a seeded direct sample as a
    cross-check.  The default picks exhaustive when |G|^4 fits the budget.
    """
    data = gamma3_data(G)
    orders = np.asarray(data.orders, dtype=np.int64)
    series = lower_central_series(G.whole())
    gamma2 = series.terms[1] if len(series.terms) > 1 else G.trivial()
    if mode is None:
        mode = "exhaustive" if G.order**4 <= budget else "quotient"
    checks = []
    factor = bracket_factors_through(G, gamma2)
    checks.append(IdentityCheck("gamma2_shift", factor, "coset reps x Gamma^2"))
    if mode == "exhaustive":
        domain, scope = np.arange(G.order), "all of G"
    elif mode == "quotient":
        _, proj = quotient_group(G, gamma2)
        domain, scope = np.unique(proj, return_index=True)[1], "lifts of G/Gamma^2"
    else:
        raise ValueError(f"unknown mode {mode!r}")

    def log3(x, y, z):
        return data.log(G.commutator3(x, y, z))

    def zero(v):
        return ~(v % orders).any(axis=-1)

    def hall_witt(a, b, c):
        return zero(log3(a, b, c) + log3(b, c, a) + log3(c, a, b))

    def linear_in(slot):
        def pred(a, b, y, z):
            args = [y, z]
            prod = G.mul(a, b)
            lhs = log3(*(args[:slot] + [prod] + args[slot:]))
            rhs = log3(*(args[:slot] + [a] + args[slot:])) + log3(*(args[:slot] + [b] + args[slot:]))
            return zero(lhs - rhs)

        return pred

    checks.append(IdentityCheck("hall_witt", sweep(3, domain, hall_witt, budget, seed), scope))
    for slot in range(3):
        checks.append(IdentityCheck(f"trilinear_slot{slot + 1}", sweep(4, domain, linear_in(slot), budget, seed), scope))
    engel = is_two_engel(G, budget, seed)
    if engel.ok:

        def cyclic(a, b, c):
            return zero(log3(a, b, c) - log3(c, a, b))

        checks.append(IdentityCheck("cyclic_two_engel", sweep(3, domain, cyclic, budget, seed), scope))
    if mode == "quotient":
        full = np.arange(G.order)
        checks.append(
            IdentityCheck("hall_witt_direct_sample", sweep(3, full, hall_witt, direct_samples, seed), "sampled G^3")
        )
        if engel.ok:
            checks.append(
                IdentityCheck("cyclic_direct_sample", sweep(3, full, cyclic, direct_samples, seed), "sampled G^3")
            )
    return IdentityReport(G.name, checks)
