"""Subgroup families N_{q+1} and the algebraic hypothesis checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import (
    DEFAULT_SWEEP_BUDGET,
    FiniteGroup,
    GroupError,
    Subgroup,
    SweepResult,
    center,
    class_at_most_two,
    nilpotency_class,
    quotient_group,
    sweep,
)

ENUMERATION_CAP = 1024


class FamilyError(GroupError):
    pass


@dataclass
class SubgroupFamily:
    parent: FiniteGroup
    q: int | None
    members: list
    maximal_members: list = field(default_factory=list)

    def __post_init__(self):
        self.members = sorted(self.members, key=lambda H: (H.order, H.key))
        if not self.maximal_members:
            self.maximal_members = _maximal(self.members)
        self._keys = {H.key: i for i, H in enumerate(self.members)}

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, H: Subgroup) -> bool:
        return H.key in self._keys

    def index(self, H: Subgroup) -> int:
        return self._keys[H.key]

    def is_intersection_closed(self) -> bool:
        masks = [H.mask for H in self.members]
        G = self.parent
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                inter = Subgroup(np.flatnonzero(masks[i] & masks[j]), (), G)
                if inter not in self:
                    return False
        return True


def _maximal(members: list) -> list[int]:
    masks = [H.mask for H in members]
    out = []
    for i, H in enumerate(members):
        if not any(
            members[j].order > H.order and masks[j][H.elements].all() for j in range(len(members))
        ):
            out.append(i)
    return out


def enumerate_subgroups(G: FiniteGroup, cap: int = ENUMERATION_CAP) -> list[Subgroup]:
    """All subgroups by cyclic extension: layer k+1 = <H, g> for H in layer k.

    For each H only one g per right coset Hg is tried, since <H, hg> = <H, g>.
    Result is sorted by (order, element key).
    """
    if G.order > cap:
        raise FamilyError(f"|G|={G.order} exceeds enumeration cap {cap}; use the quotient route")
    t = G.table
    triv = G.trivial()
    found = {triv.key: triv}
    layer = [triv]
    while layer:
        nxt = []
        for H in layer:
            mask = H.mask
            covered = mask.copy()
            for g in range(G.order):
                if covered[g]:
                    continue
                covered[t[H.elements, g]] = True
                gens = H.generators + (g,)
                K_mask = G.closure_mask(gens, start=H.elements)
                key = np.flatnonzero(K_mask).tobytes()
                if key not in found:
                    K = Subgroup(np.flatnonzero(K_mask), gens, G)
                    found[key] = K
                    nxt.append(K)
        layer = nxt
    return sorted(found.values(), key=lambda H: (H.order, H.key))


def family_nil_q(G: FiniteGroup, q: int, subgroups: list[Subgroup] | None = None) -> SubgroupFamily:
    subs = subgroups if subgroups is not None else enumerate_subgroups(G)
    members = []
    for H in subs:
        c = nilpotency_class(H)
        if c is not None and c <= q:
            members.append(H)
    return SubgroupFamily(G, q, members)


def all_subgroups_family(G: FiniteGroup, proper: bool = False) -> SubgroupFamily:
    subs = enumerate_subgroups(G)
    if proper:
        subs = [H for H in subs if H.order < G.order]
    return SubgroupFamily(G, None, subs)


def pair_class_two(G: FiniteGroup, x, y) -> np.ndarray:
    """cl<x,y> <= 2 iff [x,y] commutes with x and y; elementwise on arrays."""
    c = G.commutator(x, y)
    return (G.commutator(c, x) == 0) & (G.commutator(c, y) == 0)


def central_coset_reps(G: FiniteGroup) -> tuple[Subgroup, np.ndarray]:
    Z = center(G)
    _, proj = quotient_group(G, Z)
    reps = np.unique(proj, return_index=True)[1]
    return Z, reps


def check_central_shift_invariance(G: FiniteGroup, Z: Subgroup, reps: np.ndarray) -> bool:
    """[xz, y] = [x, y] = [x, yz] for z in Z; x, y over coset reps."""
    x = reps[:, None, None]
    y = reps[None, :, None]
    z = Z.elements[None, None, :]
    base = G.commutator(x, y)
    return bool(np.all(G.commutator(G.mul(x, z), y) == base) and np.all(G.commutator(x, G.mul(y, z)) == base))


def centrality_hypothesis_check(G: FiniteGroup, budget: int = DEFAULT_SWEEP_BUDGET, seed: int = 0) -> SweepResult:
    """[x,y]^3 in Z(G) for all x, y with cl<x,y> <= 2 (G of class <= 3).

    Pairs are swept over Z(G)-coset representatives after checking that
    commutators do not see central shifts.
    """
    c = nilpotency_class(G.whole())
    if c is None or c > 3:
        raise FamilyError("centrality hypothesis needs cl(G) <= 3")
    Z, reps = central_coset_reps(G)
    if reps.size**2 * Z.order <= budget and not check_central_shift_invariance(G, Z, reps):
        raise FamilyError("commutators changed under a central shift")
    zmask = Z.mask

    def pred(x, y):
        cm = G.commutator(x, y)
        cube = G.mul(G.mul(cm, cm), cm)
        return ~pair_class_two(G, x, y) | zmask[cube]

    return sweep(2, reps, pred, budget, seed)


def k_generated_class_bound(
    G: FiniteGroup, k: int, q: int, budget: int = DEFAULT_SWEEP_BUDGET, seed: int = 0
) -> SweepResult:
    """Every k-generated subgroup has class <= q."""
    if q == 2:

        def pred(*xs):
            xs = [np.asarray(x) for x in xs]
            ok = np.ones(xs[0].shape, dtype=bool)
            for a in xs:
                for b in xs:
                    cm = G.commutator(a, b)
                    for d in xs:
                        ok &= G.commutator(cm, d) == 0
            return ok

        return sweep(k, np.arange(G.order), pred, budget, seed)

    def pred_slow(*xs):
        out = []
        for tup in zip(*xs):
            cl = nilpotency_class(G.subgroup([int(v) for v in tup]))
            out.append(cl is not None and cl <= q)
        return np.asarray(out)

    return sweep(k, np.arange(G.order), pred_slow, min(budget, 10**5), seed, chunk=4096)


# -- quotient families -----------------------------------------------------


@dataclass
class WitnessReport:
    precondition_ok: bool
    fibers_ok: bool
    route: str
    offending: Subgroup | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.precondition_ok and self.fibers_ok


def preimage(G: FiniteGroup, proj: np.ndarray, U: Subgroup) -> Subgroup:
    mask = U.mask[proj]
    el = np.flatnonzero(mask)
    return Subgroup(el, (), G)


def image(Q: FiniteGroup, proj: np.ndarray, H: Subgroup) -> Subgroup:
    return Subgroup(np.unique(proj[H.elements]), (), Q)


def quotient_family(
    G: FiniteGroup,
    N: Subgroup,
    q: int,
    family: SubgroupFamily | None = None,
    target: tuple[FiniteGroup, np.ndarray] | None = None,
) -> tuple[FiniteGroup, np.ndarray, SubgroupFamily, WitnessReport]:
    """Push N_{q+1}(G) forward to G/N and certify the coset-poset map.

    With ``family`` given (small G), the precondition cl(NH) <= q is checked
    for every member H, and every fiber of gH -> gHN/N is checked to have
    the maximum gNH.  Without it the quotient family is computed as
    {U : cl(preimage U) <= q} over all subgroups U of G/N; for q = 2 and
    N inside Gamma^2 of a class-3 group the precondition then follows from
    the triple bracket factoring through G/N, which is verified on coset
    representatives (see :func:`bracket_factors_through`).

    ``target`` = (Q, proj) replaces the abstract quotient by a concrete
    model; proj is checked to be a surjective homomorphism with kernel N.
    """
    if not N.is_normal():
        raise FamilyError("N is not normal")
    if target is None:
        Q, proj = quotient_group(G, N)
    else:
        Q, proj = target
        check_projection(G, N, Q, proj)
    if N.is_trivial():
        fam = family if family is not None else family_nil_q(G, q)
        pushed = SubgroupFamily(Q, q, [image(Q, proj, H) for H in fam])
        return Q, proj, pushed, WitnessReport(True, True, "identity")

    if family is not None:
        offending = None
        pushed = {}
        for H in family:
            NH = G.subgroup(list(H.gens_or_all()) + list(N.gens_or_all()))
            cl = nilpotency_class(NH)
            if cl is None or cl > q:
                offending = H
                break
            U = image(Q, proj, H)
            pushed[U.key] = U
        if offending is not None:
            return Q, proj, SubgroupFamily(Q, q, []), WitnessReport(False, False, "enumerated", offending)
        pushed_fam = SubgroupFamily(Q, q, list(pushed.values()))
        fibers_ok, details = _certify_fibers(G, proj, family, pushed_fam)
        return Q, proj, pushed_fam, WitnessReport(True, fibers_ok, "enumerated", None, details)

    members = []
    for U in enumerate_subgroups(Q):
        cl = nilpotency_class(preimage(G, proj, U))
        if cl is not None and cl <= q:
            members.append(U)
    pushed_fam = SubgroupFamily(Q, q, members)
    factor = bracket_factors_through(G, N) if q == 2 else SweepResult(False)
    details = {"bracket_factors_through_quotient": factor.status}
    pre_ok = bool(factor) and not factor.sampled
    return Q, proj, pushed_fam, WitnessReport(pre_ok, pre_ok, "preimage", None, details)


def check_projection(G: FiniteGroup, N: Subgroup, Q: FiniteGroup, proj: np.ndarray) -> None:
    proj = np.asarray(proj)
    if proj.shape != (G.order,):
        raise FamilyError("projection has the wrong length")
    if np.unique(proj).size != Q.order:
        raise FamilyError("projection is not surjective")
    if not np.array_equal(np.flatnonzero(proj == 0), N.elements):
        raise FamilyError("projection kernel differs from N")
    for i in range(G.order):
        if not np.array_equal(proj[G.table[i]], Q.table[proj[i], proj]):
            raise FamilyError(f"projection is not a homomorphism at element {i}")


def _certify_fibers(G, proj, family: SubgroupFamily, pushed: SubgroupFamily) -> tuple[bool, dict]:
    """Each fiber {g'H' : image <= gU} has the maximum g*preimage(U) inside the poset."""
    Q = pushed.parent
    checked = 0
    for U in pushed:
        P = preimage(G, proj, U)
        if P not in family:
            return False, {"missing_preimage": U.order}
        # every H' with image <= U lies in P, hence every coset g'H' in the fiber of gU lies in gP
        for H in family:
            if np.all(U.mask[proj[H.elements]]):
                checked += 1
                if not np.all(P.mask[H.elements]):
                    return False, {"fiber_element_outside": H.order}
    return True, {"fiber_pairs_checked": checked, "quotient_nodes": sum(Q.order // U.order for U in pushed)}


def bracket_factors_through(G: FiniteGroup, N: Subgroup) -> SweepResult:
    """[x n, y, z] = [x, y n, z] = [x, y, z n] = [x, y, z] for reps x, y, z of G/N, n in N."""
    _, proj = quotient_group(G, N)
    reps = np.unique(proj, return_index=True)[1]
    n_el = N.elements
    total = 0
    for xi in reps:
        x = np.full(1, xi)[:, None, None, None]
        y = reps[None, :, None, None]
        z = reps[None, None, :, None]
        n = n_el[None, None, None, :]
        base = G.commutator3(x, y, z)
        for shifted in (
            G.commutator3(G.mul(x, n), y, z),
            G.commutator3(x, G.mul(y, n), z),
            G.commutator3(x, y, G.mul(z, n)),
        ):
            bad = shifted != base
            if bad.any():
                idx = np.argwhere(bad)[0]
                return SweepResult(False, (int(xi), int(reps[idx[1]]), int(reps[idx[2]]), int(n_el[idx[3]])), total)
        total += reps.size**2 * n_el.size * 3
    return SweepResult(True, None, total)


# -- divides / join --------------------------------------------------------


@dataclass
class DividesResult:
    lower: list  # F_N: HN != G
    upper: list  # F^N: HN == G
    divides: bool
    witness: tuple | None = None


def divides_check(G: FiniteGroup, family: SubgroupFamily, N: Subgroup) -> DividesResult:
    if not N.is_normal():
        raise FamilyError("N is not normal")
    lower, upper = [], []
    prods = {}
    for H in family:
        HN = G.subgroup(list(H.gens_or_all()) + list(N.gens_or_all()))
        (upper if HN.order == G.order else lower).append(H)
        prods[H.key] = HN
    for H in lower:
        HN = prods[H.key]
        if HN not in family:
            return DividesResult(lower, upper, False, ("HN", H))
        for K in upper:
            inter = Subgroup(np.flatnonzero(HN.mask & K.mask), (), G)
            if inter not in family:
                return DividesResult(lower, upper, False, ("HN&K", H, K))
    return DividesResult(lower, upper, True)
