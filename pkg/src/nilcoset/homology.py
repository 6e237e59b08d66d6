"""Exact integer homology via sparse Smith normal form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


class ChainComplexError(ValueError):
    pass


class SparseIntMatrix:
    """Integer matrix stored as deduplicated (row, col, value) triplets."""

    def __init__(self, rows: int, cols: int, entries=()):
        self.rows = int(rows)
        self.cols = int(cols)
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in entries:
            r, c, v = int(r), int(c), int(v)
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            acc[(r, c)] = acc.get((r, c), 0) + v
        self.entries = {k: v for k, v in acc.items() if v}

    @classmethod
    def from_dense(cls, a) -> "SparseIntMatrix":
        a = np.asarray(a, dtype=object) if not isinstance(a, np.ndarray) else a
        rows, cols = a.shape
        return cls(rows, cols, ((r, c, a[r, c]) for r in range(rows) for c in range(cols) if a[r, c]))

    @classmethod
    def from_arrays(cls, rows, cols, r, c, v) -> "SparseIntMatrix":
        m = cls(rows, cols)
        m.entries = {(int(i), int(j)): int(x) for i, j, x in zip(r, c, v) if x}
        return m

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=object)
        for (r, c), v in self.entries.items():
            out[r, c] = v
        return out

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def matmul_is_zero(self, other: "SparseIntMatrix") -> bool:
        """``self @ other == 0``."""
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return not any(acc.values())

    def permuted(self, row_perm, col_perm) -> "SparseIntMatrix":
        m = SparseIntMatrix(self.rows, self.cols)
        m.entries = {(int(row_perm[r]), int(col_perm[c])): v for (r, c), v in self.entries.items()}
        return m

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        lines += [f"{r} {c} {v}" for (r, c), v in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseIntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        rows, cols, nnz = (int(t) for t in lines[0].split())
        ent = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
        if len(ent) != nnz:
            raise ValueError(f"header announces {nnz} entries, found {len(ent)}")
        return cls(rows, cols, ent)

    def save(self, path: str | Path):
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> "SparseIntMatrix":
        return cls.from_text(Path(path).read_text())

    def __eq__(self, other):
        return isinstance(other, SparseIntMatrix) and self.shape == other.shape and self.entries == other.entries


def _elementary_to_invariant(diag: Sequence[int]) -> list[int]:
    """Turn a multiset of nonzero diagonal entries into a divisibility chain."""
    diag = [abs(d) for d in diag if d]
    ones = sum(1 for d in diag if d == 1)
    prime_powers: dict[int, list[int]] = {}
    for d in diag:
        if d == 1:
            continue
        for p, k in _factor(d).items():
            prime_powers.setdefault(p, []).append(p**k)
    rest = len(diag) - ones
    for p in prime_powers:
        prime_powers[p].sort(reverse=True)
    factors = []
    for i in range(rest):
        f = 1
        for p, pows in prime_powers.items():
            if i < len(pows):
                f *= pows[i]
        factors.append(f)
    factors.sort()
    return [1] * ones + factors


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def smith_normal_form(M: SparseIntMatrix) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of ``M``.

    Sparse elimination, shortest columns first.  In the working column the
    pivot is the entry of least absolute value, ties broken by shortest row
    (a Markowitz-style fill-in bound).  The pivot clears its row by column
    operations; once the row holds only the pivot, row operations clearing
    the column touch no other column.  A nonzero remainder on either side
    becomes the next, strictly smaller pivot.  Python ints keep it exact.
    """
    cols: dict[int, dict[int, int]] = {}
    rows: dict[int, set[int]] = {}
    for (r, c), v in M.entries.items():
        cols.setdefault(c, {})[r] = v
        rows.setdefault(r, set()).add(c)
    diag: list[int] = []

    def col_axpy(dst: int, src: int, q: int):
        d = cols[dst]
        for r, v in cols[src].items():
            nv = d.get(r, 0) - q * v
            if nv:
                if r not in d:
                    rows[r].add(dst)
                d[r] = nv
            elif r in d:
                del d[r]
                rows[r].discard(dst)

    def step(c: int) -> int | None:
        col = cols[c]
        r = min(col, key=lambda i: (abs(col[i]), len(rows[i])))
        piv = col[r]
        for c2 in [x for x in rows[r] if x != c]:
            q = cols[c2][r] // piv
            if q:
                col_axpy(c2, c, q)
            if r in cols[c2]:
                return c2
        rem = {}
        for r2, v in col.items():
            if r2 != r and v % piv:
                rem[r2] = v - (v // piv) * piv
        if not rem:
            diag.append(abs(piv))
            for r2 in col:
                rows[r2].discard(c)
            del cols[c]
            return None
        for r2 in [x for x in col if x != r and x not in rem]:
            rows[r2].discard(c)
            del col[r2]
        col.update(rem)
        return c

    for c0 in sorted(cols, key=lambda c: (len(cols[c]), c)):
        stack = [c0]
        while stack:
            c = stack[-1]
            if c not in cols:
                stack.pop()
                continue
            if not cols[c]:
                del cols[c]
                stack.pop()
                continue
            nxt = step(c)
            if nxt is not None and nxt != c:
                stack.append(nxt)
    return _elementary_to_invariant(diag)


def rank_mod_p(M: SparseIntMatrix, p: int) -> int:
    """Rank over GF(p) by dense row reduction (independent of the SNF code)."""
    a = np.zeros((M.rows, M.cols), dtype=np.int64)
    for (r, c), v in M.entries.items():
        a[r, c] = v % p
    rank = 0
    nrows, ncols = a.shape
    for c in range(ncols):
        if rank == nrows:
            break
        nz = np.flatnonzero(a[rank:, c]) + rank
        if nz.size == 0:
            continue
        piv = nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = (a[rank] * inv) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != rank]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[rank])) % p
        rank += 1
    return rank


@dataclass
class HomologyResult:
    """Integer homology per degree plus optional Z/e coefficients.

    ``coefficients[i]`` lists the cyclic orders of H_i(-; Z/e).
    """

    betti: list
    torsion: list
    modulus: int = 0
    coefficients: list = field(default_factory=list)
    ranks: list = field(default_factory=list)
    chain_dims: list = field(default_factory=list)

    @property
    def degrees(self) -> int:
        return len(self.betti)

    def reduced_betti(self) -> list[int]:
        b = list(self.betti)
        if b:
            b[0] -= 1
        return b

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def coefficient_rank(self, i: int) -> int:
        """Number of cyclic summands of H_i(-; Z/e)."""
        return len(self.coefficients[i])

    def to_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "reduced_betti": self.reduced_betti(),
            "torsion": [list(t) for t in self.torsion],
            "modulus": self.modulus,
            "coefficients": [list(c) for c in self.coefficients],
        }


def _coefficient_groups(betti, torsion, e: int) -> list[list[int]]:
    out = []
    for i in range(len(betti)):
        cyc = [e] * betti[i] if e else []
        cyc += [math.gcd(t, e) for t in torsion[i] if math.gcd(t, e) > 1]
        if i > 0:
            cyc += [math.gcd(t, e) for t in torsion[i - 1] if math.gcd(t, e) > 1]
        out.append(sorted(cyc))
    return out


def homology(
    boundaries: Sequence[SparseIntMatrix],
    chain_dims: Sequence[int] | None = None,
    modulus: int = 0,
    check: bool = True,
) -> HomologyResult:
    """Homology of C_0 <- C_1 <- ... <- C_{d+1}; ``boundaries[k-1]`` is d_k.

    Degrees 0..d are reported (the top chain group only feeds d_{d+1}).
    With ``modulus`` e > 0, H_i(-; Z/e) = H_i (x) Z/e + Tor(H_{i-1}, Z/e).
    """
    if chain_dims is None:
        chain_dims = [boundaries[0].rows] + [b.cols for b in boundaries]
    for k, b in enumerate(boundaries):
        if b.rows != chain_dims[k] or b.cols != chain_dims[k + 1]:
            raise ChainComplexError(f"d_{k + 1} has shape {b.shape}, chain groups {chain_dims[k]}, {chain_dims[k + 1]}")
    if check:
        for k in range(len(boundaries) - 1):
            if not boundaries[k].matmul_is_zero(boundaries[k + 1]):
                raise ChainComplexError(f"d_{k + 1} d_{k + 2} != 0")
    snf = [smith_normal_form(b) for b in boundaries]
    ranks = [0] + [len(f) for f in snf]
    d = len(boundaries)
    betti, torsion = [], []
    for i in range(d):
        betti.append(chain_dims[i] - ranks[i] - ranks[i + 1])
        torsion.append([f for f in snf[i] if f > 1])
    res = HomologyResult(betti, torsion, modulus, ranks=ranks, chain_dims=list(chain_dims))
    if modulus:
        res.coefficients = _coefficient_groups(betti, torsion, modulus)
    return res


def compare_wedge_suspension(total: Sequence[int], piece: Sequence[int], copies: int) -> bool:
    """Reduced H_n(total) == copies * reduced H_{n-1}(piece) in every listed degree.

    Both arguments are reduced Betti lists (torsion-free comparisons).
    """
    n = max(len(total), len(piece) + 1)
    t = list(total) + [0] * (n - len(total))
    s = [0] + [copies * b for b in piece] + [0] * (n - len(piece) - 1)
    return t[:n] == s[:n]


def compare_wedge_suspension_results(total: HomologyResult, piece: HomologyResult, copies: int) -> bool:
    """Same comparison on full results, torsion included."""
    tb = total.reduced_betti()
    pb = piece.reduced_betti()
    for n in range(len(tb)):
        want_b = copies * pb[n - 1] if 1 <= n <= len(pb) else 0
        want_t = sorted(copies * list(piece.torsion[n - 1])) if 1 <= n <= len(pb) else []
        if tb[n] != want_b or sorted(total.torsion[n]) != want_t:
            return False
    return True
