"""Exact integer linear algebra.

Matrices are plain lists of rows of Python ints, so every operation is
exact and unbounded.  Lattices (finitely generated subgroups of ``Z^m``)
are stored by their row Hermite normal form, which makes equality a
structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from sympy import factorint

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def as_matrix(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    rows = [[int(v) for v in row] for row in m]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        if cols is not None and width != cols:
            raise ValueError(f"expected {cols} columns, got {width}")
    return rows


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], cols: int = 0) -> Matrix:
    if not m:
        return [[] for _ in range(cols)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]], cols: int) -> list[int]:
    out = [0] * cols
    for c, row in zip(v, m):
        if c:
            for j, x in enumerate(row):
                out[j] += c * x
    return out


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = as_matrix(m)
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``h == u @ m``, ``u`` unimodular, pivots
    positive, entries above each pivot reduced into ``[0, pivot)`` and
    zero rows collected at the bottom.
    """
    h = as_matrix(m)
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            b = h[i][c]
            if b == 0:
                continue
            a = h[r][c]
            g, x, y = xgcd(a, b)
            pa, pb = a // g, b // g
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [pa * t - pb * s for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [pa * t - pb * s for s, t in zip(ur, ui)]
        piv = h[r][c]
        if piv == 0:
            continue
        if piv < 0:
            h[r] = [-v for v in h[r]]
            u[r] = [-v for v in u[r]]
            piv = -piv
        for i in range(r):
            q = h[i][c] // piv
            if q:
                h[i] = [s - q * t for s, t in zip(h[i], h[r])]
                u[i] = [s - q * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def rank(m: Sequence[Sequence[int]]) -> int:
    h, _ = hnf(m)
    return sum(1 for row in h if any(row))


@dataclass(frozen=True)
class AbelianInvariants:
    """Isomorphism type ``Z/d1 x Z/d2 x ... x Z^free_rank`` with ``d1 | d2 | ...``."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @classmethod
    def from_diagonal(cls, diagonal: Iterable[int], extra_free: int = 0) -> "AbelianInvariants":
        """Canonicalise an arbitrary diagonal presentation ``Z/a1 x Z/a2 x ...``."""
        free = extra_free
        primary: dict[int, list[int]] = {}
        for d in diagonal:
            d = abs(d)
            if d == 0:
                free += 1
            elif d > 1:
                for p, e in factorint(d).items():
                    primary.setdefault(p, []).append(p**e)
        # Regroup prime powers into a divisibility chain.
        length = max((len(v) for v in primary.values()), default=0)
        chain = [1] * length
        for powers in primary.values():
            powers.sort()
            for k, q in enumerate(powers):
                chain[length - len(powers) + k] *= q
        return cls(tuple(chain), free)

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        """Group order, or ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"


def snf(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple[Matrix, AbelianInvariants]:
    """Smith normal form and the invariants of the cokernel ``Z^cols / rowspan(m)``.

    ``cols`` is only needed for a matrix with no rows.
    """
    a = as_matrix(m)
    rows = len(a)
    if cols is None:
        if not rows:
            raise ValueError("column count required for an empty matrix")
        cols = len(a[0])
    t = 0
    while t < min(rows, cols):
        # Move the smallest nonzero entry of the trailing block to (t, t).
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = a[i][t] // piv
                if q:
                    a[i] = [s - q * p for s, p in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = a[t][j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if dirty:
                # A remainder is smaller than the pivot; restart with it.
                best = None
                for i in range(t, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), "r", i)
                for j in range(t, cols):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), "c", j)
                _, kind, k = best
                if kind == "r":
                    a[t], a[k] = a[k], a[t]
                else:
                    for row in a:
                        row[t], row[k] = row[k], row[t]
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            a[t] = [s + x for s, x in zip(a[t], a[bad[0]])]
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
        t += 1
    diagonal = [a[i][i] for i in range(min(rows, cols))]
    nonzero = [d for d in diagonal if d]
    free = cols - len(nonzero)
    return a, AbelianInvariants(tuple(d for d in nonzero if d > 1), free)


@dataclass(frozen=True)
class Lattice:
    """A subgroup of ``Z^ambient_dim`` given by a row-HNF basis."""

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], ambient_dim: int) -> "Lattice":
        rows = as_matrix(list(gens), ambient_dim)
        if not rows:
            return cls(ambient_dim)
        h, _ = hnf(rows)
        return cls(ambient_dim, tuple(tuple(r) for r in h if any(r)))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Lattice":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Lattice":
        return cls(ambient_dim, tuple(tuple(r) for r in identity(ambient_dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> Matrix:
        return [list(r) for r in self.basis]

    def __contains__(self, v: Sequence[int]) -> bool:
        return member(self, v) is not None

    def contains(self, other: "Lattice") -> bool:
        return all(member(self, v) is not None for v in other.basis)

    def combination(self, coords: Sequence[int]) -> list[int]:
        return vecmat(coords, self.basis, self.ambient_dim)

    def image(self, m: Sequence[Sequence[int]], target_dim: int) -> "Lattice":
        """Image under ``v -> m @ v``."""
        return Lattice.from_generators((matvec(m, v) for v in self.basis), target_dim)

    def restrict(self, m: Sequence[Sequence[int]]) -> "Lattice":
        """Sublattice ``{v in self : m @ v == 0}``."""
        if not m or not self.basis:
            return self
        coords_map = matmul(m, transpose(self.basis_matrix()))
        ker = kernel_lattice(coords_map)
        return Lattice.from_generators((self.combination(c) for c in ker.basis), self.ambient_dim)

    def restrict_congruences(self, a: Sequence[Sequence[int]], moduli: Sequence[int]) -> "Lattice":
        """Sublattice ``{v in self : (a @ v)_i == 0 mod moduli_i}``."""
        if not a or not self.basis:
            return self
        coords_map = matmul(a, transpose(self.basis_matrix()))
        sol = congruence_kernel(coords_map, moduli)
        return Lattice.from_generators((self.combination(c) for c in sol.basis), self.ambient_dim)

    def __add__(self, other: "Lattice") -> "Lattice":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Lattice.from_generators(self.basis + other.basis, self.ambient_dim)


def kernel_lattice(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Lattice:
    """Integer kernel ``{v : m @ v == 0}`` of an ``r x cols`` matrix."""
    a = as_matrix(m)
    if cols is None:
        if not a:
            raise ValueError("column count required for an empty matrix")
        cols = len(a[0])
    if not a:
        return Lattice.full(cols)
    h, u = hnf(transpose(a))
    rho = sum(1 for row in h if any(row))
    return Lattice.from_generators(u[rho:], cols)


def member(lat: Lattice, v: Sequence[int]) -> Optional[list[int]]:
    """Coordinates ``c`` with ``c @ lat.basis == v``, or ``None`` if ``v`` is not in ``lat``."""
    if len(v) != lat.ambient_dim:
        raise ValueError(f"vector of length {len(v)} in ambient dimension {lat.ambient_dim}")
    rem = [int(x) for x in v]
    coords = []
    for row in lat.basis:
        c = next(j for j, x in enumerate(row) if x)
        q, r = divmod(rem[c], row[c])
        if r:
            return None
        coords.append(q)
        if q:
            rem = [s - q * t for s, t in zip(rem, row)]
    if any(rem):
        return None
    return coords


def quotient(sub: Lattice, sup: Lattice) -> AbelianInvariants:
    """Invariants of ``sup / sub``; raises if ``sub`` is not contained in ``sup``."""
    rel = []
    for v in sub.basis:
        c = member(sup, v)
        if c is None:
            raise ValueError(f"{list(v)} is not in the containing lattice")
        rel.append(c)
    if not rel:
        return AbelianInvariants((), sup.rank)
    return snf(rel, sup.rank)[1]


def congruence_kernel(a: Sequence[Sequence[int]], moduli: Sequence[int], cols: Optional[int] = None) -> Lattice:
    """``{v : (a @ v)_i == 0 mod moduli_i}`` via the kernel of ``[a | diag(moduli)]``."""
    rows = as_matrix(a)
    if len(moduli) != len(rows):
        raise ValueError("one modulus per row required")
    if any(q <= 0 for q in moduli):
        raise ValueError("moduli must be positive")
    if cols is None:
        if not rows:
            raise ValueError("column count required for an empty matrix")
        cols = len(rows[0])
    if not rows:
        return Lattice.full(cols)
    aug = [row + [q if k == i else 0 for k in range(len(rows))] for i, (row, q) in enumerate(zip(rows, moduli))]
    ker = kernel_lattice(aug)
    return Lattice.from_generators((v[:cols] for v in ker.basis), cols)
