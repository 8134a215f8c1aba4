"""Arithmetic in Z[x]/(x^n) and integer matrices of its Z-linear self-maps.

An :class:`EndoMatrix` uses the monomial basis ``1, x, ..., x^(n-1)``;
column ``j`` holds the coefficients of the image of ``x^j``.  With this
orientation composition ``g o f`` is the matrix product ``G @ F``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import Matrix, matmul, matvec


@dataclass(frozen=True)
class TruncPoly:
    """Element of ``Z[x]/(x^n)``; ``coeffs[i]`` is the coefficient of ``x^i``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("truncation order must be at least 1")

    @classmethod
    def of(cls, coeffs: Iterable[int], n: int | None = None) -> "TruncPoly":
        c = [int(v) for v in coeffs]
        if n is not None:
            c = (c + [0] * n)[:n]
        return cls(tuple(c))

    @classmethod
    def zero(cls, n: int) -> "TruncPoly":
        return cls((0,) * n)

    @classmethod
    def one(cls, n: int) -> "TruncPoly":
        return cls.monomial(n, 0)

    @classmethod
    def monomial(cls, n: int, k: int, coeff: int = 1) -> "TruncPoly":
        c = [0] * n
        if k < n:
            c[k] = coeff
        return cls(tuple(c))

    @classmethod
    def gen(cls, n: int) -> "TruncPoly":
        return cls.monomial(n, 1)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def _check(self, other: "TruncPoly") -> None:
        if other.n != self.n:
            raise ValueError(f"truncation orders differ: {self.n} vs {other.n}")

    def _coerce(self, other) -> "TruncPoly":
        if isinstance(other, int):
            return TruncPoly.monomial(self.n, 0, other)
        if isinstance(other, TruncPoly):
            self._check(other)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncPoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncPoly(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncPoly(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncPoly(tuple(other * a for a in self.coeffs))
        if not isinstance(other, TruncPoly):
            return NotImplemented
        self._check(other)
        n = self.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncPoly":
        if k < 0:
            raise ValueError("negative power")
        result, base = TruncPoly.one(self.n), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mod(self, p: int) -> "TruncPoly":
        return TruncPoly(tuple(a % p for a in self.coeffs))

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def valuation(self) -> int:
        """Largest ``k`` with ``self`` in the ideal ``(x^k)``; ``n`` for zero."""
        return next((i for i, a in enumerate(self.coeffs) if a), self.n)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def mul(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    return a * b


@dataclass(frozen=True)
class EndoMatrix:
    """Z-linear self-map of ``Z[x]/(x^n)`` as an ``n x n`` integer matrix."""

    mat: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.mat)
        if n == 0 or any(len(r) != n for r in self.mat):
            raise ValueError("endomorphism matrix must be square and nonempty")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "EndoMatrix":
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "EndoMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "EndoMatrix":
        return cls(((0,) * n,) * n)

    @classmethod
    def from_images(cls, images: Sequence[TruncPoly]) -> "EndoMatrix":
        """Matrix whose column ``j`` is ``images[j]``, the image of ``x^j``."""
        n = len(images)
        return cls(tuple(tuple(images[j].coeffs[i] for j in range(n)) for i in range(n)))

    @classmethod
    def from_vector(cls, v: Sequence[int], n: int) -> "EndoMatrix":
        return cls(tuple(tuple(int(x) for x in v[i * n : (i + 1) * n]) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.mat)

    def entry(self, i: int, j: int) -> int:
        return self.mat[i][j]

    def column(self, j: int) -> TruncPoly:
        return TruncPoly(tuple(row[j] for row in self.mat))

    def to_vector(self) -> list[int]:
        """Row-major flattening, the coordinates used by lattice computations."""
        return [v for row in self.mat for v in row]

    def rows(self) -> Matrix:
        return [list(r) for r in self.mat]

    def __call__(self, r: TruncPoly) -> TruncPoly:
        return apply(self, r)

    def _check(self, other: "EndoMatrix") -> None:
        if other.n != self.n:
            raise ValueError(f"orders differ: {self.n} vs {other.n}")

    def __add__(self, other: "EndoMatrix") -> "EndoMatrix":
        self._check(other)
        return EndoMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.mat, other.mat)))

    def __sub__(self, other: "EndoMatrix") -> "EndoMatrix":
        self._check(other)
        return EndoMatrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.mat, other.mat)))

    def __neg__(self) -> "EndoMatrix":
        return EndoMatrix(tuple(tuple(-a for a in r) for r in self.mat))

    def __mul__(self, k: int) -> "EndoMatrix":
        if not isinstance(k, int):
            return NotImplemented
        return EndoMatrix(tuple(tuple(k * a for a in r) for r in self.mat))

    __rmul__ = __mul__

    def __matmul__(self, other: "EndoMatrix") -> "EndoMatrix":
        self._check(other)
        return EndoMatrix.of(matmul(self.mat, other.mat))

    def divide(self, k: int) -> "EndoMatrix":
        """Exact entrywise division; raises ``ValueError`` if ``k`` does not divide every entry."""
        if any(a % k for r in self.mat for a in r):
            raise ValueError(f"matrix entries are not all divisible by {k}")
        return EndoMatrix(tuple(tuple(a // k for a in r) for r in self.mat))

    def is_zero(self) -> bool:
        return not any(a for r in self.mat for a in r)

    def __pow__(self, k: int) -> "EndoMatrix":
        out = EndoMatrix.identity(self.n)
        for _ in range(k):
            out = out @ self
        return out


def apply(e: EndoMatrix, r: TruncPoly) -> TruncPoly:
    if e.n != r.n:
        raise ValueError(f"orders differ: {e.n} vs {r.n}")
    return TruncPoly(tuple(matvec(e.mat, r.coeffs)))


def ring_endo_from_gen_image(q: TruncPoly) -> EndoMatrix:
    """Matrix of the ring endomorphism ``x -> q``; column ``j`` is ``q^j``."""
    if q.constant:
        raise ValueError(f"generator image {q} has a nonzero constant term")
    images = [TruncPoly.one(q.n)]
    for _ in range(1, q.n):
        images.append(images[-1] * q)
    return EndoMatrix.from_images(images)


def frobenius_congruent(g: EndoMatrix, p: int) -> bool:
    """Whether ``g(r)^p == g(r^p) (mod p)`` for every ``r``.

    Both sides are additive modulo ``p``, so checking the monomial basis
    is enough.
    """
    n = g.n
    for i in range(n):
        lhs = (g.column(i) ** p).mod(p)
        rhs = g(TruncPoly.monomial(n, i * p)).mod(p)
        if lhs != rhs:
            return False
    return True


def commutator(a: EndoMatrix, b: EndoMatrix) -> EndoMatrix:
    return a @ b - b @ a
