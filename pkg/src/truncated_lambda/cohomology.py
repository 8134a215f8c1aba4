"""Low-degree lambda-ring cohomology of truncated polynomial rings.

Matrices are flattened row-major into ``Z^(n*n)``.  A degree-1 class is
recorded over a finite prime window ``P`` by the prime components
``f(p) = p * A(p)``; lattices of such families live in
``Z^(|P| * n * n)`` with coordinates ``A(p)``, so divisibility by ``p``
is built into the coordinates.

Every degree-1 family must also satisfy its cocycle relation against
primes outside the window.  For a prime ``l >= n`` the Frobenius
congruence gives ``psi^l == E (mod l)``, where ``E`` kills ``x, x^2, ...``
and fixes 1, and ``f(l) == 0 (mod l)``.  Reducing the relation between
``p`` and ``l`` modulo infinitely many ``l`` forces ``A(p) E = E A(p)``:
``A(p)`` maps 1 into ``Z`` and kills the constant term of every ``x^i``.
Those coordinates are dropped from the ambient space.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence

from sympy import divisors, factorint, isprime, nextprime, primerange

from .errors import LambdaRingError, WindowError
from .linalg import AbelianInvariants, Lattice, kernel_lattice, member, quotient
from .structures import AdamsSpec
from .truncpoly import EndoMatrix, TruncPoly

# ----------------------------------------------------------------------------
# coordinates


def to_matrix(v: Sequence[int], n: int) -> EndoMatrix:
    return EndoMatrix.from_vector(list(v), n)


def _free_positions(n: int) -> list[int]:
    """Row-major positions not forced to zero by ``g(1) in Z`` and ``g(x^i)`` constant-free."""
    return [i * n + j for i in range(n) for j in range(n) if (i == 0) == (j == 0)]


def _embed(sub: Lattice, positions: Sequence[int], dim: int) -> Lattice:
    gens = []
    for row in sub.basis:
        v = [0] * dim
        for k, pos in enumerate(positions):
            v[pos] = row[k]
        gens.append(v)
    return Lattice.from_generators(gens, dim)


def commutator_operator(psi: EndoMatrix) -> list[list[int]]:
    """Matrix of ``X -> psi X - X psi`` acting on row-major vectors."""
    n = psi.n
    op = [[0] * (n * n) for _ in range(n * n)]
    for i in range(n):
        for j in range(n):
            row = op[i * n + j]
            for k in range(n):
                row[k * n + j] += psi.entry(i, k)
                row[i * n + k] -= psi.entry(k, j)
    return op


def _window(spec: AdamsSpec, primes: Optional[Sequence[int]]) -> tuple[int, ...]:
    primes = tuple(spec.default_primes if primes is None else primes)
    for p in primes:
        if not isprime(p):
            raise ValueError(f"{p} is not a prime")
        spec.check_prime(p)
    if len(set(primes)) != len(primes):
        raise ValueError("prime window has repeated entries")
    return primes


def extend_window(primes: Sequence[int], k: int) -> tuple[int, ...]:
    out = list(primes)
    p = max(out) if out else 1
    for _ in range(k):
        p = nextprime(p)
        out.append(p)
    return tuple(out)


# ----------------------------------------------------------------------------
# degree 0


@lru_cache(maxsize=None)
def _endbar(n: int) -> Lattice:
    pos = _free_positions(n)
    index = {q: k for k, q in enumerate(pos)}
    rows, moduli = [], []
    for p in primerange(2, n):
        # g(x^i)^p == sum_k g_{k,i} x^(kp) modulo p, since c^p == c.
        for i in range(n):
            for m in range(n):
                row = [0] * len(pos)
                if m % p == 0 and (m // p) * n + i in index:
                    row[index[(m // p) * n + i]] += 1
                if i * p < n and m * n + i * p in index:
                    row[index[m * n + i * p]] -= 1
                if any(v % p for v in row):
                    rows.append(row)
                    moduli.append(p)
    sub = Lattice.full(len(pos)).restrict_congruences(rows, moduli)
    return _embed(sub, pos, n * n)


def endbar_lattice(spec) -> Lattice:
    """Lattice of ``g`` with ``g(r)^p == g(r^p) (mod p)`` for every prime ``p``.

    Primes ``p >= n`` force ``g(1) in Z`` and a zero constant term in each
    ``g(x^i)``; the finitely many primes ``p < n`` add congruences.
    Accepts a spec or the truncation order itself.
    """
    n = spec if isinstance(spec, int) else spec.n
    if not 1 <= n <= 6:
        raise ValueError("truncation order must be between 1 and 6")
    return _endbar(n)


def in_endbar(g: EndoMatrix) -> bool:
    return g.to_vector() in endbar_lattice(g.n)


def _h0(spec: AdamsSpec, primes: tuple[int, ...]) -> Lattice:
    rows = [r for p in primes for r in commutator_operator(spec.psi(p))]
    return endbar_lattice(spec).restrict(rows)


def h0_lattice(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> Lattice:
    """``Endbar`` intersected with the centralizer of ``psi^p`` for ``p`` in the window."""
    return _h0(spec, _window(spec, primes))


def h0_stable(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> Optional[bool]:
    """Whether ``h0_lattice`` is unchanged when three more primes join the window.

    ``None`` when the spec is a finite table and cannot be extended.
    """
    primes = _window(spec, primes)
    if spec.window is not None:
        return None
    return _h0(spec, primes) == _h0(spec, extend_window(primes, 3))


@dataclass(frozen=True)
class H0Algebra:
    basis: tuple[EndoMatrix, ...]
    table: tuple[tuple[tuple[int, ...], ...], ...]
    unit: tuple[int, ...]
    commutative: bool

    @property
    def rank(self) -> int:
        return len(self.basis)

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        """Product of two elements given by basis coordinates."""
        out = [0] * self.rank
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                if x and y:
                    for k, z in enumerate(self.table[i][j]):
                        out[k] += x * y * z
        return tuple(out)


def h0_algebra(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> H0Algebra:
    """Structure constants of ``H^0`` under composition in its lattice basis."""
    lat = h0_lattice(spec, primes)
    n = spec.n
    basis = tuple(to_matrix(v, n) for v in lat.basis)
    table = []
    for a in basis:
        row = []
        for b in basis:
            c = member(lat, (a @ b).to_vector())
            if c is None:
                raise LambdaRingError(f"{spec.label}: product of H^0 basis elements leaves the lattice")
            row.append(tuple(c))
        table.append(tuple(row))
    unit = member(lat, EndoMatrix.identity(n).to_vector())
    if unit is None:
        raise LambdaRingError(f"{spec.label}: identity is not in H^0")
    commutative = all(a @ b == b @ a for a, b in itertools.combinations(basis, 2))
    return H0Algebra(basis, tuple(table), tuple(unit), commutative)


# ----------------------------------------------------------------------------
# degree 1


@dataclass(frozen=True, eq=False)
class DerBarElement:
    """Prime components ``f(p)`` of a degree-1 cochain over a finite window."""

    spec: AdamsSpec
    primes: tuple[int, ...]
    f: Mapping[int, EndoMatrix]

    def __post_init__(self):
        if set(self.f) != set(self.primes):
            raise ValueError("components must be given exactly on the window")
        for p, m in self.f.items():
            if any(v % p for row in m.mat for v in row):
                raise ValueError(f"f({p}) is not divisible by {p}")

    @classmethod
    def from_vector(cls, spec: AdamsSpec, primes: Sequence[int], v: Sequence[int]) -> "DerBarElement":
        n2 = spec.n**2
        f = {p: to_matrix(v[k * n2 : (k + 1) * n2], spec.n) * p for k, p in enumerate(primes)}
        return cls(spec, tuple(primes), f)

    @classmethod
    def zero(cls, spec: AdamsSpec, primes: Sequence[int]) -> "DerBarElement":
        return cls(spec, tuple(primes), {p: EndoMatrix.zero(spec.n) for p in primes})

    def to_vector(self) -> list[int]:
        """Coordinates ``A(p) = f(p) / p`` concatenated over the window."""
        return [v for p in self.primes for v in self.f[p].divide(p).to_vector()]

    def cocycle_defects(self) -> list[tuple[int, int]]:
        bad = []
        for p, q in itertools.combinations(self.primes, 2):
            ps, qs = self.spec.psi(p), self.spec.psi(q)
            if ps @ self.f[q] + self.f[p] @ qs != qs @ self.f[p] + self.f[q] @ ps:
                bad.append((p, q))
        return bad

    def is_cocycle(self) -> bool:
        return not self.cocycle_defects()

    def __add__(self, other: "DerBarElement") -> "DerBarElement":
        return DerBarElement(self.spec, self.primes, {p: self.f[p] + other.f[p] for p in self.primes})

    def __sub__(self, other: "DerBarElement") -> "DerBarElement":
        return DerBarElement(self.spec, self.primes, {p: self.f[p] - other.f[p] for p in self.primes})

    def scaled(self, k: int) -> "DerBarElement":
        return DerBarElement(self.spec, self.primes, {p: self.f[p] * k for p in self.primes})


def _der(spec: AdamsSpec, primes: tuple[int, ...]) -> Lattice:
    n = spec.n
    n2 = n * n
    pos = _free_positions(n)
    dim = len(primes) * n2
    if not primes:
        return Lattice.zero(0)
    ops = {p: commutator_operator(spec.psi(p)) for p in primes}
    width = len(primes) * len(pos)
    rows = []
    # q L_p(A(q)) - p L_q(A(p)) = 0 for each pair p < q
    for a, b in itertools.combinations(range(len(primes)), 2):
        p, q = primes[a], primes[b]
        for r in range(n2):
            row = [0] * width
            for k, c in enumerate(pos):
                row[b * len(pos) + k] += q * ops[p][r][c]
                row[a * len(pos) + k] -= p * ops[q][r][c]
            if any(row):
                rows.append(row)
    sub = kernel_lattice(rows, width) if rows else Lattice.full(width)
    positions = [k * n2 + c for k in range(len(primes)) for c in pos]
    return _embed(sub, positions, dim)


def derbar_lattice(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> Lattice:
    """Families ``(A(p))_p`` whose ``f(p) = p A(p)`` satisfy the pairwise cocycle relation."""
    return _der(spec, _window(spec, primes))


def _coboundary_vector(spec: AdamsSpec, primes: Sequence[int], g: Sequence[int]) -> list[int]:
    out = []
    for p in primes:
        m = spec.psi(p) @ to_matrix(g, spec.n) - to_matrix(g, spec.n) @ spec.psi(p)
        out.extend(m.divide(p).to_vector())
    return out


def _inn(spec: AdamsSpec, primes: tuple[int, ...]) -> Lattice:
    dim = len(primes) * spec.n**2
    gens = [_coboundary_vector(spec, primes, g) for g in endbar_lattice(spec).basis]
    inn = Lattice.from_generators(gens, dim)
    if not _der(spec, primes).contains(inn):
        raise LambdaRingError(f"{spec.label}: a coboundary is not a cocycle over {primes}")
    return inn


def innbar_lattice(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> Lattice:
    """Image of ``Endbar`` under ``g -> ([psi^p, g] / p)_p``, checked to lie in ``derbar_lattice``."""
    return _inn(spec, _window(spec, primes))


def h1_group(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> AbelianInvariants:
    """``Der / Inn`` over the window as invariant factors plus free rank."""
    primes = _window(spec, primes)
    return quotient(_inn(spec, primes), _der(spec, primes))


@dataclass(frozen=True)
class GrowthRule:
    constant: int
    per_prime: int

    def __call__(self, size: int) -> int:
        return self.constant + self.per_prime * size

    def __str__(self) -> str:
        if self.constant == 0:
            return f"{self.per_prime}*|P|"
        sign = "+" if self.constant > 0 else "-"
        return f"{self.per_prime}*|P| {sign} {abs(self.constant)}"


def h1_free_rank_rule(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> Optional[GrowthRule]:
    """Free rank of ``H^1`` as ``c0 + c1 |P|``, read off from the window and two extensions.

    ``None`` for table specs or when the three values are not collinear.
    """
    primes = _window(spec, primes)
    if spec.window is not None:
        return None
    ranks = [h1_group(spec, extend_window(primes, k)).free_rank for k in range(3)]
    step = ranks[1] - ranks[0]
    if ranks[2] - ranks[1] != step:
        return None
    return GrowthRule(ranks[0] - step * len(primes), step)


def d0(spec: AdamsSpec, g: EndoMatrix, primes: Optional[Sequence[int]] = None) -> DerBarElement:
    """``([psi^p, g])_p`` for ``g`` in ``Endbar``."""
    primes = _window(spec, primes)
    if not in_endbar(g):
        raise ValueError("g does not satisfy the Frobenius congruences")
    return DerBarElement(spec, primes, {p: spec.psi(p) @ g - g @ spec.psi(p) for p in primes})


# ----------------------------------------------------------------------------
# reconstruction from prime components


def window_factors(m: int, primes: Sequence[int]) -> list[int]:
    """Prime factors of ``m`` with multiplicity, ascending; raises if one lies outside ``primes``."""
    if m < 1:
        raise ValueError("m must be positive")
    out = []
    for p, e in sorted(factorint(m).items()):
        if p not in primes:
            raise WindowError(f"prime factor {p} of {m} is outside the window {tuple(primes)}")
        out.extend([p] * e)
    return out


def reconstruct_along(f: DerBarElement, order: Sequence[int]) -> EndoMatrix:
    """``sum_i psi^(p_1...p_(i-1)) f(p_i) psi^(p_(i+1)...p_r)`` for the given factor order."""
    spec = f.spec
    total = EndoMatrix.zero(spec.n)
    prefix = 1
    suffix = math.prod(order)
    for p in order:
        suffix //= p
        total = total + spec.adams(prefix) @ f.f[p] @ spec.adams(suffix)
        prefix *= p
    return total


def reconstruct(f: DerBarElement, m: int) -> EndoMatrix:
    """The derivation value at ``m`` determined by the prime components.

    Computed along ascending and descending factor orders, which must agree.
    """
    order = window_factors(m, f.primes)
    value = reconstruct_along(f, order)
    if len(set(order)) > 1 and reconstruct_along(f, order[::-1]) != value:
        raise LambdaRingError(f"reconstruction at {m} depends on the factor order")
    return value


def d1_check(f: DerBarElement, pairs: Sequence[tuple[int, int]]) -> bool:
    """Whether ``f(mn) = psi^m f(n) + f(m) psi^n`` on every pair."""
    spec = f.spec
    for m, k in pairs:
        try:
            if reconstruct(f, m * k) != spec.adams(m) @ reconstruct(f, k) + reconstruct(f, m) @ spec.adams(k):
                return False
        except WindowError:
            raise
        except LambdaRingError:
            # order-dependent reconstruction already means f is not a cocycle
            return False
    return True


# ----------------------------------------------------------------------------
# general cochains and the composition product


@dataclass(frozen=True, eq=False)
class Cochain:
    """A function from ``degree``-tuples of positive integers to matrices."""

    degree: int
    n: int
    func: Callable[[tuple[int, ...]], EndoMatrix]

    def __call__(self, *ms: int) -> EndoMatrix:
        if len(ms) != self.degree:
            raise ValueError(f"expected {self.degree} arguments, got {len(ms)}")
        return self.func(tuple(ms))

    @classmethod
    def constant(cls, g: EndoMatrix) -> "Cochain":
        return cls(0, g.n, lambda ms: g)

    @classmethod
    def from_derivation(cls, f: DerBarElement) -> "Cochain":
        return cls(1, f.spec.n, lambda ms: reconstruct(f, ms[0]))


def differential(spec: AdamsSpec, f: Cochain) -> Cochain:
    k = f.degree

    def df(ms: tuple[int, ...]) -> EndoMatrix:
        out = spec.adams(ms[0]) @ f.func(ms[1:])
        for i in range(1, k + 1):
            merged = ms[: i - 1] + (ms[i - 1] * ms[i],) + ms[i + 1 :]
            term = f.func(merged)
            out = out + term if i % 2 == 0 else out - term
        last = f.func(ms[:k]) @ spec.adams(ms[k])
        return out + last if (k + 1) % 2 == 0 else out - last

    return Cochain(k + 1, f.n, df)


def compose(f: Cochain, g: Cochain) -> Cochain:
    a = f.degree
    return Cochain(a + g.degree, f.n, lambda ms: f.func(ms[:a]) @ g.func(ms[a:]))


def smooth_numbers(primes: Sequence[int], bound: int) -> list[int]:
    """Integers in ``[1, bound]`` whose prime factors all lie in ``primes``."""
    out = {1}
    for p in primes:
        for m in sorted(out):
            q = m * p
            while q <= bound:
                out.add(q)
                q *= p
    return sorted(out)


def leibnitz_check(
    spec: AdamsSpec,
    f: Cochain,
    g: Cochain,
    primes: Optional[Sequence[int]] = None,
    samples: int = 20,
    seed: int = 0,
) -> bool:
    """``d(f o g) = (df) o g + (-1)^|f| f o (dg)`` on sampled index tuples."""
    primes = _window(spec, primes)
    pool = smooth_numbers(primes, 60)
    rng = random.Random(seed)
    lhs = differential(spec, compose(f, g))
    left = compose(differential(spec, f), g)
    right = compose(f, differential(spec, g))
    sign = -1 if f.degree % 2 else 1
    for _ in range(samples):
        ms = tuple(rng.choice(pool) for _ in range(f.degree + g.degree + 1))
        if lhs.func(ms) != left.func(ms) + right.func(ms) * sign:
            return False
    return True


# ----------------------------------------------------------------------------
# graded commutativity of H^0 + H^1


@dataclass(frozen=True)
class ClassTest:
    """Outcome of testing ``(g f(p) - f(p) g)_p`` against the coboundaries."""

    is_coboundary: bool
    cocycle: tuple[int, ...]
    coordinates: Optional[tuple[int, ...]] = None
    order: Optional[int] = None


def _class_order(v: Sequence[int], inn: Lattice, h1: AbelianInvariants) -> Optional[int]:
    exponent = h1.torsion[-1] if h1.torsion else 1
    for k in divisors(exponent):
        if [k * x for x in v] in inn:
            return k
    return None


def compose_classes(
    spec: AdamsSpec, g: EndoMatrix, f: DerBarElement, primes: Optional[Sequence[int]] = None
) -> ClassTest:
    """Whether ``g o [f] - [f] o g`` vanishes in ``H^1`` over the window.

    On a non-coboundary the returned ``order`` is the order of the class
    (``None`` for infinite order).
    """
    primes = _window(spec, primes)
    if tuple(f.primes) != primes:
        raise ValueError("cocycle window differs from the requested window")
    comm = DerBarElement(spec, primes, {p: g @ f.f[p] - f.f[p] @ g for p in primes})
    v = comm.to_vector()
    inn = _inn(spec, primes)
    coords = member(inn, v)
    if coords is not None:
        return ClassTest(True, tuple(v), tuple(coords), 1)
    der = _der(spec, primes)
    if v not in der:
        raise LambdaRingError(f"{spec.label}: commutator of H^0 and Der is not a cocycle")
    return ClassTest(False, tuple(v), None, _class_order(v, inn, quotient(inn, der)))


def explicit_witness(spec: AdamsSpec, primes: Sequence[int]) -> Optional[tuple[EndoMatrix, DerBarElement]]:
    """Closed-form non-commuting pair for ``S((p^r), h)`` with ``D > 1``.

    ``g`` sends ``x -> (h/D) x^2`` and ``x^2 -> (G/D) x^2``; ``f(p)`` sends
    ``x^2 -> 2 p^r (p^r - 1) / G x``.
    """
    if spec.family != "S_pr_h" or spec.meta.get("D", 1) == 1:
        return None
    r, h, G, D = spec.meta["r"], spec.params["h"], spec.meta["G"], spec.meta["D"]
    g = EndoMatrix.of([[0, 0, 0], [0, 0, 0], [0, h // D, G // D]])
    f = {}
    for p in primes:
        b = p**r
        f[p] = EndoMatrix.of([[0, 0, 0], [0, 0, 2 * b * (b - 1) // G], [0, 0, 0]])
    return g, DerBarElement(spec, tuple(primes), f)


@dataclass(frozen=True)
class CommutativityResult:
    commutative: bool
    h0_commutative: bool
    witness_g: Optional[EndoMatrix] = None
    witness_f: Optional[DerBarElement] = None
    witness_class: Optional[ClassTest] = None
    explicit: bool = False


def graded_commutativity(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> CommutativityResult:
    """Whether ``H^0 + H^1`` is graded commutative over the window.

    For ``S((p^r), h)`` with ``D > 1`` the closed-form pair is tried first;
    otherwise every ``H^0`` basis element is tested against every
    ``Der`` basis element.
    """
    primes = _window(spec, primes)
    alg = h0_algebra(spec, primes)
    h0 = _h0(spec, primes)
    explicit = explicit_witness(spec, primes)
    if explicit is not None:
        g, f = explicit
        if g.to_vector() not in h0:
            raise LambdaRingError(f"{spec.label}: closed-form g is not in H^0")
        if f.to_vector() not in _der(spec, primes):
            raise LambdaRingError(f"{spec.label}: closed-form f is not a cocycle")
        test = compose_classes(spec, g, f, primes)
        if not test.is_coboundary:
            return CommutativityResult(False, alg.commutative, g, f, test, explicit=True)
    for gv in h0.basis:
        g = to_matrix(gv, spec.n)
        for fv in _der(spec, primes).basis:
            f = DerBarElement.from_vector(spec, primes, fv)
            test = compose_classes(spec, g, f, primes)
            if not test.is_coboundary:
                return CommutativityResult(False, alg.commutative, g, f, test)
    return CommutativityResult(alg.commutative, alg.commutative)


# ----------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class CohomologyReport:
    label: str
    primes: tuple[int, ...]
    h0_basis: tuple[EndoMatrix, ...]
    h0_commutative: bool
    h0_stable: Optional[bool]
    h1: AbelianInvariants
    h1_free_rank_formula: Optional[str]
    graded_commutative: bool
    witness: Optional[CommutativityResult] = field(default=None)

    @property
    def h0_rank(self) -> int:
        return len(self.h0_basis)


def cohomology_report(spec: AdamsSpec, primes: Optional[Sequence[int]] = None) -> CohomologyReport:
    primes = _window(spec, primes)
    alg = h0_algebra(spec, primes)
    rule = h1_free_rank_rule(spec, primes)
    comm = graded_commutativity(spec, primes)
    return CohomologyReport(
        spec.label,
        primes,
        alg.basis,
        alg.commutative,
        h0_stable(spec, primes),
        h1_group(spec, primes),
        str(rule) if rule else None,
        comm.commutative,
        None if comm.commutative else comm,
    )
