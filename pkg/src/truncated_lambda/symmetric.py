"""Universal lambda-ring polynomials and the Newton recursion.

``P_i`` and ``P_{i,j}`` are produced by expanding the defining finite
products symbolically and rewriting the symmetric result in elementary
symmetric polynomials by leading-term elimination.  Everything is exact
over the integers.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .errors import NonIntegralError, NotSymmetricError

# Expansions grow fast; these caps keep universal_P / universal_P_composite at desk scale.
MAX_PRODUCT_DEGREE = 3
MAX_COMPOSITE_VARIABLES = 6

Exponent = tuple[int, ...]


class MultiPoly:
    """Sparse integer polynomial in named variables.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    integer coefficients.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, int] | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"repeated variable names in {self.variables}")
        clean = {}
        for exp, c in (terms or {}).items():
            if len(exp) != len(self.variables):
                raise ValueError("exponent length does not match variables")
            if c:
                clean[tuple(exp)] = int(c)
        self.terms = clean

    @classmethod
    def constant(cls, variables: Sequence[str], c: int) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        exp = tuple(int(v == name) for v in variables)
        if not any(exp):
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {exp: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def _like(self, terms: Mapping[Exponent, int]) -> "MultiPoly":
        return MultiPoly(self.variables, terms)

    def _check(self, other: "MultiPoly") -> None:
        if other.variables != self.variables:
            raise ValueError(f"variable sets differ: {self.variables} vs {other.variables}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._like(out)

    def __neg__(self) -> "MultiPoly":
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            return self._like({e: other * c for e, c in self.terms.items()})
        self._check(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.constant(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def swap(self, a: str, b: str) -> "MultiPoly":
        i, j = self.variables.index(a), self.variables.index(b)

        def sw(e):
            e = list(e)
            e[i], e[j] = e[j], e[i]
            return tuple(e)

        return self._like({sw(e): c for e, c in self.terms.items()})

    def relabel(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over a superset of variables, in any order."""
        variables = tuple(variables)
        missing = set(self.variables) - set(variables)
        if missing:
            raise ValueError(f"variables {sorted(missing)} would be dropped")
        pos = [variables.index(v) for v in self.variables]
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(variables)
            for p, x in zip(pos, e):
                new[p] = x
            out[tuple(new)] = c
        return MultiPoly(variables, out)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, values: Mapping[str, object], one):
        """Evaluate at ring elements supporting ``+`` and ``*`` (ints, TruncPoly, ...)."""
        vals = [values[v] for v in self.variables]
        powers: dict[tuple[int, int], object] = {}

        def pw(i, k):
            if (i, k) not in powers:
                acc = one
                for _ in range(k):
                    acc = acc * vals[i]
                powers[(i, k)] = acc
            return powers[(i, k)]

        total = one * 0
        for e, c in sorted(self.terms.items()):
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            total = total + term
        return total

    def substitute(self, images: Mapping[str, "MultiPoly"], variables: Sequence[str]) -> "MultiPoly":
        """Replace each variable by a polynomial over ``variables``."""
        one = MultiPoly.constant(variables, 1)
        return self.evaluate({v: images[v] for v in self.variables}, one)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), [-x for x in t[0]])):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _names(prefix: str, k: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(1, k + 1)]


def elementary_symmetric(k: int, variables: Sequence[str], ambient: Sequence[str] | None = None) -> MultiPoly:
    """``e_k`` of ``variables``, as a polynomial over ``ambient`` (default: ``variables``)."""
    variables = list(variables)
    if not 0 <= k <= len(variables):
        raise ValueError(f"e_{k} undefined for {len(variables)} variables")
    ambient = tuple(ambient) if ambient is not None else tuple(variables)
    pos = [ambient.index(v) for v in variables]
    terms = {}
    for combo in combinations(pos, k):
        e = [0] * len(ambient)
        for p in combo:
            e[p] = 1
        terms[tuple(e)] = 1
    return MultiPoly(ambient, terms)


def is_symmetric(p: MultiPoly, block: Sequence[str]) -> bool:
    # Adjacent transpositions generate the symmetric group.
    return all(p.swap(a, b) == p for a, b in zip(block, block[1:]))


def express_in_elementary(p: MultiPoly, block: Sequence[str], prefix: str = "e") -> MultiPoly:
    """Rewrite ``p`` in the elementary symmetric polynomials of ``block``.

    Variables of ``p`` outside ``block`` are carried along as coefficients.
    The result lives over ``prefix1..prefixk`` followed by those remaining
    variables.  Raises :class:`NotSymmetricError` if ``p`` is not symmetric
    in ``block``.
    """
    block = list(block)
    if not is_symmetric(p, block):
        raise NotSymmetricError(f"{p} is not symmetric in {block}")
    k = len(block)
    bpos = [p.variables.index(v) for v in block]
    others = [v for v in p.variables if v not in block]
    opos = [p.variables.index(v) for v in others]
    out_vars = tuple(_names(prefix, k)) + tuple(others)

    elem = [elementary_symmetric(i, block, p.variables) for i in range(k + 1)]
    epow: dict[tuple[int, int], MultiPoly] = {}

    def e_power(i, d):
        if (i, d) not in epow:
            epow[(i, d)] = elem[i] ** d
        return epow[(i, d)]

    rem = dict(p.terms)
    result: dict[Exponent, int] = {}
    while rem:
        lead = max({tuple(e[i] for i in bpos) for e in rem}, key=lambda a: (sum(a), a))
        if any(a < b for a, b in zip(lead, lead[1:])):
            raise NotSymmetricError(f"leading exponent {lead} is not a partition")
        steps = [lead[i] - (lead[i + 1] if i + 1 < k else 0) for i in range(k)]
        prod = MultiPoly.constant(p.variables, 1)
        for i, d in enumerate(steps, start=1):
            if d:
                prod = prod * e_power(i, d)
        coeff = {e: c for e, c in rem.items() if tuple(e[i] for i in bpos) == lead}
        for e, c in coeff.items():
            oexp = tuple(e[i] for i in opos)
            key = tuple(steps) + oexp
            result[key] = result.get(key, 0) + c
            for pe, pc in prod.terms.items():
                shifted = list(pe)
                for i, x in zip(opos, oexp):
                    shifted[i] += x
                shifted = tuple(shifted)
                v = rem.get(shifted, 0) - c * pc
                if v:
                    rem[shifted] = v
                else:
                    rem.pop(shifted, None)
    return MultiPoly(out_vars, result)


def _t_coefficient(monomials: Iterable[MultiPoly], i: int, variables: Sequence[str]) -> MultiPoly:
    """Coefficient of ``t^i`` in the product of ``(1 + m t)`` over ``monomials``."""
    coeffs = [MultiPoly.constant(variables, 1)] + [MultiPoly(variables)] * i
    for m in monomials:
        for d in range(i, 0, -1):
            coeffs[d] = coeffs[d] + coeffs[d - 1] * m
    return coeffs[i]


@lru_cache(maxsize=None)
def universal_P(i: int, max_degree: int = MAX_PRODUCT_DEGREE) -> MultiPoly:
    """``P_i`` over ``s1..si`` (for the first argument) and ``sigma1..sigmai``."""
    if i < 1:
        raise ValueError("P_i needs i >= 1")
    if i > max_degree:
        raise ValueError(f"P_{i} exceeds the configured cap {max_degree}")
    xi, eta = _names("xi", i), _names("eta", i)
    variables = xi + eta
    monomials = [MultiPoly.var(variables, a) * MultiPoly.var(variables, b) for a in xi for b in eta]
    raw = _t_coefficient(monomials, i, variables)
    in_s = express_in_elementary(raw, xi, prefix="s")
    return express_in_elementary(in_s, eta, prefix="sigma").relabel(_names("s", i) + _names("sigma", i))


@lru_cache(maxsize=None)
def universal_P_composite(i: int, j: int, max_variables: int = MAX_COMPOSITE_VARIABLES) -> MultiPoly:
    """``P_{i,j}`` over ``s1..s_{ij}``."""
    if i < 1 or j < 1:
        raise ValueError("P_{i,j} needs i, j >= 1")
    if i * j > max_variables:
        raise ValueError(f"P_{{{i},{j}}} needs {i * j} variables, above the cap {max_variables}")
    xi = _names("xi", i * j)
    monomials = []
    for combo in combinations(xi, j):
        m = MultiPoly.constant(xi, 1)
        for v in combo:
            m = m * MultiPoly.var(xi, v)
        monomials.append(m)
    raw = _t_coefficient(monomials, i, xi)
    return express_in_elementary(raw, xi, prefix="s")


def raw_product_coefficient(i: int) -> MultiPoly:
    """The unrewritten coefficient of ``t^i`` in the product defining ``P_i``."""
    xi, eta = _names("xi", i), _names("eta", i)
    variables = xi + eta
    monomials = [MultiPoly.var(variables, a) * MultiPoly.var(variables, b) for a in xi for b in eta]
    return _t_coefficient(monomials, i, variables)


def raw_composite_coefficient(i: int, j: int) -> MultiPoly:
    xi = _names("xi", i * j)
    monomials = []
    for combo in combinations(xi, j):
        m = MultiPoly.constant(xi, 1)
        for v in combo:
            m = m * MultiPoly.var(xi, v)
        monomials.append(m)
    return _t_coefficient(monomials, i, xi)


def lambda_from_adams(psi_values: Sequence, one) -> list:
    """Solve the Newton recursion for ``[lambda^0(r), ..., lambda^k(r)]``.

    ``psi_values[m - 1]`` must be ``psi^m(r)`` for ``m = 1..k``; ``one`` is
    the unit of the ring.  Uses ``m lambda^m = sum_{i=1}^m (-1)^(i-1)
    lambda^(m-i) psi^i``, and raises :class:`NonIntegralError` when a
    division by ``m`` is not exact.
    """
    lam = [one]
    for m in range(1, len(psi_values) + 1):
        acc = one * 0
        for i in range(1, m + 1):
            term = lam[m - i] * psi_values[i - 1]
            acc = acc + term if i % 2 else acc - term
        lam.append(_exact_divide(acc, m))
    return lam


def _exact_divide(value, m: int):
    if isinstance(value, int):
        if value % m:
            raise NonIntegralError(m, value)
        return value // m
    coeffs = value.coeffs
    if any(c % m for c in coeffs):
        raise NonIntegralError(m, value)
    return type(value)(tuple(c // m for c in coeffs))


LambdaOps = Callable[[object, int], list]


def lambda_axiom_failures(lam: LambdaOps, one, samples: Sequence, i: int, j: int) -> list[str]:
    """Check the lambda-ring axioms through degree ``i`` (and ``i*j`` for composition).

    ``lam(r, k)`` must return ``[lambda^0(r), ..., lambda^k(r)]``.  Returns a
    list of human-readable failures; empty means every check passed.
    """
    failures = []
    zero = one * 0
    ones = lam(one, max(i, 2))
    if ones[0] != one or ones[1] != one or any(v != zero for v in ones[2:]):
        failures.append(f"lambda^k(1) wrong: {[str(v) for v in ones]}")
    for r in samples:
        lr = lam(r, 1)
        if lr[0] != one or lr[1] != r:
            failures.append(f"lambda^0/lambda^1 wrong at r={r}")
    for r, s in zip(samples, samples[1:] + samples[:1]):
        lr, ls = lam(r, i), lam(s, i)
        lsum, lprod = lam(r + s, i), lam(r * s, i)
        for d in range(1, i + 1):
            expected = zero
            for k in range(d + 1):
                expected = expected + lr[k] * ls[d - k]
            if lsum[d] != expected:
                failures.append(f"sum axiom fails at degree {d}, r={r}, s={s}")
            values = {f"s{k}": lr[k] for k in range(1, d + 1)}
            values.update({f"sigma{k}": ls[k] for k in range(1, d + 1)})
            if universal_P(d).evaluate(values, one) != lprod[d]:
                failures.append(f"product axiom fails at degree {d}, r={r}, s={s}")
    for r in samples:
        for a in range(1, i + 1):
            for b in range(1, j + 1):
                lr = lam(r, a * b)
                inner = lam(lr[b], a)[a]
                values = {f"s{k}": lr[k] for k in range(1, a * b + 1)}
                if universal_P_composite(a, b).evaluate(values, one) != inner:
                    failures.append(f"composition axiom fails for lambda^{a} lambda^{b} at r={r}")
    return failures


def lambda_axiom_check(lam: LambdaOps, one, samples: Sequence, i: int, j: int) -> bool:
    return not lambda_axiom_failures(lam, one, samples, i, j)
