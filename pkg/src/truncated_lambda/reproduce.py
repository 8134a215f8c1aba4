"""Closed-form lattices for the classified families and the golden reproduction targets.

The closed forms are assembled straight from their defining equations,
independently of the centralizer and cocycle computations in
:mod:`truncated_lambda.cohomology`, so comparing the two is a real check.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .cohomology import (
    DerBarElement,
    d1_check,
    derbar_lattice,
    endbar_lattice,
    graded_commutativity,
    h0_algebra,
    h0_lattice,
    h0_stable,
    h1_free_rank_rule,
    h1_group,
    innbar_lattice,
    reconstruct,
)
from .linalg import AbelianInvariants, Lattice, kernel_lattice
from .structures import (
    AdamsSpec,
    build_dual,
    build_integers,
    build_KCP3,
    build_S_bp_h,
    build_S_cp,
    enumerate_61,
    enumerate_64,
    isomorphic,
    verify_wilkerson,
)

# ----------------------------------------------------------------------------
# equation helpers


def _lattice(n: int, equations, congruences=(), dim: Optional[int] = None) -> Lattice:
    """Solutions in ``Z^dim`` of ``{index: coeff}`` equations and ``({index: coeff}, modulus)`` congruences."""
    dim = dim or n * n
    rows = []
    for eq in equations:
        row = [0] * dim
        for k, c in eq.items():
            row[k] += c
        rows.append(row)
    lat = kernel_lattice(rows, dim) if rows else Lattice.full(dim)
    if congruences:
        crow, mods = [], []
        for eq, m in congruences:
            row = [0] * dim
            for k, c in eq.items():
                row[k] += c
            crow.append(row)
            mods.append(m)
        lat = lat.restrict_congruences(crow, mods)
    return lat


def _zero_outside(n: int, allowed: set[tuple[int, int]]) -> list[dict[int, int]]:
    return [{i * n + j: 1} for i in range(n) for j in range(n) if (i, j) not in allowed]


def _e(n: int, *terms: tuple[int, int, int]) -> dict[int, int]:
    """Linear form ``sum coeff * g[i][j]`` from ``(coeff, i, j)`` triples."""
    out: dict[int, int] = {}
    for c, i, j in terms:
        out[i * n + j] = out.get(i * n + j, 0) + c
    return out


# Letter positions.  Column j of a matrix is the image of x^j.
#   n = 3:  g(x) = j x + k x^2,  g(x^2) = s x + t x^2
#   n = 4:  column x = (j, k, l), column x^2 = (n, r, s), column x^3 = (u, v, w)
_N3 = {"a": (0, 0), "j": (1, 1), "k": (2, 1), "s": (1, 2), "t": (2, 2)}
_N4 = {
    "a": (0, 0),
    "j": (1, 1), "k": (2, 1), "l": (3, 1),
    "n": (1, 2), "r": (2, 2), "s": (3, 2),
    "u": (1, 3), "v": (2, 3), "w": (3, 3),
}


def _forms(letters):
    n = 1 + max(i for i, _ in letters.values())

    def form(**coeffs):
        return _e(n, *((c, *letters[name]) for name, c in coeffs.items()))

    return n, form


def closed_form_endbar(n: int) -> Lattice:
    """``Endbar`` of ``Z[x]/(x^n)`` for ``n <= 4`` from the hand-derived congruences."""
    if n == 1:
        return Lattice.full(1)
    if n == 2:
        return _lattice(2, _zero_outside(2, {(0, 0), (1, 1)}))
    if n == 3:
        _, f = _forms(_N3)
        return _lattice(3, _zero_outside(3, set(_N3.values())), [(f(s=1), 2), (f(t=1, j=-1), 2)])
    if n == 4:
        _, f = _forms(_N4)
        congruences = [
            (f(n=1), 6), (f(u=1), 6),
            (f(r=1, j=-1), 2), (f(s=1), 2),
            (f(w=1, j=-1), 3), (f(v=1), 3),
        ]
        return _lattice(4, _zero_outside(4, set(_N4.values())), congruences)
    raise ValueError("closed forms exist for n <= 4")


def closed_form_h0(spec: AdamsSpec) -> Lattice:
    """``H^0`` of a classified structure from its closed-form description."""
    fam = spec.family
    if fam == "Z":
        return Lattice.full(1)
    if fam == "Dual":
        return closed_form_endbar(2)
    if fam in ("S_cp", "S_bp_h", "S_pr_h", "KFP2"):
        _, f = _forms(_N3)
        eqs = _zero_outside(3, set(_N3.values())) + [f(s=1)]
        if fam == "S_cp":
            eqs.append(f(t=1, j=-1))
        else:
            h = 1 if fam == "KFP2" else int(spec.params["h"])
            eqs.append(f(t=h, j=-h, k=-spec.meta["G"]))
        return _lattice(3, eqs, [(f(t=1, j=-1), 2)])
    if fam in ("KCP3", "S_h_d2"):
        _, f = _forms(_N4)
        lower = {v for k, v in _N4.items() if k not in "nuv"}
        eqs = _zero_outside(4, lower)
        congruences = []
        if fam == "KCP3":
            eqs += [f(r=1, j=-1, k=-2), f(s=1, k=-4, l=-6), f(w=1, j=-1, k=-6, l=-6)]
        elif spec.params["h"] == 1:
            d2 = spec.params["d2"]
            eqs += [
                f(r=1, j=-1, k=-12),
                f(s=6 * d2 + 1, k=-(8 - 12 * d2), l=-60),
                f(w=1, s=-6, j=-1, k=-12),
            ]
        else:
            d2 = spec.params["d2"]
            q = 6 * d2 + 25
            eqs += [
                f(r=5, j=-5, k=-12),
                f(s=q, k=-(200 - 12 * d2), l=-300),
                f(w=q, j=-q, k=-300, l=-360),
            ]
            congruences.append((f(k=1), 5))
        return _intersect(_lattice(4, eqs, congruences), closed_form_endbar(4))
    raise ValueError(f"no closed form for {spec.label}")


def _intersect(a: Lattice, b: Lattice) -> Lattice:
    """``a`` intersected with ``b`` via the kernel of ``[A; -B]``."""
    dim = a.ambient_dim
    if not a.basis or not b.basis:
        return Lattice.zero(dim)
    stacked = [list(r) for r in a.basis] + [[-x for x in r] for r in b.basis]
    cols = [[stacked[i][k] for i in range(len(stacked))] for k in range(dim)]
    ker = kernel_lattice(cols, len(stacked))
    return Lattice.from_generators((a.combination(v[: a.rank]) for v in ker.basis), dim)


def closed_form_derbar_n3(spec: AdamsSpec, primes: Sequence[int]) -> Lattice:
    """Cocycle families for ``psi^p(x) = b_p x + c_p x^2`` with ``b_2 != 0``, from the three entrywise conditions.

    Coordinates are ``A(p)`` with ``f(p) = p A(p)``, as in ``derbar_lattice``.
    """
    k = {p: idx for idx, p in enumerate(primes)}
    dim = 9 * len(primes)

    def at(p, i, j):
        return 9 * k[p] + 3 * i + j

    eqs = []
    for p in primes:
        for i, j in ((0, 1), (0, 2), (1, 0), (2, 0)):
            eqs.append({at(p, i, j): 1})
    for p, q in itertools.combinations(primes, 2):
        bp, bq = spec.coefficient(p, 1), spec.coefficient(q, 1)
        cp, cq = spec.coefficient(p, 2), spec.coefficient(q, 2)
        eqs.append({at(p, 1, 2): p * bq * (bq - 1), at(q, 1, 2): -q * bp * (bp - 1)})
        eq: dict[int, int] = {}
        for key, val in (
            (at(q, 1, 1), q * cp), (at(q, 2, 2), -q * cp), (at(q, 2, 1), q * bp * (bp - 1)),
            (at(p, 1, 1), -p * cq), (at(p, 2, 2), p * cq), (at(p, 2, 1), -p * bq * (bq - 1)),
        ):
            eq[key] = eq.get(key, 0) + val
        eqs.append(eq)
    return _lattice(3, eqs, dim=dim)


def claimed_h1_torsion(spec: AdamsSpec) -> AbelianInvariants:
    """The torsion ``Z/h x Z/D`` asserted for ``S((p^r), h)``."""
    return AbelianInvariants.from_diagonal([spec.params["h"], spec.meta["D"]])


def derived_h1_torsion(spec: AdamsSpec) -> AbelianInvariants:
    """``Z/D x Z/D``: the torsion of the quotient of the ``p = 2`` components.

    The coboundary parameter ``s`` moves the ``x -> x`` and ``x^2 -> x``
    entries of ``A(2)`` together as ``s (-h, -G)``, so its contribution is
    ``Z/gcd(h, G)``; the ``x -> x^2`` entry sweeps ``2 D Z`` inside ``2 Z``.
    """
    D = spec.meta["D"]
    return AbelianInvariants.from_diagonal([D, D])


# ----------------------------------------------------------------------------
# reproduction targets


@dataclass
class TargetReport:
    target: str
    claim: str
    checks: list[dict[str, Any]] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, passed: bool, witness: str = "") -> bool:
        self.checks.append({"name": name, "passed": bool(passed), "witness": witness})
        return passed

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)


def _pmap(func: Callable, items: Sequence, workers: int = 8) -> list:
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def reproduce_z(primes: Sequence[int]) -> TargetReport:
    rep = TargetReport("thm-z", "H^0(Z) = Z, H^1(Z) = Z^|P|, graded commutative")
    z = build_integers()
    h0 = h0_lattice(z, primes)
    h1 = h1_group(z, primes)
    comm = graded_commutativity(z, primes)
    rep.check("H^0 = Z", h0 == Lattice.full(1), f"basis {h0.basis}")
    rep.check("H^1 torsion-free", not h1.torsion, str(h1))
    rep.check("H^1 free rank = |P|", h1.free_rank == len(primes), str(h1))
    rep.check("graded commutative", comm.commutative)
    rep.results = {"h0_rank": h0.rank, "h1": str(h1), "commutative": comm.commutative}
    return rep


def reproduce_dual(primes: Sequence[int]) -> TargetReport:
    rep = TargetReport("thm-dual", "dual numbers: H^0 diagonal of rank 2, H^1 = product of (pZ + pZ), commutative")
    specs = [build_dual(0), build_dual("p"), build_dual("-p"), build_dual("p**2"), build_dual("6*p")]
    rows = []
    for s in specs:
        h0 = h0_lattice(s, primes)
        h1 = h1_group(s, primes)
        inn = innbar_lattice(s, primes)
        comm = graded_commutativity(s, primes)
        rep.check(f"{s.label}: H^0 = diagonal matrices", h0 == closed_form_h0(s), str(h0.basis))
        rep.check(f"{s.label}: coboundaries vanish", inn.rank == 0)
        rep.check(f"{s.label}: H^1 = Z^(2|P|)", not h1.torsion and h1.free_rank == 2 * len(primes), str(h1))
        rep.check(f"{s.label}: graded commutative", comm.commutative)
        rows.append({"spec": s.label, "h0_rank": h0.rank, "h1": str(h1)})
    rep.results = {"rings": rows}
    return rep


def sample_S_cp(count: int = 10) -> list[AdamsSpec]:
    """Deterministic sample of ``S((c_p))`` with ``c_2`` odd and ``p | c_p``."""
    out = []
    for i in range(count):
        c2 = 2 * i + 1 if i % 2 == 0 else -(2 * i + 1)
        table = {2: c2, 3: 3 * (i - 4), 5: 5 * (i + 1), 7: 7 * (2 - i), 11: 11 * i, 13: -13}
        out.append(build_S_cp(table))
    return out


def sample_S_bp_h(count: int = 10) -> list[AdamsSpec]:
    """Deterministic sample of ``S((b_p), h)`` with closed-form ``b_p``."""
    mixed = "p**(2 + (p % 4) // 3 * 2)"  # p^2 or p^4 by residue mod 4
    table = {2: 2, 3: 3, 5: 0, 7: 7, 11: 0, 13: 13}
    forms = [("p", [1]), ("-p", [1]), ("p**2", [1, 3, 5]), ("p**4", [7, 45]), (mixed, [3]), (table, [1])]
    out = []
    for b, hs in forms:
        for h in hs:
            if len(out) < count:
                out.append(build_S_bp_h(b, h))
    return out


def reproduce_h0_n3(primes: Sequence[int]) -> TargetReport:
    rep = TargetReport("thm-h0-n3", "H^0 on Z[x]/(x^3): {s = 0, t = j} for S((c_p)); {s = 0, h(t - j) = kG} for S((b_p), h)")
    rows = []
    for s in sample_S_cp() + sample_S_bp_h():
        lat = h0_lattice(s, primes)
        alg = h0_algebra(s, primes)
        rep.check(f"{s.label}: matches closed form", lat == closed_form_h0(s), str(lat.basis))
        rep.check(f"{s.label}: rank 3", lat.rank == 3)
        rep.check(f"{s.label}: commutative", alg.commutative)
        rows.append({"spec": s.label, "rank": lat.rank, "G": s.meta.get("G"), "stable": h0_stable(s, primes)})
    rep.results = {"rings": rows}
    return rep


def reproduce_h0_n4(primes: Sequence[int]) -> TargetReport:
    rep = TargetReport("thm-h0-n4", "H^0 of K(CP^3) and the 60 S(h, d2): free of rank 4, commutative, closed-form lattices")

    def one(s):
        lat = h0_lattice(s, primes)
        alg = h0_algebra(s, primes)
        return s.label, lat == closed_form_h0(s), lat.rank, alg.commutative

    rows = []
    for label, match, rank, comm in _pmap(one, enumerate_61()):
        rep.check(f"{label}: matches closed form", match)
        rep.check(f"{label}: rank 4", rank == 4)
        rep.check(f"{label}: commutative", comm)
        rows.append({"spec": label, "rank": rank, "commutative": comm})
    rep.results = {"rings": rows}
    return rep


def reproduce_h1_n3(primes: Sequence[int]) -> TargetReport:
    rep = TargetReport(
        "thm-h1-n3",
        "H^1 of the 64 S((p^r), h): claimed torsion Z/h x Z/D, free part growing with the window",
    )

    def one(s):
        h1 = h1_group(s, primes)
        der = derbar_lattice(s, primes)
        rule = h1_free_rank_rule(s, primes)
        return s, h1, der == closed_form_derbar_n3(s, primes), rule

    rows = []
    for s, h1, der_ok, rule in _pmap(one, enumerate_64()):
        claimed = claimed_h1_torsion(s)
        derived = derived_h1_torsion(s)
        got = AbelianInvariants(h1.torsion, 0)
        rep.check(f"{s.label}: cocycles match the entrywise conditions", der_ok)
        rep.check(f"{s.label}: torsion Z/D x Z/D", got == derived, str(h1))
        rep.check(
            f"{s.label}: torsion Z/h x Z/D",
            got == claimed,
            "" if got == claimed else f"computed {got}, claimed {claimed}",
        )
        rep.check(f"{s.label}: free rank 3|P|", h1.free_rank == 3 * len(primes), str(h1))
        rows.append({"spec": s.label, "h1": str(h1), "claimed_torsion": str(claimed), "free_rank_rule": str(rule)})
    rep.results = {"rings": rows}
    return rep


def reproduce_count_35(primes: Sequence[int]) -> TargetReport:
    rep = TargetReport("count-35", "35 of 64 commutative")
    specs = enumerate_64()
    results = _pmap(lambda s: graded_commutativity(s, primes), specs)
    count = sum(r.commutative for r in results)
    count4 = sum(r.commutative for s, r in zip(specs, results) if s.meta["r"] == 4)
    rows = []
    for s, r in zip(specs, results):
        D = s.meta["D"]
        rep.check(f"{s.label}: commutative iff D = 1", r.commutative == (D == 1), f"D = {D}")
        if D > 1:
            rep.check(f"{s.label}: closed-form witness is not a coboundary", r.explicit and not r.commutative)
        rows.append({
            "spec": s.label,
            "D": D,
            "commutative": r.commutative,
            "witness_order": None if r.commutative else r.witness_class.order,
        })
    rep.check("35 of 64 commutative", count == 35, f"{count} of 64 commutative")
    rep.check("32 with r = 4", count4 == 32, f"{count4} with r = 4")
    rep.claim = f"{count} of 64 commutative"
    rep.results = {"commutative": count, "commutative_r4": count4, "rings": rows}
    return rep


def _enumeration_report(target: str, specs: list[AdamsSpec], expected: int, primes: Sequence[int]) -> TargetReport:
    rep = TargetReport(target, f"{expected} pairwise non-isomorphic structures, each passing verification")
    rep.check(f"count = {expected}", len(specs) == expected, str(len(specs)))
    reports = _pmap(lambda s: verify_wilkerson(s, primes), specs)
    for s, r in zip(specs, reports):
        fails = r.failures()
        rep.check(f"{s.label}: verification", r.overall, fails[0].witness if fails else "")
    dupes = [(a.label, b.label) for a, b in itertools.combinations(specs, 2) if isomorphic(a, b, primes)]
    rep.check("pairwise non-isomorphic", not dupes, str(dupes[:3]))
    rep.results = {"count": len(specs), "labels": [s.label for s in specs]}
    return rep


def reproduce_enumerate_64(primes: Sequence[int]) -> TargetReport:
    return _enumeration_report("enumerate-64", enumerate_64(), 64, primes)


def reproduce_enumerate_61(primes: Sequence[int]) -> TargetReport:
    return _enumeration_report("enumerate-61", enumerate_61(), 61, primes)


TARGETS: dict[str, Callable[[Sequence[int]], TargetReport]] = {
    "thm-z": reproduce_z,
    "thm-dual": reproduce_dual,
    "thm-h0-n3": reproduce_h0_n3,
    "thm-h1-n3": reproduce_h1_n3,
    "thm-h0-n4": reproduce_h0_n4,
    "count-35": reproduce_count_35,
    "enumerate-64": reproduce_enumerate_64,
    "enumerate-61": reproduce_enumerate_61,
}


def reproduce(target: str, primes: Sequence[int] = (2, 3)) -> TargetReport:
    try:
        func = TARGETS[target]
    except KeyError:
        raise ValueError(f"unknown target {target!r}; expected one of {sorted(TARGETS)}") from None
    return func(tuple(primes))


def random_cocycle(spec: AdamsSpec, primes: Sequence[int], rng, bound: int = 3) -> DerBarElement:
    """A random element of ``derbar_lattice`` as a small combination of its basis."""
    lat = derbar_lattice(spec, primes)
    coords = [rng.randint(-bound, bound) for _ in range(lat.rank)]
    return DerBarElement.from_vector(spec, primes, lat.combination(coords))

