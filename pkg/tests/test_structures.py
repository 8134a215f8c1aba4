import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from truncated_lambda.errors import ConditionViolation, LambdaRingError, WindowError
from truncated_lambda.structures import (
    PrimeSequence,
    adams_composite,
    build_custom,
    build_dual,
    build_integers,
    build_KCP3,
    build_KFP2,
    build_S_bp_h,
    build_S_cp,
    build_S_h_d2,
    build_S_pr_h,
    enumerate_61,
    enumerate_64,
    filtered_isomorphism,
    isomorphic,
    named_specs,
    s_h_d2_cubic,
    spec_from_document,
    spec_to_document,
    verify_wilkerson,
)
from truncated_lambda.truncpoly import EndoMatrix, TruncPoly, ring_endo_from_gen_image

C_P = "p - 1 + p % 2"  # c_2 = 1, c_p = p for odd p


def test_integers():
    z = build_integers()
    assert z.n == 1
    assert z.psi(7)(TruncPoly.one(1)) == TruncPoly.one(1)
    assert z.lambdas(TruncPoly.of([5]), 2)[2] == TruncPoly.of([10])
    assert verify_wilkerson(z).overall


def test_dual_numbers():
    assert build_dual(0).coefficient(5, 1) == 0
    assert build_dual("p").coefficient(7, 1) == 7
    with pytest.raises(ConditionViolation) as exc:
        build_dual({2: 1, 3: 3})
    assert exc.value.prime == 2


def test_S_cp_conditions():
    spec = build_S_cp(C_P)
    assert [spec.coefficient(p, 2) for p in (2, 3, 5)] == [1, 3, 5]
    with pytest.raises(ConditionViolation) as exc:
        build_S_cp({2: 2, 3: 3})
    assert exc.value.prime == 2
    with pytest.raises(ConditionViolation) as exc:
        build_S_cp({2: 1, 3: 1})
    assert exc.value.prime == 3


def test_S_bp_h_examples():
    a = build_S_bp_h("p", 1)
    assert a.meta["G"] == 2 and a.meta["G_stable"]
    assert a.psi_gen(2) == TruncPoly.of([0, 2, 1])
    b = build_S_bp_h("p**4", 1)
    assert b.meta["G"] == 240
    with pytest.raises(ConditionViolation) as exc:
        build_S_bp_h("p**2", 7)
    assert exc.value.condition == "1 <= h <= G/2"


def test_S_bp_h_c_p_formula():
    spec = build_S_bp_h("p**2", 5)
    G = spec.meta["G"]
    for p in (2, 3, 5, 7, 11):
        b = p**2
        assert spec.coefficient(p, 2) * G == 5 * b * (b - 1)


def test_S_bp_h_non_strict_collects_violations():
    spec = build_S_bp_h("p**2", 4, strict=False)
    assert {v.condition for v in spec.violations} == {"h odd"}
    report = verify_wilkerson(spec)
    assert not report.overall
    assert report.failures()[0].name == "family conditions"


def test_two_adic_condition():
    # b_2 = 4 needs b_p(b_p - 1) divisible by 4; b_3 = 3 gives 6
    with pytest.raises(ConditionViolation) as exc:
        build_S_bp_h({2: 4, 3: 3, 5: 5}, 1)
    assert exc.value.condition == "2-adic condition" and exc.value.prime == 3


def test_special_odd_prime_must_divide_h():
    # b_p = p^2: 3 divides b_2(b_2 - 1) = 12 but nu_3(b_3) = 2 exceeds the minimum 1
    build_S_bp_h("p**2", 1)
    # here nu_3(b_3) = 1 is the minimum, so 3 is special and must divide h
    table = {2: 4, 3: -3, 5: 25, 7: 21}
    spec = build_S_bp_h(table, 1, strict=False)
    assert spec.meta["G"] == 12
    assert [(v.condition, v.prime) for v in spec.violations] == [("special odd prime divides h", 3)]
    assert not build_S_bp_h(table, 3, strict=False).violations


def test_S_pr_h_records_D():
    assert build_S_pr_h(2, 3).meta["D"] == 3
    assert build_S_pr_h(2, 5).meta["D"] == 1
    with pytest.raises(ConditionViolation):
        build_S_pr_h(1, 3)
    with pytest.raises(ConditionViolation):
        build_S_pr_h(3, 1)


@pytest.mark.parametrize("r", [1, 2, 4])
def test_G_for_prime_powers_stabilises_at_two(r):
    spec = build_S_bp_h(f"p**{r}", 1, primes=(2,))
    assert spec.meta["G"] == 2**r * (2**r - 1)
    assert spec.meta["G_stable"]


def test_KCP3():
    k = build_KCP3()
    assert k.psi_gen(2) == TruncPoly.of([0, 2, 1, 0])
    assert k.psi_gen(3) == TruncPoly.of([0, 3, 3, 1])
    assert k.psi(2).rows() == [[1, 0, 0, 0], [0, 2, 0, 0], [0, 1, 4, 0], [0, 0, 4, 8]]


def test_S_h_d2():
    hp3 = build_S_h_d2(1, 0)
    assert s_h_d2_cubic(3, 1, 0) == 1
    assert hp3.psi_gen(3) == TruncPoly.of([0, 9, 6, 1])
    assert build_S_h_d2(5, 2).coefficient(3, 2) == 30
    with pytest.raises(ConditionViolation):
        build_S_h_d2(1, 60)
    with pytest.raises(ConditionViolation):
        build_S_h_d2(3, 0)
    with pytest.raises(ConditionViolation):
        build_S_h_d2(1, 3)


@pytest.mark.parametrize("F,r,G", [("C", 1, 2), ("H", 2, 12), ("O", 4, 240)])
def test_KFP2_delegates(F, r, G):
    k = build_KFP2(F)
    base = build_S_pr_h(r, 1)
    assert k.meta["G"] == G
    for p in (2, 3, 5, 7):
        assert k.psi_gen(p) == base.psi_gen(p)
    with pytest.raises(ConditionViolation):
        build_KFP2("R")


def test_enumerations():
    e64 = enumerate_64()
    assert len(e64) == 64
    assert [s.params["r"] for s in e64].count(4) == 60
    assert sum(s.meta["D"] == 1 for s in e64) == 35
    assert sum(s.meta["D"] == 1 and s.meta["r"] == 4 for s in e64) == 32
    e61 = enumerate_61()
    labels = [s.label for s in e61]
    assert len(e61) == 61 and "K(CP^3)" in labels and "S(1, 0)" in labels
    assert len(named_specs()) == 1 + 3 + 64 + 61


def test_isomorphism_examples():
    pos, neg = build_S_cp(C_P), build_S_cp(f"-({C_P})")
    assert isomorphic(pos, neg)
    assert not isomorphic(pos, build_S_cp("3 * (p - 1 + p % 2)"))
    assert not isomorphic(build_S_pr_h(2, 1), build_S_pr_h(2, 5))
    k = build_KCP3()
    assert isomorphic(k, k)
    assert not isomorphic(build_S_pr_h(1, 1), build_S_pr_h(2, 1))
    # different linear coefficients settle the question for any pair of families
    assert not isomorphic(build_S_cp(C_P), build_S_pr_h(1, 1))
    custom = build_custom(3, {2: [0, 2, 1], 3: [0, 3, 3]})
    with pytest.raises(LambdaRingError):
        isomorphic(custom, build_S_pr_h(1, 1), (2, 3))


def test_enumerations_have_no_isomorphic_duplicates():
    for family in (enumerate_64(), enumerate_61()):
        for i, a in enumerate(family):
            for b in family[i + 1 :]:
                assert not isomorphic(a, b), (a.label, b.label)


def test_automorphism_solver_agrees_with_degree_two_criteria():
    specs = enumerate_64()[:4] + [build_S_bp_h("p**2", 3)]
    for a in specs:
        for b in specs:
            if a.n != b.n:
                continue
            found = filtered_isomorphism(a, b, (2, 3, 5, 7)) is not None
            assert found == isomorphic(a, b), (a.label, b.label)


def test_automorphism_solver_finds_conjugate():
    # conjugate K(CP^3) by x -> x + x^2 and recover the automorphism
    k = build_KCP3()
    phi = ring_endo_from_gen_image(TruncPoly.of([0, 1, 1, 0]))
    inv = ring_endo_from_gen_image(TruncPoly.of([0, 1, -1, 2]))
    assert (phi @ inv) == EndoMatrix.identity(4)
    table = {p: (phi @ k.psi(p) @ inv)(TruncPoly.gen(4)).coeffs for p in (2, 3, 5, 7)}
    twisted = build_custom(4, table)
    found = filtered_isomorphism(k, twisted, (2, 3, 5, 7))
    assert found is not None
    assert not any(ring_endo_from_gen_image(found) @ k.psi(p) != twisted.psi(p) @ ring_endo_from_gen_image(found) for p in (2, 3, 5, 7))


def test_adams_composite():
    k = build_KCP3()
    assert adams_composite(k, 1) == EndoMatrix.identity(4)
    expected = ring_endo_from_gen_image(TruncPoly.of([1, 1, 0, 0]) ** 6 - 1)
    assert adams_composite(k, 6) == expected
    assert adams_composite(k, 4) == k.psi(2) @ k.psi(2)
    with pytest.raises(ValueError):
        adams_composite(k, 0)


def test_named_specs_verify():
    for spec in named_specs():
        report = verify_wilkerson(spec)
        assert report.overall, (spec.label, report.failures())


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_psi_is_frobenius_on_generator(p):
    for spec in named_specs():
        lhs = spec.psi_gen(p).mod(p)
        rhs = (spec.gen() ** p).mod(p)
        assert lhs == rhs, spec.label


def mutated_specs():
    yield "c_2 even", build_S_cp({2: 2, 3: 3, 5: 5}, strict=False), "family conditions"
    yield "b_2 odd", build_dual({2: 1, 3: 3, 5: 5}, strict=False), "family conditions"
    yield "Frobenius", build_custom(3, {2: [0, 0, 2], 3: [0, 0, 3], 5: [0, 0, 5]}), "Frobenius congruence"
    yield "commuting", build_custom(3, {2: [0, 2, 1], 3: [0, 3, 0], 5: [0, 5, 0]}), "psi^m psi^n = psi^mn"
    yield "window", build_custom(2, {2: [0, 2], 3: [0, 3]}), "psi^p defined on window"
    yield "constant term", build_custom(2, {2: [1, 2], 3: [0, 3], 5: [0, 5]}), "psi^p defined on window"


@pytest.mark.parametrize("name,spec,check", list(mutated_specs()), ids=lambda v: v if isinstance(v, str) else "")
def test_mutated_specs_fail(name, spec, check):
    report = verify_wilkerson(spec, primes=(2, 3, 5))
    assert not report.overall
    assert check in [c.name for c in report.failures()]


def test_frobenius_witness_for_even_c2():
    spec = build_S_cp({2: 2, 3: 3, 5: 5}, strict=False)
    report = verify_wilkerson(spec, primes=(2, 3, 5))
    frob = next(c for c in report.checks if c.name == "Frobenius congruence")
    assert not frob.passed and "p=2" in frob.witness


def test_table_window_is_enforced():
    spec = build_dual({2: 2, 3: 3})
    assert spec.window == (2, 3)
    with pytest.raises(WindowError):
        spec.psi(5)


def test_prime_sequence_formulas():
    assert PrimeSequence.parse("p**2 + 1")(3) == 10
    assert PrimeSequence.parse("(p - 1) // 2 % 3")(11) == 2
    assert PrimeSequence.parse(7)(13) == 7
    for bad in ("__import__('os')", "p.real", "[p]", "p if p else 1", "lambda: 1"):
        with pytest.raises(ValueError):
            PrimeSequence.parse(bad)
    with pytest.raises(ValueError):
        PrimeSequence.parse(True)


def test_document_round_trip():
    for spec in [build_S_pr_h(4, 45), build_KCP3(), build_S_h_d2(5, 12), build_dual("p")]:
        again = spec_from_document(spec_to_document(spec))
        assert again.label == spec.label
        for p in (2, 3, 5, 7):
            assert again.psi_gen(p) == spec.psi_gen(p)


def test_document_accepts_decimal_strings_and_tables():
    big = str(2**65)
    spec = spec_from_document({"n": 2, "family": "dual", "params": {"b": {"2": big, "3": "3"}}})
    assert spec.coefficient(2, 1) == 2**65
    assert spec.default_primes == (2, 3)
    spec = spec_from_document({"family": "S_pr_h", "params": {"r": "4", "h": "45"}, "primes": [2, 3]})
    assert spec.meta["D"] == 15 and spec.default_primes == (2, 3)


def test_document_errors():
    with pytest.raises(ValueError):
        spec_from_document({"family": "nope"})
    with pytest.raises(ValueError):
        spec_from_document({"n": 3, "family": "KCP3"})
    with pytest.raises(ValueError):
        spec_from_document([1, 2])


@given(st.integers(1, 119).filter(lambda h: h % 2), st.integers(1, 60))
def test_S_p4_adams_are_commuting_ring_maps(h, m):
    spec = build_S_pr_h(4, h)
    x = spec.gen()
    a = adams_composite(spec, m)
    assert a(x * x) == a(x) * a(x)
    assert a @ spec.psi(2) == spec.psi(2) @ a
    assert math.gcd(h, 240) == spec.meta["D"]
