"""A tour of the classified structures on Z[x]/(x^n).

Builds one member of each family, prints its Adams operations on the
generator, runs the full verification, and shows a few rejections.

    python demos/families_tour.py
"""

from truncated_lambda import (
    ConditionViolation,
    build_dual,
    build_integers,
    build_KCP3,
    build_KFP2,
    build_S_bp_h,
    build_S_cp,
    build_S_h_d2,
    build_S_pr_h,
    verify_wilkerson,
)

PRIMES = (2, 3, 5, 7)


def show(spec):
    print(f"{spec.label}  (n = {spec.n})")
    for p in PRIMES:
        print(f"    psi^{p}(x) = {spec.psi_gen(p)}")
    meta = {k: v for k, v in spec.meta.items() if k in ("G", "D")}
    if meta:
        print(f"    {meta}")
    report = verify_wilkerson(spec, PRIMES)
    print(f"    verification: {'pass' if report.overall else 'FAIL'} ({len(report.checks)} checks)")
    x = spec.gen()
    if spec.n > 1:
        print(f"    lambda^2(x) = {spec.lambdas(x, 2)[2]}")
    print()


show(build_integers())
show(build_dual("p"))
show(build_S_cp("p - 1 + p % 2"))
show(build_S_bp_h("p**2", 3))
show(build_S_pr_h(4, 45))
show(build_KFP2("C"))
show(build_KCP3())
show(build_S_h_d2(1, 0))

print("Rejections:")
for make in (
    lambda: build_S_cp({2: 2, 3: 3}),
    lambda: build_dual({2: 1, 3: 3}),
    lambda: build_S_bp_h("p**2", 7),
    lambda: build_S_pr_h(1, 3),
    lambda: build_S_h_d2(1, 60),
):
    try:
        make()
    except ConditionViolation as exc:
        where = f" at p = {exc.prime}" if exc.prime else ""
        print(f"    [{exc.condition}]{where}: {exc}")
