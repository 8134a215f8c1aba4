"""H^0 and H^1 for a handful of structures.

H^0 is printed as a basis of matrices (column j is the image of x^j).
H^1 is computed over a finite window of primes: the torsion does not
depend on the window, the free rank grows linearly with it.

    python demos/cohomology_tour.py
"""

from truncated_lambda import (
    build_dual,
    build_integers,
    build_KCP3,
    build_S_h_d2,
    build_S_pr_h,
    cohomology_report,
)
from truncated_lambda.cli import render_matrix

for spec in (build_integers(), build_dual("p"), build_S_pr_h(1, 1), build_S_pr_h(2, 3), build_KCP3(), build_S_h_d2(5, 2)):
    rep = cohomology_report(spec, (2, 3))
    print(f"== {rep.label} over primes {rep.primes}")
    print(f"H^0: rank {rep.h0_rank}, commutative: {rep.h0_commutative}, window-stable: {rep.h0_stable}")
    for m in rep.h0_basis:
        print(render_matrix(m.rows()))
        print()
    print(f"H^1: {rep.h1}  (free rank grows as {rep.h1_free_rank_formula})")
    print(f"H^0 + H^1 graded commutative: {rep.graded_commutative}")
    if rep.witness is not None:
        w = rep.witness
        print(f"  witness g:\n{render_matrix(w.witness_g.rows())}")
        print(f"  its commutator with f has order {w.witness_class.order} in H^1")
    print()
