"""Which of the 64 structures S((p^r), h) have graded-commutative H^0 + H^1.

The answer is governed by D = gcd(h, 2^r (2^r - 1)): commutative exactly
when D = 1.  For D > 1 a closed-form pair (g, f) is checked to give a
class of order D.

    python demos/commutativity_census.py
"""

from truncated_lambda import enumerate_64, graded_commutativity

PRIMES = (2, 3)
total = by_r4 = 0
for spec in enumerate_64():
    res = graded_commutativity(spec, PRIMES)
    D = spec.meta["D"]
    total += res.commutative
    by_r4 += res.commutative and spec.meta["r"] == 4
    note = "commutative" if res.commutative else f"witness class of order {res.witness_class.order}"
    print(f"{spec.label:18} D = {D:3}  {note}")
print()
print(f"{total} of 64 commutative, {by_r4} of them with r = 4")
