"""Soft exponentials: weights become polynomials.

A boxed value used through the multiplex rule may be copied n times.  The
soft monoid records this as a polynomial in the copy count, and nesting
boxes raises the degree by one per level.
"""

from lfoc import corpus
from lfoc import quantity as Q
from lfoc.certify import certify
from lfoc.typecheck import weight

for e in corpus.sal_entries():
    r = certify(e.derivation, Q.SOFT, mode="sal")
    print(f"{e.name:<16} weight {str(r.weight):<28} steps {r.measured:>3} <= {r.bound}")

print()
for delta in (1, 2, 3):
    w = weight(corpus.nested_entry(delta), Q.SOFT)
    print(f"nesting depth {w.depth}: polynomial degree {w.weight.degree}  ({w.weight})")
