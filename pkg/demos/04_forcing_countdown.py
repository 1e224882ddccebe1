"""From a step bound to a forcing formula, and the machine that checks it.

The countdown machine carries a counter that every beta step decrements.
A command normalizes with counter n exactly when it needs at most n beta
steps.  The forcing translation turns formulas into predicates on such
counters.
"""

from lfoc import constructors as C
from lfoc import corpus, text
from lfoc import forcing as F
from lfoc.certify import daimon_closure
from lfoc.reduction import time_beta

c = daimon_closure(corpus.mal_entries()[12].command)
t = time_beta(c, 10_000)
print("command:", c)
print("beta steps:", t)
for n in range(t + 2):
    print(f"  counter {n}: {F.countdown_run(c, n).value}")

print()
print(F.countdown_trace(c, t, 10_000).to_text())

print()
env = {"X": C.OPOS, "Y": C.OPOS}
r = C.KVar("r", C.IOTA)
for src in ("X * Y", "dn ~X", "~X | ~Y"):
    a = text.parse_constructor(src, env)
    print(f"{src:<8} A* = {F.translate(a)}")
    print(f"{'':<8} r ⊩ A : {C.kind_check(F.force(r, a))}")
