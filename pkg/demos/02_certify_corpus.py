"""Typed commands and their time bounds.

Each corpus entry is a typing derivation.  Its weight in a quantitative
monoid bounds the number of beta steps the daimon-closed command takes.
"""

from lfoc import corpus
from lfoc import quantity as Q
from lfoc.certify import certify

print(f"{'entry':<18} mode  beta  size  bound")
for e in corpus.mal_entries():
    r = certify(e.derivation, Q.NAT, mode="mal")
    print(f"{e.name:<18} mal   {r.counts['beta']:>4}  {r.size:>4}  {r.bound:>5}  {'ok' if r.ok else 'FAIL'}")

# one report in full
entry = corpus.mal_entries()[10]
print()
print(certify(entry.derivation, Q.NAT, mode="mal").to_text())
