"""Call-by-name lambda terms running on the polarized machine.

Encodes a few affine lambda terms, runs them against a stack, and compares
the step counts with a plain Krivine machine: every push is one mu step and
every pop is one beta step.
"""

from lfoc import encodings as E
from lfoc.reduction import normalize

EXAMPLES = [
    r"(\a. a) (\b. b)",
    r"(\f. \x. f x) (\y. y) (\z. z)",
    r"(\a. \b. b) (\u. u) (\v. v)",
]

for src in EXAMPLES:
    t = E.parse_lambda(src)
    stack = E.SVar("pi")
    c = E.encode_cbn_command(t, stack)
    tr = normalize(c, 10_000)
    term, st, pushes, pops = E.krivine(t, stack)
    print(src)
    print("  encoded :", c)
    print("  machine :", {k.value: v for k, v in tr.counts.items()})
    print(f"  krivine : pushes={pushes} pops={pops}  ->  {E.show_lambda(term)}")
    print()

# the same redex under call-by-value costs a fixed three steps
t = E.parse_lambda(r"(\x. x) (\y. y)")
tr = normalize(E.encode_cbv_command(t, E.SVar("e")), 10_000)
print("cbv", E.show_lambda(t), "->", {k.value: v for k, v in tr.counts.items()})
