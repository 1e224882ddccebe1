"""Linear forcing: structures, the formula translation and the countdown machine.

Conditions live in a kind ``kappa`` with a sum ``+`` and a neutral ``0``.  A
formula ``A`` is translated to ``A* : kappa -> o`` and forced at a condition
``p`` as ``p ⊩ A``, which is always negative.

The countdown machine runs a command lifted to ``<u! | (t, n)>`` where ``n``
is an integer counter: administrative steps keep it, costed steps decrement
it, and a costed step at ``0`` diverges.  It has its own redex matching so
that comparing it with the main machine is a real check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from lfoc import constructors as C
from lfoc.terms import (
    Box,
    Command,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    NatConst,
    Pair,
    Term,
    make_pair,
    polarity,
    substitute,
    NEG,
    POS,
)

# -- forcing structures ------------------------------------------------------


@dataclass(frozen=True)
class ForcingStructure:
    name: str
    condition_kind: C.Kind
    predicate: C.Constructor
    plus: C.Constructor
    zero: C.Constructor

    def add(self, p: C.Constructor, q: C.Constructor) -> C.Constructor:
        return C.apply(self.plus, p, q)

    def laws(self, conditions: list[C.Constructor], fuel: int = 100_000) -> dict[str, bool]:
        """Check associativity, commutativity and neutrality on the given conditions."""
        add = self.add
        assoc = comm = neutral = True
        for p in conditions:
            neutral &= C.conv_check(add(self.zero, p), p, fuel)
            for q in conditions:
                comm &= C.conv_check(add(p, q), add(q, p), fuel)
                for r in conditions:
                    assoc &= C.conv_check(add(p, add(q, r)), add(add(p, q), r), fuel)
        return {"assoc": assoc, "comm": comm, "neutral": neutral}


def integer_structure() -> ForcingStructure:
    """Conditions are integers; the predicate ``C`` is an opaque positive constant."""
    return ForcingStructure(
        "integer",
        C.IOTA,
        C.KVar("C", C.Arrow(C.IOTA, C.OPOS)),
        C.plus(),
        C.ZERO,
    )


TOP = C.Exists("X", C.OPOS, C.KVar("X", C.OPOS))


def trivial_structure() -> ForcingStructure:
    """The predicate is constantly ``exists X. X``, standing in for a top formula."""
    return ForcingStructure(
        "trivial",
        C.IOTA,
        C.Lam("x", C.IOTA, TOP),
        C.plus(),
        C.ZERO,
    )


INTEGER = integer_structure()
TRIVIAL = trivial_structure()


def _fresh(base: str, t: C.Constructor, *more: C.Constructor) -> str:
    taken = set()
    for u in (t, *more):
        taken |= {n for n, _ in C.free_vars(u)}
    return C.fresh_name(base, taken)


def forcing_orthogonal(z: C.Constructor, fs: ForcingStructure = INTEGER) -> C.Constructor:
    """``\\r. forall r'. (Z r')^⊥ | C (r + r')``."""
    k = C.kind_check(z)
    kappa = fs.condition_kind
    if not (isinstance(k, C.Arrow) and k.dom == kappa and C.is_formula_kind(k.cod)):
        raise C.KindError(f"forcing orthogonal needs kind {kappa} -> o, got {k}", z)
    r = _fresh("r", z, fs.predicate, fs.plus)
    r2 = _fresh("r'", z, fs.predicate, fs.plus, C.KVar(r, kappa))
    vr, vr2 = C.KVar(r, kappa), C.KVar(r2, kappa)
    body = C.Parr(C.App(C.negate(z), vr2), C.App(fs.predicate, fs.add(vr, vr2)))
    return C.Lam(r, kappa, C.Forall(r2, kappa, body))


def _atom(name: str, fs: ForcingStructure) -> C.Constructor:
    return C.KVar(name, C.Arrow(fs.condition_kind, C.OPOS))


def _split(a_star, b_star, fs: ForcingStructure) -> C.Constructor:
    """``\\r. exists p1. exists p2. [r = p1 + p2] (A(p1) * B(p2))``."""
    kappa = fs.condition_kind
    r = _fresh("r", a_star, b_star, fs.plus)
    p1 = _fresh("p1", a_star, b_star, fs.plus, C.KVar(r, kappa))
    p2 = _fresh("p2", a_star, b_star, fs.plus, C.KVar(r, kappa), C.KVar(p1, kappa))
    vr, v1, v2 = (C.KVar(n, kappa) for n in (r, p1, p2))
    guard = C.EqGuard(vr, fs.add(v1, v2), C.Tensor(C.App(a_star, v1), C.App(b_star, v2)))
    return C.Lam(r, kappa, C.Exists(p1, kappa, C.Exists(p2, kappa, guard)))


def _down(a_star, fs: ForcingStructure) -> C.Constructor:
    kappa = fs.condition_kind
    r = _fresh("r", a_star)
    return C.Lam(r, kappa, C.ShiftDown(C.App(a_star, C.KVar(r, kappa))))


def translate(a: C.Constructor, fs: ForcingStructure = INTEGER) -> C.Constructor:
    """``A*`` for a formula built from positive atoms, their negations, ⊗, ⅋, ↓ and ↑."""
    match a:
        case C.KVar(x, C.OPos()):
            return _atom(x, fs)
        case C.KVarNeg(x, C.OPos()):
            return forcing_orthogonal(_atom(x, fs), fs)
        case C.Tensor(l, r):
            return _split(translate(l, fs), translate(r, fs), fs)
        case C.Parr(l, r):
            inner = _split(translate(C.negate(l), fs), translate(C.negate(r), fs), fs)
            return forcing_orthogonal(inner, fs)
        case C.ShiftDown(b):
            return _down(translate(b, fs), fs)
        case C.ShiftUp(b):
            return forcing_orthogonal(_down(translate(C.negate(b), fs), fs), fs)
    raise ValueError(f"not a formula of the forcing fragment: {a}")


def force(p: C.Constructor, a: C.Constructor, fs: ForcingStructure = INTEGER) -> C.Constructor:
    """``p ⊩ A``: the double orthogonal of ``A*`` at ``p`` when ``A`` is positive."""
    kp = C.kind_check(p)
    if kp != fs.condition_kind:
        raise C.KindError(f"condition has kind {kp}, expected {fs.condition_kind}", p)
    star = translate(a, fs)
    if C.polarity_of(a) == "+":
        return C.App(forcing_orthogonal(forcing_orthogonal(star, fs), fs), p)
    return C.App(star, p)


def check_posforcing(n: C.Constructor, p: C.Constructor, fs: ForcingStructure = INTEGER, fuel: int = 100_000) -> bool:
    """``N*(p) ≅ orth((N^⊥)*)(p)`` for a negative formula ``N``."""
    if C.polarity_of(n) != "-":
        raise ValueError(f"{n} is not negative")
    lhs = C.App(translate(n, fs), p)
    rhs = C.App(forcing_orthogonal(translate(C.negate(n), fs), fs), p)
    return C.conv_check(lhs, rhs, fuel)


def formula_size(a: C.Constructor) -> int:
    match a:
        case C.Tensor(l, r) | C.Parr(l, r):
            return 1 + formula_size(l) + formula_size(r)
        case C.ShiftDown(b) | C.ShiftUp(b):
            return 1 + formula_size(b)
    return 1


def formulas_up_to(size: int, atoms: tuple[str, ...] = ("X", "Y")):
    """Every formula of the forcing fragment with at most ``size`` nodes."""
    by_size: dict[int, list[C.Constructor]] = {1: []}
    for x in atoms:
        v = C.KVar(x, C.OPOS)
        by_size[1] += [v, C.negate(v)]
    for s in range(2, size + 1):
        out = []
        for b in by_size[s - 1]:
            out += [C.ShiftDown(b), C.ShiftUp(b)]
        for i in range(1, s - 1):
            for l in by_size[i]:
                for r in by_size[s - 1 - i]:
                    out += [C.Tensor(l, r), C.Parr(l, r)]
        by_size[s] = out
    for s in range(1, size + 1):
        yield from by_size[s]


# -- the countdown machine ---------------------------------------------------


@dataclass(frozen=True, init=False)
class ForcingCommand:
    """``<u! | (t, K)>``, kept with the negative side marked.

    Marking either side of the underlying command gives the same value.
    """

    marked: Term
    partner: Term
    counter: Term

    def __init__(self, marked: Term, partner: Term, counter: Term):
        if polarity(marked) is polarity(partner):
            raise ValueError("forcing command sides must have opposite polarities")
        if polarity(marked) is POS:
            marked, partner = partner, marked
        object.__setattr__(self, "marked", marked)
        object.__setattr__(self, "partner", partner)
        object.__setattr__(self, "counter", counter)

    @property
    def argument(self) -> Term:
        return make_pair(self.partner, self.counter)

    @property
    def command(self) -> Command:
        return Command(self.partner, self.marked)

    @property
    def count(self) -> int | None:
        return self.counter.value if isinstance(self.counter, NatConst) else None

    def __str__(self) -> str:
        from lfoc.text import show_term

        return f"<{show_term(self.marked)}! | ({show_term(self.partner)}, {show_term(self.counter)})>"


def lift(c: Command, counter: int | Term) -> ForcingCommand:
    k = NatConst(counter) if isinstance(counter, int) else counter
    return ForcingCommand(c.right, c.left, k)


class Status(enum.Enum):
    NEXT = "next"
    DIVERGE = "diverge"
    STUCK = "stuck"


class RunOutcome(enum.Enum):
    NORMALIZES = "Normalizes"
    DIVERGES = "Diverges"
    FUEL_OUT = "FuelOut"


def countdown_step(fc: ForcingCommand) -> tuple[Status, ForcingCommand | None, str | None]:
    """One machine step: ``(NEXT, next, kind)``, ``(DIVERGE, None, kind)`` or ``(STUCK, None, None)``."""
    n = fc.count
    if n is None:
        return Status.STUCK, None, None
    u, t = fc.marked, fc.partner

    def keep(c: Command):
        return Status.NEXT, ForcingCommand(c.right, c.left, fc.counter), "mu"

    def costed(c: Command):
        if n == 0:
            return Status.DIVERGE, None, "beta"
        return Status.NEXT, ForcingCommand(c.right, c.left, NatConst(n - 1)), "beta"

    if isinstance(t, MuNeg):
        return keep(substitute(t.body, {t.var: u}))
    if isinstance(u, MuPos):
        return keep(substitute(u.body, {u.var: t}))
    if isinstance(u, MuPair) and isinstance(t, Pair):
        if u.first.polarity is polarity(t.left) and u.second.polarity is polarity(t.right):
            return costed(substitute(u.body, {u.first: t.left, u.second: t.right}))
    if isinstance(u, MuBox) and isinstance(t, Box):
        if u.var.polarity is polarity(t.body):
            return costed(substitute(u.body, {u.var: t.body}))
    return Status.STUCK, None, None


@dataclass
class CountdownTrace:
    start: ForcingCommand
    steps: list[tuple[str, ForcingCommand]] = field(default_factory=list)
    outcome: RunOutcome = RunOutcome.NORMALIZES

    @property
    def final(self) -> ForcingCommand:
        return self.steps[-1][1] if self.steps else self.start

    def to_text(self) -> str:
        import json

        lines = [f"0\tstart\t{self.start.count}\t{self.start}"]
        for i, (kind, fc) in enumerate(self.steps, 1):
            lines.append(f"{i}\t{kind}\t{fc.count}\t{fc}")
        summary = {"outcome": self.outcome.value, "steps": len(self.steps), "counter": self.final.count}
        lines.append("# " + json.dumps(summary, sort_keys=True))
        return "\n".join(lines)


def countdown_trace(c: Command, n: int, fuel: int) -> CountdownTrace:
    fc = lift(c, n)
    tr = CountdownTrace(fc)
    for _ in range(fuel):
        status, nxt, kind = countdown_step(fc)
        if status is Status.STUCK:
            tr.outcome = RunOutcome.NORMALIZES
            return tr
        if status is Status.DIVERGE:
            tr.outcome = RunOutcome.DIVERGES
            return tr
        fc = nxt
        tr.steps.append((kind, fc))
    tr.outcome = (
        RunOutcome.NORMALIZES if countdown_step(fc)[0] is Status.STUCK else RunOutcome.FUEL_OUT
    )
    return tr


def countdown_run(c: Command, n: int, fuel: int = 1_000_000) -> RunOutcome:
    return countdown_trace(c, n, fuel).outcome


__all__ = [
    "ForcingCommand",
    "ForcingStructure",
    "INTEGER",
    "RunOutcome",
    "Status",
    "TRIVIAL",
    "check_posforcing",
    "countdown_run",
    "countdown_step",
    "countdown_trace",
    "force",
    "forcing_orthogonal",
    "formulas_up_to",
    "lift",
    "translate",
]
