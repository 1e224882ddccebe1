"""One-step reduction, fuel-bounded normalization and step counting.

The evaluation relation is the union of the administrative ``mu`` steps, the
costed ``beta`` steps on pairs and boxes, and the ``!`` step that lets
``mu !(k). c`` consume ``!V``.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field

from lfoc.terms import (
    Bang,
    Box,
    Command,
    Daimon,
    MuBang,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    NatConst,
    NegInstr,
    Pair,
    PosInstr,
    polarity,
    substitute,
)


class StepKind(enum.Enum):
    MU = "mu"
    BETA = "beta"
    BANG = "bang"

    def __str__(self) -> str:
        return self.value


class Outcome(enum.Enum):
    NORMAL = "normal"
    STUCK = "stuck"
    FUEL_EXHAUSTED = "fuel-exhausted"


@dataclass
class Trace:
    start: Command
    steps: list[tuple[StepKind, Command]] = field(default_factory=list)
    counts: Counter = field(default_factory=Counter)
    outcome: Outcome = Outcome.NORMAL

    @property
    def final(self) -> Command:
        return self.steps[-1][1] if self.steps else self.start

    @property
    def beta(self) -> int:
        return self.counts[StepKind.BETA]

    def summary(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "counts": {k.value: self.counts[k] for k in StepKind},
            "steps": len(self.steps),
        }

    def to_text(self) -> str:
        lines = [f"0\tstart\t{self.start}"]
        for i, (kind, c) in enumerate(self.steps, 1):
            lines.append(f"{i}\t{kind}\t{c}")
        lines.append("# " + json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines)


def _match(vs, vals) -> bool:
    return all(v.polarity is polarity(t) for v, t in zip(vs, vals))


def step(c: Command) -> tuple[StepKind, Command] | None:
    """Contract the unique redex of ``c``, or return None if there is none."""
    left, right = c.left, c.right
    match left:
        case MuNeg(a, body):
            return StepKind.MU, substitute(body, {a: right})
    # from here on the positive side is a value
    match right:
        case MuPos(x, body):
            return StepKind.MU, substitute(body, {x: left})
        case MuBox(k, body):
            if isinstance(left, Box) and _match((k,), (left.body,)):
                return StepKind.BETA, substitute(body, {k: left.body})
        case MuPair(k1, k2, body):
            if isinstance(left, Pair) and _match((k1, k2), (left.left, left.right)):
                return StepKind.BETA, substitute(body, {k1: left.left, k2: left.right})
        case MuBang(k, body):
            if isinstance(left, Bang) and _match((k,), (left.body,)):
                return StepKind.BANG, substitute(body, {k: left.body})
    return None


def is_inert(c: Command) -> bool:
    """A command blocked on a constant (daimon or instruction) is finished.

    Anything else that cannot step, a free variable or an eliminator facing
    the wrong constructor, counts as stuck.
    """
    return any(isinstance(t, (Daimon, PosInstr, NegInstr, NatConst)) for t in (c.left, c.right))


def normalize(c: Command, fuel: int) -> Trace:
    trace = Trace(c)
    cur = c
    while True:
        nxt = step(cur)
        if nxt is None:
            trace.outcome = Outcome.NORMAL if is_inert(cur) else Outcome.STUCK
            return trace
        if fuel <= 0:
            trace.outcome = Outcome.FUEL_EXHAUSTED
            return trace
        fuel -= 1
        kind, cur = nxt
        trace.steps.append((kind, cur))
        trace.counts[kind] += 1


def time_beta(c: Command, fuel: int) -> int | None:
    """Number of costed steps (beta and !) to normal form, None past the fuel."""
    tr = normalize(c, fuel)
    if tr.outcome is Outcome.FUEL_EXHAUSTED:
        return None
    return tr.counts[StepKind.BETA] + tr.counts[StepKind.BANG]


def run_steps(c: Command, n: int) -> list[tuple[StepKind, Command]]:
    """The first ``n`` steps from ``c`` (fewer if it stops earlier)."""
    out = []
    cur = c
    for _ in range(n):
        nxt = step(cur)
        if nxt is None:
            break
        out.append(nxt)
        cur = nxt[1]
    return out


__all__ = [
    "Outcome",
    "StepKind",
    "Trace",
    "normalize",
    "run_steps",
    "step",
    "time_beta",
]
