"""Measuring a typed command against the bound its derivation predicts."""

from __future__ import annotations

from dataclasses import dataclass

from lfoc.quantity import MonoidSpec
from lfoc.reduction import Outcome, StepKind, normalize
from lfoc.terms import Command, Daimon, free_vars, size, substitute
from lfoc.typecheck import CommandJ, Derivation, check, weight


class NotACommand(ValueError):
    pass


def daimon_closure(c: Command) -> Command:
    """Replace every free variable by the daimon of its polarity."""
    return substitute(c, {v: Daimon(v.polarity) for v in free_vars(c)})


@dataclass
class CertReport:
    command: str
    rules: dict[str, int]
    depth: int
    monoid: str
    mode: str
    weight: str
    bound: int
    size: int
    counts: dict[str, int]
    outcome: str

    @property
    def measured(self) -> int:
        return self.counts["beta"] + self.counts["bang"]

    @property
    def within_bound(self) -> bool:
        return self.outcome != Outcome.FUEL_EXHAUSTED.value and self.measured <= self.bound

    @property
    def within_size(self) -> bool | None:
        if self.mode != "mal":
            return None
        return self.outcome != Outcome.FUEL_EXHAUSTED.value and self.counts["beta"] <= self.size

    @property
    def ok(self) -> bool:
        return self.within_bound and self.within_size is not False

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "rules": self.rules,
            "depth": self.depth,
            "monoid": self.monoid,
            "mode": self.mode,
            "weight": self.weight,
            "bound": self.bound,
            "size": self.size,
            "counts": self.counts,
            "measured": self.measured,
            "outcome": self.outcome,
            "within_bound": self.within_bound,
            "within_size": self.within_size,
            "ok": self.ok,
        }

    def to_text(self) -> str:
        lines = [
            f"command   {self.command}",
            f"mode      {self.mode}   monoid {self.monoid}   depth {self.depth}",
            f"weight    {self.weight}   norm {self.bound}",
            f"size      {self.size}",
            "steps     " + "  ".join(f"{k}={v}" for k, v in self.counts.items()) + f"   ({self.outcome})",
            f"measured  {self.measured} <= {self.bound}: {self.within_bound}",
        ]
        if self.within_size is not None:
            lines.append(f"linear    {self.counts['beta']} <= {self.size}: {self.within_size}")
        return "\n".join(lines)


def certify(d: Derivation, m: MonoidSpec, fuel: int = 1_000_000, mode: str = "mal", p_beta=None) -> CertReport:
    """Check ``d``, weigh it, run the daimon-closed command and compare."""
    check(d, mode)
    j = d.conclusion
    if not isinstance(j, CommandJ):
        raise NotACommand("certification needs a command judgment")
    w = weight(d, m, p_beta)
    closed = daimon_closure(j.command)
    tr = normalize(closed, fuel)
    return CertReport(
        command=str(j.command),
        rules=dict(sorted(w.per_rule.items())),
        depth=w.depth,
        monoid=m.name,
        mode=mode,
        weight=str(w.weight),
        bound=m.norm(w.weight),
        size=size(j.command),
        counts={k.value: tr.counts[k] for k in StepKind},
        outcome=tr.outcome.value,
    )
