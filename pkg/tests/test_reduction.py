from hypothesis import given

from conftest import commands
from lfoc.checks import bang_commute_instance
from lfoc.reduction import Outcome, StepKind, normalize, run_steps, step, time_beta
from lfoc.terms import (
    DAIMON_NEG,
    DAIMON_POS,
    Bang,
    Box,
    Command,
    MuBang,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    Pair,
    Var,
    neg,
    pos,
    substitute,
)

x, y = pos("x"), pos("y")
a, b = neg("a"), neg("b")
c0 = Command(Pair(Var(x), Var(a)), Var(b))


def test_mu_steps():
    assert step(Command(MuNeg(a, c0), Var(neg("a0")))) == (StepKind.MU, substitute(c0, {a: Var(neg("a0"))}))
    v = Box(DAIMON_NEG)
    assert step(Command(v, MuPos(x, c0))) == (StepKind.MU, substitute(c0, {x: v}))


def test_beta_steps():
    v1, v2 = Box(DAIMON_NEG), DAIMON_NEG
    kind, out = step(Command(Pair(v1, v2), MuPair(x, a, c0)))
    assert kind is StepKind.BETA and out == substitute(c0, {x: v1, a: v2})
    kind, out = step(Command(Box(DAIMON_POS), MuBox(y, Command(Var(y), DAIMON_NEG))))
    assert kind is StepKind.BETA and out == Command(DAIMON_POS, DAIMON_NEG)


def test_beta_needs_matching_polarities():
    assert step(Command(Pair(DAIMON_POS, DAIMON_POS), MuPair(x, a, c0))) is None
    assert step(Command(Box(DAIMON_NEG), MuBox(y, Command(Var(y), DAIMON_NEG)))) is None


def test_bang_step():
    kind, out = step(Command(Bang(DAIMON_POS), MuBang(y, Command(Var(y), DAIMON_NEG))))
    assert kind is StepKind.BANG and out == Command(DAIMON_POS, DAIMON_NEG)


def test_daimons_are_inert():
    assert step(Command(DAIMON_POS, DAIMON_NEG)) is None
    tr = normalize(Command(DAIMON_POS, DAIMON_NEG), 10)
    assert tr.outcome is Outcome.NORMAL and sum(tr.counts.values()) == 0
    assert time_beta(Command(DAIMON_POS, DAIMON_NEG), 10) == 0


def test_open_command_is_stuck():
    assert normalize(Command(Var(x), Var(a)), 10).outcome is Outcome.STUCK


def test_single_box_redex_costs_one():
    c = Command(Box(DAIMON_POS), MuBox(y, Command(Var(y), DAIMON_NEG)))
    assert time_beta(c, 10) == 1


def test_fuel_exhaustion():
    # <{D} | D> with D = mu {k}. <{k} | k> rewrites to itself by one beta step
    k = neg("k")
    d = MuBox(k, Command(Box(Var(k)), Var(k)))
    loop = Command(Box(d), d)
    assert step(loop) == (StepKind.BETA, loop)
    tr = normalize(loop, 50)
    assert tr.outcome is Outcome.FUEL_EXHAUSTED and tr.beta == 50
    assert time_beta(loop, 50) is None


def test_bang_commute_counts():
    for k in range(4):
        start, target = bang_commute_instance(k)
        assert time_beta(start, 100) == k
        steps = run_steps(start, k + 1)
        assert steps[-1][1] == target


def test_trace_text():
    tr = normalize(Command(Box(DAIMON_POS), MuBox(y, Command(Var(y), DAIMON_NEG))), 10)
    lines = tr.to_text().splitlines()
    assert lines[0].startswith("0\tstart\t")
    assert lines[1].startswith("1\tbeta\t")
    assert lines[-1].startswith("# ")


@given(commands)
def test_deterministic(c):
    assert step(c) == step(c)
    assert normalize(c, 500).steps == normalize(c, 500).steps


@given(commands)
def test_counts_match_steps(c):
    tr = normalize(c, 500)
    for kind in StepKind:
        assert tr.counts[kind] == sum(1 for k, _ in tr.steps if k is kind)


@given(commands)
def test_mu_invariance_and_beta_monotonicity(c):
    s = step(c)
    if s is None:
        return
    kind, nxt = s
    t0, t1 = time_beta(c, 2000), time_beta(nxt, 2000)
    if t0 is None or t1 is None:
        return
    if kind is StepKind.MU:
        assert t0 == t1
    else:
        assert t0 == 1 + t1
