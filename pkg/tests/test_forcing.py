import pytest
from hypothesis import given

from conftest import commands
from lfoc import constructors as C
from lfoc import forcing as F
from lfoc import text
from lfoc.constructors import IOTA, ONEG, OPOS
from lfoc.reduction import time_beta
from lfoc.terms import (
    DAIMON_NEG,
    DAIMON_POS,
    Box,
    Command,
    MuBox,
    MuNeg,
    MuPair,
    NatConst,
    Pair,
    Var,
    neg,
    pos,
)

K = C.arrow(IOTA, OPOS)
Xk, Yk = C.KVar("X", K), C.KVar("Y", K)
X, Y = C.KVar("X", OPOS), C.KVar("Y", OPOS)
Cp = C.KVar("C", K)
r, r2, p1, p2 = (C.KVar(n, IOTA) for n in ("r", "r'", "p1", "p2"))


def orth(z):
    """Written out by hand: \\r. forall r'. (z r')^⊥ | C (r + r')."""
    return C.Lam("r", IOTA, C.Forall("r'", IOTA, C.Parr(C.negate(C.App(z, r2)), C.App(Cp, C.add(r, r2)))))


def split(a, b):
    body = C.EqGuard(r, C.add(p1, p2), C.Tensor(C.App(a, p1), C.App(b, p2)))
    return C.Lam("r", IOTA, C.Exists("p1", IOTA, C.Exists("p2", IOTA, body)))


def down(a):
    return C.Lam("r", IOTA, C.ShiftDown(C.App(a, r)))


def same(a, b):
    return C.alpha_eq(a, b)


def test_atom_clauses():
    assert F.translate(X) == Xk
    assert same(F.translate(C.negate(X)), orth(Xk))
    assert same(F.forcing_orthogonal(Xk), orth(Xk))


def test_tensor_clause():
    assert same(F.translate(C.Tensor(X, Y)), split(Xk, Yk))


def test_parr_clause():
    a = C.Parr(C.negate(X), C.negate(Y))
    assert same(F.translate(a), orth(split(Xk, Yk)))


def test_shift_clauses():
    assert same(F.translate(C.ShiftDown(C.negate(X))), down(orth(Xk)))
    assert same(F.translate(C.ShiftUp(X)), orth(down(orth(Xk))))


def test_shift_down_prints_applied_form():
    assert str(F.translate(C.ShiftDown(X))) == r"\r:i. dn X^(i -> o+) r"


def test_force_clauses():
    n = C.ShiftUp(X)
    assert same(F.force(r, n), C.App(F.translate(n), r))
    assert same(F.force(r, X), C.App(orth(orth(Xk)), r))
    with pytest.raises(C.KindError):
        F.force(X, X)


def test_orthogonal_kind_is_negative():
    for z in (Xk, F.forcing_orthogonal(Xk), C.Lam("r", IOTA, C.ShiftUp(X))):
        assert C.kind_check(F.forcing_orthogonal(z)) == C.arrow(IOTA, ONEG)
    with pytest.raises(C.KindError):
        F.forcing_orthogonal(X)


def test_translation_keeps_polarity():
    for a in F.formulas_up_to(4):
        k = C.kind_check(F.translate(a))
        assert k == C.arrow(IOTA, C.kind_check(a))


def test_posforcing_examples():
    for src in ["up X", "~X | ~Y", "~X", "up (X * dn ~Y)"]:
        n = text.parse_constructor(src, {"X": OPOS, "Y": OPOS})
        assert F.check_posforcing(n, r)
    with pytest.raises(ValueError):
        F.check_posforcing(X, r)


def test_structure_laws():
    nums = [C.numeral(i) for i in range(9)]
    assert F.INTEGER.laws(nums) == {"assoc": True, "comm": True, "neutral": True}
    syms = [C.KVar(v, IOTA) for v in "pqr"] + [C.ZERO, C.numeral(2)]
    assert F.INTEGER.laws(syms) == {"assoc": True, "comm": True, "neutral": True}
    assert all(F.TRIVIAL.laws(syms[:3]).values())


def test_trivial_structure():
    assert C.kind_check(F.TRIVIAL.predicate) == K
    assert C.kind_check(F.force(r, C.ShiftDown(X), F.TRIVIAL)) == ONEG


# -- countdown --------------------------------------------------------------------

x, y = pos("x"), pos("y")
a, b = neg("a"), neg("b")


def _two_beta():
    inner = Command(Box(DAIMON_POS), MuBox(y, Command(Var(y), DAIMON_NEG)))
    return Command(Pair(Box(DAIMON_POS), DAIMON_NEG), MuPair(x, a, inner))


def test_countdown_examples():
    c = _two_beta()
    assert time_beta(c, 100) == 2
    assert F.countdown_run(c, 1) is F.RunOutcome.DIVERGES
    assert F.countdown_run(c, 2) is F.RunOutcome.NORMALIZES
    assert F.countdown_run(Command(DAIMON_POS, DAIMON_NEG), 0) is F.RunOutcome.NORMALIZES


def test_countdown_steps():
    c = _two_beta()
    status, nxt, kind = F.countdown_step(F.lift(c, 5))
    assert (status, kind, nxt.count) == (F.Status.NEXT, "beta", 4)
    assert F.countdown_step(F.lift(c, 0))[:1] == (F.Status.DIVERGE,)
    mu = Command(MuNeg(b, Command(Box(DAIMON_POS), Var(b))), MuBox(y, Command(Var(y), DAIMON_NEG)))
    status, nxt, kind = F.countdown_step(F.lift(mu, 3))
    assert (kind, nxt.count) == ("mu", 3)


def test_non_integer_counter_never_steps():
    fc = F.ForcingCommand(_two_beta().right, _two_beta().left, DAIMON_POS)
    assert F.countdown_step(fc)[0] is F.Status.STUCK


def test_forcing_command_identification():
    c = _two_beta()
    k = NatConst(3)
    assert F.ForcingCommand(c.left, c.right, k) == F.ForcingCommand(c.right, c.left, k)
    assert F.lift(c, 3).argument == Pair(c.left, k)


def test_countdown_trace_format():
    tr = F.countdown_trace(_two_beta(), 2, 100)
    lines = tr.to_text().splitlines()
    assert [ln.split("\t")[2] for ln in lines[:-1]] == ["2", "1", "0"]
    assert lines[-1].startswith("# ")


@given(commands)
def test_countdown_matches_time(c):
    t = time_beta(c, 5000)
    if t is None:
        return
    for n in range(t + 3):
        out = F.countdown_run(c, n, 5000)
        assert (out is F.RunOutcome.NORMALIZES) == (t <= n)


@given(commands)
def test_counter_conservation(c):
    t = time_beta(c, 5000)
    if t is None:
        return
    tr = F.countdown_trace(c, t + 2, 5000)
    assert tr.outcome is F.RunOutcome.NORMALIZES
    assert tr.final.count == 2
