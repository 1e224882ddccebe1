import pytest
from hypothesis import given

from conftest import commands, open_commands, positive_values
from lfoc.terms import (
    DAIMON_NEG,
    DAIMON_POS,
    NEG,
    POS,
    Bang,
    Box,
    Command,
    DuplicateVariable,
    MuBang,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    NatConst,
    NegInstr,
    Pair,
    PolarityMismatch,
    PosInstr,
    TermError,
    Var,
    alpha_eq,
    bang_macro,
    canonical,
    free_vars,
    is_affine,
    is_value,
    make_box,
    make_pair,
    neg,
    polarity,
    pos,
    size,
    substitute,
)

x, y, z = pos("x"), pos("y"), pos("z")
a, b, k = neg("a"), neg("b"), neg("k")


def test_polarity_table():
    c = Command(Var(x), Var(a))
    assert polarity(Var(x)) is POS and polarity(Var(a)) is NEG
    assert polarity(MuNeg(a, c)) is POS
    assert polarity(MuPos(x, c)) is NEG
    assert polarity(MuPair(x, a, c)) is NEG
    assert polarity(MuBox(x, c)) is NEG
    assert polarity(MuBang(x, c)) is NEG
    assert polarity(Pair(Var(x), Var(a))) is POS
    assert polarity(Box(Var(a))) is POS
    assert polarity(Bang(Var(x))) is POS
    assert polarity(NatConst(3)) is POS
    assert polarity(PosInstr("i")) is POS and polarity(NegInstr("j")) is NEG
    assert polarity(DAIMON_POS) is POS and polarity(DAIMON_NEG) is NEG


def test_values_and_pairs():
    assert is_value(Var(x)) and is_value(Var(a))
    assert not is_value(MuNeg(a, Command(Var(x), Var(a))))
    with pytest.raises(TermError):
        Pair(MuNeg(a, Command(Var(x), Var(a))), Var(y))
    with pytest.raises(DuplicateVariable):
        MuPair(x, x, Command(Var(x), Var(a)))
    with pytest.raises(PolarityMismatch):
        MuNeg(x, Command(Var(x), Var(a)))


def test_command_orientation():
    assert Command(Var(x), Var(a)) == Command(Var(a), Var(x))
    with pytest.raises(PolarityMismatch):
        Command(Var(x), Var(y))


def test_free_vars():
    assert free_vars(Var(x)) == {x}
    assert free_vars(MuPair(x, a, Command(Var(x), Var(a)))) == set()
    x2 = pos("x2")
    assert free_vars(Command(Var(x), MuPos(y, Command(Var(x2), Var(a))))) == {x, x2, a}


def test_substitute_examples():
    c = Command(Var(x), Var(a))
    assert substitute(c, {x: DAIMON_POS}) == Command(DAIMON_POS, Var(a))
    v = Box(Var(b))
    assert substitute(MuNeg(a, c), {x: v}) == MuNeg(a, Command(v, Var(a)))
    bound = MuPos(x, Command(Var(x), Var(b)))
    assert substitute(bound, {x: v}) == bound
    with pytest.raises(PolarityMismatch):
        substitute(c, {x: Var(a)})


def test_substitute_avoids_capture():
    t = MuNeg(a, Command(Var(x), Var(a)))
    out = substitute(t, {x: Box(Var(a))})
    assert isinstance(out, MuNeg) and out.var != a
    assert free_vars(out) == {a}


def test_size():
    assert size(Var(x)) == 1
    assert size(Command(Var(x), Var(a))) == 3
    assert size(Pair(Var(x), Var(y))) == 3


def test_make_pair_and_box():
    assert make_pair(Var(x), Var(a)) == Pair(Var(x), Var(a))
    t = MuNeg(a, Command(Var(x), Var(a)))
    p = make_pair(t, Var(y))
    a2 = neg("a2")
    k1, k2 = pos("k1"), pos("k2")
    expected = MuNeg(a2, Command(t, MuPos(k1, Command(Var(y), MuPos(k2, Command(Pair(Var(k1), Var(k2)), Var(a2)))))))
    assert alpha_eq(p, expected)
    bx = make_box(t)
    assert alpha_eq(bx, MuNeg(a2, Command(t, MuPos(k1, Command(Box(Var(k1)), Var(a2))))))


def test_bang_macro_examples():
    v = Box(DAIMON_NEG)
    x1, x2 = pos("x1"), pos("x2")
    assert alpha_eq(bang_macro([], v), MuNeg(k, Command(Bang(v), Var(k))))
    assert alpha_eq(bang_macro([x1], v), MuNeg(k, Command(MuBang(x1, Command(Bang(v), Var(k))), Var(x1))))
    inner = Command(MuBang(x2, Command(Bang(v), Var(k))), Var(x2))
    assert alpha_eq(bang_macro([x1, x2], v), MuNeg(k, Command(MuBang(x1, inner), Var(x1))))
    with pytest.raises(DuplicateVariable):
        bang_macro([x1, x1], v)


def test_affinity():
    assert is_affine(MuPos(x, Command(Var(x), Var(a))))
    assert not is_affine(MuPos(x, Command(Pair(Var(x), Var(x)), Var(a))))


@given(commands)
def test_orientation_is_canonical(c):
    assert Command(c.right, c.left) == c


@given(commands)
def test_alpha_eq_of_canonical(c):
    assert alpha_eq(c, canonical(c))
    assert canonical(canonical(c)) == canonical(c)


@given(open_commands, positive_values)
def test_substitution_free_vars(c, v):
    out = substitute(c, {x: v})
    assert free_vars(out) <= (free_vars(c) - {x}) | free_vars(v)


@given(open_commands, positive_values)
def test_substitution_respects_alpha(c, v):
    assert alpha_eq(substitute(c, {x: v}), substitute(canonical(c), {x: v}))
