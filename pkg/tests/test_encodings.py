import random

import pytest
from hypothesis import given, strategies as st

from lfoc import corpus
from lfoc import encodings as E
from lfoc import typecheck as T
from lfoc.checks import CBV_REDEX_STEPS, cbv_redex_costs
from lfoc.reduction import StepKind, run_steps
from lfoc.terms import (
    NEG,
    POS,
    Box,
    Command,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    Pair,
    Var,
    alpha_eq,
    free_vars,
    is_affine,
    neg,
    polarity,
    pos,
)

lam = E.parse_lambda
a, x, al = neg("a"), pos("x"), neg("al")


def test_parse_and_show():
    t = lam(r"\f. \x. f (f0 x)")
    assert str(t) == r"\f. \x. f (f0 x)"
    assert lam(str(t)) == t
    with pytest.raises(E.AffinityError):
        lam(r"\x. x x")
    with pytest.raises(E.LambdaParseError):
        lam(r"\x. (x")


def test_cbn_clauses():
    assert alpha_eq(E.encode_cbn(lam(r"\a. a")), MuPair(a, x, Command(Var(x), Var(a))))
    enc = E.encode_cbn(lam("f u"))
    assert alpha_eq(enc, MuPos(x, Command(Var(neg("f")), Pair(Var(neg("u")), Var(x)))))
    st_ = E.encode_cbn_stack(E.Push(lam(r"\a. a"), E.SVar("pi")))
    assert st_ == Pair(E.encode_cbn(lam(r"\a. a")), Var(pos("pi")))


def test_cbv_clauses():
    xv = pos("xv")
    assert alpha_eq(E.encode_cbv(lam(r"\xv. xv")), Box(MuPair(xv, al, Command(Var(xv), Var(al)))))
    b = neg("b")
    env = E.encode_cbv_env(E.Push(lam("u"), E.SVar("e")))
    assert alpha_eq(env, MuBox(b, Command(Pair(Var(pos("u")), Var(neg("e"))), Var(b))))
    app = E.encode_cbv(lam("f u"))
    assert isinstance(app, MuNeg)


def test_polarities():
    t = lam(r"(\a. a) (\b. b)")
    assert polarity(E.encode_cbn(t)) is NEG
    assert polarity(E.encode_cbv(t)) is POS
    assert polarity(E.encode_cbn_stack(E.SVar("pi"))) is POS
    assert polarity(E.encode_cbv_env(E.SVar("e"))) is NEG


def test_cbn_redex_two_steps():
    fn, arg = lam(r"\a. a"), lam(r"\b. b")
    c = E.encode_cbn_command(E.LApp(fn, arg), E.SVar("pi"))
    steps = run_steps(c, 2)
    assert [k for k, _ in steps] == [StepKind.MU, StepKind.BETA]
    assert alpha_eq(steps[-1][1], E.encode_cbn_command(arg, E.SVar("pi")))


def test_cbv_constant_is_frozen():
    costs = cbv_redex_costs(30, seed=11)
    assert all(c == {**CBV_REDEX_STEPS, "bang": 0} for c in costs)


def test_formula_of():
    X = E.TBase("X")
    assert str(E.formula_of(X)) == "~X^o+"
    assert str(E.formula_of(E.TArrow(X, X))) == "X^o+ | ~X^o+"


def test_derivations_check():
    for src in [r"\a. a", r"\f. \x. f x", r"\x. \y. x", r"(\a. a) (\b. b)", "v"]:
        t = lam(src)
        d = E.derive_cbn(t)
        j = T.check(d)
        assert alpha_eq(j.term, E.encode_cbn(t))
    assert E.derive_cbn(lam("v")).rule == "AxNeg"


def test_derivation_type_mismatch():
    with pytest.raises(E.LambdaTypeError):
        E.derive_cbn(lam(r"\a. a"), ty=E.TBase("X"))


def test_krivine():
    t, s, pushes, pops = E.krivine(lam(r"(\x. \y. x) (\a. a) (\b. b)"), E.SVar("pi"))
    assert str(t) == r"\a. a" and s == E.SVar("pi") and (pushes, pops) == (2, 2)


affine_terms = st.integers(0, 2**32 - 1).map(lambda s: corpus.random_affine_lambda(random.Random(s), 6))


@given(affine_terms)
def test_encodings_preserve_affinity_and_closedness(t):
    for enc in (E.encode_cbn(t), E.encode_cbv(t)):
        assert is_affine(enc)
        names = {v.name for v in free_vars(enc)}
        assert names <= E.lam_free_vars(t)


@given(affine_terms)
def test_every_affine_term_derives(t):
    d = E.derive_cbn(t)
    assert alpha_eq(T.check(d).term, E.encode_cbn(t))


@given(st.integers(0, 2**32 - 1))
def test_cbn_matches_krivine(seed):
    rng = random.Random(seed)
    fn, arg = corpus.random_cbn_redex(rng, 5)
    c = E.encode_cbn_command(E.LApp(fn, arg), E.SVar("pi"))
    term, stack, pushes, pops = E.krivine(E.LApp(fn, arg), E.SVar("pi"))
    steps = run_steps(c, 10_000)
    assert sum(k is StepKind.MU for k, _ in steps) == pushes
    assert sum(k is StepKind.BETA for k, _ in steps) == pops
    assert alpha_eq(steps[-1][1], E.encode_cbn_command(term, stack))
