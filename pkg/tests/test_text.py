import pytest
from hypothesis import given

from conftest import commands, negative_terms
from lfoc import constructors as C
from lfoc import corpus, text
from lfoc.terms import DAIMON_POS, Command, NatConst, Var, alpha_eq, neg


def test_parse_basic_forms():
    c = text.parse_command("<mu -a. <+x | -a> | mu +y. <+y | -b>>")
    assert c.left.var == neg("a")
    t = text.parse_term("mu (+k, -l). <(+k, daimon-) | -l>")
    assert str(t) == "mu (+k, -l). <(+k, daimon-) | -l>"
    assert text.parse_term("nat:4") == NatConst(4)
    assert text.parse_term("daimon+") == DAIMON_POS
    assert str(text.parse_term("mu !(+x). <!{-a} | -k>")) == "mu !(+x). <!{-a} | -k>"


def test_non_value_pair_is_expanded():
    t = text.parse_term("(mu -a. <+x | -a>, +y)")
    assert not isinstance(t, Var)
    assert text.parse_term(str(t)) == t


def test_parse_errors_have_positions():
    with pytest.raises(text.ParseError) as e:
        text.parse_command("<+x |\n  -a )")
    assert e.value.line == 2
    with pytest.raises(text.ParseError) as e:
        text.parse_term("mu -a. <+x | -a")
    assert ":" in str(e.value)


@given(commands)
def test_command_round_trip(c):
    assert text.parse_command(str(c)) == c


@given(negative_terms)
def test_term_round_trip(t):
    assert text.parse_term(text.show_term(t)) == t


def test_corpus_round_trip():
    for e in corpus.all_entries():
        c = e.command
        assert alpha_eq(text.parse_command(str(c)), c)


X = C.KVar("X", C.OPOS)


@pytest.mark.parametrize(
    "src",
    [
        "forall X:o+. ~X^o+ | X",
        "exists n:i. [n = s 0] dn X^o+",
        "\\x:i. rec[o+] (dn Y^o+) (\\a:i. \\b:o+. dn ~b) x",
        "~rec[o-] (up Y^o+) (\\a:i. \\b:o-. up ~b) (s (s 0))",
        "!X^o+ * ?~X^o+",
        "(\\p:i. \\q:i. rec[i] p (\\a:i. \\b:i. s b) q) 2 3",
    ],
)
def test_constructor_round_trip(src):
    t = text.parse_constructor(src)
    assert C.alpha_eq(text.parse_constructor(str(t)), t)
    C.kind_check(t)


def test_kinds():
    assert text.parse_kind("i -> o+ -> o-") == C.arrow(C.IOTA, C.OPOS, C.ONEG)
    assert text.show_kind(C.arrow(C.arrow(C.IOTA, C.IOTA), C.OPOS)) == "(i -> i) -> o+"


def test_unbound_constructor_variable():
    with pytest.raises(text.ParseError):
        text.parse_constructor("dn X")
    assert text.parse_constructor("dn X", {"X": C.OPOS}) == C.ShiftDown(X)
