import pytest

from lfoc import corpus
from lfoc.certify import NotACommand, certify, daimon_closure
from lfoc.quantity import NAT, SOFT, TRIVIAL
from lfoc.terms import Daimon, free_vars
from tests_helpers import contracted


def test_identity_application():
    entry = next(e for e in corpus.mal_entries() if e.name == "cbn_01")
    rep = certify(entry.derivation, NAT)
    assert rep.ok and rep.measured == 1 and rep.counts["mu"] == 1
    assert rep.bound == 2 and rep.size == 14


@pytest.mark.parametrize("entry", corpus.mal_entries(), ids=lambda e: e.name)
def test_mal_linear(entry):
    rep = certify(entry.derivation, NAT)
    assert rep.within_size and rep.within_bound
    assert rep.counts["bang"] == 0


@pytest.mark.parametrize("entry", corpus.sal_entries(), ids=lambda e: e.name)
def test_sal_soft(entry):
    rep = certify(entry.derivation, SOFT, mode="sal")
    assert rep.within_bound and rep.within_size is None


def test_frozen_sal_weights():
    got = {e.name: certify(e.derivation, SOFT, mode="sal") for e in corpus.sal_entries()}
    assert got["sal_nested_3"].weight == "(1; 6 + 9 X + 5 X^2 + X^3)" and got["sal_nested_3"].bound == 21
    assert got["sal_boxed_2"].weight == "(1; 6 + 2 X)" and got["sal_boxed_2"].measured == 4
    assert got["sal_multiplex_0"].bound == 2


def test_daimon_closure():
    c = corpus.mal_entries()[0].command
    closed = daimon_closure(c)
    assert not free_vars(closed)
    assert isinstance(closed.left, Daimon) and isinstance(closed.right, Daimon)


def test_contraction_in_trivial_monoid():
    rep = certify(contracted(), TRIVIAL, mode="pa")
    # the trivial monoid has norm 0, so any beta step breaks the bound
    assert rep.bound == 0 and rep.measured == 0 and rep.ok


def test_term_conclusion_rejected():
    with pytest.raises(NotACommand):
        certify(corpus.identity(), NAT)


def test_report_fields_recompute():
    rep = certify(corpus.sal_entries()[1].derivation, SOFT, mode="sal")
    d = rep.to_dict()
    assert d["measured"] == d["counts"]["beta"] + d["counts"]["bang"]
    assert d["within_bound"] == (d["measured"] <= d["bound"])
    assert "measured" in rep.to_text()
