import pytest
from hypothesis import given, strategies as st

from lfoc import quantity as Q
from lfoc.quantity import NAT, SOFT, TRIVIAL, NatQuantity, SoftQuantity

naturals = st.integers(0, 40)
polys = st.lists(st.integers(0, 5), max_size=4).map(tuple)
softs = st.builds(SoftQuantity, st.integers(0, 8), polys)
nats = st.builds(NatQuantity, naturals)


def test_examples():
    assert NAT.norm(NAT.add(NatQuantity(3), NatQuantity(4))) == 7
    s = SOFT.add(SoftQuantity(2, (1, 1)), SoftQuantity(3, (0, 2)))
    assert s == SoftQuantity(3, (1, 3)) and SOFT.norm(s) == 10
    t = TRIVIAL.add(TRIVIAL.zero(), TRIVIAL.zero())
    assert TRIVIAL.norm(t) == 0
    assert SOFT.bang(SoftQuantity(0, (1,))) == SoftQuantity(0, (1, 1))
    assert SOFT.bang(SOFT.zero()) == SOFT.zero()
    assert SOFT.r(5) == SoftQuantity(5, ())


def test_soft_order_examples():
    assert SOFT.leq(SoftQuantity(1, (0, 1)), SoftQuantity(2, (0, 1, 1)))
    assert not SOFT.leq(SoftQuantity(3, (0, 1)), SoftQuantity(1, (0, 1)))
    # h = g - f = X - 2 is negative at 0 but fine from m = 3 on
    assert SOFT.leq(SoftQuantity(0, (3,)), SoftQuantity(3, (1, 1)))
    assert not Q.soft_leq_coefficientwise(SoftQuantity(0, (3,)), SoftQuantity(3, (1, 1)))
    # h = 5 - X is eventually negative
    assert not SOFT.leq(SoftQuantity(0, (0, 1)), SoftQuantity(0, (5,)))


def test_soft_order_monotone_difference_clause():
    f = SoftQuantity(0, (0, 8))
    g = SoftQuantity(0, (16, 0, 1))
    # h = X^2 - 8X + 16 >= 0 everywhere, but h(0) > h(1): not in the order from m = 0
    assert not SOFT.leq(f, g)
    assert SOFT.leq(SoftQuantity(0, (0, 8)), SoftQuantity(4, (16, 0, 1)))


def test_soft_print_and_parse():
    p = SoftQuantity(1, (4, 4, 1))
    assert str(p) == "(1; 4 + 4 X + X^2)"
    assert SOFT.parse(str(p)) == p
    assert SOFT.parse(str(SOFT.zero())) == SOFT.zero()
    assert NAT.parse("7") == NatQuantity(7)


def test_capabilities():
    with pytest.raises(Q.MonoidCapabilityError):
        NAT.bang(NatQuantity(1))
    with pytest.raises(Q.MonoidCapabilityError):
        TRIVIAL.unit()
    assert Q.monoid("soft") is SOFT
    assert SOFT.has_exponential and not NAT.has_exponential


def test_norm_of_zero():
    for m in (NAT, SOFT, TRIVIAL):
        assert m.norm(m.zero()) == 0


@given(softs, softs, softs)
def test_soft_monoid_laws(p, q, r):
    m = SOFT
    assert m.add(p, q) == m.add(q, p)
    assert m.add(p, m.add(q, r)) == m.add(m.add(p, q), r)
    assert m.add(m.zero(), p) == p
    assert m.norm(p) + m.norm(q) <= m.norm(m.add(p, q))
    if m.leq(p, q):
        assert m.norm(p) <= m.norm(q)
        if m.leq(q, r):
            assert m.leq(p, r)


@given(softs, softs, st.integers(0, 6))
def test_soft_exponential(p, q, k):
    m = SOFT
    assert m.bang(m.add(p, q)) == m.add(m.bang(p), m.bang(q))
    assert m.leq(m.scale(k, p), m.add(m.bang(p), m.r(k)))
    if p.f:
        assert m.bang(p).degree == p.degree + 1


@given(softs, softs)
def test_coefficientwise_order_is_sound(p, q):
    if Q.soft_leq_coefficientwise(p, q):
        assert SOFT.leq(p, q)


@given(softs, softs)
def test_soft_order_matches_brute_force(p, q):
    h = [Q.poly_eval(q.f, x) - Q.poly_eval(p.f, x) for x in range(q.n, q.n + 60)]
    brute = p.n <= q.n and h[0] >= 0 and all(b >= a for a, b in zip(h, h[1:]))
    # a finite window can miss violations, so only one direction is checked
    if SOFT.leq(p, q):
        assert brute


@given(nats, nats, nats)
def test_nat_monoid_laws(p, q, r):
    assert NAT.add(p, q) == NAT.add(q, p)
    assert NAT.norm(NAT.add(p, q)) == NAT.norm(p) + NAT.norm(q)
    assert NAT.leq(p, q) == (p.value <= q.value)
    assert NAT.add(NAT.add(p, q), r) == NAT.add(p, NAT.add(q, r))


@given(polys, st.integers(0, 10))
def test_poly_shift(f, m):
    g = Q.poly_shift(f, m)
    for x in range(5):
        assert Q.poly_eval(g, x) == Q.poly_eval(f, x + m)
