"""Quantitative monoids: integers, the soft monoid and the trivial monoid.

A monoid is described by a ``MonoidSpec`` object; elements are small frozen
values.  The soft monoid pairs a bound ``n`` with a polynomial ``f`` over the
naturals, stored as a coefficient tuple, lowest degree first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction


class MonoidCapabilityError(TypeError):
    """The monoid lacks an operation (unit or soft exponential)."""


@dataclass(frozen=True)
class NatQuantity:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("natural quantities are nonnegative")

    def __str__(self) -> str:
        return str(self.value)


def _trim(coeffs) -> tuple[int, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class SoftQuantity:
    n: int
    f: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "f", _trim(self.f))
        if self.n < 0 or any(c < 0 for c in self.f):
            raise ValueError("soft quantities have natural components")

    @property
    def degree(self) -> int:
        """Degree of ``f``; the zero polynomial has degree -1."""
        return len(self.f) - 1

    def __str__(self) -> str:
        return f"({self.n}; {show_poly(self.f)})"


@dataclass(frozen=True)
class TrivialQuantity:
    def __str__(self) -> str:
        return "0"


# -- polynomials --------------------------------------------------------------


def poly_add(f, g) -> tuple[int, ...]:
    n = max(len(f), len(g))
    return _trim(
        (f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)
    )


def poly_sub(f, g) -> tuple[int, ...]:
    return poly_add(f, tuple(-c for c in g))


def poly_times_x_plus_1(f) -> tuple[int, ...]:
    """``(X + 1) f``."""
    return poly_add(f, (0, *f)) if f else ()


def poly_eval(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_shift(f, m: int) -> tuple[int, ...]:
    """Coefficients of ``f(X + m)``."""
    out: tuple[int, ...] = ()
    for c in reversed(f):
        # out <- out * (X + m) + c
        scaled = tuple(m * a for a in out)
        out = poly_add(poly_add((0, *out), scaled), (c,))
    return out


def show_poly(f) -> str:
    if not f:
        return "0"
    parts = []
    for i, c in enumerate(f):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "X" if i == 1 else f"X^{i}"
            parts.append(mono if c == 1 else f"{c} {mono}")
    return " + ".join(parts)


_MONO = re.compile(r"^(\d+)?\s*(X(?:\^(\d+))?)?$")


def parse_poly(s: str) -> tuple[int, ...]:
    coeffs: dict[int, int] = {}
    for raw in s.split("+"):
        part = raw.strip()
        m = _MONO.match(part)
        if not part or not m or not (m.group(1) or m.group(2)):
            raise ValueError(f"bad monomial {part!r}")
        c = int(m.group(1)) if m.group(1) else 1
        deg = 0 if not m.group(2) else int(m.group(3) or 1)
        coeffs[deg] = coeffs.get(deg, 0) + c
    if not coeffs:
        return ()
    return _trim(coeffs.get(i, 0) for i in range(max(coeffs) + 1))


def nonneg_on_naturals_from(d, m: int) -> bool:
    """Whether the integer polynomial ``d`` is >= 0 at every integer x >= m."""
    e = poly_shift(_trim(d), m)
    if all(c >= 0 for c in e):
        return True
    lead = e[-1]
    if lead < 0:
        return False
    # Cauchy: every real root lies below 1 + max |e_i / lead|
    bound = 1 + max(Fraction(abs(c), lead) for c in e[:-1])
    return all(poly_eval(e, y) >= 0 for y in range(math.ceil(bound) + 1))


def soft_leq(p: SoftQuantity, q: SoftQuantity) -> bool:
    """The soft order, decided exactly.

    ``(n, f) <= (m, g)`` iff ``n <= m``, ``g - f`` is nonnegative from ``m``
    on and nondecreasing from ``m`` on (on the integers).
    """
    if p.n > q.n:
        return False
    h = poly_sub(q.f, p.f)
    if poly_eval(h, q.n) < 0:
        return False
    diff = poly_sub(poly_shift(h, 1), h)
    return nonneg_on_naturals_from(diff, q.n)


def soft_leq_coefficientwise(p: SoftQuantity, q: SoftQuantity) -> bool:
    """Sufficient test: ``n <= m`` and every coefficient of ``g - f`` is >= 0."""
    return p.n <= q.n and all(c >= 0 for c in poly_sub(q.f, p.f))


# -- monoid specs -------------------------------------------------------------


class MonoidSpec:
    name: str = ""
    has_unit = False
    has_exponential = False

    def zero(self):
        raise NotImplementedError

    def add(self, p, q):
        raise NotImplementedError

    def leq(self, p, q) -> bool:
        raise NotImplementedError

    def norm(self, p) -> int:
        raise NotImplementedError

    def unit(self):
        raise MonoidCapabilityError(f"{self.name} monoid has no unit")

    def bang(self, p):
        raise MonoidCapabilityError(f"{self.name} monoid has no soft exponential")

    def r(self, k: int):
        raise MonoidCapabilityError(f"{self.name} monoid has no soft exponential")

    def parse(self, s: str):
        raise NotImplementedError

    def scale(self, k: int, p):
        """``k.p = p + ... + p`` (k times)."""
        out = self.zero()
        for _ in range(k):
            out = self.add(out, p)
        return out

    def sum(self, items):
        out = self.zero()
        for p in items:
            out = self.add(out, p)
        return out

    def equiv(self, p, q) -> bool:
        return self.leq(p, q) and self.leq(q, p)

    def __repr__(self) -> str:
        return f"<{self.name} monoid>"


class NatMonoid(MonoidSpec):
    name = "nat"
    has_unit = True

    def zero(self):
        return NatQuantity(0)

    def add(self, p, q):
        return NatQuantity(p.value + q.value)

    def leq(self, p, q):
        return p.value <= q.value

    def norm(self, p):
        return p.value

    def unit(self):
        return NatQuantity(1)

    def parse(self, s):
        return NatQuantity(int(s.strip()))


class SoftMonoid(MonoidSpec):
    name = "soft"
    has_unit = True
    has_exponential = True

    def zero(self):
        return SoftQuantity(0, ())

    def add(self, p, q):
        return SoftQuantity(max(p.n, q.n), poly_add(p.f, q.f))

    def leq(self, p, q):
        return soft_leq(p, q)

    def norm(self, p):
        return poly_eval(p.f, p.n)

    def unit(self):
        return SoftQuantity(0, (1,))

    def bang(self, p):
        return SoftQuantity(p.n, poly_times_x_plus_1(p.f))

    def r(self, k):
        return SoftQuantity(k, ())

    def parse(self, s):
        m = re.fullmatch(r"\s*\(\s*(\d+)\s*;(.*)\)\s*", s)
        if not m:
            raise ValueError(f"not a soft quantity: {s!r}")
        return SoftQuantity(int(m.group(1)), parse_poly(m.group(2)))


class TrivialMonoid(MonoidSpec):
    name = "trivial"

    def zero(self):
        return TrivialQuantity()

    def add(self, p, q):
        return TrivialQuantity()

    def leq(self, p, q):
        return True

    def norm(self, p):
        return 0

    def parse(self, s):
        if s.strip() != "0":
            raise ValueError("the trivial monoid has the single element 0")
        return TrivialQuantity()


NAT = NatMonoid()
SOFT = SoftMonoid()
TRIVIAL = TrivialMonoid()

MONOIDS = {m.name: m for m in (NAT, SOFT, TRIVIAL)}


def monoid(name: str) -> MonoidSpec:
    try:
        return MONOIDS[name]
    except KeyError:
        raise ValueError(f"unknown monoid {name!r}; choose from {sorted(MONOIDS)}") from None
