"""Polarized terms and commands of L_foc.

Positive terms are values (variables, pairs, boxes, positive instructions,
``!V``, integer constants, the positive daimon) or ``mu a. c`` where ``a`` is
a negative variable.  Negative terms are negative variables, the four
pattern-matching binders, negative instructions and the negative daimon.
Every negative term is a value.

Commands are stored with the positive side on the left, so ``Command(t, u)``
and ``Command(u, t)`` build the same value.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass


class Polarity(enum.Enum):
    POS = "+"
    NEG = "-"

    def dual(self) -> Polarity:
        return Polarity.NEG if self is Polarity.POS else Polarity.POS

    def __str__(self) -> str:
        return self.value


POS = Polarity.POS
NEG = Polarity.NEG


class TermError(ValueError):
    """Raised when a term or command would leave the grammar."""


class PolarityMismatch(TermError):
    pass


class DuplicateVariable(TermError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    polarity: Polarity

    def __str__(self) -> str:
        return f"{self.polarity}{self.name}"


def pos(name: str) -> Variable:
    return Variable(name, POS)


def neg(name: str) -> Variable:
    return Variable(name, NEG)


class Term:
    """Base class of all terms."""

    __slots__ = ()

    @property
    def polarity(self) -> Polarity:
        return polarity(self)

    def __str__(self) -> str:
        from lfoc.text import show_term

        return show_term(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    var: Variable

    def __repr__(self) -> str:
        return f"Var({self.var})"


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term

    def __post_init__(self):
        if not (is_value(self.left) and is_value(self.right)):
            raise TermError("pair components must be values; use make_pair")


@dataclass(frozen=True)
class Box(Term):
    """The one-tuple ``{V}``."""

    body: Term

    def __post_init__(self):
        if not is_value(self.body):
            raise TermError("box content must be a value; use make_box")


@dataclass(frozen=True)
class PosInstr(Term):
    name: str


@dataclass(frozen=True)
class NegInstr(Term):
    name: str


@dataclass(frozen=True)
class MuNeg(Term):
    """``mu a. c``: binds a negative variable, is a positive term."""

    var: Variable
    body: Command

    def __post_init__(self):
        if self.var.polarity is not NEG:
            raise PolarityMismatch(f"mu-binder {self.var} must be negative here")


@dataclass(frozen=True)
class MuPos(Term):
    """``mu x. c``: binds a positive variable, is a negative term."""

    var: Variable
    body: Command

    def __post_init__(self):
        if self.var.polarity is not POS:
            raise PolarityMismatch(f"mu-binder {self.var} must be positive here")


@dataclass(frozen=True)
class MuPair(Term):
    first: Variable
    second: Variable
    body: Command

    def __post_init__(self):
        if self.first == self.second:
            raise DuplicateVariable(f"mu({self.first},{self.second}) binds one variable twice")


@dataclass(frozen=True)
class MuBox(Term):
    var: Variable
    body: Command


@dataclass(frozen=True)
class Bang(Term):
    """The instruction ``!V``."""

    body: Term

    def __post_init__(self):
        if not is_value(self.body):
            raise TermError("!V requires a value")


@dataclass(frozen=True)
class MuBang(Term):
    """The instruction ``mu !(k). c``."""

    var: Variable
    body: Command


@dataclass(frozen=True)
class NatConst(Term):
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise TermError("integer constants are natural numbers")


@dataclass(frozen=True)
class Daimon(Term):
    pol: Polarity


DAIMON_POS = Daimon(POS)
DAIMON_NEG = Daimon(NEG)


@dataclass(frozen=True, init=False)
class Command:
    """``<t | u>`` with the positive term kept on the left."""

    left: Term
    right: Term

    def __init__(self, t: Term, u: Term):
        pt, pu = polarity(t), polarity(u)
        if pt is pu:
            raise PolarityMismatch(f"command sides share polarity {pt}")
        if pt is NEG:
            t, u = u, t
        object.__setattr__(self, "left", t)
        object.__setattr__(self, "right", u)

    def __str__(self) -> str:
        from lfoc.text import show_command

        return show_command(self)


_POSITIVE_KINDS = (Pair, Box, PosInstr, MuNeg, Bang, NatConst)
_NEGATIVE_KINDS = (NegInstr, MuPos, MuPair, MuBox, MuBang)


def polarity(t: Term) -> Polarity:
    match t:
        case Var(v):
            return v.polarity
        case Daimon(p):
            return p
        case _ if isinstance(t, _POSITIVE_KINDS):
            return POS
        case _ if isinstance(t, _NEGATIVE_KINDS):
            return NEG
    raise TypeError(f"not a term: {t!r}")


def is_value(t: Term) -> bool:
    """Negative terms and positive values; only ``mu a. c`` is excluded."""
    return not isinstance(t, MuNeg)


def mu(var: Variable, body: Command) -> Term:
    """The single-variable binder of the right shape for ``var``."""
    return MuNeg(var, body) if var.polarity is NEG else MuPos(var, body)


# -- traversal -------------------------------------------------------------


def binders(t: Term) -> tuple[Variable, ...]:
    match t:
        case MuNeg(v, _) | MuPos(v, _) | MuBox(v, _) | MuBang(v, _):
            return (v,)
        case MuPair(a, b, _):
            return (a, b)
    return ()


def free_vars(x: Term | Command) -> frozenset[Variable]:
    match x:
        case Command(l, r):
            return free_vars(l) | free_vars(r)
        case Var(v):
            return frozenset((v,))
        case Pair(a, b):
            return free_vars(a) | free_vars(b)
        case Box(b) | Bang(b):
            return free_vars(b)
        case MuNeg(_, c) | MuPos(_, c) | MuBox(_, c) | MuBang(_, c) | MuPair(_, _, c):
            return free_vars(c) - frozenset(binders(x))
    return frozenset()


def all_vars(x: Term | Command) -> frozenset[Variable]:
    """Free and bound variables."""
    match x:
        case Command(l, r):
            return all_vars(l) | all_vars(r)
        case Var(v):
            return frozenset((v,))
        case Pair(a, b):
            return all_vars(a) | all_vars(b)
        case Box(b) | Bang(b):
            return all_vars(b)
        case MuNeg(_, c) | MuPos(_, c) | MuBox(_, c) | MuBang(_, c) | MuPair(_, _, c):
            return all_vars(c) | frozenset(binders(x))
    return frozenset()


def size(x: Term | Command) -> int:
    """Number of AST nodes; binder variables are not counted separately."""
    match x:
        case Command(l, r):
            return 1 + size(l) + size(r)
        case Pair(a, b):
            return 1 + size(a) + size(b)
        case Box(b) | Bang(b):
            return 1 + size(b)
        case MuNeg(_, c) | MuPos(_, c) | MuBox(_, c) | MuBang(_, c) | MuPair(_, _, c):
            return 1 + size(c)
    return 1


def fresh(base: Variable, avoid: Iterable[Variable]) -> Variable:
    taken = {v.name for v in avoid if v.polarity is base.polarity}
    if base.name not in taken:
        return base
    stem = base.name.split("_")[0] or "v"
    for i in itertools.count(1):
        name = f"{stem}_{i}"
        if name not in taken:
            return Variable(name, base.polarity)
    raise AssertionError


# -- substitution ----------------------------------------------------------


def substitute(target, subst: Mapping[Variable, Term]):
    """Simultaneous capture-avoiding substitution into a term or command."""
    for v, u in subst.items():
        if polarity(u) is not v.polarity:
            raise PolarityMismatch(f"cannot substitute {polarity(u)} term for {v}")
    return _subst(target, dict(subst))


def _subst_binder(vs: tuple[Variable, ...], body: Command, subst: dict):
    inner = {k: u for k, u in subst.items() if k not in vs}
    fv = free_vars(body)
    inner = {k: u for k, u in inner.items() if k in fv}
    if not inner:
        return vs, body
    incoming = frozenset().union(*(free_vars(u) for u in inner.values()))
    renamed = []
    avoid = set(incoming) | set(fv) | set(vs)
    for v in vs:
        if v in incoming:
            w = fresh(v, avoid)
            avoid.add(w)
            inner[v] = Var(w)
            renamed.append(w)
        else:
            renamed.append(v)
    return tuple(renamed), _subst(body, inner)


def _subst(x, subst: dict):
    if not subst:
        return x
    match x:
        case Command(l, r):
            return Command(_subst(l, subst), _subst(r, subst))
        case Var(v):
            return subst.get(v, x)
        case Pair(a, b):
            return Pair(_subst(a, subst), _subst(b, subst))
        case Box(b):
            return Box(_subst(b, subst))
        case Bang(b):
            return Bang(_subst(b, subst))
        case MuNeg(v, c):
            (v,), c = _subst_binder((v,), c, subst)
            return MuNeg(v, c)
        case MuPos(v, c):
            (v,), c = _subst_binder((v,), c, subst)
            return MuPos(v, c)
        case MuBox(v, c):
            (v,), c = _subst_binder((v,), c, subst)
            return MuBox(v, c)
        case MuBang(v, c):
            (v,), c = _subst_binder((v,), c, subst)
            return MuBang(v, c)
        case MuPair(a, b, c):
            (a, b), c = _subst_binder((a, b), c, subst)
            return MuPair(a, b, c)
    return x


# -- alpha-equivalence -----------------------------------------------------


def canonical(x, _env: dict | None = None, _depth: int = 0):
    """Rename bound variables to ``%0, %1, ...`` by binding depth.

    Two terms are alpha-equivalent iff their canonical forms are equal.
    """
    env = _env or {}

    def bind(vs, c):
        env2 = dict(env)
        new = []
        for i, v in enumerate(vs):
            w = Variable(f"%{_depth + i}", v.polarity)
            env2[v] = w
            new.append(w)
        return new, canonical(c, env2, _depth + len(vs))

    match x:
        case Command(l, r):
            return Command(canonical(l, env, _depth), canonical(r, env, _depth))
        case Var(v):
            return Var(env.get(v, v))
        case Pair(a, b):
            return Pair(canonical(a, env, _depth), canonical(b, env, _depth))
        case Box(b):
            return Box(canonical(b, env, _depth))
        case Bang(b):
            return Bang(canonical(b, env, _depth))
        case MuNeg(v, c):
            (w,), c2 = bind((v,), c)
            return MuNeg(w, c2)
        case MuPos(v, c):
            (w,), c2 = bind((v,), c)
            return MuPos(w, c2)
        case MuBox(v, c):
            (w,), c2 = bind((v,), c)
            return MuBox(w, c2)
        case MuBang(v, c):
            (w,), c2 = bind((v,), c)
            return MuBang(w, c2)
        case MuPair(a, b, c):
            (wa, wb), c2 = bind((a, b), c)
            return MuPair(wa, wb, c2)
    return x


def alpha_eq(a, b) -> bool:
    return canonical(a) == canonical(b)


# -- macros ----------------------------------------------------------------


def make_pair(t: Term, u: Term) -> Term:
    """The pair of two arbitrary terms, evaluated left to right."""
    if is_value(t) and is_value(u):
        return Pair(t, u)
    avoid = set(all_vars(t) | all_vars(u))
    a = fresh(neg("a"), avoid)
    avoid.add(a)
    k1 = fresh(Variable("k", polarity(t)), avoid)
    avoid.add(k1)
    k2 = fresh(Variable("k", polarity(u)), avoid)
    inner = Command(Pair(Var(k1), Var(k2)), Var(a))
    return MuNeg(a, Command(t, mu(k1, Command(u, mu(k2, inner)))))


def make_box(t: Term) -> Term:
    if is_value(t):
        return Box(t)
    avoid = set(all_vars(t))
    a = fresh(neg("a"), avoid)
    avoid.add(a)
    k = fresh(Variable("k", polarity(t)), avoid)
    return MuNeg(a, Command(t, mu(k, Command(Box(Var(k)), Var(a)))))


def bang_macro(variables: Iterable[Variable], t: Term) -> Term:
    """``!_{x1..xk} t``: the first variable is bound outermost."""
    vs = list(variables)
    if len(set(vs)) != len(vs):
        raise DuplicateVariable("bang_macro variables repeat")
    for v in vs:
        if v.polarity is not POS:
            raise PolarityMismatch(f"boxed variable {v} must be positive")
    k = fresh(neg("k"), all_vars(t) | set(vs))
    c = Command(Bang(t), Var(k))
    for x in reversed(vs):
        c = Command(MuBang(x, c), Var(x))
    return MuNeg(k, c)


# -- affine usage ----------------------------------------------------------


def occurrences(x) -> Counter:
    """Free occurrence counts."""
    match x:
        case Command(l, r):
            return occurrences(l) + occurrences(r)
        case Var(v):
            return Counter({v: 1})
        case Pair(a, b):
            return occurrences(a) + occurrences(b)
        case Box(b) | Bang(b):
            return occurrences(b)
        case MuNeg(_, c) | MuPos(_, c) | MuBox(_, c) | MuBang(_, c) | MuPair(_, _, c):
            occ = occurrences(c)
            for v in binders(x):
                occ.pop(v, None)
            return occ
    return Counter()


def is_affine(x) -> bool:
    """Every bound variable occurs at most once under its binder."""
    match x:
        case Command(l, r) | Pair(l, r):
            return is_affine(l) and is_affine(r)
        case Box(b) | Bang(b):
            return is_affine(b)
        case MuNeg(_, c) | MuPos(_, c) | MuBox(_, c) | MuBang(_, c) | MuPair(_, _, c):
            occ = occurrences(c)
            return all(occ[v] <= 1 for v in binders(x)) and is_affine(c)
    return True
