"""Kinds, type constructors, negation and convertibility.

Constructor variables carry their kind, so a variable is identified by the
pair ``(name, kind)`` and kind checking needs no environment.  ``KVarNeg``
is the negated occurrence of a variable; substituting ``R`` for ``x`` turns
``x^⊥`` into ``negate(R)``.

Convertibility is decided by normalization (beta, recursor unfolding on
numerals, then eta) followed by comparison up to renaming of bound
variables.  An optional arithmetic view compares ``iota``-kinded terms
built from ``0``, ``s`` and the addition recursor as multisets of atoms plus
a constant, which makes the commutative monoid laws of ``+`` hold on open
terms.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

# -- kinds -------------------------------------------------------------------


class Kind:
    __slots__ = ()

    def __str__(self) -> str:
        from lfoc.text import show_kind

        return show_kind(self)


@dataclass(frozen=True, repr=False)
class Iota(Kind):
    def __repr__(self) -> str:
        return "IOTA"


@dataclass(frozen=True, repr=False)
class OPos(Kind):
    def __repr__(self) -> str:
        return "OPOS"


@dataclass(frozen=True, repr=False)
class ONeg(Kind):
    def __repr__(self) -> str:
        return "ONEG"


@dataclass(frozen=True)
class Arrow(Kind):
    dom: Kind
    cod: Kind


IOTA = Iota()
OPOS = OPos()
ONEG = ONeg()


def arrow(*kinds: Kind) -> Kind:
    """Right-nested arrow ``k1 -> k2 -> ... -> kn``."""
    out = kinds[-1]
    for k in reversed(kinds[:-1]):
        out = Arrow(k, out)
    return out


def negate_kind(k: Kind) -> Kind:
    match k:
        case OPos():
            return ONEG
        case ONeg():
            return OPOS
        case Arrow(d, c):
            return Arrow(d, negate_kind(c))
    return k


def is_formula_kind(k: Kind) -> bool:
    return isinstance(k, (OPos, ONeg))


# -- constructors ------------------------------------------------------------


class Constructor:
    __slots__ = ()

    def __str__(self) -> str:
        from lfoc.text import show_constructor

        return show_constructor(self)


@dataclass(frozen=True)
class KVar(Constructor):
    name: str
    kind: Kind


@dataclass(frozen=True)
class KVarNeg(Constructor):
    """``x^⊥`` for the variable ``x`` of kind ``kind``."""

    name: str
    kind: Kind


@dataclass(frozen=True)
class Lam(Constructor):
    name: str
    kind: Kind
    body: Constructor


@dataclass(frozen=True)
class App(Constructor):
    fn: Constructor
    arg: Constructor


@dataclass(frozen=True)
class Zero(Constructor):
    pass


@dataclass(frozen=True)
class Succ(Constructor):
    pass


@dataclass(frozen=True)
class Rec(Constructor):
    kind: Kind


@dataclass(frozen=True)
class RecNeg(Constructor):
    kind: Kind


@dataclass(frozen=True)
class Tensor(Constructor):
    left: Constructor
    right: Constructor


@dataclass(frozen=True)
class Parr(Constructor):
    left: Constructor
    right: Constructor


@dataclass(frozen=True)
class Exists(Constructor):
    name: str
    kind: Kind
    body: Constructor


@dataclass(frozen=True)
class Forall(Constructor):
    name: str
    kind: Kind
    body: Constructor


@dataclass(frozen=True)
class ShiftDown(Constructor):
    body: Constructor


@dataclass(frozen=True)
class ShiftUp(Constructor):
    body: Constructor


@dataclass(frozen=True)
class Bang(Constructor):
    body: Constructor


@dataclass(frozen=True)
class Quest(Constructor):
    body: Constructor


@dataclass(frozen=True)
class EqGuard(Constructor):
    """``[T = U] A``."""

    lhs: Constructor
    rhs: Constructor
    body: Constructor


ZERO = Zero()
SUCC = Succ()

_BINDERS = (Lam, Exists, Forall)


class KindError(TypeError):
    def __init__(self, message: str, subterm: Constructor | None = None):
        super().__init__(message if subterm is None else f"{message}: {subterm}")
        self.subterm = subterm


class FuelExhausted(RuntimeError):
    """Conversion could not be decided within the fuel budget."""


def apply(fn: Constructor, *args: Constructor) -> Constructor:
    for a in args:
        fn = App(fn, a)
    return fn


def numeral(n: int) -> Constructor:
    out: Constructor = ZERO
    for _ in range(n):
        out = App(SUCC, out)
    return out


def as_numeral(t: Constructor) -> int | None:
    n = 0
    while isinstance(t, App) and isinstance(t.fn, Succ):
        n += 1
        t = t.arg
    return n if isinstance(t, Zero) else None


def rec_kind(tau: Kind, negated: bool = False) -> Kind:
    """``tau -> (iota -> tau -> tau) -> iota -> tau``, ending in ``tau^⊥`` if negated."""
    step = arrow(IOTA, tau, tau)
    return arrow(tau, step, IOTA, negate_kind(tau) if negated else tau)


# -- kinding -----------------------------------------------------------------


def _formula(t: Constructor, env) -> Kind:
    k = kind_check(t, env)
    if not is_formula_kind(k):
        raise KindError(f"expected a formula (o+ or o-), got {k}", t)
    return k


def kind_check(t: Constructor, env: Mapping[str, Kind] | None = None) -> Kind:
    """The kind of ``t``; ``env`` optionally pins the kinds of free variable names."""
    if env:
        return _kind_check(t, env)
    cached = t.__dict__.get("_kind")
    if cached is None:
        cached = _kind_check(t, {})
        object.__setattr__(t, "_kind", cached)
    return cached


def _kind_check(t: Constructor, env: Mapping[str, Kind]) -> Kind:
    match t:
        case KVar(x, k) | KVarNeg(x, k):
            if x in env and env[x] != k:
                raise KindError(f"variable {x} used at {k} but declared {env[x]}", t)
            return k if isinstance(t, KVar) else negate_kind(k)
        case Lam(x, k, body):
            inner = {n: v for n, v in env.items() if n != x}
            return Arrow(k, kind_check(body, inner))
        case App(f, a):
            kf = kind_check(f, env)
            ka = kind_check(a, env)
            if not isinstance(kf, Arrow):
                raise KindError(f"applying a constructor of kind {kf}", t)
            if kf.dom != ka:
                raise KindError(f"argument of kind {ka} where {kf.dom} expected", t)
            return kf.cod
        case Zero():
            return IOTA
        case Succ():
            return Arrow(IOTA, IOTA)
        case Rec(k):
            return rec_kind(k)
        case RecNeg(k):
            return rec_kind(k, negated=True)
        case Tensor(a, b) | Parr(a, b):
            _formula(a, env)
            _formula(b, env)
            return OPOS if isinstance(t, Tensor) else ONEG
        case ShiftDown(a) | Bang(a):
            _formula(a, env)
            return OPOS
        case ShiftUp(a) | Quest(a):
            _formula(a, env)
            return ONEG
        case Exists(x, k, body) | Forall(x, k, body):
            inner = {n: v for n, v in env.items() if n != x}
            return _formula(body, inner)
        case EqGuard(lhs, rhs, body):
            kl, kr = kind_check(lhs, env), kind_check(rhs, env)
            if kl != kr:
                raise KindError(f"guard sides have kinds {kl} and {kr}", t)
            return _formula(body, env)
    raise KindError("not a constructor", t)


def polarity_of(t: Constructor) -> str:
    """``'+'`` or ``'-'`` for a formula."""
    k = _formula(t, None)
    return "+" if isinstance(k, OPos) else "-"


# -- negation ----------------------------------------------------------------


def negate(t: Constructor) -> Constructor:
    match t:
        case KVar(x, k):
            return KVarNeg(x, k)
        case KVarNeg(x, k):
            return KVar(x, k)
        case Lam(x, k, body):
            return Lam(x, k, negate(body))
        case App(f, a):
            return App(negate(f), a)
        case Rec(k):
            return RecNeg(k)
        case RecNeg(k):
            return Rec(k)
        case Tensor(a, b):
            return Parr(negate(a), negate(b))
        case Parr(a, b):
            return Tensor(negate(a), negate(b))
        case Exists(x, k, body):
            return Forall(x, k, negate(body))
        case Forall(x, k, body):
            return Exists(x, k, negate(body))
        case ShiftDown(a):
            return ShiftUp(negate(a))
        case ShiftUp(a):
            return ShiftDown(negate(a))
        case Bang(a):
            return Quest(negate(a))
        case Quest(a):
            return Bang(negate(a))
        case EqGuard(lhs, rhs, body):
            return EqGuard(lhs, rhs, negate(body))
    return t  # 0, s


# -- variables and substitution ----------------------------------------------

VarKey = tuple[str, Kind]


def free_vars(t: Constructor) -> frozenset[VarKey]:
    # constructors are immutable, so the result is cached on the instance
    cached = t.__dict__.get("_fv")
    if cached is None:
        cached = _free_vars(t)
        object.__setattr__(t, "_fv", cached)
    return cached


def _free_vars(t: Constructor) -> frozenset[VarKey]:
    match t:
        case KVar(x, k) | KVarNeg(x, k):
            return frozenset({(x, k)})
        case Lam(x, k, body) | Exists(x, k, body) | Forall(x, k, body):
            return free_vars(body) - {(x, k)}
        case App(a, b) | Tensor(a, b) | Parr(a, b):
            return free_vars(a) | free_vars(b)
        case ShiftDown(a) | ShiftUp(a) | Bang(a) | Quest(a):
            return free_vars(a)
        case EqGuard(a, b, c):
            return free_vars(a) | free_vars(b) | free_vars(c)
    return frozenset()


def _names(t: Constructor) -> set[str]:
    match t:
        case KVar(x, _) | KVarNeg(x, _):
            return {x}
        case Lam(x, _, body) | Exists(x, _, body) | Forall(x, _, body):
            return {x} | _names(body)
        case App(a, b) | Tensor(a, b) | Parr(a, b):
            return _names(a) | _names(b)
        case ShiftDown(a) | ShiftUp(a) | Bang(a) | Quest(a):
            return _names(a)
        case EqGuard(a, b, c):
            return _names(a) | _names(b) | _names(c)
    return set()


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789'") or "v"
    for i in itertools.count(1):
        if f"{stem}{i}" not in avoid:
            return f"{stem}{i}"
    raise AssertionError


def subst(t: Constructor, mapping: Mapping[VarKey, Constructor]) -> Constructor:
    """Simultaneous capture-avoiding substitution of constructors for variables."""
    mapping = {k: v for k, v in mapping.items() if k in free_vars(t)}
    if not mapping:
        return t
    match t:
        case KVar(x, k):
            return mapping.get((x, k), t)
        case KVarNeg(x, k):
            return negate(mapping[(x, k)]) if (x, k) in mapping else t
        case Lam(x, k, body) | Exists(x, k, body) | Forall(x, k, body):
            inner = {v: u for v, u in mapping.items() if v != (x, k)}
            incoming = set()
            for u in inner.values():
                incoming |= {n for n, _ in free_vars(u)}
            if x in incoming:
                y = fresh_name(x, incoming | _names(body) | {n for n, _ in inner})
                inner[(x, k)] = KVar(y, k)
                x = y
            return type(t)(x, k, subst(body, inner))
        case App(a, b):
            return App(subst(a, mapping), subst(b, mapping))
        case Tensor(a, b) | Parr(a, b):
            return type(t)(subst(a, mapping), subst(b, mapping))
        case ShiftDown(a) | ShiftUp(a) | Bang(a) | Quest(a):
            return type(t)(subst(a, mapping))
        case EqGuard(a, b, c):
            return EqGuard(subst(a, mapping), subst(b, mapping), subst(c, mapping))
    return t


def subst1(t: Constructor, name: str, kind: Kind, u: Constructor) -> Constructor:
    return subst(t, {(name, kind): u})


# -- alpha-equivalence -------------------------------------------------------


def _debruijn(t: Constructor, env: tuple):
    """A hashable nameless rendering; bound variables become binder depths."""

    def lookup(x, k):
        for depth in range(len(env) - 1, -1, -1):
            if env[depth] == (x, k):
                return ("b", depth)
        return ("f", x, k)

    match t:
        case KVar(x, k):
            return ("v", lookup(x, k))
        case KVarNeg(x, k):
            return ("nv", lookup(x, k))
        case Lam(x, k, body) | Exists(x, k, body) | Forall(x, k, body):
            return (type(t).__name__, k, _debruijn(body, env + ((x, k),)))
        case App(a, b) | Tensor(a, b) | Parr(a, b):
            return (type(t).__name__, _debruijn(a, env), _debruijn(b, env))
        case ShiftDown(a) | ShiftUp(a) | Bang(a) | Quest(a):
            return (type(t).__name__, _debruijn(a, env))
        case EqGuard(a, b, c):
            return ("guard", _debruijn(a, env), _debruijn(b, env), _debruijn(c, env))
    return t


def alpha_eq(a: Constructor, b: Constructor) -> bool:
    return _debruijn(a, ()) == _debruijn(b, ())


# -- normalization -----------------------------------------------------------


class _Fuel:
    def __init__(self, n: int):
        self.left = n

    def tick(self):
        if self.left <= 0:
            raise FuelExhausted("constructor normalization ran out of fuel")
        self.left -= 1


def _spine(t: Constructor) -> tuple[Constructor, list[Constructor]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, args[::-1]


def _nf(t: Constructor, fuel: _Fuel) -> Constructor:
    match t:
        case App(f, a):
            f2 = _nf(f, fuel)
            if isinstance(f2, Lam):
                fuel.tick()
                return _nf(subst1(f2.body, f2.name, f2.kind, a), fuel)
            a2 = _nf(a, fuel)
            head, args = _spine(f2)
            if isinstance(head, (Rec, RecNeg)) and len(args) == 2:
                base, step = args
                n = as_pred(a2)
                if isinstance(a2, Zero):
                    fuel.tick()
                    return base if isinstance(head, Rec) else _nf(negate(base), fuel)
                if n is not None:
                    fuel.tick()
                    inner = apply(Rec(head.kind), base, step, n)
                    st = step if isinstance(head, Rec) else negate(step)
                    return _nf(apply(st, n, inner), fuel)
            return App(f2, a2)
        case Lam(x, k, body):
            b = _nf(body, fuel)
            if isinstance(b, App) and b.arg == KVar(x, k) and (x, k) not in free_vars(b.fn):
                return b.fn
            return Lam(x, k, b)
        case Exists(x, k, body) | Forall(x, k, body):
            return type(t)(x, k, _nf(body, fuel))
        case Tensor(a, b) | Parr(a, b):
            return type(t)(_nf(a, fuel), _nf(b, fuel))
        case ShiftDown(a) | ShiftUp(a) | Bang(a) | Quest(a):
            return type(t)(_nf(a, fuel))
        case EqGuard(a, b, c):
            return EqGuard(_nf(a, fuel), _nf(b, fuel), _nf(c, fuel))
    return t


def as_pred(t: Constructor) -> Constructor | None:
    """``n`` if ``t`` is ``s n``."""
    if isinstance(t, App) and isinstance(t.fn, Succ):
        return t.arg
    return None


def normalize(t: Constructor, fuel: int = 100_000) -> Constructor:
    """Normal form under beta, recursor unfolding and eta; raises FuelExhausted."""
    return _nf(t, _Fuel(fuel))


# -- arithmetic view ---------------------------------------------------------


def _is_succ_step(t: Constructor) -> bool:
    """``\\a:i. s``, the normal form of ``\\a. \\b. s b``."""
    return (
        isinstance(t, Lam)
        and t.kind == IOTA
        and isinstance(t.body, Succ)
    )


def _sum(t: Constructor, env: tuple) -> tuple[int, Counter]:
    match t:
        case Zero():
            return 0, Counter()
        case App(Succ(), n):
            c, atoms = _sum(n, env)
            return c + 1, atoms
        case KVarNeg(x, k) if k == IOTA:
            return _sum(KVar(x, k), env)
    head, args = _spine(t)
    if isinstance(head, (Rec, RecNeg)) and head.kind == IOTA and len(args) == 3 and _is_succ_step(args[1]):
        c1, a1 = _sum(args[0], env)
        c2, a2 = _sum(args[2], env)
        return c1 + c2, a1 + a2
    return 0, Counter({repr(_key(t, env, True, top=False)): 1})


def _key(t: Constructor, env: tuple, arith: bool, top: bool = True):
    """Nameless comparison key; iota terms become sums when ``arith`` is set."""
    if arith and top and _kind_or_none(t) == IOTA:
        c, atoms = _sum(t, env)
        return ("sum", c, tuple(sorted(atoms.elements())))

    def lookup(x, k):
        for depth in range(len(env) - 1, -1, -1):
            if env[depth] == (x, k):
                return ("b", depth)
        return ("f", x, k)

    match t:
        case KVar(x, k):
            return ("v", lookup(x, k))
        case KVarNeg(x, k):
            return ("nv", lookup(x, k))
        case Lam(x, k, body) | Exists(x, k, body) | Forall(x, k, body):
            return (type(t).__name__, k, _key(body, env + ((x, k),), arith))
        case App(a, b) | Tensor(a, b) | Parr(a, b):
            return (type(t).__name__, _key(a, env, arith), _key(b, env, arith))
        case ShiftDown(a) | ShiftUp(a) | Bang(a) | Quest(a):
            return (type(t).__name__, _key(a, env, arith))
        case EqGuard(a, b, c):
            return ("guard", _key(a, env, arith), _key(b, env, arith), _key(c, env, arith))
    return t


def _kind_or_none(t: Constructor) -> Kind | None:
    try:
        return kind_check(t)
    except KindError:
        return None


def conv_check(
    t: Constructor,
    u: Constructor,
    fuel: int = 100_000,
    arithmetic: bool = True,
) -> bool:
    """Decide ``t ≅ u``; raises FuelExhausted when the budget runs out.

    Terms of different kinds are never convertible.
    """
    if kind_check(t) != kind_check(u):
        return False
    nt, nu = normalize(t, fuel), normalize(u, fuel)
    if _debruijn(nt, ()) == _debruijn(nu, ()):
        return True
    if not arithmetic:
        return False
    return _key(nt, (), True) == _key(nu, (), True)


# -- arithmetic on conditions -------------------------------------------------


def plus() -> Constructor:
    """``\\p. \\q. rec_iota p (\\a. \\b. s b) q``."""
    p, q = KVar("p", IOTA), KVar("q", IOTA)
    step = Lam("a", IOTA, Lam("b", IOTA, App(SUCC, KVar("b", IOTA))))
    return Lam("p", IOTA, Lam("q", IOTA, apply(Rec(IOTA), p, step, q)))


def add(a: Constructor, b: Constructor) -> Constructor:
    return apply(plus(), a, b)


__all__ = [
    "App",
    "Arrow",
    "Bang",
    "Constructor",
    "EqGuard",
    "Exists",
    "Forall",
    "FuelExhausted",
    "IOTA",
    "Iota",
    "KVar",
    "KVarNeg",
    "Kind",
    "KindError",
    "Lam",
    "ONEG",
    "ONeg",
    "OPOS",
    "OPos",
    "Parr",
    "Quest",
    "Rec",
    "RecNeg",
    "SUCC",
    "ShiftDown",
    "ShiftUp",
    "Succ",
    "Tensor",
    "ZERO",
    "Zero",
    "add",
    "alpha_eq",
    "apply",
    "arrow",
    "as_numeral",
    "conv_check",
    "free_vars",
    "kind_check",
    "negate",
    "negate_kind",
    "normalize",
    "numeral",
    "plus",
    "subst",
    "subst1",
]
