"""Affine lambda-calculi embedded in L_foc.

Call-by-name terms become negative terms and stacks positive ones::

    \\a. t   =  mu (-a, +x). <t | +x>
    t u     =  mu +x. <t | (u, +x)>
    u . pi  =  (u, pi)

Call-by-value terms become positive terms and environments negative ones::

    \\x. t   =  { mu (+x, -a). <t | -a> }
    t u     =  mu -a. <t | u . -a>
    u . e   =  mu {-b}. <(u, e) | -b>

``derive_cbn`` also produces a typing derivation for simply typed inputs,
reading the arrow ``N -o M`` as ``N^⊥ ⅋ M`` and a base type ``a`` as the
negative formula ``a^⊥``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from lfoc import constructors as C
from lfoc import typecheck as T
from lfoc.terms import (
    Box,
    Command,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    Pair,
    Term,
    Var,
    make_pair,
    neg,
    pos,
)


class AffinityError(ValueError):
    pass


class LambdaParseError(ValueError):
    pass


class LambdaTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return show_lambda(self)


@dataclass(frozen=True)
class LVar(LambdaTerm):
    name: str


@dataclass(frozen=True)
class LAbs(LambdaTerm):
    name: str
    body: LambdaTerm

    def __post_init__(self):
        if lam_occurrences(self.body, self.name) > 1:
            raise AffinityError(f"\\{self.name} uses its variable more than once")


@dataclass(frozen=True)
class LApp(LambdaTerm):
    fn: LambdaTerm
    arg: LambdaTerm


@dataclass(frozen=True)
class SVar:
    """A stack (CBN) or environment (CBV) variable."""

    name: str


@dataclass(frozen=True)
class Push:
    """``u . pi``."""

    term: LambdaTerm
    rest: SVar | Push


Stack = SVar | Push


def lam_occurrences(t: LambdaTerm, x: str) -> int:
    match t:
        case LVar(y):
            return int(x == y)
        case LAbs(y, b):
            return 0 if x == y else lam_occurrences(b, x)
        case LApp(f, a):
            return lam_occurrences(f, x) + lam_occurrences(a, x)
    raise TypeError(t)


def lam_free_vars(t: LambdaTerm) -> frozenset[str]:
    match t:
        case LVar(y):
            return frozenset({y})
        case LAbs(y, b):
            return lam_free_vars(b) - {y}
        case LApp(f, a):
            return lam_free_vars(f) | lam_free_vars(a)
    raise TypeError(t)


def lam_names(t: LambdaTerm) -> set[str]:
    match t:
        case LVar(y):
            return {y}
        case LAbs(y, b):
            return {y} | lam_names(b)
        case LApp(f, a):
            return lam_names(f) | lam_names(a)
    raise TypeError(t)


def is_affine_lambda(t: LambdaTerm) -> bool:
    """Abstractions use their variable at most once and applications share no free variable."""
    match t:
        case LVar(_):
            return True
        case LAbs(y, b):
            return lam_occurrences(b, y) <= 1 and is_affine_lambda(b)
        case LApp(f, a):
            return not (lam_free_vars(f) & lam_free_vars(a)) and is_affine_lambda(f) and is_affine_lambda(a)
    raise TypeError(t)


def lam_subst(t: LambdaTerm, x: str, u: LambdaTerm) -> LambdaTerm:
    match t:
        case LVar(y):
            return u if y == x else t
        case LAbs(y, b):
            if y == x:
                return t
            if y in lam_free_vars(u):
                avoid = lam_names(b) | lam_names(u) | {x}
                z = next(f"{y}{i}" for i in itertools.count(1) if f"{y}{i}" not in avoid)
                b, y = lam_subst(b, y, LVar(z)), z
            return LAbs(y, lam_subst(b, x, u))
        case LApp(f, a):
            return LApp(lam_subst(f, x, u), lam_subst(a, x, u))
    raise TypeError(t)


def is_lambda_value(t: LambdaTerm) -> bool:
    return isinstance(t, (LVar, LAbs))


# -- text --------------------------------------------------------------------

_LTOK = re.compile(r"\s*(?:(\\)|(\.)|(\()|(\))|([A-Za-z_][A-Za-z0-9_']*))")


def parse_lambda(text: str) -> LambdaTerm:
    """``\\x. t``, application by juxtaposition, parentheses."""
    toks: list[tuple[str, int]] = []
    pos_ = 0
    while pos_ < len(text):
        if text[pos_:].strip() == "":
            break
        m = _LTOK.match(text, pos_)
        if not m:
            raise LambdaParseError(f"unexpected character at offset {pos_}: {text[pos_]!r}")
        toks.append((m.group().strip(), m.start()))
        pos_ = m.end()
    i = 0

    def peek():
        return toks[i][0] if i < len(toks) else ""

    def take(expected=None):
        nonlocal i
        if i >= len(toks):
            raise LambdaParseError("unexpected end of input")
        tok = toks[i][0]
        if expected and tok != expected:
            raise LambdaParseError(f"expected {expected!r} at offset {toks[i][1]}, found {tok!r}")
        i += 1
        return tok

    def expr():
        if peek() == "\\":
            take()
            name = take()
            take(".")
            return LAbs(name, expr())
        out = None
        while peek() not in ("", ")", "."):
            a = expr() if peek() == "\\" else atom()
            out = a if out is None else LApp(out, a)
        if out is None:
            raise LambdaParseError("expected a lambda term")
        return out

    def atom():
        tok = take()
        if tok == "(":
            e = expr()
            take(")")
            return e
        if tok in ("\\", ".", ")"):
            raise LambdaParseError(f"unexpected {tok!r}")
        return LVar(tok)

    t = expr()
    if i != len(toks):
        raise LambdaParseError(f"trailing input at offset {toks[i][1]}")
    return t


def show_lambda(t: LambdaTerm, prec: int = 0) -> str:
    match t:
        case LVar(y):
            return y
        case LAbs(y, b):
            s = f"\\{y}. {show_lambda(b, 0)}"
            return f"({s})" if prec > 0 else s
        case LApp(f, a):
            s = f"{show_lambda(f, 1)} {show_lambda(a, 2)}"
            return f"({s})" if prec > 1 else s
    raise TypeError(t)


# -- encodings ---------------------------------------------------------------


class _Fresh:
    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = itertools.count()

    def __call__(self, stem: str) -> str:
        while True:
            name = f"{stem}{next(self.counter)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def _check_affine(t: LambdaTerm):
    if not is_affine_lambda(t):
        raise AffinityError(f"{t} is not affine")


def _stack_names(s: Stack) -> set[str]:
    out = set()
    while isinstance(s, Push):
        out |= lam_names(s.term)
        s = s.rest
    return out | {s.name}


def encode_cbn(t: LambdaTerm, _fresh: _Fresh | None = None) -> Term:
    _check_affine(t)
    fresh = _fresh or _Fresh(lam_names(t))
    return _cbn(t, fresh)


def _cbn(t: LambdaTerm, fresh: _Fresh) -> Term:
    match t:
        case LVar(a):
            return Var(neg(a))
        case LAbs(a, body):
            x = pos(fresh("x"))
            return MuPair(neg(a), x, Command(_cbn(body, fresh), Var(x)))
        case LApp(f, u):
            x = pos(fresh("x"))
            return MuPos(x, Command(_cbn(f, fresh), Pair(_cbn(u, fresh), Var(x))))
    raise TypeError(t)


def encode_cbn_stack(s: Stack, _fresh: _Fresh | None = None) -> Term:
    fresh = _fresh or _Fresh(_stack_names(s))
    match s:
        case SVar(name):
            return Var(pos(name))
        case Push(u, rest):
            _check_affine(u)
            return Pair(_cbn(u, fresh), encode_cbn_stack(rest, fresh))
    raise TypeError(s)


def encode_cbn_command(t: LambdaTerm, s: Stack) -> Command:
    """``<t | pi>`` for a term and a stack."""
    fresh = _Fresh(lam_names(t) | _stack_names(s))
    _check_affine(t)
    return Command(_cbn(t, fresh), encode_cbn_stack(s, fresh))


def encode_cbv(t: LambdaTerm, _fresh: _Fresh | None = None) -> Term:
    _check_affine(t)
    fresh = _fresh or _Fresh(lam_names(t))
    return _cbv(t, fresh)


def _cbv(t: LambdaTerm, fresh: _Fresh) -> Term:
    match t:
        case LVar(x):
            return Var(pos(x))
        case LAbs(x, body):
            a = neg(fresh("a"))
            return Box(MuPair(pos(x), a, Command(_cbv(body, fresh), Var(a))))
        case LApp(f, u):
            a = neg(fresh("a"))
            return MuNeg(a, Command(_cbv(f, fresh), _cbv_push(_cbv(u, fresh), Var(a), fresh)))
    raise TypeError(t)


def _cbv_push(u: Term, e: Term, fresh: _Fresh) -> Term:
    b = neg(fresh("b"))
    return MuBox(b, Command(make_pair(u, e), Var(b)))


def encode_cbv_env(e: Stack, _fresh: _Fresh | None = None) -> Term:
    fresh = _fresh or _Fresh(_stack_names(e))
    match e:
        case SVar(name):
            return Var(neg(name))
        case Push(u, rest):
            _check_affine(u)
            return _cbv_push(_cbv(u, fresh), encode_cbv_env(rest, fresh), fresh)
    raise TypeError(e)


def encode_cbv_command(t: LambdaTerm, e: Stack) -> Command:
    fresh = _Fresh(lam_names(t) | _stack_names(e))
    _check_affine(t)
    return Command(_cbv(t, fresh), encode_cbv_env(e, fresh))


# -- simple types ------------------------------------------------------------


class LambdaTypeError(TypeError):
    pass


@dataclass(frozen=True)
class TBase:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TArrow:
    dom: SimpleType
    cod: SimpleType

    def __str__(self) -> str:
        d = f"({self.dom})" if isinstance(self.dom, TArrow) else str(self.dom)
        return f"{d} -o {self.cod}"


@dataclass(frozen=True)
class _TMeta:
    ident: int


SimpleType = TBase | TArrow


def formula_of(ty: SimpleType) -> C.Constructor:
    """Negative formula of a CBN type."""
    match ty:
        case TBase(a):
            return C.KVarNeg(a, C.OPOS)
        case TArrow(d, c):
            return C.Parr(C.negate(formula_of(d)), formula_of(c))
    raise TypeError(ty)


class _Unifier:
    def __init__(self):
        self.sub: dict[int, object] = {}
        self.counter = itertools.count()

    def meta(self):
        return _TMeta(next(self.counter))

    def walk(self, t):
        while isinstance(t, _TMeta) and t.ident in self.sub:
            t = self.sub[t.ident]
        return t

    def occurs(self, m: _TMeta, t) -> bool:
        t = self.walk(t)
        if t == m:
            return True
        if isinstance(t, TArrow):
            return self.occurs(m, t.dom) or self.occurs(m, t.cod)
        return False

    def unify(self, a, b):
        a, b = self.walk(a), self.walk(b)
        if a == b:
            return
        if isinstance(a, _TMeta):
            if self.occurs(a, b):
                raise LambdaTypeError("recursive type")
            self.sub[a.ident] = b
        elif isinstance(b, _TMeta):
            self.unify(b, a)
        elif isinstance(a, TArrow) and isinstance(b, TArrow):
            self.unify(a.dom, b.dom)
            self.unify(a.cod, b.cod)
        else:
            raise LambdaTypeError(f"cannot match {a} with {b}")

    def resolve(self, t, base: str = "X"):
        t = self.walk(t)
        if isinstance(t, _TMeta):
            return TBase(base)
        if isinstance(t, TArrow):
            return TArrow(self.resolve(t.dom, base), self.resolve(t.cod, base))
        return t


def _infer(t: LambdaTerm, env: dict, u: _Unifier):
    """Type ``t``; returns a tree ``(type, *subtrees)`` mirroring its shape."""
    match t:
        case LVar(x):
            if x not in env:
                env[x] = u.meta()
            return (env[x],)
        case LAbs(x, body):
            a = u.meta()
            inner = dict(env)
            inner[x] = a
            tb = _infer(body, inner, u)
            for k, v in inner.items():
                if k != x and k not in env:
                    env[k] = v
            return (TArrow(a, tb[0]), tb)
        case LApp(f, arg):
            tf = _infer(f, env, u)
            ta = _infer(arg, env, u)
            r = u.meta()
            u.unify(tf[0], TArrow(ta[0], r))
            return (r, tf, ta)
    raise TypeError(t)


def infer_type(t: LambdaTerm, ty: SimpleType | None = None, base: str = "X"):
    """Principal simple type (leftover variables become ``base``) and the free-variable types."""
    u = _Unifier()
    env: dict = {}
    tree = _infer(t, env, u)
    if ty is not None:
        u.unify(tree[0], ty)
    return u.resolve(tree[0], base), {x: u.resolve(v, base) for x, v in env.items()}


def derive_cbn(
    t: LambdaTerm,
    ty: SimpleType | None = None,
    base: str = "X",
) -> T.Derivation:
    """A MAL derivation of ``⊢ enc(t) : ty | a : ty_a^⊥ ...`` (free variables typed)."""
    _check_affine(t)
    u = _Unifier()
    tree = _infer(t, {}, u)
    if ty is not None:
        try:
            u.unify(tree[0], ty)
        except LambdaTypeError as e:
            raise LambdaTypeError(f"{t} does not have type {ty}: {e}") from None
    return _derive(t, tree, u, base, _Fresh(lam_names(t)))


def _derive(t, tree, u, base, fresh) -> T.Derivation:
    ty = u.resolve(tree[0], base)
    match t:
        case LVar(a):
            return T.ax(neg(a), formula_of(ty))
        case LAbs(a, body):
            d_body = _derive(body, tree[1], u, base, fresh)
            x = pos(fresh("x"))
            cod = formula_of(ty.cod)
            c = T.cut(d_body, T.ax(x, C.negate(cod)))
            if neg(a) not in c.conclusion.context:
                c = T.weaken(c, neg(a), C.negate(formula_of(ty.dom)))
            return T.parr(neg(a), x, c)
        case LApp(f, arg):
            d_f = _derive(f, tree[1], u, base, fresh)
            d_a = _derive(arg, tree[2], u, base, fresh)
            x = pos(fresh("x"))
            stack = T.tensor(d_a, T.ax(x, C.negate(formula_of(ty))))
            return T.mu_rule(x, T.cut(d_f, stack))
    raise TypeError(t)


def derive_cbn_command(t: LambdaTerm, args: list[LambdaTerm], stack_var: str = "pi", base: str = "X") -> T.Derivation:
    """A derivation of ``<t | u1 . ... . un . pi>`` with ``pi`` free."""
    app = t
    for a in args:
        app = LApp(app, a)
    _check_affine(app)
    u = _Unifier()
    env: dict = {}
    tt = _infer(t, env, u)
    trees = [_infer(a, env, u) for a in args]
    res = u.meta()
    want = res
    for tr in reversed(trees):
        want = TArrow(tr[0], want)
    u.unify(tt[0], want)
    fresh = _Fresh(lam_names(app) | {stack_var})
    d_t = _derive(t, tt, u, base, fresh)
    d_stack = T.ax(pos(stack_var), C.negate(formula_of(u.resolve(res, base))))
    for a, tr in reversed(list(zip(args, trees))):
        d_stack = T.tensor(_derive(a, tr, u, base, fresh), d_stack)
    return T.cut(d_t, d_stack)


# -- reference machines ------------------------------------------------------


def krivine(t: LambdaTerm, stack: Stack, fuel: int = 10_000):
    """Weak-head Krivine machine; returns (term, stack, pushes, pops) at the halt."""
    pushes = pops = 0
    for _ in range(fuel):
        match t:
            case LApp(f, a):
                t, stack = f, Push(a, stack)
                pushes += 1
            case LAbs(x, body) if isinstance(stack, Push):
                t, stack = lam_subst(body, x, stack.term), stack.rest
                pops += 1
            case _:
                return t, stack, pushes, pops
    raise RuntimeError("Krivine machine ran out of fuel")
