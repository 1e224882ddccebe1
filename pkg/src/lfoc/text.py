"""Concrete syntax for terms, commands, kinds and constructors.

Terms::

    t ::= +x | -a                      variables (sigil gives the polarity)
        | (V, V') | {V} | !V
        | mu -a. c | mu +x. c | mu (k, k'). c | mu {k}. c | mu !(k). c
        | @+name | @-name               instructions
        | nat:N | daimon+ | daimon-
    c ::= <t | u>

``(t, u)`` and ``{t}`` on non-values expand to the evaluation-order macros.

Kinds and constructors::

    k ::= i | o+ | o- | k -> k
    T ::= \\x:k. T | forall x:k. T | exists x:k. T | [T = U] T
        | T | T  (par) | T * T  (tensor) | dn T | up T | !T | ?T
        | T U | x^k | x | ~T | 0 | s | N | rec[k] | ~rec[k] | (T)

A bare ``x`` refers to the nearest enclosing binder; free variables carry
their kind as ``x^k``.  ``~`` negates its atom, so ``~x^k`` is the negated
variable and ``~rec[k]`` the negated recursor.  ``N`` abbreviates ``s (... 0)``.
"""

from __future__ import annotations

import re
from collections.abc import Mapping

from lfoc import constructors as C
from lfoc.terms import (
    Bang,
    Box,
    Command,
    Daimon,
    MuBang,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    NatConst,
    NegInstr,
    Pair,
    PosInstr,
    Term,
    TermError,
    Var,
    Variable,
    NEG,
    POS,
    is_value,
    make_box,
    make_pair,
    mu,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{line}:{col}: {message}")
        self.line, self.col = line, col


_IDENT = r"[A-Za-z_%][A-Za-z0-9_'%]*"


class _Lexer:
    def __init__(self, text: str, spec: list[tuple[str, str]]):
        self.text = text
        regex = "|".join(f"(?P<{k}>{r})" for k, r in spec)
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        pat = re.compile(regex)
        while pos < len(text):
            m = pat.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
            if m.lastgroup not in ("WS", "COMMENT"):
                self.toks.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.toks.append(("EOF", "", len(text)))
        self.i = 0

    def peek(self, k: int = 0) -> tuple[str, str, int]:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        kind, v, _ = self.peek()
        return v == value and kind != "EOF"

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value or tok[0] == "EOF":
            self.fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok[2])

    def done(self):
        if self.peek()[0] != "EOF":
            self.fail(f"trailing input {self.peek()[1]!r}")


# -- terms -------------------------------------------------------------------

_TERM_SPEC = [
    ("WS", r"\s+"),
    ("COMMENT", r"\#[^\n]*"),
    ("DAIMON", r"daimon[+-]"),
    ("NAT", r"nat:\d+"),
    ("INSTR", r"@[+-]" + _IDENT),
    ("VAR", r"[+-]" + _IDENT),
    ("KW", r"mu\b"),
    ("PUNCT", r"[<>|(){},.!]"),
]


def _variable(tok) -> Variable:
    return Variable(tok[1][1:], POS if tok[1][0] == "+" else NEG)


class _TermParser:
    def __init__(self, text: str):
        self.lx = _Lexer(text, _TERM_SPEC)

    def var(self) -> Variable:
        tok = self.lx.next()
        if tok[0] != "VAR":
            self.lx.fail("expected a variable such as +x or -a", tok)
        return _variable(tok)

    def command(self) -> Command:
        lx = self.lx
        start = lx.expect("<")
        t = self.term()
        lx.expect("|")
        u = self.term()
        lx.expect(">")
        try:
            return Command(t, u)
        except TermError as e:
            lx.fail(str(e), start)

    def term(self) -> Term:
        lx = self.lx
        tok = lx.peek()
        kind, v, _ = tok
        try:
            if kind == "VAR":
                lx.next()
                return Var(_variable(tok))
            if kind == "DAIMON":
                lx.next()
                return Daimon(POS if v.endswith("+") else NEG)
            if kind == "NAT":
                lx.next()
                return NatConst(int(v[4:]))
            if kind == "INSTR":
                lx.next()
                return (PosInstr if v[1] == "+" else NegInstr)(v[2:])
            if kind == "KW":
                lx.next()
                return self.binder()
            if v == "(":
                lx.next()
                a = self.term()
                lx.expect(",")
                b = self.term()
                lx.expect(")")
                return make_pair(a, b)
            if v == "{":
                lx.next()
                a = self.term()
                lx.expect("}")
                return make_box(a)
            if v == "!":
                lx.next()
                a = self.term()
                if not is_value(a):
                    lx.fail("!V needs a value", tok)
                return Bang(a)
        except TermError as e:
            lx.fail(str(e), tok)
        lx.fail(f"expected a term, found {v or 'end of input'!r}", tok)

    def binder(self) -> Term:
        lx = self.lx
        if lx.at("("):
            lx.next()
            a = self.var()
            lx.expect(",")
            b = self.var()
            lx.expect(")")
            lx.expect(".")
            return MuPair(a, b, self.command())
        if lx.at("{"):
            lx.next()
            a = self.var()
            lx.expect("}")
            lx.expect(".")
            return MuBox(a, self.command())
        if lx.at("!"):
            lx.next()
            lx.expect("(")
            a = self.var()
            lx.expect(")")
            lx.expect(".")
            return MuBang(a, self.command())
        a = self.var()
        lx.expect(".")
        return mu(a, self.command())


def parse_term(text: str) -> Term:
    p = _TermParser(text)
    t = p.term()
    p.lx.done()
    return t


def parse_command(text: str) -> Command:
    p = _TermParser(text)
    c = p.command()
    p.lx.done()
    return c


def parse(text: str) -> Term | Command:
    """A command if the text starts with ``<``, otherwise a term."""
    p = _TermParser(text)
    out = p.command() if p.lx.at("<") else p.term()
    p.lx.done()
    return out


def show_term(t: Term) -> str:
    match t:
        case Var(v):
            return str(v)
        case Pair(a, b):
            return f"({show_term(a)}, {show_term(b)})"
        case Box(b):
            return "{" + show_term(b) + "}"
        case Bang(b):
            return "!" + show_term(b)
        case PosInstr(n):
            return f"@+{n}"
        case NegInstr(n):
            return f"@-{n}"
        case NatConst(n):
            return f"nat:{n}"
        case Daimon(p):
            return f"daimon{p}"
        case MuNeg(v, c) | MuPos(v, c):
            return f"mu {v}. {show_command(c)}"
        case MuPair(a, b, c):
            return f"mu ({a}, {b}). {show_command(c)}"
        case MuBox(a, c):
            return f"mu {{{a}}}. {show_command(c)}"
        case MuBang(a, c):
            return f"mu !({a}). {show_command(c)}"
    raise TypeError(f"not a term: {t!r}")


def show_command(c: Command) -> str:
    return f"<{show_term(c.left)} | {show_term(c.right)}>"


# -- kinds and constructors --------------------------------------------------

_CONS_SPEC = [
    ("WS", r"\s+"),
    ("COMMENT", r"\#[^\n]*"),
    ("ARROW", r"->"),
    ("OKIND", r"o[+-](?![A-Za-z0-9_'%])"),
    ("NUM", r"\d+"),
    ("IDENT", _IDENT),
    ("PUNCT", r"[\\:.()\[\]=*|!?~^]"),
]

_KEYWORDS = {"dn", "up", "forall", "exists", "rec", "s"}


class _ConsParser:
    def __init__(self, text: str, env: Mapping[str, C.Kind] | None = None):
        self.lx = _Lexer(text, _CONS_SPEC)
        self.env = dict(env or {})

    # kinds
    def kind(self) -> C.Kind:
        k = self.katom()
        if self.lx.peek()[0] == "ARROW":
            self.lx.next()
            return C.Arrow(k, self.kind())
        return k

    def katom(self) -> C.Kind:
        tok = self.lx.next()
        if tok[1] == "i":
            return C.IOTA
        if tok[1] == "o+":
            return C.OPOS
        if tok[1] == "o-":
            return C.ONEG
        if tok[1] == "(":
            k = self.kind()
            self.lx.expect(")")
            return k
        self.lx.fail("expected a kind (i, o+, o-, k -> k)", tok)

    # constructors
    def expr(self, scope: tuple) -> C.Constructor:
        lx = self.lx
        tok = lx.peek()
        if tok[1] in ("\\", "forall", "exists") and tok[0] != "EOF":
            lx.next()
            name = lx.next()
            if name[0] != "IDENT" or name[1] in _KEYWORDS:
                lx.fail("expected a binder name", name)
            lx.expect(":")
            k = self.kind()
            lx.expect(".")
            body = self.expr(scope + ((name[1], k),))
            cls = {"\\": C.Lam, "forall": C.Forall, "exists": C.Exists}[tok[1]]
            return cls(name[1], k, body)
        if tok[1] == "[":
            lx.next()
            a = self.expr(scope)
            lx.expect("=")
            b = self.expr(scope)
            lx.expect("]")
            return C.EqGuard(a, b, self.expr(scope))
        return self.parr(scope)

    def parr(self, scope):
        out = self.tensor(scope)
        while self.lx.at("|"):
            self.lx.next()
            out = C.Parr(out, self.tensor(scope))
        return out

    def tensor(self, scope):
        out = self.prefix(scope)
        while self.lx.at("*"):
            self.lx.next()
            out = C.Tensor(out, self.prefix(scope))
        return out

    def prefix(self, scope):
        tok = self.lx.peek()
        ops = {"dn": C.ShiftDown, "up": C.ShiftUp, "!": C.Bang, "?": C.Quest}
        if tok[1] in ops and tok[0] != "EOF":
            self.lx.next()
            return ops[tok[1]](self.prefix(scope))
        if tok[1] in ("\\", "forall", "exists", "["):
            return self.expr(scope)
        return self.app(scope)

    def _starts_atom(self) -> bool:
        kind, v, _ = self.lx.peek()
        if kind == "NUM":
            return True
        if kind == "IDENT":
            return v not in _KEYWORDS or v in ("s", "rec")
        return v in ("(", "~")

    def app(self, scope):
        if not self._starts_atom():
            self.lx.fail(f"expected a constructor, found {self.lx.peek()[1] or 'end of input'!r}")
        out = self.atom(scope)
        while self._starts_atom():
            out = C.App(out, self.atom(scope))
        return out

    def atom(self, scope):
        lx = self.lx
        tok = lx.next()
        kind, v, _ = tok
        if kind == "NUM":
            return C.numeral(int(v))
        if v == "s":
            return C.SUCC
        if v == "rec":
            lx.expect("[")
            k = self.kind()
            lx.expect("]")
            return C.Rec(k)
        if v == "~":
            return C.negate(self.atom(scope))
        if v == "(":
            e = self.expr(scope)
            lx.expect(")")
            return e
        if kind == "IDENT" and v not in _KEYWORDS:
            if v == "0":
                return C.ZERO
            if lx.at("^"):
                lx.next()
                return C.KVar(v, self.katom())
            for name, k in reversed(scope):
                if name == v:
                    return C.KVar(v, k)
            if v in self.env:
                return C.KVar(v, self.env[v])
            lx.fail(f"unbound constructor variable {v!r}; write {v}^kind", tok)
        lx.fail(f"expected a constructor, found {v or 'end of input'!r}", tok)


def parse_kind(text: str) -> C.Kind:
    p = _ConsParser(text)
    k = p.kind()
    p.lx.done()
    return k


def parse_constructor(text: str, env: Mapping[str, C.Kind] | None = None) -> C.Constructor:
    """Parse a constructor; ``env`` gives kinds to bare free variable names."""
    p = _ConsParser(text, env)
    t = p.expr(())
    p.lx.done()
    return t


def show_kind(k: C.Kind, atomic: bool = False) -> str:
    match k:
        case C.Iota():
            return "i"
        case C.OPos():
            return "o+"
        case C.ONeg():
            return "o-"
        case C.Arrow(d, c):
            s = f"{show_kind(d, True)} -> {show_kind(c)}"
            return f"({s})" if atomic else s
    raise TypeError(f"not a kind: {k!r}")


_BIND, _PARR, _TENSOR, _PREFIX, _APP, _ATOM = range(6)


def _show_var(name: str, kind: C.Kind, scope: tuple) -> str:
    for n, k in reversed(scope):
        if n == name:
            if k == kind:
                return name
            break
    return f"{name}^{show_kind(kind, True)}"


def _show(t: C.Constructor, prec: int, scope: tuple) -> str:
    def wrap(level: int, s: str) -> str:
        return f"({s})" if level < prec else s

    match t:
        case C.KVar(x, k):
            return _show_var(x, k, scope)
        case C.KVarNeg(x, k):
            return "~" + _show_var(x, k, scope)
        case C.Zero():
            return "0"
        case C.Succ():
            return "s"
        case C.Rec(k):
            return f"rec[{show_kind(k)}]"
        case C.RecNeg(k):
            return f"~rec[{show_kind(k)}]"
        case C.App(f, a):
            n = C.as_numeral(t)
            if n is not None:
                return str(n)
            return wrap(_APP, f"{_show(f, _APP, scope)} {_show(a, _ATOM, scope)}")
        case C.Lam(x, k, body) | C.Forall(x, k, body) | C.Exists(x, k, body):
            head = {C.Lam: "\\", C.Forall: "forall ", C.Exists: "exists "}[type(t)]
            inner = _show(body, _BIND, scope + ((x, k),))
            return wrap(_BIND, f"{head}{x}:{show_kind(k)}. {inner}")
        case C.EqGuard(a, b, body):
            s = f"[{_show(a, _BIND, scope)} = {_show(b, _BIND, scope)}] {_show(body, _BIND, scope)}"
            return wrap(_BIND, s)
        case C.Parr(a, b):
            return wrap(_PARR, f"{_show(a, _PARR, scope)} | {_show(b, _TENSOR, scope)}")
        case C.Tensor(a, b):
            return wrap(_TENSOR, f"{_show(a, _TENSOR, scope)} * {_show(b, _PREFIX, scope)}")
        case C.ShiftDown(a) | C.ShiftUp(a) | C.Bang(a) | C.Quest(a):
            op = {C.ShiftDown: "dn ", C.ShiftUp: "up ", C.Bang: "!", C.Quest: "?"}[type(t)]
            return wrap(_PREFIX, op + _show(a, _PREFIX, scope))
    raise TypeError(f"not a constructor: {t!r}")


def show_constructor(t: C.Constructor) -> str:
    return _show(t, _BIND, ())
