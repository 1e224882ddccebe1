"""Checking explicit typing derivations and computing their weights.

A derivation is a tree of rule applications.  Every node states its
conclusion; ``check`` recomputes what each rule allows from the premises and
the node's annotations and compares.  Contexts map variables to formulas,
with a positive variable always typed by a negative formula and vice versa
(``x : P^⊥`` in the positive axiom).

The builder functions at the bottom compute conclusions for you and check
each node as it is built.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace

from lfoc import constructors as C
from lfoc.quantity import MonoidCapabilityError, MonoidSpec
from lfoc.terms import (
    NEG,
    POS,
    Box,
    Command,
    MuBang,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    Pair,
    Polarity,
    Term,
    Var,
    Variable,
    alpha_eq,
    bang_macro,
    free_vars,
    is_value,
    polarity,
    substitute,
)

RULES = (
    "AxPos",
    "AxNeg",
    "MuPos",
    "MuNeg",
    "Cut",
    "Tensor",
    "Parr",
    "ShiftDown",
    "ShiftUp",
    "Exists",
    "Forall",
    "Conv",
    "Weaken",
    "BangK",
    "MultiplexN",
    "Contract",
)

MODES = ("mal", "sal", "pa")
_SAL_ONLY = {"BangK", "MultiplexN"}
_PA_ONLY = {"Contract"}


class DerivationError(ValueError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"at {path}: {reason}")
        self.path = path
        self.reason = reason


class RuleMismatch(DerivationError):
    pass


class SplitError(DerivationError):
    pass


class AffinityError(DerivationError):
    pass


class ConvUnknown(DerivationError):
    """A conversion check ran out of fuel."""


class ContractInQuantitative(TypeError):
    pass


Context = dict[Variable, C.Constructor]


@dataclass(frozen=True, eq=False)
class TermJ:
    """``⊢ t : A | Γ``."""

    term: Term
    formula: C.Constructor
    context: Context = field(default_factory=dict)

    def __str__(self) -> str:
        return f"⊢ {self.term} : {self.formula} | {show_context(self.context)}"


@dataclass(frozen=True, eq=False)
class CommandJ:
    """``c : (⊢ Γ)``."""

    command: Command
    context: Context = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{self.command} : (⊢ {show_context(self.context)})"


Judgment = TermJ | CommandJ


def show_context(ctx: Mapping[Variable, C.Constructor]) -> str:
    return ", ".join(f"{v} : {a}" for v, a in sorted(ctx.items(), key=lambda kv: str(kv[0])))


def contexts_equal(a: Mapping, b: Mapping) -> bool:
    return a.keys() == b.keys() and all(C.alpha_eq(a[v], b[v]) for v in a)


def judgments_equal(a: Judgment, b: Judgment) -> bool:
    if isinstance(a, TermJ) and isinstance(b, TermJ):
        return (
            alpha_eq(a.term, b.term)
            and C.alpha_eq(a.formula, b.formula)
            and contexts_equal(a.context, b.context)
        )
    if isinstance(a, CommandJ) and isinstance(b, CommandJ):
        return alpha_eq(a.command, b.command) and contexts_equal(a.context, b.context)
    return False


@dataclass(eq=False)
class Derivation:
    rule: str
    premises: list[Derivation]
    conclusion: Judgment
    split: tuple[tuple[Variable, ...], ...] | None = None
    var: Variable | None = None
    vars: tuple[Variable, ...] = ()
    formula: C.Constructor | None = None
    witness: C.Constructor | None = None
    witness_kind: C.Kind | None = None
    target: C.Constructor | None = None
    boxed: tuple[Variable, ...] = ()
    merged: tuple[Variable, ...] = ()
    n: int | None = None

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def rule_tally(self) -> Counter:
        return Counter(d.rule for d in self.nodes())


# -- checking ----------------------------------------------------------------


def _formula_polarity(a: C.Constructor, path: str) -> Polarity:
    try:
        k = C.kind_check(a)
    except C.KindError as e:
        raise RuleMismatch(path, f"ill-kinded formula: {e}") from None
    if isinstance(k, C.OPos):
        return POS
    if isinstance(k, C.ONeg):
        return NEG
    raise RuleMismatch(path, f"{a} has kind {k}, not a formula kind")


def _check_judgment_shape(j: Judgment, path: str):
    for v, a in j.context.items():
        if _formula_polarity(a, path) is v.polarity:
            raise RuleMismatch(
                path, f"context entry {v} : {a} must have the opposite polarity of its variable"
            )
    if isinstance(j, TermJ):
        if _formula_polarity(j.formula, path) is not polarity(j.term):
            raise RuleMismatch(path, f"term {j.term} and formula {j.formula} differ in polarity")
        fv = free_vars(j.term)
    else:
        fv = free_vars(j.command)
    missing = fv - j.context.keys()
    if missing:
        names = ", ".join(sorted(map(str, missing)))
        raise RuleMismatch(path, f"free variables {names} are not in the context")


def _expect_term(d: Derivation, path: str) -> TermJ:
    if not isinstance(d.conclusion, TermJ):
        raise RuleMismatch(path, f"{d.rule} premise must be a term judgment")
    return d.conclusion


def _expect_command(d: Derivation, path: str) -> CommandJ:
    if not isinstance(d.conclusion, CommandJ):
        raise RuleMismatch(path, f"{d.rule} premise must be a command judgment")
    return d.conclusion


def _arity(d: Derivation, n: int, path: str):
    if len(d.premises) != n:
        raise RuleMismatch(path, f"{d.rule} takes {n} premise(s), got {len(d.premises)}")


def _same(a: C.Constructor, b: C.Constructor, path: str, what: str):
    if not C.alpha_eq(a, b):
        raise RuleMismatch(path, f"{what}: expected {b}, found {a}")


def _merge(ctxs: list[Context], path: str) -> Context:
    out: Context = {}
    for ctx in ctxs:
        for v, a in ctx.items():
            if v in out:
                raise AffinityError(path, f"variable {v} is used in two premises")
            out[v] = a
    return out


def _check_split(d: Derivation, premises: list[Judgment], path: str):
    if d.split is None:
        raise SplitError(path, f"{d.rule} needs an explicit context split")
    if len(d.split) != len(premises):
        raise SplitError(path, "split must list one variable group per premise")
    seen: set[Variable] = set()
    for group, j in zip(d.split, premises):
        g = set(group)
        if g & seen:
            raise SplitError(path, f"split groups overlap on {sorted(map(str, g & seen))}")
        seen |= g
        if g != set(j.context):
            raise SplitError(path, f"split group {sorted(map(str, g))} does not match premise context")
    if seen != set(d.conclusion.context):
        raise SplitError(path, "split does not cover the conclusion context")


def _pop(ctx: Context, v: Variable, path: str, rule: str) -> tuple[C.Constructor, Context]:
    if v not in ctx:
        raise RuleMismatch(path, f"{rule}: bound variable {v} missing from premise context")
    rest = dict(ctx)
    return rest.pop(v), rest


def _conv(a: C.Constructor, b: C.Constructor, fuel: int, path: str) -> bool:
    try:
        return C.conv_check(a, b, fuel)
    except C.FuelExhausted:
        raise ConvUnknown(path, f"could not decide {a} ≅ {b} within fuel") from None


def _expected(d: Derivation, path: str, fuel: int) -> Judgment:
    """The conclusion the rule licenses from the premises and annotations."""
    concl = d.conclusion
    rule = d.rule
    prem = d.premises

    if rule in ("AxPos", "AxNeg"):
        _arity(d, 0, path)
        want = POS if rule == "AxPos" else NEG
        if not isinstance(concl, TermJ) or not isinstance(concl.term, Var):
            raise RuleMismatch(path, "axiom concludes a variable")
        v = concl.term.var
        if v.polarity is not want:
            raise RuleMismatch(path, f"{rule} needs a {want} variable, got {v}")
        return TermJ(concl.term, concl.formula, {v: C.negate(concl.formula)})

    if rule in ("MuPos", "MuNeg"):
        _arity(d, 1, path)
        j = _expect_command(prem[0], path)
        v = d.var
        if v is None:
            raise RuleMismatch(path, f"{rule} needs the bound variable")
        want = NEG if rule == "MuPos" else POS
        if v.polarity is not want:
            raise RuleMismatch(path, f"{rule} binds a {want} variable, got {v}")
        a, rest = _pop(j.context, v, path, rule)
        t = MuNeg(v, j.command) if want is NEG else MuPos(v, j.command)
        return TermJ(t, a, rest)

    if rule == "Cut":
        _arity(d, 2, path)
        j1, j2 = _expect_term(prem[0], path), _expect_term(prem[1], path)
        if polarity(j1.term) is polarity(j2.term):
            raise RuleMismatch(path, "cut needs terms of opposite polarity")
        _same(j2.formula, C.negate(j1.formula), path, "cut formulas must be dual")
        _check_split(d, [j1, j2], path)
        return CommandJ(Command(j1.term, j2.term), _merge([j1.context, j2.context], path))

    if rule == "Tensor":
        _arity(d, 2, path)
        j1, j2 = _expect_term(prem[0], path), _expect_term(prem[1], path)
        if not (is_value(j1.term) and is_value(j2.term)):
            raise RuleMismatch(path, "tensor components must be values")
        _check_split(d, [j1, j2], path)
        return TermJ(
            Pair(j1.term, j2.term),
            C.Tensor(j1.formula, j2.formula),
            _merge([j1.context, j2.context], path),
        )

    if rule == "Parr":
        _arity(d, 1, path)
        j = _expect_command(prem[0], path)
        if len(d.vars) != 2:
            raise RuleMismatch(path, "Parr binds two variables")
        k1, k2 = d.vars
        a, rest = _pop(j.context, k1, path, rule)
        b, rest = _pop(rest, k2, path, rule)
        return TermJ(MuPair(k1, k2, j.command), C.Parr(a, b), rest)

    if rule == "ShiftDown":
        _arity(d, 1, path)
        j = _expect_term(prem[0], path)
        if not is_value(j.term):
            raise RuleMismatch(path, "shift-down needs a value")
        return TermJ(Box(j.term), C.ShiftDown(j.formula), dict(j.context))

    if rule == "ShiftUp":
        _arity(d, 1, path)
        j = _expect_command(prem[0], path)
        if d.var is None:
            raise RuleMismatch(path, "ShiftUp needs the bound variable")
        a, rest = _pop(j.context, d.var, path, rule)
        return TermJ(MuBox(d.var, j.command), C.ShiftUp(a), rest)

    if rule == "Exists":
        _arity(d, 1, path)
        j = _expect_term(prem[0], path)
        if not isinstance(concl, TermJ) or not isinstance(concl.formula, C.Exists):
            raise RuleMismatch(path, "Exists concludes an existential formula")
        q = concl.formula
        if d.witness is None:
            raise RuleMismatch(path, "Exists needs a witness")
        if C.free_vars(d.witness):
            raise RuleMismatch(path, f"witness {d.witness} must be closed")
        try:
            wk = C.kind_check(d.witness)
        except C.KindError as e:
            raise RuleMismatch(path, f"ill-kinded witness: {e}") from None
        if wk != q.kind or (d.witness_kind is not None and d.witness_kind != q.kind):
            raise RuleMismatch(path, f"witness has kind {wk}, binder wants {q.kind}")
        _same(j.formula, C.subst1(q.body, q.name, q.kind, d.witness), path, "Exists premise")
        return TermJ(j.term, q, dict(j.context))

    if rule == "Forall":
        _arity(d, 1, path)
        j = _expect_term(prem[0], path)
        if not isinstance(concl, TermJ) or not isinstance(concl.formula, C.Forall):
            raise RuleMismatch(path, "Forall concludes a universal formula")
        q = concl.formula
        if not is_value(j.term):
            raise RuleMismatch(path, "Forall needs a value")
        for v, a in j.context.items():
            if (q.name, q.kind) in C.free_vars(a):
                raise RuleMismatch(path, f"{q.name} is free in the context entry of {v}")
        _same(j.formula, q.body, path, "Forall premise")
        return TermJ(j.term, q, dict(j.context))

    if rule == "Conv":
        _arity(d, 1, path)
        j = prem[0].conclusion
        if d.target is None:
            raise RuleMismatch(path, "Conv needs a target formula")
        if d.var is None:
            if not isinstance(j, TermJ):
                raise RuleMismatch(path, "Conv on a command needs the variable to convert")
            if not _conv(j.formula, d.target, fuel, path):
                raise RuleMismatch(path, f"{j.formula} is not convertible to {d.target}")
            return TermJ(j.term, d.target, dict(j.context))
        a = j.context.get(d.var)
        if a is None:
            raise RuleMismatch(path, f"Conv: {d.var} not in context")
        if not _conv(a, d.target, fuel, path):
            raise RuleMismatch(path, f"{a} is not convertible to {d.target}")
        ctx = dict(j.context)
        ctx[d.var] = d.target
        return replace(j, context=ctx)

    if rule == "Weaken":
        _arity(d, 1, path)
        j = _expect_command(prem[0], path)
        if d.var is None or d.formula is None:
            raise RuleMismatch(path, "Weaken needs a variable and a formula")
        if d.var in j.context:
            raise AffinityError(path, f"{d.var} is already in the context")
        ctx = dict(j.context)
        ctx[d.var] = d.formula
        return CommandJ(j.command, ctx)

    if rule == "BangK":
        _arity(d, 1, path)
        j = _expect_term(prem[0], path)
        if not is_value(j.term):
            raise RuleMismatch(path, "the boxed term must be a value")
        if set(d.boxed) != set(j.context) or len(d.boxed) != len(j.context):
            raise RuleMismatch(path, "boxed variables must be exactly the premise context")
        if not isinstance(concl, TermJ):
            raise RuleMismatch(path, "BangK concludes a term judgment")
        macro = bang_macro(d.boxed, j.term)
        return TermJ(
            concl.term if alpha_eq(concl.term, macro) else macro,
            C.Bang(j.formula),
            {x: C.Quest(j.context[x]) for x in d.boxed},
        )

    if rule in ("MultiplexN", "Contract"):
        _arity(d, 1, path)
        j = _expect_command(prem[0], path)
        merged = tuple(d.merged)
        n = len(merged) if d.n is None else d.n
        if n != len(merged):
            raise RuleMismatch(path, f"{rule}: n = {n} but {len(merged)} variables merged")
        if rule == "Contract" and n != 2:
            raise RuleMismatch(path, "Contract merges exactly two variables")
        if len(set(merged)) != n:
            raise AffinityError(path, f"{rule}: merged variables repeat")
        k = d.var
        if k is None:
            raise RuleMismatch(path, f"{rule} needs the merged variable")
        rest = dict(j.context)
        formulas = []
        for v in merged:
            if v.polarity is not k.polarity:
                raise RuleMismatch(path, f"{v} and {k} differ in polarity")
            a, rest = _pop(rest, v, path, rule)
            formulas.append(a)
        if rule == "MultiplexN" and n == 0:
            if not isinstance(concl, TermJ) or not isinstance(concl.formula, C.Quest):
                raise RuleMismatch(path, "a 0-ary multiplex concludes ?A")
            formulas = [concl.formula.body]
        for a in formulas[1:]:
            _same(a, formulas[0], path, f"{rule}: merged variables must share one formula")
        if k in rest or k in free_vars(j.command) - set(merged):
            raise AffinityError(path, f"{rule}: {k} is not fresh")
        body = substitute(j.command, {v: Var(k) for v in merged})
        if rule == "Contract":
            rest[k] = formulas[0]
            return CommandJ(body, rest)
        return TermJ(MuBang(k, body), C.Quest(formulas[0]), rest)

    raise RuleMismatch(path, f"unknown rule {rule!r}")


def check_node(d: Derivation, mode: str = "mal", path: str = "root", fuel: int = 100_000) -> Judgment:
    """Check one node against its premises' stated conclusions."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if d.rule in _SAL_ONLY and mode != "sal":
        raise RuleMismatch(path, f"{d.rule} is only available in SAL mode")
    if d.rule in _PA_ONLY and mode != "pa":
        raise RuleMismatch(path, f"{d.rule} is only available in PA mode")
    _check_judgment_shape(d.conclusion, path)
    want = _expected(d, path, fuel)
    if not judgments_equal(want, d.conclusion):
        raise RuleMismatch(path, f"{d.rule} licenses {want}, but the node states {d.conclusion}")
    return d.conclusion


def check(d: Derivation, mode: str = "mal", fuel: int = 100_000) -> Judgment:
    """Validate every node; returns the root judgment."""

    def go(node: Derivation, path: str):
        for i, p in enumerate(node.premises):
            go(p, f"{path}.{i}")
        check_node(node, mode, path, fuel)

    go(d, "root")
    return d.conclusion


# -- weights -----------------------------------------------------------------


@dataclass
class WeightReport:
    weight: object
    per_rule: Counter
    depth: int


_IDENTITY = {"MuPos", "MuNeg", "Conv", "Weaken", "Forall", "Exists", "ShiftDown"}


def default_p_beta(m: MonoidSpec):
    return m.unit() if m.has_unit else m.zero()


def weight(d: Derivation, m: MonoidSpec, p_beta=None) -> WeightReport:
    """Fold the per-rule weight functions bottom-up."""
    pb = default_p_beta(m) if p_beta is None else p_beta

    def w(node: Derivation):
        ws = [w(p) for p in node.premises]
        r = node.rule
        if r in ("AxPos", "AxNeg"):
            return m.zero()
        if r in _IDENTITY:
            return ws[0]
        if r in ("Parr", "ShiftUp"):
            return m.add(ws[0], pb)
        if r in ("Cut", "Tensor"):
            return m.add(ws[0], ws[1])
        if r == "BangK":
            if not m.has_exponential:
                raise MonoidCapabilityError(f"BangK needs a soft exponential; {m.name} has none")
            return m.add(m.bang(ws[0]), m.scale(len(node.boxed), pb))
        if r == "MultiplexN":
            if not m.has_exponential:
                raise MonoidCapabilityError(f"MultiplexN needs a soft exponential; {m.name} has none")
            n = len(node.merged) if node.n is None else node.n
            return m.add(m.add(ws[0], pb), m.r(n))
        if r == "Contract":
            if m.name != "trivial":
                raise ContractInQuantitative(
                    f"contraction is only sound for the trivial monoid, not {m.name}"
                )
            return ws[0]
        raise ValueError(f"unknown rule {r!r}")

    return WeightReport(w(d), d.rule_tally(), depth(d))


def depth(d: Derivation) -> int:
    """Maximum nesting of BangK rules."""
    inner = max((depth(p) for p in d.premises), default=0)
    return inner + (d.rule == "BangK")


# -- builders ----------------------------------------------------------------


def _build(d: Derivation, mode: str = "sal") -> Derivation:
    # PA-only rules are checked by their own builder
    check_node(d, "pa" if d.rule == "Contract" else mode)
    return d


def _split_of(*ds: Derivation) -> tuple[tuple[Variable, ...], ...]:
    return tuple(tuple(sorted(p.conclusion.context, key=str)) for p in ds)


def ax(v: Variable, formula: C.Constructor) -> Derivation:
    """``⊢ v : A | v : A^⊥``."""
    rule = "AxPos" if v.polarity is POS else "AxNeg"
    return _build(Derivation(rule, [], TermJ(Var(v), formula, {v: C.negate(formula)})))


def mu_rule(v: Variable, d: Derivation) -> Derivation:
    rule = "MuPos" if v.polarity is NEG else "MuNeg"
    j = d.conclusion
    ctx = dict(j.context)
    a = ctx.pop(v)
    t = MuNeg(v, j.command) if v.polarity is NEG else MuPos(v, j.command)
    return _build(Derivation(rule, [d], TermJ(t, a, ctx), var=v))


def cut(d1: Derivation, d2: Derivation) -> Derivation:
    j1, j2 = d1.conclusion, d2.conclusion
    ctx = {**j1.context, **j2.context}
    return _build(
        Derivation("Cut", [d1, d2], CommandJ(Command(j1.term, j2.term), ctx), split=_split_of(d1, d2))
    )


def tensor(d1: Derivation, d2: Derivation) -> Derivation:
    j1, j2 = d1.conclusion, d2.conclusion
    return _build(
        Derivation(
            "Tensor",
            [d1, d2],
            TermJ(Pair(j1.term, j2.term), C.Tensor(j1.formula, j2.formula), {**j1.context, **j2.context}),
            split=_split_of(d1, d2),
        )
    )


def parr(k1: Variable, k2: Variable, d: Derivation) -> Derivation:
    j = d.conclusion
    ctx = dict(j.context)
    a, b = ctx.pop(k1), ctx.pop(k2)
    return _build(Derivation("Parr", [d], TermJ(MuPair(k1, k2, j.command), C.Parr(a, b), ctx), vars=(k1, k2)))


def shift_down(d: Derivation) -> Derivation:
    j = d.conclusion
    return _build(Derivation("ShiftDown", [d], TermJ(Box(j.term), C.ShiftDown(j.formula), dict(j.context))))


def shift_up(k: Variable, d: Derivation) -> Derivation:
    j = d.conclusion
    ctx = dict(j.context)
    a = ctx.pop(k)
    return _build(Derivation("ShiftUp", [d], TermJ(MuBox(k, j.command), C.ShiftUp(a), ctx), var=k))


def exists(d: Derivation, formula: C.Exists, witness: C.Constructor) -> Derivation:
    j = d.conclusion
    return _build(
        Derivation(
            "Exists",
            [d],
            TermJ(j.term, formula, dict(j.context)),
            witness=witness,
            witness_kind=formula.kind,
        )
    )


def forall(d: Derivation, name: str, kind: C.Kind) -> Derivation:
    j = d.conclusion
    return _build(Derivation("Forall", [d], TermJ(j.term, C.Forall(name, kind, j.formula), dict(j.context))))


def conv(d: Derivation, target: C.Constructor, var: Variable | None = None) -> Derivation:
    j = d.conclusion
    if var is None:
        concl = TermJ(j.term, target, dict(j.context))
    else:
        concl = replace(j, context={**j.context, var: target})
    return _build(Derivation("Conv", [d], concl, var=var, target=target))


def weaken(d: Derivation, v: Variable, formula: C.Constructor) -> Derivation:
    j = d.conclusion
    return _build(
        Derivation("Weaken", [d], CommandJ(j.command, {**j.context, v: formula}), var=v, formula=formula)
    )


def bang_k(d: Derivation, boxed: Iterable[Variable]) -> Derivation:
    j = d.conclusion
    boxed = tuple(boxed)
    concl = TermJ(bang_macro(boxed, j.term), C.Bang(j.formula), {x: C.Quest(j.context[x]) for x in boxed})
    return _build(Derivation("BangK", [d], concl, boxed=boxed))


def multiplex(d: Derivation, merged: Iterable[Variable], k: Variable, formula: C.Constructor | None = None) -> Derivation:
    """``μ!(k).c[k/k1..kn] : ?A``; ``formula`` gives ``A`` when nothing is merged."""
    j = d.conclusion
    merged = tuple(merged)
    ctx = dict(j.context)
    formulas = [ctx.pop(v) for v in merged]
    a = formulas[0] if formulas else formula
    body = substitute(j.command, {v: Var(k) for v in merged})
    concl = TermJ(MuBang(k, body), C.Quest(a), ctx)
    return _build(Derivation("MultiplexN", [d], concl, var=k, merged=merged, n=len(merged)))


def contract(d: Derivation, merged: tuple[Variable, Variable], k: Variable) -> Derivation:
    j = d.conclusion
    ctx = dict(j.context)
    a = ctx.pop(merged[0])
    ctx.pop(merged[1])
    ctx[k] = a
    body = substitute(j.command, {v: Var(k) for v in merged})
    return _build(Derivation("Contract", [d], CommandJ(body, ctx), var=k, merged=tuple(merged), n=2))
