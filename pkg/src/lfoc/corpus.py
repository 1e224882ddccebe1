"""Hand-built derivations and random generators used by tests and the CLI."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from lfoc import constructors as C
from lfoc import derivfile
from lfoc import typecheck as T
from lfoc.encodings import (
    LAbs,
    LApp,
    LVar,
    LambdaTerm,
    derive_cbn_command,
    parse_lambda,
)
from lfoc.terms import (
    DAIMON_NEG,
    DAIMON_POS,
    NEG,
    POS,
    Box,
    Command,
    MuBox,
    MuNeg,
    MuPair,
    MuPos,
    Pair,
    Term,
    Var,
    Variable,
    all_vars,
    alpha_eq,
    fresh,
    is_value,
    make_pair,
    neg,
    polarity,
    pos,
)

X = C.KVar("X", C.OPOS)
N0 = C.Parr(C.negate(X), X)  # type of the identity
P0 = C.ShiftDown(N0)
M0 = C.Forall("X", C.OPOS, N0)


@dataclass
class Entry:
    name: str
    derivation: T.Derivation
    mode: str

    @property
    def command(self) -> Command:
        return self.derivation.conclusion.command


# -- small derivation pieces -------------------------------------------------


def identity(y: str = "y", a: str = "a") -> T.Derivation:
    """``⊢ mu (+y, -a). <+y | -a> : X^⊥ ⅋ X``."""
    return T.parr(pos(y), neg(a), T.cut(T.ax(pos(y), X), T.ax(neg(a), C.negate(X))))


def link(x: Variable, a: Variable, p: C.Constructor) -> T.Derivation:
    """``<x | a>`` with ``x : P`` against ``a : P^⊥``."""
    return T.cut(T.ax(x, p), T.ax(a, C.negate(p)))


def derived_pair(d1: T.Derivation, d2: T.Derivation) -> T.Derivation:
    """Typing of the pair macro ``(t, u)`` from typings of ``t`` and ``u``."""
    t, u = d1.conclusion.term, d2.conclusion.term
    fa, fb = d1.conclusion.formula, d2.conclusion.formula
    if is_value(t) and is_value(u):
        return T.tensor(d1, d2)
    avoid = set(all_vars(t) | all_vars(u)) | set(d1.conclusion.context) | set(d2.conclusion.context)
    a = fresh(neg("a"), avoid)
    avoid.add(a)
    k1 = fresh(Variable("k", polarity(t)), avoid)
    avoid.add(k1)
    k2 = fresh(Variable("k", polarity(u)), avoid)
    core = T.cut(T.tensor(T.ax(k1, fa), T.ax(k2, fb)), T.ax(a, C.negate(C.Tensor(fa, fb))))
    step = T.cut(d2, T.mu_rule(k2, core))
    out = T.mu_rule(a, T.cut(d1, T.mu_rule(k1, step)))
    assert alpha_eq(out.conclusion.term, make_pair(t, u))
    return out


# -- MAL entries ---------------------------------------------------------------


def _mal_hand() -> list[Entry]:
    x, y, z, w = pos("x"), pos("y"), pos("z"), pos("w")
    a, b, g = neg("a"), neg("b"), neg("g")
    out = []

    out.append(Entry("mal_axiom_cut", link(x, a, X), "mal"))

    up = T.shift_up(y, link(y, a, X))
    out.append(Entry("mal_shift", T.cut(T.shift_down(T.ax(x, X)), up), "mal"))

    pair = T.tensor(T.ax(x, X), T.ax(b, C.negate(X)))
    out.append(Entry("mal_pair_identity", T.cut(pair, identity()), "mal"))

    t = T.mu_rule(a, link(x, a, X))
    u = T.mu_rule(b, link(y, b, X))
    body = T.weaken(link(z, g, X), w, C.negate(X))
    consumer = T.parr(z, w, body)
    out.append(Entry("mal_derived_pair", T.cut(derived_pair(t, u), consumer), "mal"))

    ident = T.forall(identity(), "X", C.OPOS)
    yv = neg("k")
    inner = T.weaken(link(x, b, X), yv, C.negate(C.KVar("Y", C.ONEG)))
    dual = T.forall(T.shift_up(yv, inner), "Y", C.ONEG)
    packed = T.exists(T.shift_down(ident), C.Exists("Y", C.ONEG, C.ShiftDown(C.KVar("Y", C.ONEG))), M0)
    out.append(Entry("mal_exists_forall", T.cut(packed, dual), "mal"))

    id_conv = T.conv(identity(), C.App(C.Lam("z", C.ONEG, C.KVar("z", C.ONEG)), N0))
    pair_conv = T.conv(pair, C.negate(id_conv.conclusion.formula))
    out.append(Entry("mal_conv_term", T.cut(pair_conv, id_conv), "mal"))

    target = C.apply(C.Rec(C.OPOS), X, C.Lam("n", C.IOTA, C.Lam("v", C.OPOS, C.KVar("v", C.OPOS))), C.numeral(3))
    cmd = T.conv(link(x, a, X), target, var=a)
    out.append(Entry("mal_conv_context", cmd, "mal"))

    out.append(Entry("mal_weaken", T.weaken(link(x, a, X), g, X), "mal"))

    inner2 = T.shift_up(z, link(z, a, X))
    outer = T.shift_up(y, T.cut(T.ax(y, C.ShiftDown(X)), inner2))
    twice = T.shift_down(T.shift_down(T.ax(x, X)))
    out.append(Entry("mal_two_shifts", T.cut(twice, outer), "mal"))

    return out


CBN_PROGRAMS = [
    (r"\a. a", [r"\b. b"]),
    (r"(\a. a) (\b. b)", []),
    (r"\f. \x. f x", [r"\a. a", r"\b. b"]),
    (r"\x. \y. x", [r"\a. a", r"\b. b"]),
    (r"\x. \y. y", [r"\a. a", r"\b. b"]),
    (r"\f. f (\z. z)", [r"\g. g"]),
    (r"\f. \g. \x. f (g x)", [r"\a. a", r"\b. b", r"\c. c"]),
    (r"(\f. \x. f x) (\a. a)", [r"\b. b"]),
    (r"\x. x", [r"(\a. a) (\b. b)"]),
    (r"(\x. \y. x) (\a. a) (\b. b)", []),
    (r"\p. p (\a. \b. a) (\c. c)", []),
    (r"\f. \x. \y. f y x", [r"\a. \b. a", r"\c. c", r"\d. d"]),
    (r"(\u. \v. u v) (\w. w)", [r"\e. e"]),
    (r"\a. a", []),
]


def _cbn_entries() -> list[Entry]:
    out = []
    for i, (src, args) in enumerate(CBN_PROGRAMS):
        d = derive_cbn_command(parse_lambda(src), [parse_lambda(s) for s in args])
        out.append(Entry(f"cbn_{i:02d}", d, "mal"))
    return out


# -- SAL entries ---------------------------------------------------------------


def _chain(n: int, kappas: list[Variable]) -> T.Derivation:
    """``<(y, mu x2. <(x2, ... b) | k2>) | k1>``: each ``k_i : X^⊥ ⅋ X`` used once."""
    cont = T.ax(neg("b"), C.negate(X))
    for i in range(n, 1, -1):
        xi = pos(f"x{i}")
        pair = T.tensor(T.ax(xi, X), cont)
        cont = T.mu_rule(xi, T.cut(pair, T.ax(kappas[i - 1], N0)))
    pair = T.tensor(T.ax(pos("y"), X), cont)
    return T.cut(pair, T.ax(kappas[0], N0))


def multiplex_entry(n: int) -> T.Derivation:
    """``<!_{} I | mu !(k). c>`` where ``c`` uses ``n`` copies of the identity."""
    kappas = [neg(f"k{i}") for i in range(1, n + 1)]
    k = neg("k")
    if n == 0:
        m = T.multiplex(link(pos("y"), neg("b"), X), [], k, formula=C.negate(N0))
    else:
        m = T.multiplex(_chain(n, kappas), kappas, k)
    return T.cut(T.bang_k(identity(), []), m)


def boxed_entry(k: int) -> T.Derivation:
    """``!_{x1..xk}`` over a tuple of boxed variables, each fed by a bang."""
    p = P0
    xs = [pos(f"x{i}") for i in range(1, k + 1)]
    kap, z, b = pos("kap"), pos("z"), neg("b")
    if k == 1:
        v = T.shift_down(T.ax(xs[0], p))
        use = T.shift_up(z, link(z, b, p))
        c = T.cut(T.ax(kap, C.ShiftDown(p)), use)
    else:
        v = T.tensor(T.ax(xs[0], p), T.ax(xs[1], p))
        z2 = pos("z2")
        body = T.weaken(link(z, b, p), z2, C.negate(p))
        c = T.cut(T.ax(kap, C.Tensor(p, p)), T.parr(z, z2, body))
    core = T.cut(T.bang_k(v, xs), T.multiplex(c, [kap], pos("kk")))
    for xi in reversed(xs):
        w = T.bang_k(T.shift_down(identity(f"y{xi.name}", f"a{xi.name}")), [])
        core = T.cut(w, T.mu_rule(xi, core))
    return core


def _nested_value(d: int) -> T.Derivation:
    """A value of type ``X^⊥ ⅋ X`` whose derivation nests ``d`` bang rules."""
    v = identity("y0", "a0")
    for i in range(1, d + 1):
        y, a, k, kk = pos(f"y{i}"), neg(f"a{i}"), neg(f"k{i}"), neg(f"kk{i}")
        use = T.cut(T.tensor(T.ax(y, X), T.ax(a, C.negate(X))), T.ax(k, N0))
        inner = T.cut(T.bang_k(v, []), T.multiplex(use, [k], kk))
        v = T.parr(y, a, inner)
    return v


def nested_entry(delta: int) -> T.Derivation:
    """Bang-nesting depth ``delta``: ``<!_{} V | mu !(k). <(y, b) | k>>``."""
    k, kk = neg("k"), neg("kk")
    use = T.cut(T.tensor(T.ax(pos("y"), X), T.ax(neg("b"), C.negate(X))), T.ax(k, N0))
    return T.cut(T.bang_k(_nested_value(delta - 1), []), T.multiplex(use, [k], kk))


def _sal_entries() -> list[Entry]:
    out = []
    for n in (0, 1, 2, 3, 4):
        out.append(Entry(f"sal_multiplex_{n}", multiplex_entry(n), "sal"))
    for k in (1, 2):
        out.append(Entry(f"sal_boxed_{k}", boxed_entry(k), "sal"))
    for d in (1, 2, 3):
        out.append(Entry(f"sal_nested_{d}", nested_entry(d), "sal"))
    return out


def mal_entries() -> list[Entry]:
    return _mal_hand() + _cbn_entries()


def sal_entries() -> list[Entry]:
    return _sal_entries()


def all_entries() -> list[Entry]:
    return mal_entries() + sal_entries()


def write_corpus(root: str | Path) -> list[Path]:
    root = Path(root)
    written = []
    for e in all_entries():
        d = root / e.name
        d.mkdir(parents=True, exist_ok=True)
        (d / "term.lfoc").write_text(str(e.command) + "\n")
        derivfile.save(e.derivation, d / "deriv.json")
        written.append(d)
    return written


def detect_mode(d: T.Derivation) -> str:
    rules = set(d.rule_tally())
    if "Contract" in rules:
        return "pa"
    if rules & {"BangK", "MultiplexN"}:
        return "sal"
    return "mal"


# -- random generators ---------------------------------------------------------


def random_affine_lambda(rng: random.Random, size: int, pool: list[str] | None = None, _names=None) -> LambdaTerm:
    """A random affine term; variables in ``pool`` may be used once each and are consumed."""
    pool = [] if pool is None else pool
    names = _names if _names is not None else iter(f"v{i}" for i in range(10**9))
    if size <= 1:
        if pool and rng.random() < 0.8:
            return LVar(pool.pop(rng.randrange(len(pool))))
        x = next(names)
        return LAbs(x, LVar(x))
    if rng.random() < 0.5:
        x = next(names)
        pool.append(x)
        body = random_affine_lambda(rng, size - 1, pool, names)
        if x in pool:
            pool.remove(x)
        return LAbs(x, body)
    left = rng.randint(1, size - 1)
    f = random_affine_lambda(rng, left, pool, names)
    a = random_affine_lambda(rng, size - left, pool, names)
    return LApp(f, a)


def random_closed_value(rng: random.Random, size: int, prefix: str = "w") -> LambdaTerm:
    """A closed abstraction."""
    names = iter(f"{prefix}{i}" for i in range(10**9))
    x = next(names)
    body = random_affine_lambda(rng, max(1, size - 1), [x], names)
    return LAbs(x, body)


def random_cbn_redex(rng: random.Random, size: int = 6) -> tuple[LAbs, LambdaTerm]:
    """``(\\a. t, u)`` closed and affine; the bound variable may or may not occur."""
    names = iter(f"n{i}" for i in range(10**9))
    x = next(names)
    body = random_affine_lambda(rng, size, [x], names)
    arg = random_affine_lambda(rng, max(1, size // 2), [], iter(f"m{i}" for i in range(10**9)))
    return LAbs(x, body), arg


def random_cbv_redex(rng: random.Random, size: int = 6) -> tuple[LAbs, LambdaTerm]:
    """``(\\x. t, V)`` with ``V`` a closed abstraction."""
    fn, _ = random_cbn_redex(rng, size)
    return fn, random_closed_value(rng, max(2, size // 2))


def random_term(rng: random.Random, pol, depth: int, pool: list[Variable] | None = None, value: bool = False) -> Term:
    """A random affine L_foc term; free variables come from ``pool`` and are consumed."""
    pool = [] if pool is None else pool
    counter = random_term.counter = getattr(random_term, "counter", 0) + 1

    def take(p):
        cands = [i for i, v in enumerate(pool) if v.polarity is p]
        if not cands:
            return None
        return pool.pop(rng.choice(cands))

    def fresh_var(p, stem):
        return Variable(f"{stem}{counter}_{rng.randrange(10**6)}", p)

    if depth <= 0:
        v = take(pol) if rng.random() < 0.7 else None
        if v is not None:
            return Var(v)
        return DAIMON_POS if pol is POS else DAIMON_NEG
    r = rng.random()
    if pol is POS:
        if r < 0.15:
            v = take(POS)
            if v is not None:
                return Var(v)
            return DAIMON_POS
        if r < 0.45:
            return Pair(
                random_term(rng, rng.choice([POS, NEG]), depth - 1, pool, True),
                random_term(rng, rng.choice([POS, NEG]), depth - 1, pool, True),
            )
        if r < 0.65 or value:
            return Box(random_term(rng, rng.choice([POS, NEG]), depth - 1, pool, True))
        a = fresh_var(NEG, "a")
        pool.append(a)
        return MuNeg(a, random_command(rng, depth - 1, pool))
    if r < 0.15:
        v = take(NEG)
        if v is not None:
            return Var(v)
        return DAIMON_NEG
    if r < 0.4:
        x = fresh_var(POS, "x")
        pool.append(x)
        return MuPos(x, random_command(rng, depth - 1, pool))
    if r < 0.75:
        k1 = fresh_var(rng.choice([POS, NEG]), "k")
        k2 = fresh_var(rng.choice([POS, NEG]), "l")
        pool += [k1, k2]
        return MuPair(k1, k2, random_command(rng, depth - 1, pool))
    k = fresh_var(rng.choice([POS, NEG]), "k")
    pool.append(k)
    return MuBox(k, random_command(rng, depth - 1, pool))


def random_command(rng: random.Random, depth: int, pool: list[Variable] | None = None) -> Command:
    pool = [] if pool is None else pool
    if rng.random() < 0.5:
        t = random_term(rng, POS, depth, pool)
        u = random_term(rng, NEG, depth, pool)
    else:
        u = random_term(rng, NEG, depth, pool)
        t = random_term(rng, POS, depth, pool)
    return Command(t, u)


def random_negative_terms(seed: int, count: int, depth: int = 4) -> list[Term]:
    rng = random.Random(seed)
    return [random_term(rng, NEG, depth) for _ in range(count)]
