"""Property suites shared by ``lfoc selftest`` and the acceptance tests.

Each suite returns a :class:`CheckResult`.  Sizes default to the values the
acceptance tests use; ``selftest --quick`` shrinks them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from lfoc import constructors as C
from lfoc import corpus, encodings as E, forcing as F
from lfoc import quantity as Q
from lfoc.certify import certify, daimon_closure
from lfoc.reduction import StepKind, run_steps, step, time_beta
from lfoc.terms import (
    DAIMON_NEG,
    DAIMON_POS,
    POS,
    Bang,
    Box,
    Command,
    Pair,
    Var,
    bang_macro,
    make_pair,
    neg,
    pos,
    substitute,
)

# measured once over the generated CBV redexes and frozen here
CBV_REDEX_STEPS = {"mu": 1, "beta": 2}


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = "  ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{mark}  {self.name}  ({self.cases} cases)  {extra}".rstrip()


# -- monoids -------------------------------------------------------------------


def _rand_nat(rng):
    return Q.NatQuantity(rng.randrange(50))


def _rand_soft(rng):
    deg = rng.randrange(4)
    coeffs = tuple(rng.randrange(4) for _ in range(deg + 1)) if rng.random() < 0.9 else ()
    return Q.SoftQuantity(rng.randrange(6), coeffs)


def monoid_laws(cases: int = 10_000, seed: int = 0) -> CheckResult:
    """Commutative-monoid laws up to equivalence, anti-triangularity, compatibility,
    unit and soft-exponential laws, on ``cases`` random triples per monoid."""
    rng = random.Random(seed)
    start = time.perf_counter()
    failures: list[str] = []
    for m, gen in ((Q.NAT, _rand_nat), (Q.SOFT, _rand_soft)):
        z = m.zero()
        if m.norm(z) != 0:
            failures.append(f"{m.name}: norm(0) != 0")
        if m.has_unit and m.norm(m.unit()) < 1:
            failures.append(f"{m.name}: norm(1) < 1")
        for _ in range(cases):
            p, q, r = gen(rng), gen(rng), gen(rng)
            pq = m.add(p, q)
            ok = (
                m.equiv(pq, m.add(q, p))
                and m.equiv(m.add(p, m.add(q, r)), m.add(pq, r))
                and m.equiv(m.add(z, p), p)
                and m.norm(p) + m.norm(q) <= m.norm(pq)
                and m.leq(p, p)
                and m.leq(p, pq)
                and m.norm(p) <= m.norm(pq)
            )
            if ok and m.leq(p, q):
                ok = m.norm(p) <= m.norm(q) and m.leq(m.add(p, r), m.add(q, r))
            if ok and m.has_exponential:
                k = rng.randrange(6)
                ok = m.leq(m.add(m.bang(p), m.bang(q)), m.bang(pq)) and m.leq(
                    m.scale(k, p), m.add(m.bang(p), m.r(k))
                )
            if not ok:
                failures.append(f"{m.name}: p={p} q={q} r={r}")
                if len(failures) > 5:
                    break
    t = Q.TRIVIAL
    e = t.zero()
    if not (t.norm(e) == 0 and t.equiv(t.add(e, e), e) and t.leq(e, e)):
        failures.append("trivial")
    elapsed = time.perf_counter() - start
    return CheckResult(
        "monoid laws",
        not failures,
        2 * cases,
        {"seconds": round(elapsed, 2), "failures": failures[:3]} if failures else {"seconds": round(elapsed, 2)},
    )


# -- encodings -----------------------------------------------------------------


def _random_stack(rng, depth: int) -> E.Stack:
    s: E.Stack = E.SVar("pi")
    for i in range(depth):
        s = E.Push(corpus.random_closed_value(rng, rng.randint(2, 4), f"s{i}_"), s)
    return s


def _kinds(steps) -> dict[str, int]:
    out = {"mu": 0, "beta": 0, "bang": 0}
    for k, _ in steps:
        out[k.value] += 1
    return out


def cbn_correspondence(cases: int = 50, seed: int = 1) -> CheckResult:
    """A weak-head redex ``(\\a.t) u`` against a stack costs one mu and one beta
    step and lands on the encoding of ``t[u/a]``; whole weak-head runs match the
    Krivine machine step for step."""
    rng = random.Random(seed)
    bad = []
    for i in range(cases):
        fn, arg = corpus.random_cbn_redex(rng, rng.randint(2, 7))
        stack = _random_stack(rng, rng.randrange(3))
        c = E.encode_cbn_command(E.LApp(fn, arg), stack)
        steps = run_steps(c, 2)
        target = E.encode_cbn_command(E.lam_subst(fn.body, fn.name, arg), stack)
        from lfoc.terms import alpha_eq

        if [k for k, _ in steps] != [StepKind.MU, StepKind.BETA] or not alpha_eq(steps[-1][1], target):
            bad.append(i)
            continue
        # full run against the abstract machine
        term, st, pushes, pops = E.krivine(E.LApp(fn, arg), stack)
        tr_steps = run_steps(c, 10_000)
        counts = _kinds(tr_steps)
        final = tr_steps[-1][1] if tr_steps else c
        if counts["mu"] != pushes or counts["beta"] != pops or not alpha_eq(final, E.encode_cbn_command(term, st)):
            bad.append(i)
    return CheckResult("CBN correspondence", not bad, cases, {"failing": bad[:5]} if bad else {"per redex": "1 mu + 1 beta"})


def cbv_redex_costs(cases: int = 50, seed: int = 2) -> list[dict[str, int] | None]:
    """Steps until ``(\\x.t) V`` in environment ``e`` reaches the encoding of
    ``t[V/x]`` in ``e``; ``None`` when it never does within 20 steps."""
    from lfoc.terms import alpha_eq

    rng = random.Random(seed)
    out = []
    for _ in range(cases):
        fn, v = corpus.random_cbv_redex(rng, rng.randint(2, 7))
        env = _random_stack(rng, rng.randrange(2))
        c = E.encode_cbv_command(E.LApp(fn, v), env)
        target = E.encode_cbv_command(E.lam_subst(fn.body, fn.name, v), env)
        seen = []
        cur = c
        found = None
        for _ in range(20):
            s = step(cur)
            if s is None:
                break
            seen.append(s)
            cur = s[1]
            if alpha_eq(cur, target):
                found = _kinds(seen)
                break
        out.append(found)
    return out


def cbv_correspondence(cases: int = 50, seed: int = 2) -> CheckResult:
    costs = cbv_redex_costs(cases, seed)
    distinct = {tuple(sorted(c.items())) if c else None for c in costs}
    frozen = tuple(sorted({**CBV_REDEX_STEPS, "bang": 0}.items()))
    return CheckResult(
        "CBV correspondence",
        distinct == {frozen},
        cases,
        {"constant": dict(frozen) if distinct == {frozen} else sorted(map(str, distinct))},
    )


# -- certification -------------------------------------------------------------


def linear_time(fuel: int = 1_000_000) -> CheckResult:
    entries = corpus.mal_entries()
    bad = []
    for e in entries:
        rep = certify(e.derivation, Q.NAT, fuel, "mal")
        if not (rep.within_bound and rep.within_size):
            bad.append(e.name)
    return CheckResult("linear-time bound (MAL)", not bad, len(entries), {"failing": bad} if bad else {})


def soft_bound(fuel: int = 1_000_000) -> CheckResult:
    entries = corpus.sal_entries()
    bad = []
    ks, ns = set(), set()
    for e in entries:
        rep = certify(e.derivation, Q.SOFT, fuel, "sal")
        if not rep.within_bound:
            bad.append(e.name)
        for node in e.derivation.nodes():
            if node.rule == "BangK":
                ks.add(len(node.boxed))
            if node.rule == "MultiplexN":
                ns.add(node.n if node.n is not None else len(node.merged))
    from lfoc.typecheck import weight

    degrees = {}
    for delta in (1, 2, 3):
        w = weight(corpus.nested_entry(delta), Q.SOFT)
        degrees[delta] = (w.depth, w.weight.degree)
        if w.depth != delta or w.weight.degree > delta:
            bad.append(f"nested_{delta}")
    covered = {0, 1, 2} <= ks and {1, 2, 3} <= ns
    return CheckResult(
        "soft polynomial bound (SAL)",
        not bad and covered and len(entries) >= 10,
        len(entries),
        {"bang k": sorted(ks), "multiplex n": sorted(ns), "depth/degree": degrees, **({"failing": bad} if bad else {})},
    )


# -- machine properties ----------------------------------------------------------


def bang_commute_instance(k: int) -> tuple[Command, Command]:
    """``<!_{x1..xk} t | a>[!u_i/x_i]`` and the expected ``<!t | a>[u_i/x_i]``."""
    xs = [pos(f"x{i}") for i in range(1, k + 1)]
    us = [Box(Var(neg(f"b{i}"))) for i in range(1, k + 1)]
    body = Box(DAIMON_NEG)
    for x in reversed(xs):
        body = Pair(Var(x), body)
    a = Var(neg("a"))
    start = substitute(Command(bang_macro(xs, body), a), {x: Bang(u) for x, u in zip(xs, us)})
    target = substitute(Command(Bang(body), a), dict(zip(xs, us)))
    return start, target


def bang_commute(ks=(0, 1, 2, 3)) -> CheckResult:
    bad = []
    for k in ks:
        start, target = bang_commute_instance(k)
        steps = run_steps(start, 1 + k)
        kinds = [s for s, _ in steps]
        if kinds != [StepKind.MU] + [StepKind.BANG] * k or steps[-1][1] != target:
            bad.append(k)
    return CheckResult("bang commutation", not bad, len(ks), {"failing": bad} if bad else {})


def daimon_properties(cases: int = 100, seed: int = 3, fuel: int = 100_000) -> CheckResult:
    """Positive values do not reduce against the negative daimon, and a negative
    term costs no more against the positive daimon than against a daimon pair or box."""
    rng = random.Random(seed)
    bad = []
    for i in range(cases):
        v = corpus.random_term(rng, POS, 3, value=True)
        if step(Command(v, DAIMON_NEG)) is not None:
            bad.append(("inert", i))
    terms = corpus.random_negative_terms(seed, cases)
    ds = (DAIMON_POS, DAIMON_NEG)
    for i, t in enumerate(terms):
        base = time_beta(Command(DAIMON_POS, t), fuel)
        if base is None:
            bad.append(("undefined", i))
            continue
        for d1 in ds:
            tb = time_beta(Command(Box(d1), t), fuel)
            if tb is None or base > tb:
                bad.append(("box", i))
            for d2 in ds:
                tp = time_beta(Command(Pair(d1, d2), t), fuel)
                if tp is None or base > tp:
                    bad.append(("pair", i))
    return CheckResult("daimon properties", not bad, cases, {"failing": bad[:5]} if bad else {})


def countdown_commands() -> list[Command]:
    return [daimon_closure(e.command) for e in corpus.mal_entries()]


def countdown_equivalence(fuel: int = 1_000_000) -> CheckResult:
    cmds = countdown_commands()
    bad = []
    checked = 0
    for i, c in enumerate(cmds):
        t = time_beta(c, fuel)
        if t is None:
            bad.append((i, "undefined"))
            continue
        for n in range(t + 4):
            checked += 1
            normalizes = F.countdown_run(c, n, fuel) is F.RunOutcome.NORMALIZES
            if normalizes != (t <= n):
                bad.append((i, n))
    return CheckResult("countdown equivalence", not bad, len(cmds), {"runs": checked, **({"failing": bad[:5]} if bad else {})})


# -- constructors and forcing --------------------------------------------------------


def conv_goldens() -> dict[str, bool]:
    A = C.KVar("A", C.OPOS)
    T_ = C.KVar("T", C.OPOS)
    U_ = C.KVar("U", C.arrow(C.IOTA, C.OPOS, C.OPOS))
    n = C.KVar("n", C.IOTA)
    p, q, r = (C.KVar(x, C.IOTA) for x in "pqr")
    y, x = "y", "x"
    # U = \z. rec_o+ z (\y:i. \x:o+. dn x^⊥): arguments are the counter then the accumulator
    U = C.Lam(
        "z",
        C.OPOS,
        C.apply(
            C.Rec(C.OPOS),
            C.KVar("z", C.OPOS),
            C.Lam(y, C.IOTA, C.Lam(x, C.OPOS, C.ShiftDown(C.negate(C.KVar(x, C.OPOS))))),
        ),
    )
    u_target = C.ShiftDown(C.ShiftUp(C.ShiftDown(C.ShiftUp(C.ShiftDown(C.negate(A))))))
    rec = C.Rec(C.OPOS)
    recn = C.RecNeg(C.OPOS)
    sn = C.App(C.SUCC, n)
    add = C.add
    return {
        "rec 0": C.conv_check(C.apply(rec, T_, U_, C.ZERO), T_),
        "rec s n": C.conv_check(C.apply(rec, T_, U_, sn), C.apply(U_, n, C.apply(rec, T_, U_, n))),
        "rec⊥ 0": C.conv_check(C.apply(recn, T_, U_, C.ZERO), C.negate(T_)),
        "rec⊥ s n": C.conv_check(
            C.apply(recn, T_, U_, sn), C.apply(C.negate(U_), n, C.apply(rec, T_, U_, n))
        ),
        "U A 5": C.conv_check(C.apply(U, A, C.numeral(5)), u_target),
        "0 + q": C.conv_check(add(C.ZERO, q), q),
        "q + 0": C.conv_check(add(q, C.ZERO), q),
        "p + q = q + p": C.conv_check(add(p, q), add(q, p)),
        "p + (q + r) = (p + q) + r": C.conv_check(add(p, add(q, r)), add(add(p, q), r)),
        "2 + 3 = 5": C.conv_check(add(C.numeral(2), C.numeral(3)), C.numeral(5)),
    }


def conv_suite() -> CheckResult:
    g = conv_goldens()
    return CheckResult("convertibility goldens", all(g.values()), len(g), {k: v for k, v in g.items() if not v})


def forcing_sweep(force_size: int = 7, pos_size: int = 6) -> CheckResult:
    r = C.KVar("r", C.IOTA)
    bad = []
    n_force = n_pos = 0
    for a in F.formulas_up_to(force_size):
        n_force += 1
        if C.kind_check(F.force(r, a)) != C.ONEG:
            bad.append(str(a))
    for a in F.formulas_up_to(pos_size):
        if C.polarity_of(a) != "-":
            continue
        n_pos += 1
        if not F.check_posforcing(a, r):
            bad.append(str(a))
    return CheckResult(
        "forcing translation",
        not bad,
        n_force + n_pos,
        {"force kinds": n_force, "posforcing": n_pos, **({"failing": bad[:3]} if bad else {})},
    )


SUITES = {
    "monoid": monoid_laws,
    "cbn": cbn_correspondence,
    "cbv": cbv_correspondence,
    "linear": linear_time,
    "soft": soft_bound,
    "bang": bang_commute,
    "daimon": daimon_properties,
    "countdown": countdown_equivalence,
    "conv": conv_suite,
    "forcing": forcing_sweep,
}


def run_all(quick: bool = False) -> list[CheckResult]:
    if quick:
        return [
            monoid_laws(1000),
            cbn_correspondence(20),
            cbv_correspondence(20),
            linear_time(),
            soft_bound(),
            bang_commute(),
            daimon_properties(30),
            countdown_equivalence(),
            conv_suite(),
            forcing_sweep(5, 5),
        ]
    return [f() for f in SUITES.values()]
