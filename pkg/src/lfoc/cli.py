"""``lfoc``: parse, run, type-check, certify, encode, force and count down.

Every subcommand exits 0 on success or a true verdict and 1 otherwise.  Input
errors (parse, schema, derivation) print a positioned message and exit 2.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from lfoc import checks
from lfoc import constructors as C
from lfoc import derivfile, encodings as E, forcing as F, text
from lfoc import quantity as Q
from lfoc import typecheck as T
from lfoc.certify import NotACommand, certify
from lfoc.corpus import detect_mode
from lfoc.reduction import Outcome, normalize
from lfoc.terms import Command, TermError, free_vars, polarity, size

DEFAULT_FUEL = 1_000_000


class UsageError(Exception):
    pass


def _read(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as e:
        raise UsageError(f"{source}: {e.strerror}") from None


def _emit(args, obj: dict, plain: str):
    print(json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True) if args.json else plain)


def _formula_env(src: str, **fixed: C.Kind) -> dict[str, C.Kind]:
    """Bare names in a command-line formula default to positive atoms."""
    names = set(re.findall(r"[A-Za-z_][A-Za-z0-9_']*", src)) - {"dn", "up", "forall", "exists", "rec", "s", "i"}
    env = {n: C.OPOS for n in names}
    env.update(fixed)
    return env


# -- subcommands -----------------------------------------------------------------


def cmd_parse(args) -> int:
    src = _read(args.file)
    if args.grammar == "formula":
        t = text.parse_constructor(src)
        k = C.kind_check(t)
        _emit(args, {"constructor": str(t), "kind": str(k)}, f"{t}\n  : {k}")
        return 0
    if args.grammar == "lambda":
        t = E.parse_lambda(src)
        _emit(args, {"lambda": str(t), "affine": E.is_affine_lambda(t)}, str(t))
        return 0
    x = text.parse(src)
    fv = sorted(f"{v}" for v in free_vars(x))
    if isinstance(x, Command):
        info = {"kind": "command", "text": str(x), "size": size(x), "free": fv}
    else:
        info = {"kind": "term", "text": str(x), "polarity": str(polarity(x)), "size": size(x), "free": fv}
    plain = info["text"] + f"\n  {info['kind']}, size {info['size']}" + (f", free {', '.join(fv)}" if fv else "")
    _emit(args, info, plain)
    return 0


def _command(src: str) -> Command:
    x = text.parse(src)
    if not isinstance(x, Command):
        raise UsageError("expected a command <t | u>")
    return x


def cmd_run(args) -> int:
    c = _command(_read(args.file))
    tr = normalize(c, args.fuel)
    if args.json:
        print(json.dumps({**tr.summary(), "final": str(tr.final)}, indent=2, sort_keys=True))
    else:
        print(tr.to_text())
    return 0 if tr.outcome is not Outcome.FUEL_EXHAUSTED else 1


def _mode(args, d: T.Derivation) -> str:
    return detect_mode(d) if args.mode == "auto" else args.mode


def cmd_check(args) -> int:
    d = derivfile.loads(_read(args.file))
    mode = _mode(args, d)
    j = T.check(d, mode)
    tally = d.rule_tally()
    _emit(
        args,
        {"ok": True, "mode": mode, "judgment": str(j), "rules": dict(sorted(tally.items())), "depth": T.depth(d)},
        f"ok ({mode})  {j}",
    )
    return 0


def _monoid(args, mode: str) -> Q.MonoidSpec:
    if args.monoid != "auto":
        return Q.monoid(args.monoid)
    return {"mal": Q.NAT, "sal": Q.SOFT, "pa": Q.TRIVIAL}[mode]


def cmd_certify(args) -> int:
    if args.all:
        files = sorted(Path(args.target).glob("*/deriv.json"))
        if not files:
            raise UsageError(f"no */deriv.json under {args.target}")
    else:
        files = [Path(args.target)]
    reports, ok = [], True
    for f in files:
        d = derivfile.load(f)
        mode = _mode(args, d)
        rep = certify(d, _monoid(args, mode), args.fuel, mode)
        ok &= rep.ok
        reports.append((f, rep))
    if args.json:
        out = [{"file": str(f), **r.to_dict()} for f, r in reports]
        print(json.dumps(out if args.all else out[0], indent=2, ensure_ascii=False, sort_keys=True))
    elif args.all:
        for f, r in reports:
            lin = "" if r.within_size is None else f"  beta {r.counts['beta']} <= |c| {r.size}"
            print(f"{'ok  ' if r.ok else 'FAIL'}  {f.parent.name:<20} {r.mode}/{r.monoid:<5} measured {r.measured} <= {r.bound}{lin}")
        print(f"{sum(r.ok for _, r in reports)}/{len(reports)} certified")
    else:
        print(reports[0][1].to_text())
        print(f"verdict   {reports[0][1].ok}")
    return 0 if ok else 1


def cmd_encode(args) -> int:
    src = args.expr if args.expr is not None else _read(args.file)
    t = E.parse_lambda(src)
    enc = E.encode_cbn(t) if args.strategy == "cbn" else E.encode_cbv(t)
    out = {"lambda": str(t), "strategy": args.strategy, "term": str(enc)}
    if args.derive:
        if args.strategy != "cbn":
            raise UsageError("--derive is available for the call-by-name encoding")
        d = E.derive_cbn(t)
        if args.json:
            out["derivation"] = derivfile.to_json(d)
        else:
            print(str(enc))
            print(derivfile.dumps(d))
            return 0
    _emit(args, out, str(enc))
    return 0


def cmd_countdown(args) -> int:
    c = _command(_read(args.file))
    tr = F.countdown_trace(c, args.counter, args.fuel)
    if args.json:
        print(json.dumps({"outcome": tr.outcome.value, "steps": len(tr.steps), "counter": tr.final.count}, sort_keys=True))
    else:
        if args.trace:
            print(tr.to_text())
        print(tr.outcome.value)
    return 0 if tr.outcome is F.RunOutcome.NORMALIZES else 1


def cmd_force(args) -> int:
    fs = F.INTEGER if args.structure == "integer" else F.TRIVIAL
    env = _formula_env(args.formula)
    env.pop(args.condition, None)
    a = text.parse_constructor(args.formula, env)
    p = text.parse_constructor(args.condition, {args.condition: fs.condition_kind}) if re.fullmatch(
        r"[A-Za-z_][A-Za-z0-9_']*", args.condition
    ) else text.parse_constructor(args.condition)
    star = F.translate(a, fs)
    forced = F.force(p, a, fs)
    shown = C.normalize(forced) if args.normalize else forced
    _emit(
        args,
        {"formula": str(a), "translation": str(star), "forcing": str(shown), "kind": str(C.kind_check(forced))},
        f"A*     = {star}\n{p} ⊩ A = {shown}",
    )
    return 0


def cmd_selftest(args) -> int:
    results = []
    suites = checks.run_all(quick=args.quick) if not args.only else [checks.SUITES[n]() for n in args.only]
    for r in suites:
        results.append(r)
        print(r.line(), flush=True)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} suites passed")
    return 0 if passed == len(results) else 1


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lfoc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, fuel=False, mode=False):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if fuel:
            p.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="step budget (default 10^6)")
        if mode:
            p.add_argument("--mode", choices=("auto", *T.MODES), default="auto")

    p = sub.add_parser("parse", help="parse and pretty-print a term, command, formula or lambda term")
    p.add_argument("file", help="input file, or - for stdin")
    p.add_argument("--grammar", choices=("lfoc", "formula", "lambda"), default="lfoc")
    common(p)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("run", help="reduce a command and print its trace")
    p.add_argument("file")
    common(p, fuel=True)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("check", help="check a derivation file")
    p.add_argument("file")
    common(p, mode=True)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("certify", help="compare measured steps with the derivation's weight")
    p.add_argument("target", help="deriv.json, or a corpus directory with --all")
    p.add_argument("--all", action="store_true", help="certify every <dir>/*/deriv.json")
    p.add_argument("--monoid", choices=("auto", *Q.MONOIDS), default="auto")
    common(p, fuel=True, mode=True)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("encode", help="encode a lambda term")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("-e", "--expr", help="lambda term given inline")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cbn", dest="strategy", action="store_const", const="cbn")
    g.add_argument("--cbv", dest="strategy", action="store_const", const="cbv")
    p.add_argument("--derive", action="store_true", help="also print a typing derivation (CBN)")
    common(p)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("countdown", help="run the countdown machine")
    p.add_argument("file")
    p.add_argument("--counter", type=int, required=True)
    p.add_argument("--trace", action="store_true")
    common(p, fuel=True)
    p.set_defaults(fn=cmd_countdown)

    p = sub.add_parser("force", help="translate a formula and force it at a condition")
    p.add_argument("formula", help="e.g. 'dn X' or 'X * ~Y'; bare names are positive atoms")
    p.add_argument("--condition", default="r", help="condition variable or term of kind i")
    p.add_argument("--structure", choices=("integer", "trivial"), default="integer")
    p.add_argument("--normalize", action="store_true", help="print the forcing formula in normal form")
    common(p)
    p.set_defaults(fn=cmd_force)

    p = sub.add_parser("selftest", help="run the property suites")
    p.add_argument("--quick", action="store_true", help="smaller sample sizes")
    p.add_argument("--only", nargs="+", choices=sorted(checks.SUITES))
    p.set_defaults(fn=cmd_selftest)
    return ap


_INPUT_ERRORS = (
    text.ParseError,
    E.LambdaParseError,
    E.AffinityError,
    derivfile.SchemaError,
    T.DerivationError,
    T.ContractInQuantitative,
    Q.MonoidCapabilityError,
    C.KindError,
    TermError,
    NotACommand,
    UsageError,
    ValueError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _INPUT_ERRORS as e:
        name = type(e).__name__
        print(f"lfoc {args.cmd}: {name}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
