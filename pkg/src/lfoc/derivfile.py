"""JSON format for derivations.

A node is an object::

    {
      "rule": "Cut",
      "conclusion": {"kind": "command", "command": "<... | ...>",
                     "context": {"+x": "~X^o+", ...}},
      "premises": [ ... ],
      "split": [["+x"], ["-a"]],          two-premise rules
      "var": "-a",                        Mu*, ShiftUp, Conv (optional), Weaken,
                                          MultiplexN, Contract
      "vars": ["-a", "+x"],               Parr
      "formula": "...",                   Weaken
      "witness": "...", "witness_kind": "i",   Exists
      "target": "...",                    Conv
      "boxed": ["+x1", "+x2"],            BangK
      "merged": ["-k1", "-k2"], "n": 2    MultiplexN, Contract
    }

A term conclusion has ``"kind": "term"`` with ``"term"`` and ``"formula"``
instead of ``"command"``.  Terms use the term grammar of ``lfoc.text`` and
formulas the constructor grammar.
"""

from __future__ import annotations

import json
from pathlib import Path

from lfoc import constructors as C
from lfoc import text
from lfoc.terms import NEG, POS, Variable
from lfoc.typecheck import RULES, CommandJ, Derivation, Judgment, TermJ


class SchemaError(ValueError):
    pass


_ALLOWED = {
    "rule",
    "conclusion",
    "premises",
    "split",
    "var",
    "vars",
    "formula",
    "witness",
    "witness_kind",
    "target",
    "boxed",
    "merged",
    "n",
}


def _var(s: str, where: str) -> Variable:
    if not isinstance(s, str) or len(s) < 2 or s[0] not in "+-":
        raise SchemaError(f"{where}: variables are written +name or -name, got {s!r}")
    return Variable(s[1:], POS if s[0] == "+" else NEG)


def _show_var(v: Variable) -> str:
    return f"{v.polarity}{v.name}"


def judgment_to_json(j: Judgment) -> dict:
    ctx = {_show_var(v): str(a) for v, a in sorted(j.context.items(), key=lambda kv: str(kv[0]))}
    if isinstance(j, TermJ):
        return {"kind": "term", "term": str(j.term), "formula": str(j.formula), "context": ctx}
    return {"kind": "command", "command": str(j.command), "context": ctx}


def judgment_from_json(obj, where: str = "conclusion") -> Judgment:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    ctx_raw = obj.get("context", {})
    if not isinstance(ctx_raw, dict):
        raise SchemaError(f"{where}.context: expected an object")
    ctx = {_var(k, where): _formula(v, f"{where}.context") for k, v in ctx_raw.items()}
    kind = obj.get("kind")
    try:
        if kind == "term":
            return TermJ(text.parse_term(obj["term"]), _formula(obj["formula"], where), ctx)
        if kind == "command":
            return CommandJ(text.parse_command(obj["command"]), ctx)
    except KeyError as e:
        raise SchemaError(f"{where}: missing field {e}") from None
    except text.ParseError as e:
        raise SchemaError(f"{where}: {e}") from None
    raise SchemaError(f"{where}: kind must be 'term' or 'command'")


def _formula(s, where: str) -> C.Constructor:
    if not isinstance(s, str):
        raise SchemaError(f"{where}: formulas are strings")
    try:
        return text.parse_constructor(s)
    except text.ParseError as e:
        raise SchemaError(f"{where}: {e}") from None


def to_json(d: Derivation) -> dict:
    out: dict = {"rule": d.rule, "conclusion": judgment_to_json(d.conclusion)}
    if d.split is not None:
        out["split"] = [[_show_var(v) for v in g] for g in d.split]
    if d.var is not None:
        out["var"] = _show_var(d.var)
    if d.vars:
        out["vars"] = [_show_var(v) for v in d.vars]
    if d.formula is not None:
        out["formula"] = str(d.formula)
    if d.witness is not None:
        out["witness"] = str(d.witness)
        out["witness_kind"] = str(d.witness_kind or C.kind_check(d.witness))
    if d.target is not None:
        out["target"] = str(d.target)
    if d.rule == "BangK":
        out["boxed"] = [_show_var(v) for v in d.boxed]
    if d.merged or d.rule in ("MultiplexN", "Contract"):
        out["merged"] = [_show_var(v) for v in d.merged]
        out["n"] = len(d.merged) if d.n is None else d.n
    out["premises"] = [to_json(p) for p in d.premises]
    return out


def from_json(obj, where: str = "root") -> Derivation:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: a derivation node is an object")
    extra = set(obj) - _ALLOWED
    if extra:
        raise SchemaError(f"{where}: unknown fields {sorted(extra)}")
    rule = obj.get("rule")
    if rule not in RULES:
        raise SchemaError(f"{where}: unknown rule {rule!r}")
    if "conclusion" not in obj:
        raise SchemaError(f"{where}: missing conclusion")
    prem = obj.get("premises", [])
    if not isinstance(prem, list):
        raise SchemaError(f"{where}.premises: expected a list")
    d = Derivation(
        rule,
        [from_json(p, f"{where}.{i}") for i, p in enumerate(prem)],
        judgment_from_json(obj["conclusion"], f"{where}.conclusion"),
    )
    if "split" in obj:
        if not isinstance(obj["split"], list) or not all(isinstance(g, list) for g in obj["split"]):
            raise SchemaError(f"{where}.split: expected a list of variable lists")
        d.split = tuple(tuple(_var(v, f"{where}.split") for v in g) for g in obj["split"])
    if "var" in obj:
        d.var = _var(obj["var"], f"{where}.var")
    if "vars" in obj:
        d.vars = tuple(_var(v, f"{where}.vars") for v in obj["vars"])
    if "formula" in obj:
        d.formula = _formula(obj["formula"], f"{where}.formula")
    if "witness" in obj:
        d.witness = _formula(obj["witness"], f"{where}.witness")
        if "witness_kind" in obj:
            try:
                d.witness_kind = text.parse_kind(obj["witness_kind"])
            except text.ParseError as e:
                raise SchemaError(f"{where}.witness_kind: {e}") from None
    if "target" in obj:
        d.target = _formula(obj["target"], f"{where}.target")
    if "boxed" in obj:
        d.boxed = tuple(_var(v, f"{where}.boxed") for v in obj["boxed"])
    if "merged" in obj:
        d.merged = tuple(_var(v, f"{where}.merged") for v in obj["merged"])
    if "n" in obj:
        if not isinstance(obj["n"], int) or obj["n"] < 0:
            raise SchemaError(f"{where}.n: expected a natural number")
        d.n = obj["n"]
    return d


def dumps(d: Derivation) -> str:
    return json.dumps(to_json(d), indent=1, ensure_ascii=False)


def loads(s: str) -> Derivation:
    try:
        obj = json.loads(s)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return from_json(obj)


def load(path: str | Path) -> Derivation:
    return loads(Path(path).read_text())


def save(d: Derivation, path: str | Path):
    Path(path).write_text(dumps(d) + "\n")
