import json

import pytest

from lfoc import corpus, derivfile
from lfoc import typecheck as T


@pytest.mark.parametrize("entry", corpus.all_entries(), ids=lambda e: e.name)
def test_round_trip(entry, tmp_path):
    d = entry.derivation
    path = tmp_path / "deriv.json"
    derivfile.save(d, path)
    back = derivfile.load(path)
    assert derivfile.to_json(back) == derivfile.to_json(d)
    assert T.judgments_equal(T.check(back, entry.mode), entry.derivation.conclusion)


def test_contract_round_trip():
    from tests_helpers import contracted

    d = contracted()
    back = derivfile.loads(derivfile.dumps(d))
    T.check(back, "pa")
    assert back.merged == d.merged


def _obj():
    return derivfile.to_json(corpus.mal_entries()[0].derivation)


def test_schema_errors():
    o = _obj()
    o["extra"] = 1
    with pytest.raises(derivfile.SchemaError, match="unknown fields"):
        derivfile.from_json(o)
    o = _obj()
    o["rule"] = "Magic"
    with pytest.raises(derivfile.SchemaError, match="unknown rule"):
        derivfile.from_json(o)
    o = _obj()
    o["premises"][0]["conclusion"]["term"] = "+x +y"
    with pytest.raises(derivfile.SchemaError, match=r"root\.0\.conclusion: 1:"):
        derivfile.from_json(o)
    o = _obj()
    o["split"] = [["x"], ["-a"]]
    with pytest.raises(derivfile.SchemaError, match="variables are written"):
        derivfile.from_json(o)
    with pytest.raises(derivfile.SchemaError, match="line 1"):
        derivfile.loads("{not json")


def test_check_errors_carry_paths():
    o = _obj()
    o["premises"][1]["conclusion"]["formula"] = "X^o+"
    d = derivfile.from_json(o)
    with pytest.raises(T.DerivationError) as e:
        T.check(d)
    assert e.value.path.startswith("root")


def test_written_corpus_layout(tmp_path):
    dirs = corpus.write_corpus(tmp_path)
    assert len(dirs) == len(corpus.all_entries())
    for d in dirs:
        assert (d / "term.lfoc").exists()
        json.loads((d / "deriv.json").read_text())
