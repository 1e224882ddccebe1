import json
import subprocess
import sys

import pytest

from lfoc import corpus
from lfoc.cli import main

@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    corpus.write_corpus(root)
    return root


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, body):
    p = tmp_path / name
    p.write_text(body)
    return str(p)


TIME2 = (
    "<(mu (-a, +x3). <+x3 | -a>, (mu (-b, +x2). <+x2 | -b>, daimon+)) "
    "| mu (-x, +x1). <+x1 | mu (-y, +x0). <+x0 | -x>>>"
)


def test_parse(capsys, tmp_path):
    code, out, _ = run(capsys, "parse", write(tmp_path, "t.lfoc", "< +x | mu +y. <+y | -a> >"), "--json")
    info = json.loads(out)
    assert code == 0 and info["kind"] == "command" and info["free"] == ["+x", "-a"]
    code, out, _ = run(capsys, "parse", write(tmp_path, "f.txt", "forall X:o+. ~X^o+ | X"), "--grammar", "formula")
    assert code == 0 and out.strip().endswith(": o-")


def test_parse_error_position(capsys, tmp_path):
    code, _, err = run(capsys, "parse", write(tmp_path, "bad.lfoc", "<+x |\n  -a )"))
    assert code == 2 and "ParseError: 2:" in err


def test_run(capsys, tmp_path):
    code, out, _ = run(capsys, "run", write(tmp_path, "c.lfoc", TIME2), "--json")
    rep = json.loads(out)
    assert code == 0 and rep["counts"]["beta"] == 2 and rep["outcome"] == "normal"
    code, out, _ = run(capsys, "run", write(tmp_path, "c.lfoc", TIME2))
    assert out.splitlines()[0].startswith("0\tstart")


def test_run_out_of_fuel(capsys, tmp_path):
    loop = "<{mu {-k}. <{-k} | -k>} | mu {-k}. <{-k} | -k>>"
    code, out, _ = run(capsys, "run", write(tmp_path, "l.lfoc", loop), "--fuel", "20", "--json")
    assert code == 1 and json.loads(out)["outcome"] == "fuel-exhausted"


def test_check(capsys, corpus_dir):
    code, out, _ = run(capsys, "check", str(corpus_dir / "sal_boxed_1" / "deriv.json"))
    assert code == 0 and out.startswith("ok (sal)")
    code, _, err = run(capsys, "check", str(corpus_dir / "sal_boxed_1" / "deriv.json"), "--mode", "mal")
    assert code == 2 and "RuleMismatch" in err


def test_certify_identity_application(capsys, corpus_dir):
    code, out, _ = run(capsys, "certify", str(corpus_dir / "cbn_01" / "deriv.json"), "--monoid", "nat", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["measured"] == 1


def test_certify_all(capsys, corpus_dir):
    code, out, _ = run(capsys, "certify", "--all", str(corpus_dir))
    n = len(corpus.all_entries())
    assert code == 0 and out.strip().endswith(f"{n}/{n} certified")


def test_certify_false_verdict(capsys, corpus_dir):
    # the trivial monoid bounds every run by 0 steps
    code, out, _ = run(capsys, "certify", str(corpus_dir / "cbn_01" / "deriv.json"), "--monoid", "trivial")
    assert code == 1 and "verdict   False" in out


def test_certify_capability_error(capsys, corpus_dir):
    code, _, err = run(capsys, "certify", str(corpus_dir / "sal_nested_2" / "deriv.json"), "--monoid", "nat")
    assert code == 2 and "MonoidCapabilityError" in err


def test_encode(capsys):
    code, out, _ = run(capsys, "encode", "-e", r"\a. a", "--cbn")
    assert code == 0 and out.strip() == "mu (-a, +x0). <+x0 | -a>"
    code, out, _ = run(capsys, "encode", "-e", r"\x. x", "--cbv")
    assert out.strip().startswith("{mu (+x,")
    code, out, _ = run(capsys, "encode", "-e", r"\f. \x. f x", "--cbn", "--derive", "--json")
    assert json.loads(out)["derivation"]["rule"] == "Parr"
    code, _, err = run(capsys, "encode", "-e", r"\x. x x", "--cbn")
    assert code == 2 and "AffinityError" in err


def test_countdown(capsys, tmp_path):
    f = write(tmp_path, "c.lfoc", TIME2)
    code, out, _ = run(capsys, "countdown", f, "--counter", "1")
    assert code == 1 and out.strip() == "Diverges"
    code, out, _ = run(capsys, "countdown", f, "--counter", "2", "--trace")
    assert code == 0 and out.strip().endswith("Normalizes")


def test_force(capsys):
    code, out, _ = run(capsys, "force", "dn X", "--condition", "r")
    assert code == 0 and out.splitlines()[0] == r"A*     = \r:i. dn X^(i -> o+) r"
    code, out, _ = run(capsys, "force", "~X | ~Y", "--json")
    assert json.loads(out)["kind"] == "o-"


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "conv", "bang")
    assert code == 0 and "2/2 suites passed" in out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "lfoc", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "certify" in out.stdout
