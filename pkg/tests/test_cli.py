import io
import json

import pytest

from conftest import T_TEXT, TURNER_TEXT
from dlw.cli import main
from dlw.theory import parse_theory
from dlw.verify import CorpusParams, theories_with_extensions


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err, stdin=io.StringIO(stdin))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    (tmp_path / "T.dlt").write_text(T_TEXT)
    (tmp_path / "turner.dlt").write_text(TURNER_TEXT)
    (tmp_path / "bad.dlt").write_text("d1: a : b\n")
    (tmp_path / "inconsistent.dlt").write_text("W: a & ~a.")
    return tmp_path


def test_extensions(files):
    assert run("extensions", "--semantics", "reiter", str(files / "T.dlt")) == \
        (0, "no extensions\n", "")
    code, out, _ = run("extensions", "--semantics", "constrained", str(files / "T.dlt"))
    assert code == 0 and out == "extension 1: a & c  from [d1]\n"


def test_entails(files):
    turner = str(files / "turner.dlt")
    assert run("entails", "--semantics", "reiter", "--skeptical", "-q", "h", turner)[:2] == \
        (0, "true\n")
    assert run("entails", "--credulous", "-q", "~h", turner)[:2] == (0, "false\n")
    code, out, err = run("entails", "-q", "false", str(files / "T.dlt"))
    assert (code, out) == (0, "true\n") and "no extensions" in err


def test_failsafe_and_complete(files):
    turner = str(files / "turner.dlt")
    assert run("failsafe", turner)[1] == "not fail-safe; witness prefix [d2]\n"
    assert run("failsafe", "--semantics", "constrained", turner)[1] == "fail-safe\n"
    assert run("complete", "--process", "d2", turner)[1] == "false\n"
    assert run("complete", "--process", "d1", turner)[1] == "true\n"
    assert run("complete", "--process", "", turner)[1] == "true\n"
    assert run("complete", "--process", "d7", turner)[0] == 1


def test_processes_and_check(files):
    assert run("processes", "--semantics", "constrained", str(files / "T.dlt"))[1] == "[d1]\n"
    assert run("check", str(files / "T.dlt"))[1] == "ok: 2 defaults over 3 atoms\n"


def test_exit_codes(files):
    assert run("check", str(files / "bad.dlt"))[0] == 1
    assert run("check", str(files / "inconsistent.dlt"))[0] == 1
    assert run("check", str(files / "missing.dlt"))[0] == 1
    assert run("extensions", "--semantics", "bogus", str(files / "T.dlt"))[0] == 1
    assert run("entails", "-q", "h &", str(files / "turner.dlt"))[0] == 1
    assert run("translate", str(files / "T.dlt"))[0] == 3
    assert run("translate", "--semantics", "justified", str(files / "turner.dlt"))[0] == 3
    assert run("extensions", "--max-prefixes", "1", str(files / "turner.dlt"))[0] == 2


def test_env_cap(files, monkeypatch):
    monkeypatch.setenv("DLW_MAX_PREFIXES", "1")
    code, _, err = run("extensions", str(files / "turner.dlt"))
    assert code == 2 and "resource limit" in err


def test_translate_almost(files):
    out_path = files / "out.dlt"
    code, out, _ = run("translate", "--mode", "almost", "--reasoning", "skeptical",
                       "--semantics", "reiter", str(files / "turner.dlt"), "-o", str(out_path))
    assert code == 0
    assert "flag __a" in out and "q => __a | q" in out
    text = out_path.read_text()
    assert text.startswith("#generated\n#flag __a\n")
    assert len(parse_theory(text).defaults) == 20


def test_translate_pipes_into_extensions(files):
    code, text, _ = run("translate", "--mode", "faithful", str(files / "turner.dlt"))
    assert code == 0
    code, out, _ = run("extensions", "--format", "json", "-", stdin=text)
    assert code == 0 and len(json.loads(out)["extensions"]) >= 1


@pytest.mark.parametrize("argv", [
    ["check"], ["processes"], ["extensions"], ["entails", "-q", "h"], ["failsafe"],
    ["complete", "--process", "d1"], ["translate", "--mode", "enumerate"],
    ["translate", "--mode", "almost", "--reasoning", "credulous"],
])
def test_json_output(files, argv):
    code, out, _ = run(*argv, "--format", "json", str(files / "turner.dlt"))
    assert code == 0
    json.loads(out)


def test_verify_json_lines():
    code, out, _ = run("verify", "--count", "8", "--format", "json")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows and all(r["passed"] for r in rows)
    assert run("verify", "--checks", "oracle,bogus")[0] == 1


def test_deterministic_output(files):
    first = run("translate", "--mode", "almost", str(files / "turner.dlt"))
    assert first == run("translate", "--mode", "almost", str(files / "turner.dlt"))


def test_translate_composes_on_corpus(tmp_path):
    """Every corpus theory with an extension survives translate | extensions."""
    chosen = theories_with_extensions(CorpusParams(max_defaults=2, max_atoms=2, count=100),
                                      "reiter", 15)
    for mode in ("faithful", "almost", "enumerate"):
        for _, t in chosen:
            path = tmp_path / "t.dlt"
            path.write_text(str(t))
            code, text, _ = run("translate", "--mode", mode, str(path))
            assert code == 0
            code, out, _ = run("extensions", "-", stdin=text)
            assert code == 0 and out != "no extensions\n"
