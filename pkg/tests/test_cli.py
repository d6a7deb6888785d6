import json
import subprocess
import sys
from pathlib import Path

import pytest

from hnnlinear.cli import EXIT_INTERNAL, EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK, main
from hnnlinear.io import ParseError, parse_text, serialize

INSTANCES = Path(__file__).resolve().parent.parent / "demos" / "instances"


def inst(name):
    return str(INSTANCES / f"{name}.jsonl")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_exit_codes(capsys):
    code, out, _ = run(capsys, "analyze", inst("bs_2_3"))
    assert code == EXIT_NEGATIVE
    rep = json.loads(out)
    assert rep["verdict"]["verdict"] == "NotResiduallyFinite"
    assert rep["verdict"]["index_D_over_H"] == "inf"
    code, out, _ = run(capsys, "analyze", inst("bs_3_3"))
    assert code == EXIT_OK
    assert json.loads(out)["H"]["H"]["basis"] == [["3"]]


def test_extend(capsys):
    code, out, _ = run(capsys, "extend", inst("swap"))
    assert code == EXIT_OK
    ext = json.loads(out)["extension"]
    assert ext["order"] == "2" and ext["index_in_K"] == "1"
    code, out, _ = run(capsys, "extend", inst("z4_replacement"))
    ext = json.loads(out)["extension"]
    assert (ext["order"], ext["index_in_K"]) == ("4", "8")
    code, out, _ = run(capsys, "extend", inst("bs_2_4"))
    assert code == EXIT_NEGATIVE
    assert "error" in json.loads(out)["extension"]


def test_rep(capsys, tmp_path):
    target = tmp_path / "swap.json"
    code, _, _ = run(capsys, "rep", inst("swap"), "--json-out", str(target))
    assert code == EXIT_OK
    rep = json.loads(target.read_text())["rep"]
    assert rep["representation"]["dimension"] == "20"
    assert rep["certificate"]["vertices"] == ["e1", "e2", "z", "zeta0", "zeta1"]
    mats = [json.loads(line) for line in Path(rep["representation"]["matrix_file"]).read_text().splitlines()]
    assert [m["generator"] for m in mats] == ["t", "e1", "e2"]
    assert all(len(m["matrix"]) == 20 for m in mats)


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", inst("bs_2_4"), "--word", "pinch")
    assert code == EXIT_OK and out.strip() == "pinch: (4)"
    code, out, _ = run(capsys, "reduce", inst("bs_2_4"))
    assert "inverse_pinch: (2)" in out
    code, _, err = run(capsys, "reduce", inst("bs_2_4"), "--word", "missing")
    assert code == EXIT_INVALID and "missing" in err


def test_invalid_input(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"ambient_rank": "1", "A": [["2"]], "phi": [["x"]]}\n')
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == EXIT_INVALID and "phi[0][0]" in err
    bad.write_text('{"ambient_rank": "2", "relations": [["0","2"]], "A": [["1","0"],["0","1"]], '
                   '"phi": [["0","1"],["1","0"]]}\n')
    assert run(capsys, "analyze", str(bad))[0] == EXIT_INVALID
    code, _, err = run(capsys, "analyze", str(tmp_path / "nope.jsonl"))
    assert code == EXIT_INVALID
    assert run(capsys, "extend")[0] == EXIT_INVALID
    code, _, err = run(capsys, "analyze", inst("swap"), "--json-out", str(tmp_path / "no" / "dir.json"))
    assert code == EXIT_INVALID and "cannot write" in err


def test_internal_assertion(capsys, monkeypatch):
    import hnnlinear.cli as cli

    def boom(records, args):
        raise AssertionError("guard")
    monkeypatch.setitem(cli.COMMANDS, "analyze", boom)
    assert run(capsys, "analyze", inst("swap"))[0] == EXIT_INTERNAL


@pytest.mark.parametrize("path", sorted(INSTANCES.glob("*.jsonl")), ids=lambda p: p.stem)
def test_round_trip(path):
    recs = parse_text(path.read_text())
    text = serialize(recs)
    again = parse_text(text)
    assert serialize(again) == text
    for a, b in zip(recs, again):
        assert a.instance == b.instance and a.words == b.words and a.name == b.name


def test_parse_error_paths():
    with pytest.raises(ParseError) as exc:
        parse_text('{"ambient_rank": "1", "A": [["2"]], "phi": [["4"]], "words": {"w": [{"t": "2"}]}}')
    assert exc.value.path == "line 1.words.w[0].t"
    with pytest.raises(ParseError) as exc:
        parse_text('\n{"ambient_rank": "2", "A": [["2"]], "phi": [["4", "0"]]}')
    assert exc.value.path == "line 2.A[0]"
    with pytest.raises(ParseError) as exc:
        parse_text('{"ambient_rank": "1", "A": [["2"]], "B": [["8"]], "phi": [["4"]]}')
    assert exc.value.path == "line 1.B"
    with pytest.raises(ParseError):
        parse_text("not json")
    with pytest.raises(ParseError):
        parse_text("")


def test_big_integers_survive():
    big = str(10 ** 40)
    recs = parse_text('{"ambient_rank": "1", "A": [["%s"]], "phi": [["%s"]]}' % (big, big))
    assert big in serialize(recs)


def test_reports_are_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"r{k}.json"
        main(["extend", inst("z4_replacement"), "--json-out", str(target)])
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_selftest_subprocess():
    proc = subprocess.run([sys.executable, "-m", "hnnlinear", "selftest", inst("swap")],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == 9 and all(line.startswith("PASS") for line in lines)
