import csv
import io
import json
import math

import pytest

from wordlab.cli import run
from wordlab.report import emit, render


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_dist_identity_row(capsys):
    code, out, _ = call(capsys, "dist", "--group", "psl2:5", "--word", "x1^2")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 60
    ident = rows[0]
    assert (ident["target"], ident["count"], ident["denominator"], ident["prob"]) == ("0", "16", "60", "4/15")
    assert ident["seed"] == "0" and ident["budget"] == str(10**8)
    assert sum(int(r["count"]) for r in rows) == 60


def test_hdim_dihedral_rows(capsys):
    code, out, _ = call(capsys, "hdim", "--family", "dihedral", "--levels", "3,5,7", "--word", "x1^2",
                        "--selector", "identity")
    assert code == 0
    ratios = [float(r["ratio"]) for r in rows_of(out)]
    expected = [math.log(4) / math.log(6), math.log(6) / math.log(10), math.log(8) / math.log(14)]
    assert ratios == pytest.approx(expected, abs=1e-6)


def test_zeros_row(capsys):
    code, out, _ = call(capsys, "zeros", "--field", "F3", "--n", "2", "--poly", "x1*x2")
    assert code == 0
    assert out.splitlines()[1].startswith("3,2,2,5,6,pass")


def test_eps_coset_wreath_twisted(capsys):
    code, out, _ = call(capsys, "eps", "--group", "alt:5", "--word", "x1^2")
    assert code == 0 and rows_of(out)[0]["max_fiber"] == "16"
    code, out, _ = call(capsys, "coset", "--group", "alt:5", "--word", "x1^2", "--cosets", "1",
                        "--target", "identity")
    assert code == 0
    row = rows_of(out)[0]
    assert row["count"] == row["direct_count"]
    code, out, _ = call(capsys, "coset", "--group", "psl2:8", "--word", "x1^2")
    assert code == 0 and rows_of(out)[0]["tested"] == "3"
    code, out, _ = call(capsys, "wreath", "--group", "power:alt:5:k=2", "--word", "x1^2", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["k"] == 2 and report["num_components"] == 2
    code, out, _ = call(capsys, "twisted", "--p", "2", "--f", "1", "--k", "2", "--m", "1", "--t", "3",
                        "--poly", "x1_1 + x1_2")
    row = rows_of(out)[0]
    assert (row["fixed_count"], row["zero_fixed_count"]) == ("8", "2")


@pytest.mark.parametrize("argv,code", [
    (["dist", "--group", "psl2:6", "--word", "x1"], 1),
    (["dist", "--group", "psl2:5", "--word", "x1 x1^-1"], 2),
    (["dist", "--group", "bogus", "--word", "x1"], 2),
    (["dist", "--word", "x1"], 2),
    (["frobnicate"], 2),
    (["dist", "--group", "alt:5", "--word", "x1 x2", "--budget", "100"], 3),
    (["zeros", "--field", "F6", "--n", "1", "--poly", "x1"], 1),
])
def test_exit_codes(capsys, argv, code):
    assert call(capsys, *argv)[0] == code


def test_internal_assertion_exit_code(capsys, monkeypatch):
    from wordlab import cli

    def broken(args):
        raise AssertionError("boom")

    monkeypatch.setitem(cli.COMMANDS, "eps", (broken, "x"))
    code, _, err = call(capsys, "eps", "--group", "alt:5", "--word", "x1")
    assert code == 4 and "boom" in err


def test_byte_identical_reruns(tmp_path, capsys):
    paths = []
    for i in range(2):
        path = tmp_path / f"out{i}.csv"
        assert run(["coset", "--group", "psl2:9", "--word", "x1 x2", "--seed", "3", "--out", str(path)]) == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert capsys.readouterr().out == ""


def test_json_and_csv_agree(capsys):
    argv = ["hdim", "--family", "psl2", "--levels", "5,7", "--word", "x1^2", "--selector", "max"]
    _, out_csv, _ = call(capsys, *argv)
    _, out_json, _ = call(capsys, *argv, "--format", "json")
    for r_csv, r_json in zip(rows_of(out_csv), json.loads(out_json)):
        for key, value in r_json.items():
            if isinstance(value, float):
                assert float(r_csv[key]) == value
            else:
                assert r_csv[key] == str(value)


def test_empty_report_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    text = emit([], ["a", "b"], "csv", path)
    assert text == "a,b\n" == path.read_text()
    assert render([], ["a"], "json") == "[]\n"


def test_float_format():
    assert render([{"x": 1 / 3}], ["x"]) == "x\n0.333333\n"
