import pytest

from treeca.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("2..5") == [2, 3, 4, 5]
    assert parse_range("2,3") == [2, 3]


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "--m", "2", "--n", "5", "--b", "1", "--c", "1,1")
    assert code == 0 and "reversible=True" in out
    code, out, _ = run(capsys, "check", "--m", "3", "--n", "5", "--b", "1", "--c", "1,1")
    assert code == 1 and "reversible=False" in out


def test_usage_errors(capsys):
    assert run(capsys, "check", "--m", "2", "--n", "5", "--b", "1", "--c", "1,x")[0] == 2
    assert run(capsys, "check", "--m", "2", "--d", "3", "--n", "5", "--b", "1", "--c", "1,1")[0] == 2


def test_verify(capsys):
    code, out, err = run(capsys, "verify", "--m", "2..3", "--d", "2", "--n", "2..4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,d,n,b,c,det_formula,det_oracle,reversible,criteria_verdict,agree"
    assert len(lines) == 1 + 3 * (8 + 27)
    assert "TOTAL=105, DISAGREE=0" in err


def test_verify_criteria_mismatch_reported(capsys):
    code, _, err = run(capsys, "verify", "--m", "3", "--n", "3", "--criteria", "p3")
    assert code == 0 and "CRITERIA_MISMATCH=6" in err


def test_det(capsys):
    code, out, _ = run(capsys, "det", "--m", "5", "--n", "2", "--b", "2", "--c", "1,0", "--dump")
    assert code == 0
    assert out.splitlines()[0] == "5 3"
    assert "det_oracle=1" in out and "det_formula=1" in out


def test_evolve_roundtrip(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_text("6 2 3\n1 2 3 4 5 0 1\n")
    fwd = tmp_path / "f.txt"
    back = tmp_path / "b.txt"
    rule = ["--b", "5", "--c", "3,9"]
    assert main(["evolve", "--in", str(src), "--out", str(fwd), "--steps", "4", *rule]) == 0
    assert main(["evolve", "--in", str(fwd), "--out", str(back), "--steps", "4", "--backward", *rule]) == 0
    assert back.read_text() == src.read_text()


def test_evolve_backward_irreversible(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_text("3 2 2\n1 1 1\n")
    assert run(capsys, "evolve", "--in", str(src), "--backward", "--b", "1", "--c", "1,0")[0] == 2


def test_bad_config_file(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_text("3 2 2\n1 1\n")
    assert run(capsys, "orbit", "--in", str(src), "--b", "1", "--c", "1,1")[0] == 2
    assert run(capsys, "orbit", "--in", str(tmp_path / "missing"), "--b", "1", "--c", "1,1")[0] == 2


def test_orbit_and_global_period(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_text("2 2 2\n1 0 0\n")
    code, out, _ = run(capsys, "orbit", "--in", str(src), "--b", "1", "--c", "1,1")
    assert code == 0 and out.strip() == "transient=0, period=1"
    code, out, _ = run(capsys, "global-period", "--m", "2", "--n", "5", "--b", "1", "--c", "1,1")
    assert code == 0 and out.strip() == "preperiod=0, period=8"


def test_render(tmp_path, capsys):
    src = tmp_path / "t.txt"
    src.write_text("3 2 3\n0 1 2 2 1 0 1\n")
    out = tmp_path / "t.svg"
    assert main(["render", "--in", str(src), "--out", str(out)]) == 0
    assert out.read_text().count("<circle") == 7
    assert main(["render", "--in", str(src), "--out", str(out), "--steps", "2", "--b", "1", "--c", "1,1"]) == 0
    assert out.read_text().count("<circle") == 21
    assert run(capsys, "render", "--in", str(src), "--steps", "2")[0] == 2
