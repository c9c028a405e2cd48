from click.testing import CliRunner

from conftest import CORPUS
from wordeq.cli import main


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_sat_and_unsat():
    ok = run("sat", CORPUS / "fm_ax_xa.weq")
    assert ok.exit_code == 0 and ok.output == "SAT\n"
    bad = run("sat", CORPUS / "fm_xx_a.weq")
    assert bad.exit_code == 1 and bad.output == "UNSAT\n"


def test_enumerate_equals_oracle_bytes():
    path = CORPUS / "fm_ax_xa.weq"
    got = run("--max-len", 4, "enumerate", path)
    want = run("--max-len", 4, "oracle", path)
    assert got.exit_code == want.exit_code == 0
    assert got.output == want.output == "1\na\na a\na a a\na a a a\n"


def test_tuple_format():
    out = run("--max-len", 2, "oracle", CORPUS / "fm_xy_ab.weq").output
    assert out.splitlines() == ["1#a b", "a b#1", "a#b"]


def test_classify():
    assert run("classify", CORPUS / "fm_x_ab.weq").output == "finite\n"
    assert run("classify", CORPUS / "fm_xx_a.weq").output == "empty\n"


def test_solve_is_deterministic(tmp_path):
    path = CORPUS / "fp_z2z3_xx_1.weq"
    first = run("--seed", 3, "solve", path).output
    second = run("--seed", 3, "solve", path).output
    assert first == second and first.startswith("edt0l 1")
    dot = run("export", "--dot", "-o", tmp_path / "g.dot", path)
    assert dot.exit_code == 0
    assert (tmp_path / "g.dot").read_text().startswith("digraph")


def test_trace_reports_forward_checks():
    out = run("--max-len", 3, "trace", CORPUS / "fg_x_ab.weq").output
    assert "forward=ok" in out and "forward=FAIL" not in out


def test_errors_exit_2(tmp_path):
    assert run("sat", tmp_path / "missing.weq").exit_code == 2
    bad = tmp_path / "bad.weq"
    bad.write_text("mode free-group\nfactor free-group a\nvars X\neq X = q\n")
    res = run("sat", bad)
    assert res.exit_code == 2
    assert "line 4" in res.output
    assert run("--max-len", 0, "sat", bad).exit_code == 2
