import numpy as np
import pytest

from cfbvp.cli import (EXIT_HYPOTHESIS, EXIT_OK, EXIT_SOLVER, EXIT_USAGE,
                       main)
from cfbvp.problem_io import (ProblemFileError, load_problem,
                              parse_problem_text)

WORKED_TEXT = """\
# worked singular family
mu = 1.5
R = 100
f = abs(t)*(1-t^2)^(-0.25)*x^(-0.25)
q = s*(1-s^2)^(-0.25)
u = x^(-0.25)
v = x^(0.25)
psi = s*(1-s^2)^(-0.25)*R^(-0.25)
mesh.cells = 64
solver.m_schedule = 16,32,64
"""


@pytest.fixture()
def problem_file(tmp_path):
    p = tmp_path / "worked.prob"
    p.write_text(WORKED_TEXT)
    return p


# ---------------------------------------------------------------- problem_io

def test_parse_problem_text():
    spec = parse_problem_text(WORKED_TEXT)
    assert spec.mu == 1.5
    assert spec.R == 100.0
    assert spec.numerics.mesh_cells == 64
    assert spec.numerics.m_schedule == (16, 32, 64)
    assert spec.numerics.gamma == 3.0  # default preserved


def test_parse_overrides():
    spec = parse_problem_text(WORKED_TEXT, {"mesh_cells": 32, "gamma": 2.0})
    assert spec.numerics.mesh_cells == 32
    assert spec.numerics.gamma == 2.0


@pytest.mark.parametrize("mutation,fragment", [
    (lambda t: t.replace("R = 100\n", ""), "missing required key"),
    (lambda t: t + "bogus.key = 1\n", "unknown key"),
    (lambda t: t + "mu = 1.7\n", "duplicate key"),
    (lambda t: t.replace("mu = 1.5", "mu = fast"), "mu"),
    (lambda t: t.replace("q = s*(1-s^2)^(-0.25)", "q = s*(1-s^2)^(-0.25"), ""),
    (lambda t: t + "this line has no equals sign\n", "key = value"),
    (lambda t: t.replace("solver.m_schedule = 16,32,64",
                         "solver.m_schedule = 16,x"), "m_schedule"),
])
def test_parse_rejections(mutation, fragment):
    with pytest.raises(ProblemFileError) as exc:
        parse_problem_text(mutation(WORKED_TEXT))
    assert fragment in str(exc.value)


def test_load_problem_missing_file(tmp_path):
    with pytest.raises(ProblemFileError):
        load_problem(tmp_path / "nope.prob")


def test_shipped_problem_file_loads():
    import pathlib
    shipped = pathlib.Path(__file__).resolve().parents[1] / "problems" / "worked_family.prob"
    spec = load_problem(shipped)
    assert spec.mu == 1.5 and spec.R == 100.0


# ----------------------------------------------------------------------- CLI

def test_check_ok(problem_file, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["check", str(problem_file), "--out", str(out)])
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "A1 passed = True" in text
    assert "A2 passed = True" in text
    assert (out / "hypothesis_report.txt").read_text() == text
    sigma = (out / "sigma_R.csv").read_text().splitlines()
    assert sigma[0] == "t,sigma_R"
    assert len(sigma) == 64 + 2  # header + one row per grid node


def test_check_missing_key(tmp_path, capsys):
    p = tmp_path / "bad.prob"
    p.write_text(WORKED_TEXT.replace("R = 100\n", ""))
    assert main(["check", str(p)]) == EXIT_USAGE
    assert "missing required key" in capsys.readouterr().err


def test_check_hypothesis_failure(tmp_path, capsys):
    p = tmp_path / "odd.prob"
    p.write_text(WORKED_TEXT.replace("f = abs(t)*(1-t^2)^(-0.25)*x^(-0.25)",
                                     "f = t*x"))
    assert main(["check", str(p)]) == EXIT_HYPOTHESIS
    out = capsys.readouterr().out
    assert "A1 passed = False" in out
    assert "A1 failure" in out


def test_missing_problem_path(tmp_path):
    assert main(["check", str(tmp_path / "ghost.prob")]) == EXIT_USAGE


def test_usage_error():
    assert main(["check"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_solve_ok_and_deterministic(problem_file, tmp_path, capsys):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    assert main(["solve", str(problem_file), "--out", str(out1)]) == EXIT_OK
    assert main(["solve", str(problem_file), "--out", str(out2)]) == EXIT_OK
    csv1 = (out1 / "solution.csv").read_bytes()
    assert csv1 == (out2 / "solution.csv").read_bytes()
    assert (out1 / "solve_report.txt").read_bytes() == \
        (out2 / "solve_report.txt").read_bytes()

    lines = csv1.decode().splitlines()
    assert lines[0] == "t,x,sigma_R,residual"
    assert len(lines) == 2 * (64 + 1) - 1 + 1  # mirrored grid + header
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    t, x, sigma, res = data.T
    assert np.all(np.diff(t) > 0)
    assert t[0] == -1.0 and t[-1] == 1.0
    assert np.allclose(x, x[::-1])  # even symmetry of the written table
    assert np.all(x >= sigma - 1e-12)
    assert np.max(np.abs(res)) < 1e-8
    report = capsys.readouterr().out
    assert "status = converged" in report


def test_solve_hypothesis_failure_exit(problem_file, tmp_path, capsys):
    p = tmp_path / "small.prob"
    p.write_text(WORKED_TEXT.replace("R = 100", "R = 1"))
    code = main(["solve", str(p), "--out", str(tmp_path / "o")])
    assert code == EXIT_HYPOTHESIS
    assert "hypothesis failure" in capsys.readouterr().err


def test_solve_inner_failure_exit(problem_file, tmp_path, capsys):
    p = tmp_path / "tight.prob"
    p.write_text(WORKED_TEXT + "solver.max_inner = 2\n")
    code = main(["solve", str(p), "--out", str(tmp_path / "o")])
    assert code == EXIT_SOLVER
    assert "status = inner_failed" in capsys.readouterr().out


def test_green_dump(tmp_path):
    out = tmp_path / "green.csv"
    assert main(["green", "1.5", "--grid", "11", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "t,tau,branch,value"
    assert len(lines) == 2 * 11 * 11 + 1
    # spot-check the origin row: the diagonal defaults to the lower branch,
    # whose value at (0, 0) is tanh(lambda) with lam = 1 for mu = 1.5
    import math
    first = lines[1].split(",")
    assert first[0] == "0" and first[1] == "0" and first[2] == "lower"
    assert float(first[3]) == pytest.approx(math.tanh(1.0), rel=1e-13)


def test_audit_table(tmp_path, capsys):
    out = tmp_path / "audit.csv"
    assert main(["audit", "1.2,1.5,1.8", "--grid", "101",
                 "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert out.read_text() == text
    lines = text.splitlines()
    assert len(lines) == 4
    for ln in lines[1:]:
        cols = ln.split(",")
        assert float(cols[2]) <= 1e-13      # boundary_max
        assert float(cols[3]) == 0.0        # symmetry_max_diff exact
        assert float(cols[4]) <= 1e-12      # diag_jump_max_err
        assert abs(float(cols[5]) - float(cols[6])) <= 1e-4  # sup vs closed form
        assert cols[7] == "True"            # sup exceeds the unit bound
