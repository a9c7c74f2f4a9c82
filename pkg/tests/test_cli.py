import json
import subprocess
import sys

import numpy as np
import pytest

from anyonzx.cli import RunConfig, main, run_suite
from anyonzx.zxgraph import from_json
from anyonzx.rules import trace_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_matrix_ising_example(capsys):
    code, out, _ = run(capsys, "matrix", "--model", "ising", "--strands", "3", "--format", "json", "s1 s2 s1")
    assert code == 0
    obj = json.loads(out)
    m = np.array([[complex(*z) for z in row] for row in obj["matrix"]])
    # R1 R2 R1 is proportional to Z(-π/2) X(-π/2) Z(-π/2), the adjoint Hadamard form.
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    lam = m[0, 0] / h[0, 0]
    assert abs(abs(lam) - 1) < 1e-12 and np.max(np.abs(m - lam * h)) < 1e-12
    assert obj["passed"] and obj["discrepancy"] < 1e-12


def test_matrix_text_table(capsys):
    code, out, _ = run(capsys, "matrix", "--model", "fibonacci", "s1")
    assert code == 0
    assert "global-phase discrepancy" in out
    assert "-0.809017" in out


def test_matrix_empty_word(capsys):
    code, out, _ = run(capsys, "matrix", "--format", "json", "")
    assert code == 0
    m = json.loads(out)["matrix"]
    assert m == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]


@pytest.mark.parametrize("word", ["s9", "s1 q2", "x"])
def test_parse_errors_exit_2(capsys, word):
    code, _, err = run(capsys, "matrix", word)
    assert code == 2
    assert "anyonzx:" in err


def test_tolerance_failure_exit_1(capsys):
    code, _, _ = run(capsys, "matrix", "--model", "fibonacci", "--strands", "6", "--tol", "1e-30", "s3 s2")
    assert code == 1


def test_bad_tolerance_exit_2(capsys):
    code, _, _ = run(capsys, "verify", "--tol", "-1")
    assert code == 2


def test_simplify_long_fib_word(capsys):
    code, out, _ = run(capsys, "simplify", "--format", "json", "s1 s1 s2 s2 s2 s2 s1 s1")
    assert code == 0
    obj = json.loads(out)
    assert obj["normal_form"] == "Z(3/10·π) · X(-θ) · Z(3/5·π) · X(-θ) · Z(3/10·π)"
    assert obj["spiders"] == 5
    d = from_json(json.dumps(obj["diagram"]))
    assert d.num_spiders() == 5
    assert len(trace_from_json(json.dumps(obj["trace"]))) == len(obj["trace"]) > 0


def test_simplify_inverse_pair(capsys):
    code, out, _ = run(capsys, "simplify", "s1 S1")
    assert code == 0
    assert "\nwire\n" in out


def test_simplify_ising_clifford(capsys):
    code, out, _ = run(capsys, "simplify", "--model", "ising", "--format", "json", "s1 s2 s2 S1 s2 s1 s1")
    obj = json.loads(out)
    assert code == 0 and obj["spiders"] <= 3


def test_simplify_numeric_mode(capsys):
    code, out, _ = run(capsys, "simplify", "--mode", "numeric", "--format", "json", "s1 s2 s1 S2 s1")
    obj = json.loads(out)
    assert code == 0 and obj["spiders"] <= 3


@pytest.mark.parametrize("model", ["ising", "fibonacci"])
@pytest.mark.parametrize("strands", [3, 6])
def test_verify_suites_pass(capsys, model, strands):
    code, out, _ = run(capsys, "verify", "--model", model, "--strands", str(strands), "--format", "json")
    rels = json.loads(out)
    assert code == 0, [r for r in rels if not r["passed"]]
    assert all(set(r) == {"relation", "passed", "max_error"} for r in rels)


def test_verify_ising6_covers_all_pairs():
    rels = run_suite(RunConfig(model="ising", strands=6))
    names = [r.relation for r in rels]
    far = [n for n in names if "far-commutation" in n and "rewriting" not in n]
    yb = [n for n in names if "Yang-Baxter" in n and "rewriting" not in n]
    assert len(far) == 6 and len(yb) == 4
    assert sum("by rewriting" in n for n in names) == 10


def test_verify_fib6_mentions_u_table():
    names = [r.relation for r in run_suite(RunConfig(model="fibonacci", strands=6))]
    assert "U2 U3 U2 = U3 U2 U3" in names
    assert "U4 U6 U4 = U6 U4 U6" in names
    assert "U5 U7 U5 = U7 U5 U7" in names


def test_verify_fib3_mentions_p_rule():
    names = " ".join(r.relation for r in run_suite(RunConfig(model="fibonacci", strands=3)))
    assert "Fibonacci P-rule: LHS = s_fib RHS" in names and "cos(2pi/5) = 1/(2 phi)" in names


def test_verify_json_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "verify", "--model", "ising", "--strands", "3", "--seed", "7", "--format", "json")
        outs.append(out)
    assert outs[0] == outs[1]


def test_euler_command(capsys):
    code, out, _ = run(capsys, "euler", "XZX", "theta", "2/5·π", "theta", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["orientation"] == "ZXZ"
    assert obj["angles"] == pytest.approx([3 * np.pi / 5, 1.8091137886047628, 3 * np.pi / 5], abs=1e-12)
    code, _, _ = run(capsys, "euler", "ZXZ", "nope", "1", "1")
    assert code == 2


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--model", "ising", "--format", "json", "matrix", "s1")
    assert code == 0 and json.loads(out)["passed"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "anyonzx", "matrix", "s9"], capture_output=True, text=True)
    assert r.returncode == 2


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(tolerance=0)
    with pytest.raises(ValueError):
        RunConfig(strands=4)
