import json
import subprocess
import sys

import pytest

from cheshire.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "fail: 0" in out and "erratum-documented: 4" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--json")
    data = json.loads(out)
    assert code == 0 and data["summary"]["fail"] == 0
    assert data["convention"] == "effective_hermitian"


def test_verify_matrix_literal_gaps(capsys):
    assert run(capsys, "--convention", "matrix_literal", "verify")[0] == 1
    assert run(capsys, "--convention", "matrix_literal", "verify", "--allow-convention-gaps")[0] == 0


def test_table_highlights(capsys):
    code, out, _ = run(capsys, "table", "--post", "phi2")
    assert code == 0
    assert "**-1**" in out and "ANOMALOUS" in out and "**2**" in out


@pytest.mark.parametrize("fmt", ["json", "csv", "markdown"])
def test_table_formats(capsys, fmt):
    code, out, _ = run(capsys, "--format", fmt, "table", "--post", "phi1")
    assert code == 0 and out
    if fmt == "json":
        assert json.loads(out)["postselection"] == "phi1"


def test_dump_state_and_observable(capsys):
    code, out, _ = run(capsys, "--format", "json", "dump", "state", "--state", "psi")
    assert code == 0 and json.loads(out)["amplitudes"][1] == "0/1+1/4*sqrt2"
    code, out, _ = run(capsys, "--format", "json", "dump", "observable", "--op", "sigma_zx", "--arms", "13")
    assert code == 0 and json.loads(out)["hermitian"] is True
    code, out, _ = run(capsys, "--convention", "appendix_oracle", "dump", "observable", "--op", "pi", "--arms", "1.")
    assert code == 0 and "action_table" in out


def test_pointer_sweep(capsys):
    code, out, _ = run(
        capsys, "pointer", "sweep", "--op", "sigma_zx", "--arms", "2.", "--post", "phi2",
        "--g", "0.03,0.01", "--json",
    )
    data = json.loads(out)
    assert code == 0 and data["exact_weak_value"] == 2.0
    assert abs(data["rows"][-1]["shift_over_g"] - 2) < 0.05


def test_pointer_needs_matrix_form(capsys):
    code, _, err = run(
        capsys, "--convention", "appendix_oracle", "pointer", "sweep", "--op", "pi", "--arms", "13",
        "--post", "phi1",
    )
    assert code == 1 and "error" in err


def test_circuit_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "circuit", "run")
    assert code == 0 and "D11+D22: 1/2" in out and "D13+D23: 0" in out
    code, out, _ = run(capsys, "circuit", "run", "--report", "conditioned", "--pair", "D11,D22")
    assert code == 0 and json.loads(out)["D11+D22"]["probability"] == "1/2+0/1*sqrt2"
    code, out, err = run(capsys, "--format", "json", "circuit", "search-phi1")
    assert code == 0 and json.loads(out)["enumerated"] == 32 and "NEGATIVE RESULT" in err
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert run(capsys, "circuit", "run", "--file", str(bad))[0] == 1
    assert run(capsys, "circuit", "run", "--file", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "circuit", "run", "--report", "conditioned", "--pair", "D13,D22")[0] == 1


def test_synthesize_is_marked_non_exact(capsys):
    code, out, _ = run(capsys, "circuit", "synthesize", "--restarts", "2")
    assert code == 0 and "non-exact" in out


@pytest.mark.parametrize(
    "argv",
    [["--bogus"], [], ["table", "--post", "phi3"], ["dump", "observable", "--op", "pi", "--arms"],
     ["pointer", "sweep", "--op", "pi", "--arms", "13", "--post", "phi1", "--g", "x"]],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_bad_arm_selector_is_a_computation_error(capsys):
    assert run(capsys, "dump", "observable", "--op", "pi", "--arms", "15")[0] == 1


def test_byte_identical_output():
    cmd = [sys.executable, "-m", "cheshire", "--format", "json", "circuit", "synthesize", "--restarts", "2"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    cmd = [sys.executable, "-m", "cheshire", "verify", "--json"]
    assert subprocess.run(cmd, capture_output=True).stdout == subprocess.run(cmd, capture_output=True).stdout
