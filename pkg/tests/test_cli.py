"""Tests for the command line interface."""

import json
from pathlib import Path
import pytest
import tempfile

from typer.testing import CliRunner

from mahler_sums.presentation.cli import app

runner = CliRunner()


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


def invoke_json(*args: str) -> dict:
    result = runner.invoke(app, list(args))
    assert result.exit_code == 0, result.stdout
    return json.loads(result.stdout)


def test_radix_single() -> None:
    """Test 729 = 3^6."""
    data = invoke_json("radix", "729")
    assert data["command"] == "radix"
    assert data["result"] == {"d": 3, "j": 6}


def test_radix_groups() -> None:
    """Test that several radices are grouped by their base."""
    data = invoke_json("radix", "4", "8", "9")
    assert len(data["result"]["rows"]) == 3
    assert data["result"]["groups"]


def test_eval_number_fibonacci() -> None:
    """Test F_{0,2} with the implicit Fibonacci preset."""
    data = invoke_json("eval-number", "--family", "F", "--bits", "128", "--guard-bits", "16", "--seed", "3")
    assert data["bits"] == 128
    assert data["seed"] == 3
    assert data["result"]["label"] == "F_{0,2}"
    assert data["result"]["value"].startswith("2.3819660112501051")


def test_eval_number_bridge() -> None:
    """Test the function-side check from the command line."""
    data = invoke_json("eval-number", "--family", "L", "--preset", "fibonacci-lucas", "--ell", "1", "--bridge")
    assert data["result"]["label"] == "L_{1,2}"
    assert data["result"]["bridge"]["holds"] is True


def test_eval_series() -> None:
    """Test sum 2^(-2^h) from inline options."""
    data = invoke_json("eval", "--z", "1/2", "--kind", "gamma", "--geometric", "1", "--mu", "1", "--feq")
    assert data["result"]["value"].startswith("0.816421509021893143708")


def test_classify_fibonacci_lucas() -> None:
    """Test case 1 with the removal F_{0,2}."""
    data = invoke_json("classify", "--preset", "fibonacci-lucas")
    result = data["result"]
    assert result["theorem"] == "T1"
    assert result["cases"][0]["case"] == "1"
    assert result["removals"] == ["F_{0,2}"]


def test_classify_lemma3_from_file(temp_dir: Path) -> None:
    """Test the rationality verdict for a g0 parameter file."""
    path = temp_dir / "g0.json"
    path.write_text(json.dumps({"r": 2, "a": 1, "alpha0": 1, "beta0": -1, "p": [0], "u0": 1}), encoding="utf-8")
    data = invoke_json("classify", "--theorem", "L3", "--input", str(path))
    assert data["result"]["verdict"] == "rational"


def test_tabulate_csv() -> None:
    """Test the CSV default of tabulate."""
    result = runner.invoke(app, ["tabulate", "--family", "F", "--r", "2", "--r", "3"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0].startswith("# mahler-sums")
    assert len(lines) == 4


def test_text_report() -> None:
    """Test the human-readable report."""
    result = runner.invoke(app, ["radix", "27", "--format", "text"])
    assert result.exit_code == 0
    assert "radix" in result.stdout
    assert "3" in result.stdout


def test_unknown_preset_exits_two() -> None:
    """Test the JSON error object and exit code for invalid input."""
    result = runner.invoke(app, ["eval-number", "--family", "R", "--preset", "pell"])
    assert result.exit_code == 2
    error = json.loads(result.stdout)
    assert error["error"] == "InvalidParameters"


def test_invalid_params_file_exits_two(temp_dir: Path) -> None:
    """Test that schema errors and missing files map to exit code 2."""
    path = temp_dir / "pair.json"
    path.write_text(json.dumps({"gamma1": 0.5}), encoding="utf-8")
    result = runner.invoke(app, ["eval-number", "--family", "R", "--params", str(path)])
    assert result.exit_code == 2
    assert json.loads(result.stdout)["error"] == "ValidationError"
    missing = runner.invoke(app, ["eval-number", "--family", "R", "--params", str(temp_dir / "absent.json")])
    assert missing.exit_code == 2


def test_verify_writes_report(temp_dir: Path) -> None:
    """Test a passing suite run written to a file."""
    output = temp_dir / "remark2.json"
    result = runner.invoke(app, ["verify", "--suite", "remark2", "--seed", "1", "--output", str(output)])
    assert result.exit_code == 0
    data = json.loads(output.read_text(encoding="utf-8"))
    assert data["result"]["suite"] == "remark2"
    assert data["result"]["passed"] is True
    assert data["result"]["passed_items"] == data["result"]["total_items"]


def test_log_dir_records_run_settings(temp_dir: Path) -> None:
    """Test that run.log starts with the precision, seed and inputs of the run."""
    result = runner.invoke(app, ["radix", "729", "--bits", "128", "--seed", "5", "--log-dir", str(temp_dir)])
    assert result.exit_code == 0
    log = (temp_dir / "run.log").read_text(encoding="utf-8")
    assert "--- mahler-sums 0.1.0 ---" in log
    assert "radix: P = 128 bits" in log
    assert "seed 5" in log
    assert '{"radices": [729]}' in log
