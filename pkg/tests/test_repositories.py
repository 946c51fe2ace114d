"""Tests for repository implementations."""

import json
from fractions import Fraction
from pathlib import Path
import pytest
import tempfile

from mahler_sums.domain.entities import (
    GeometricCoefficients,
    LemmaMode,
    NumberFamily,
    OutputFormat,
    RunConfig,
    RunReport,
    SeriesKind,
)
from mahler_sums.domain.errors import InvalidParameters
from mahler_sums.domain.numerics import ComplexLiteral, QuadExt
from mahler_sums.infrastructure.repositories import (
    CSVReportRepository,
    JSONInputRepository,
    JSONReportRepository,
    flatten_fields,
    get_report_repository,
)
from mahler_sums.infrastructure.settings import DEFAULT_BITS, get_settings


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


def write_json(path: Path, data: object) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def make_report(rows: list[dict[str, object]] | None = None) -> RunReport:
    config = RunConfig("radix", 256, 32, OutputFormat.JSON, 7, {"radices": [729]})
    return RunReport(config, "0.1.0", {"d": 3, "j": 6}, rows or [])


def test_load_params(temp_dir: Path) -> None:
    """Test loading a Lucas pair with quadratic values."""
    path = write_json(temp_dir / "pair.json", {
        "gamma1": {"type": "quad", "a": "1/2", "b": "1/2", "D": 5},
        "gamma2": {"type": "quad", "a": "1/2", "b": "-1/2", "D": 5},
        "g1": 1, "g2": 1, "h1": 1, "h2": "-1",
        "name": "lucas-like", "r_label": "L",
    })
    params = JSONInputRepository().load_params(path)
    assert params.gamma1 == QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
    assert params.h2 == -1
    assert params.name == "lucas-like"
    assert params.label_for(NumberFamily.R) == "L"


def test_load_series_spec(temp_dir: Path) -> None:
    """Test loading a Phi series with geometric coefficients."""
    path = write_json(temp_dir / "spec.json", {
        "kind": "phi", "r": 3, "coeffs": {"type": "geometric", "a": "-1/2"}, "pole": 2, "start_index": 1,
    })
    spec = JSONInputRepository().load_series_spec(path)
    assert spec.kind is SeriesKind.PHI
    assert spec.coeffs == GeometricCoefficients(Fraction(-1, 2))
    assert spec.pole_param == 2
    assert spec.start_index == 1


def test_load_constants_keeps_order(temp_dir: Path) -> None:
    """Test the three kinds of named constants."""
    path = write_json(temp_dir / "values.json", {"values": {
        "one": 1,
        "F02": {"type": "number", "preset": "fibonacci",
                "series": {"family": "R", "k": 1, "r": 2, "coeffs": [1]}},
        "gamma": {"type": "series", "z": "1/2",
                  "spec": {"kind": "gamma", "r": 2, "mu": 1, "coeffs": {"type": "geometric", "a": 1}}},
    }})
    constants = JSONInputRepository().load_constants(path)
    assert [c.name for c in constants] == ["one", "F02", "gamma"]
    assert constants[0].value == 1
    assert constants[1].params.name == "fibonacci"
    assert constants[2].z == Fraction(1, 2)


def test_load_lemma3_and_poles(temp_dir: Path) -> None:
    """Test loading classifier inputs."""
    repo = JSONInputRepository()
    lemma3 = repo.load_lemma3_input(write_json(temp_dir / "g0.json", {
        "r": 2, "a": 1, "alpha0": 1, "beta0": -1, "p": [0], "u0": 1,
    }))
    assert lemma3.v0 == 0
    assert lemma3.p_coeffs == (0,)
    poles = repo.load_pole_families(write_json(temp_dir / "poles.json", {
        "alphas": {"0": 1, "1": 4}, "betas": {"0": -1, "1": -4}, "mode": "remark1",
    }))
    assert poles.alphas[1] == 4
    assert poles.mode is LemmaMode.REMARK1


def test_missing_file(temp_dir: Path) -> None:
    """Test that a missing input file raises FileNotFoundError."""
    with pytest.raises(FileNotFoundError):
        JSONInputRepository().load_params(temp_dir / "absent.json")


def test_parse_value() -> None:
    """Test inline values from the command line."""
    repo = JSONInputRepository()
    assert repo.parse_value("3") == 3
    assert repo.parse_value("1/2") == Fraction(1, 2)
    assert repo.parse_value("0.25") == Fraction(1, 4)
    assert repo.parse_value('{"type": "complex", "re": "0.3", "im": "-0.4"}') == ComplexLiteral(
        Fraction(3, 10), Fraction(-2, 5)
    )
    with pytest.raises(InvalidParameters):
        repo.parse_value("pi")


def test_parse_sequence() -> None:
    """Test inline coefficient lists."""
    repo = JSONInputRepository()
    seq = repo.parse_sequence('[1, "-1/2", {"type": "quad", "a": 0, "b": 1, "D": 5}]')
    assert seq.period == 3
    assert seq.values[1] == Fraction(-1, 2)
    with pytest.raises(InvalidParameters):
        repo.parse_sequence("1, 2")
    with pytest.raises(InvalidParameters):
        repo.parse_sequence('{"a": 1}')


def test_json_report_envelope(temp_dir: Path) -> None:
    """Test the envelope fields and deterministic output."""
    repo = JSONReportRepository()
    path = temp_dir / "out" / "report.json"
    text = repo.save_report(make_report(), path)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["command"] == "radix"
    assert data["seed"] == 7
    assert data["bits"] == 256
    assert data["config"]["inputs"] == {"radices": [729]}
    assert data["result"] == {"d": 3, "j": 6}
    assert repo.render(make_report()) == text


def test_csv_report_rows() -> None:
    """Test one CSV line per row after the '#' envelope line."""
    rows = [{"value": 729, "d": 3, "j": 6}, {"value": 8, "d": 2, "j": 3, "extra": {"x": 1}}]
    lines = CSVReportRepository().render(make_report(rows)).splitlines()
    assert lines[0].startswith("# mahler-sums 0.1.0 command=radix seed=7 bits=256")
    assert lines[1] == "value,d,j,extra.x"
    assert lines[2] == "729,3,6,"
    assert lines[3] == "8,2,3,1"


def test_csv_report_without_rows() -> None:
    """Test that the flattened result becomes a single row."""
    lines = CSVReportRepository().render(make_report()).splitlines()
    assert lines[1:] == ["d,j", "3,6"]


def test_flatten_fields() -> None:
    """Test dotted keys and joined lists."""
    assert flatten_fields({"a": {"b": 1, "c": [1, 2]}, "d": None}) == {"a.b": 1, "a.c": "1;2", "d": ""}


def test_get_report_repository() -> None:
    """Test the writer chosen per output format."""
    assert isinstance(get_report_repository(OutputFormat.CSV), CSVReportRepository)
    assert isinstance(get_report_repository(OutputFormat.JSON), JSONReportRepository)


def test_settings_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test defaults and environment overrides."""
    monkeypatch.delenv("MAHLER_DEFAULT_BITS", raising=False)
    assert get_settings().default_bits == DEFAULT_BITS
    monkeypatch.setenv("MAHLER_DEFAULT_BITS", "512")
    assert get_settings().default_bits == 512
    monkeypatch.setenv("MAHLER_DEFAULT_BITS", "many")
    with pytest.raises(InvalidParameters):
        get_settings()
