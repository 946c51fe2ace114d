"""Repository implementations for JSON inputs and report files."""

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Optional

from mahler_sums.domain.entities import (
    ConstantSpec,
    Lemma3Input,
    LucasPairParams,
    OutputFormat,
    PeriodicSeq,
    PoleFamilies,
    RunReport,
    SeriesSpec,
)
from mahler_sums.domain.errors import InvalidParameters
from mahler_sums.domain.numerics import AlgebraicInput
from mahler_sums.domain.repositories import IInputRepository, IReportRepository
from mahler_sums.infrastructure.schemas import (
    ConstantsDocument,
    Lemma3Model,
    LucasPairModel,
    PoleFamiliesModel,
    SeriesSpecModel,
    SequenceDocument,
    ValueDocument,
    value_to_domain,
)


class JSONInputRepository(IInputRepository):
    """Reads command inputs from JSON files and inline JSON text."""

    def _read(self, path: Path) -> Any:
        if not path.exists():
            raise FileNotFoundError(f"Input file not found: {path}")
        with path.open("r", encoding="utf-8") as f:
            return json.load(f)

    def load_params(self, path: Path) -> LucasPairParams:
        """Load a Lucas-pair parameter tuple."""
        return LucasPairModel.model_validate(self._read(path)).to_domain()

    def load_series_spec(self, path: Path) -> SeriesSpec:
        """Load a series specification."""
        return SeriesSpecModel.model_validate(self._read(path)).to_domain()

    def load_constants(self, path: Path) -> list[ConstantSpec]:
        """Load named constants, keeping the order of the file."""
        return ConstantsDocument.model_validate(self._read(path)).to_domain()

    def load_lemma3_input(self, path: Path) -> Lemma3Input:
        """Load the parameters of a combined function g0."""
        return Lemma3Model.model_validate(self._read(path)).to_domain()

    def load_pole_families(self, path: Path) -> PoleFamilies:
        """Load explicit pole parameters."""
        return PoleFamiliesModel.model_validate(self._read(path)).to_domain()

    def parse_sequence(self, text: str) -> PeriodicSeq:
        """Parse '[1, "1/2", {"type": "quad", ...}]' into a periodic sequence."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParameters(f"coefficients must be a JSON list, got {text!r}") from exc
        if not isinstance(data, list):
            raise InvalidParameters(f"coefficients must be a JSON list, got {text!r}")
        return SequenceDocument.model_validate({"values": data}).to_domain()

    def parse_value(self, text: str) -> AlgebraicInput:
        """Parse '3', '1/2', '0.25' or a typed JSON object."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = text.strip()
        if isinstance(data, float):
            # "0.25" on the command line is the exact decimal
            data = text.strip()
        return value_to_domain(ValueDocument.model_validate({"value": data}).value)


def report_to_dict(report: RunReport) -> dict[str, Any]:
    """Report envelope: command, config, seed, bits, version, result."""
    config = report.config
    result = dict(report.result)
    if report.rows:
        result["rows"] = report.rows
    return {
        "command": config.command,
        "config": {
            "bits": config.bits,
            "guard_bits": config.guard_bits,
            "format": config.output_format.value,
            "seed": config.seed,
            "inputs": config.inputs,
        },
        "seed": config.seed,
        "bits": config.bits,
        "version": report.version,
        "result": result,
    }


def _write(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


class JSONReportRepository(IReportRepository):
    """Deterministic JSON reports (no timestamps, stable key order)."""

    def render(self, report: RunReport) -> str:
        return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False, default=str) + "\n"

    def save_report(self, report: RunReport, path: Optional[Path]) -> str:
        text = self.render(report)
        _write(text, path)
        return text


def flatten_fields(data: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    """Nested dicts become dotted keys; lists are joined with ';'."""
    flat: dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten_fields(value, f"{name}."))
        elif isinstance(value, (list, tuple)):
            flat[name] = ";".join(str(v) for v in value)
        else:
            flat[name] = "" if value is None else value
    return flat


class CSVReportRepository(IReportRepository):
    """CSV reports: one line per row, or the flattened result when there are no rows.

    The first line is a '#' comment carrying the envelope fields.
    """

    def render(self, report: RunReport) -> str:
        config = report.config
        rows = [flatten_fields(row) for row in report.rows] or [flatten_fields(report.result)]
        fieldnames: list[str] = []
        for row in rows:
            fieldnames.extend(key for key in row if key not in fieldnames)

        buffer = io.StringIO()
        buffer.write(
            f"# mahler-sums {report.version} command={config.command} seed={config.seed} bits={config.bits}\n"
        )
        writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buffer.getvalue()

    def save_report(self, report: RunReport, path: Optional[Path]) -> str:
        text = self.render(report)
        _write(text, path)
        return text


def get_report_repository(output_format: OutputFormat) -> IReportRepository:
    """JSON or CSV writer; text reports are rendered by the presentation layer."""
    if OutputFormat(output_format) is OutputFormat.CSV:
        return CSVReportRepository()
    return JSONReportRepository()
