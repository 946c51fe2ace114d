"""Repository interfaces (ports) for the domain layer."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

from mahler_sums.domain.entities import (
    ConstantSpec,
    Lemma3Input,
    LucasPairParams,
    PeriodicSeq,
    PoleFamilies,
    RunReport,
    SeriesSpec,
)
from mahler_sums.domain.numerics import AlgebraicInput


class IInputRepository(ABC):
    """Interface for reading validated command inputs."""

    @abstractmethod
    def load_params(self, path: Path) -> LucasPairParams:
        """Load a Lucas-pair parameter tuple."""
        pass

    @abstractmethod
    def load_series_spec(self, path: Path) -> SeriesSpec:
        """Load a series specification."""
        pass

    @abstractmethod
    def load_constants(self, path: Path) -> list[ConstantSpec]:
        """Load named constants for relation searches, in file order."""
        pass

    @abstractmethod
    def load_lemma3_input(self, path: Path) -> Lemma3Input:
        """Load the parameters of a combined function g0."""
        pass

    @abstractmethod
    def load_pole_families(self, path: Path) -> PoleFamilies:
        """Load explicit pole parameters alpha_l, beta_l."""
        pass

    @abstractmethod
    def parse_sequence(self, text: str) -> PeriodicSeq:
        """Parse an inline JSON list into a periodic sequence."""
        pass

    @abstractmethod
    def parse_value(self, text: str) -> AlgebraicInput:
        """Parse an inline JSON value (number, rational string or typed object)."""
        pass


class IReportRepository(ABC):
    """Interface for writing run reports."""

    @abstractmethod
    def render(self, report: RunReport) -> str:
        """Serialize a report to text."""
        pass

    @abstractmethod
    def save_report(self, report: RunReport, path: Optional[Path]) -> str:
        """Write a report to path (stdout when None) and return the text."""
        pass
