"""Tests for domain entities."""

from fractions import Fraction

import pytest

from mahler_sums.domain.entities import (
    CaseEntry,
    CaseReport,
    ConstantSpec,
    IntegerPolynomial,
    LatticeBasis,
    PoleFamilies,
    TheoremId,
)
from mahler_sums.domain.errors import InvalidParameters


def test_integer_polynomial_str() -> None:
    """Test polynomial display."""
    assert str(IntegerPolynomial((11, -7, 1))) == "x^2 - 7x + 11"
    assert str(IntegerPolynomial((-1, -1, 1))) == "x^2 - x - 1"
    assert str(IntegerPolynomial((0, -2))) == "-2x"
    assert str(IntegerPolynomial((0, 0))) == "0"
    assert IntegerPolynomial((11, -7, 1)).degree == 2


def test_case_report() -> None:
    """Test generic reports and collected removals."""
    assert CaseReport(TheoremId.T2).generic
    report = CaseReport(
        TheoremId.T1,
        cases=(CaseEntry("1", {"l0": "0"}, ("F_{0,2}",)), CaseEntry("2", {"l0": "1"}, ("L_{1,2}",))),
    )
    assert not report.generic
    assert report.removals == ("F_{0,2}", "L_{1,2}")
    assert report.case_ids() == ["1", "2"]


def test_constant_spec_needs_one_source() -> None:
    """Test that a constant has exactly one source."""
    assert ConstantSpec("half", value=Fraction(1, 2)).value == Fraction(1, 2)
    with pytest.raises(InvalidParameters):
        ConstantSpec("nothing")


def test_pole_families_need_index_zero() -> None:
    """Test that alpha_0 and beta_0 are required."""
    with pytest.raises(InvalidParameters):
        PoleFamilies(alphas={1: Fraction(4)}, betas={1: Fraction(-4)})


def test_lattice_basis() -> None:
    """Test shape checks on lattice bases."""
    basis = LatticeBasis(((1, 0, 3), (0, 1, 5)))
    assert basis.rank == 2
    assert basis.dimension == 3
    with pytest.raises(InvalidParameters):
        LatticeBasis(())
