"""Tests for the pydantic input schemas."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from mahler_sums.domain.entities import NumberFamily, PeriodicSeq
from mahler_sums.domain.errors import InvalidParameters
from mahler_sums.domain.numerics import QuadExt
from mahler_sums.infrastructure.schemas import (
    ConstantsDocument,
    LucasPairModel,
    NumberConstantModel,
    SeriesSpecModel,
    ValueDocument,
    value_to_domain,
)


def test_value_shorthands() -> None:
    """Test integers, rational strings and typed objects."""
    assert value_to_domain(ValueDocument.model_validate({"value": 5}).value) == 5
    assert value_to_domain(ValueDocument.model_validate({"value": "-3/4"}).value) == Fraction(-3, 4)
    typed = ValueDocument.model_validate({"value": {"type": "quad", "a": 1, "b": "1/3", "D": -3}}).value
    assert value_to_domain(typed) == QuadExt(1, Fraction(1, 3), -3)


def test_plain_floats_are_rejected() -> None:
    """Test that 0.25 must be written as a string to stay exact."""
    with pytest.raises(ValidationError):
        ValueDocument.model_validate({"value": 0.25})


def test_unknown_fields_are_rejected() -> None:
    """Test extra='forbid' on every model."""
    with pytest.raises(ValidationError):
        ValueDocument.model_validate({"value": {"type": "rational", "value": "1/3", "extra": 1}})
    with pytest.raises(ValidationError):
        LucasPairModel.model_validate({"gamma1": 2, "gamma2": "1/2", "g1": 1, "g2": 1, "h1": 1})


def test_series_spec_bounds() -> None:
    """Test r >= 2 and a known kind."""
    with pytest.raises(ValidationError):
        SeriesSpecModel.model_validate({"kind": "gamma", "r": 1, "mu": 1, "coeffs": {"type": "geometric", "a": 1}})
    with pytest.raises(ValidationError):
        SeriesSpecModel.model_validate({"kind": "theta", "r": 2, "coeffs": {"type": "geometric", "a": 1}})


def test_domain_errors_surface_unchanged() -> None:
    """Test that structural domain checks run in to_domain()."""
    model = SeriesSpecModel.model_validate({"kind": "phi", "r": 2, "coeffs": {"type": "periodic", "values": [1]}})
    with pytest.raises(InvalidParameters):
        model.to_domain()
    bad_field = ValueDocument.model_validate({"value": {"type": "quad", "a": 1, "b": 1, "D": 4}}).value
    with pytest.raises(InvalidParameters):
        value_to_domain(bad_field)


def test_number_constant_needs_one_pair() -> None:
    """Test preset and params are mutually exclusive."""
    series = {"family": "S", "k": 1, "r": 2, "coeffs": [1]}
    with pytest.raises(ValidationError):
        NumberConstantModel.model_validate({"type": "number", "series": series})
    model = NumberConstantModel.model_validate({"type": "number", "preset": "lucas", "series": series})
    assert model.lucas_pair().name == "lucas"
    assert model.series.to_domain().family is NumberFamily.S


def test_constants_document_periodic_number() -> None:
    """Test a number constant with periodic coefficients."""
    document = ConstantsDocument.model_validate({"values": {
        "L": {"type": "number", "preset": "lucas",
              "series": {"family": "R", "k": 1, "r": 3, "coeffs": [1, -1], "ell": 1}},
    }})
    (constant,) = document.to_domain()
    assert constant.number.coeffs == PeriodicSeq((Fraction(1), Fraction(-1)))
    assert constant.number.ell == 1
