"""Tests for periodic coefficient sequences."""

from fractions import Fraction

import pytest
from mpmath import mp

from mahler_sums.application.periodic import (
    combine,
    dft_decompose,
    interleave,
    is_constant,
    lcm_period,
    rank_exact,
    reconstruct,
    term,
)
from mahler_sums.domain.entities import PeriodicSeq
from mahler_sums.domain.errors import ExactnessRequired, InvalidParameters, PeriodMismatch
from mahler_sums.domain.numerics import ComplexLiteral, PrecisionContext, QuadExt, embed


def seq(*values: object) -> PeriodicSeq:
    return PeriodicSeq(tuple(values))


def test_term_wraps_around() -> None:
    """Test term(h) = values[h mod p]."""
    s = seq(1, 2, 3)
    assert term(s, 4) == 2
    assert term(s, 0) == 1
    with pytest.raises(InvalidParameters):
        term(s, -1)


def test_empty_sequence_rejected() -> None:
    """Test that a sequence needs a value."""
    with pytest.raises(InvalidParameters):
        PeriodicSeq(())


def test_interleave() -> None:
    """Test zero padding between the values."""
    assert interleave(seq(1, 2), 3).values == (1, 0, 0, 2, 0, 0)
    assert interleave(seq(1, 2), 1) == seq(1, 2)
    with pytest.raises(InvalidParameters):
        interleave(seq(1), 0)


def test_combine_uses_common_period() -> None:
    """Test sum of weighted sequences on the lcm period."""
    combined = combine([seq(1), seq(1, -1)], [Fraction(1), Fraction(2)])
    assert combined.values == (3, -1)
    assert lcm_period([seq(1, 2), seq(1, 2, 3)]) == 6


def test_combine_needs_exact_values() -> None:
    """Test that complex literals cannot be combined exactly."""
    with pytest.raises(ExactnessRequired):
        combine([seq(ComplexLiteral(Fraction(1), Fraction(1)))], [Fraction(1)])


def test_is_constant() -> None:
    """Test constant detection."""
    assert is_constant(seq(2, 2, 2))
    assert not is_constant(seq(1, 2))


def test_rank_exact() -> None:
    """Test exact rank over Q and a quadratic field."""
    assert rank_exact([seq(1, -1), seq(-1, 1)]) == 1
    assert rank_exact([seq(1, 0), seq(0, 1)]) == 2
    root5 = QuadExt(0, 1, 5)
    assert rank_exact([seq(1, root5), seq(root5, 5)]) == 1
    assert rank_exact([seq(1, 2), seq(1, 2, 3)]) == 2
    with pytest.raises(InvalidParameters):
        rank_exact([seq(1, 2, 3)], num_terms=2)


def test_dft_of_alternating_sequence(ctx: PrecisionContext) -> None:
    """Test (1, -1) = omega^h with omega = -1."""
    coefficients = dft_decompose(seq(1, -1), 2, ctx)
    with ctx.workprec():
        assert coefficients[0].contains_zero()
        assert (coefficients[1] - 1).contains_zero()


def test_dft_reconstructs_terms(ctx: PrecisionContext) -> None:
    """Test that the finite Fourier split reproduces every term."""
    s = seq(Fraction(1, 3), 2, -5, QuadExt(0, 1, 5))
    coefficients = dft_decompose(s, 8, ctx)
    for h in range(8):
        value = reconstruct(coefficients, h, ctx)
        with ctx.workprec():
            assert value.overlaps(embed(s.term(h), ctx))
            assert abs(value.mid - embed(s.term(h), ctx).mid) < mp.ldexp(1, -200)


def test_dft_period_mismatch(ctx: PrecisionContext) -> None:
    """Test that the period must divide N."""
    with pytest.raises(PeriodMismatch):
        dft_decompose(seq(1, 2, 3), 4, ctx)
