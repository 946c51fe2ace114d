"""Tests for Mahler-type series evaluation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from mahler_sums.application.series import (
    choose_start_index,
    dft_split_residual,
    eval_series,
    feq_residual,
    lemma3_function,
    partial_sum,
    remark2_cases,
    remark2_residual,
    truncation_depth,
)
from mahler_sums.domain.entities import GeometricCoefficients, PeriodicSeq, SeriesKind, SeriesSpec
from mahler_sums.domain.errors import DomainError, InvalidParameters, PoleCollision, UnknownCase
from mahler_sums.domain.numerics import ComplexLiteral, PrecisionContext, zeta6

# sum_{h >= 0} 2^(-2^h)
KEMPNER_BINARY = "0.81642150902189314370807973753052"

points = st.fractions(min_value=Fraction(-4, 5), max_value=Fraction(4, 5), max_denominator=40)
ratios = st.sampled_from([Fraction(1, 4), Fraction(-1, 2), Fraction(1), Fraction(-1), Fraction(3, 2), Fraction(2)])


def gamma_spec(r: int = 2, mu: int = 1, start_index: int = 0) -> SeriesSpec:
    return SeriesSpec(SeriesKind.GAMMA, r, GeometricCoefficients(1), mu=mu, start_index=start_index)


def test_gamma_at_one_half(ctx: PrecisionContext) -> None:
    """Test sum 2^(-2^h) to 30 digits."""
    result = eval_series(gamma_spec(), Fraction(1, 2), ctx)
    with mp.workprec(300):
        assert abs(result.value.mid - mp.mpf(KEMPNER_BINARY)) < mp.mpf("1e-30")
    assert result.value.err < mp.ldexp(1, -200)
    assert result.terms_used >= 8


def test_start_index_drops_leading_terms(ctx: PrecisionContext) -> None:
    """Test that h0 = 1 removes the first term 1/2."""
    full = eval_series(gamma_spec(), Fraction(1, 2), ctx).value
    tail = eval_series(gamma_spec(start_index=1), Fraction(1, 2), ctx).value
    with ctx.workprec():
        assert (full - tail - Fraction(1, 2)).contains_zero()


def test_partial_sum_is_exact_for_dyadic_terms(ctx: PrecisionContext) -> None:
    """Test 1/2 + 1/4 + 1/16 = 13/16."""
    value = partial_sum(gamma_spec(), Fraction(1, 2), 3, ctx)
    with ctx.workprec():
        assert (value - Fraction(13, 16)).contains_zero()


def test_phi_telescopes_to_rational(ctx: PrecisionContext) -> None:
    """Test sum z^(2^h)/(z^(2^(h+1)) - 1) = z/(z - 1) at z = 1/2."""
    spec = SeriesSpec(SeriesKind.PHI, 2, GeometricCoefficients(1), pole_param=Fraction(1))
    value = eval_series(spec, Fraction(1, 2), ctx).value
    with ctx.workprec():
        assert (value + 1).contains_zero()


def test_zero_argument(ctx: PrecisionContext) -> None:
    """Test that f(0) = 0 with no terms."""
    result = eval_series(gamma_spec(), Fraction(0), ctx)
    assert result.value.is_exact_zero()
    assert result.terms_used == 0


def test_argument_outside_disk(ctx: PrecisionContext) -> None:
    """Test |z| >= 1 is rejected."""
    with pytest.raises(DomainError):
        eval_series(gamma_spec(), Fraction(1), ctx)
    with pytest.raises(DomainError):
        eval_series(gamma_spec(), ComplexLiteral(Fraction(3, 5), Fraction(4, 5)), ctx)


def test_pole_collision(ctx: PrecisionContext) -> None:
    """Test that z^2 = alpha is reported with the offending index."""
    spec = SeriesSpec(SeriesKind.PHI, 2, GeometricCoefficients(1), pole_param=Fraction(1, 4))
    with pytest.raises(PoleCollision) as excinfo:
        eval_series(spec, Fraction(1, 2), ctx)
    assert excinfo.value.h == 0


def test_spec_validation() -> None:
    """Test structural checks on series specifications."""
    with pytest.raises(InvalidParameters):
        SeriesSpec(SeriesKind.GAMMA, 2, GeometricCoefficients(1), mu=2)
    with pytest.raises(InvalidParameters):
        SeriesSpec(SeriesKind.PHI, 2, GeometricCoefficients(1))
    with pytest.raises(InvalidParameters):
        SeriesSpec(SeriesKind.PHI, 2, GeometricCoefficients(1), pole_param=Fraction(0))
    with pytest.raises(InvalidParameters):
        SeriesSpec(SeriesKind.GAMMA, 1, GeometricCoefficients(1), mu=1)
    with pytest.raises(InvalidParameters):
        SeriesSpec(SeriesKind.GAMMA, 2, PeriodicSeq((0, 0)), mu=1)


def test_truncation_depth_grows_with_precision() -> None:
    """Test that more bits never need fewer terms."""
    spec = gamma_spec()
    assert truncation_depth(spec, Fraction(1, 2), 64) <= truncation_depth(spec, Fraction(1, 2), 1024)


def test_choose_start_index(ctx: PrecisionContext) -> None:
    """Test the smallness condition |z|^(2 r^h0) < min |pole|."""
    assert choose_start_index([Fraction(1, 2)], Fraction(1, 2), 2, ctx) == 1
    assert choose_start_index([Fraction(1, 1000), Fraction(3)], Fraction(1, 2), 2, ctx) == 3


def test_periodic_feq(ctx: PrecisionContext) -> None:
    """Test the period-shift functional equation for periodic coefficients."""
    spec = SeriesSpec(SeriesKind.LAMBDA, 3, PeriodicSeq((1, -2, Fraction(1, 3))), pole_param=Fraction(5, 2), start_index=1)
    residual = feq_residual(spec, ComplexLiteral(Fraction(3, 10), Fraction(-2, 5)), ctx)
    assert residual.contains_zero()


def test_dft_split(ctx: PrecisionContext) -> None:
    """Test the split of a periodic series into geometric ones."""
    spec = SeriesSpec(SeriesKind.PHI, 2, PeriodicSeq((1, 2, -1)), pole_param=Fraction(2))
    residual = dft_split_residual(spec, Fraction(3, 10), ctx)
    assert residual.contains_zero()
    with ctx.workprec():
        assert residual.abs_upper() < mp.ldexp(1, -150)


def test_dft_split_needs_periodic(ctx: PrecisionContext) -> None:
    """Test that geometric coefficients are rejected."""
    with pytest.raises(InvalidParameters):
        dft_split_residual(gamma_spec(), Fraction(1, 2), ctx)


@pytest.mark.parametrize("case_id", [1, 2, 3, 4, 5, 6])
def test_remark2_identities(case_id: int, ctx: PrecisionContext) -> None:
    """Test the six rational identities at a real and a complex point."""
    for z in (Fraction(1, 3), ComplexLiteral(Fraction(-2, 5), Fraction(1, 2))):
        residual = remark2_residual(case_id, z, ctx)
        assert residual.contains_zero()
        with ctx.workprec():
            assert residual.abs_upper() < mp.ldexp(1, -150)


def test_remark2_cases_share_radix_two() -> None:
    """Test the table of exceptional configurations."""
    cases = remark2_cases()
    assert sorted(cases) == [1, 2, 3, 4, 5, 6]
    assert cases[3].alpha0 == zeta6() ** 2
    assert all(spec.r == 2 for case in cases.values() for _, spec in case.series())


def test_remark2_unknown_case(ctx: PrecisionContext) -> None:
    """Test case ids outside 1..6."""
    with pytest.raises(UnknownCase):
        remark2_residual(7, Fraction(1, 2), ctx)


def test_lemma3_function_matches_case_one(ctx: PrecisionContext) -> None:
    """Test g0 = phi_0(1, z) = z/(z - 1) for a = alpha0 = 1, p = 0, v0 = 0."""
    value = lemma3_function(2, 1, 1, -1, [0], 1, 0, Fraction(1, 3), ctx)
    with ctx.workprec():
        assert (value + Fraction(1, 2)).contains_zero()
    with pytest.raises(InvalidParameters):
        lemma3_function(3, 1, 1, -1, [0], 1, 0, Fraction(1, 3), ctx)


@settings(max_examples=25, deadline=None)
@given(z=points, a=ratios, r=st.integers(min_value=2, max_value=4), start=st.integers(min_value=0, max_value=2))
def test_geometric_feq(z: Fraction, a: Fraction, r: int, start: int) -> None:
    """Test a f(z^r) - f(z) + a^h0 q(z^(r^h0)) = 0."""
    ctx = PrecisionContext(128, 16)
    for spec in (
        SeriesSpec(SeriesKind.GAMMA, r, GeometricCoefficients(a), mu=1, start_index=start),
        SeriesSpec(SeriesKind.PHI, r, GeometricCoefficients(a), pole_param=Fraction(-3, 2), start_index=start),
    ):
        assert feq_residual(spec, z, ctx).contains_zero()
