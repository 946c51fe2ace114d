"""Tests for Lucas pairs, reciprocal sums and the function-side bridge."""

from fractions import Fraction

import pytest
from mpmath import mp

from mahler_sums.application.lucaspair import (
    default_bridge_start,
    eval_number_series,
    fib,
    h_exact_identity_holds,
    induced_poles,
    lucas,
    omega,
    remark6_residual,
    rn,
    sn,
    tabulate,
    transform_consts,
    validate_params,
    verify_bridge,
)
from mahler_sums.application.series import eval_series
from mahler_sums.application.verification_workflow.suites import remark6_params
from mahler_sums.domain.entities import (
    GeometricCoefficients,
    LemmaMode,
    LucasPairParams,
    NumberFamily,
    NumberSeriesSpec,
    PeriodicSeq,
    SeriesKind,
    SeriesSpec,
)
from mahler_sums.domain.errors import InvalidParameters, NotApplicable
from mahler_sums.domain.numerics import PrecisionContext, QuadExt, embed
from mahler_sums.domain.presets import GOLDEN, fibonacci, fibonacci_lucas, get_preset, lucas as lucas_preset

UNIT = PeriodicSeq((Fraction(1),))


def number(family: NumberFamily, k: int = 1, r: int = 2, ell: int = 0, mu: int | None = None, coeffs: PeriodicSeq = UNIT) -> NumberSeriesSpec:
    return NumberSeriesSpec(family, k, r, coeffs, ell=ell, mu=mu)


def test_fibonacci_and_lucas_numbers() -> None:
    """Test F_n and L_n including negative indices."""
    assert [fib(n) for n in range(8)] == [0, 1, 1, 2, 3, 5, 8, 13]
    assert fib(-1) == 1
    assert fib(-2) == -1
    assert [lucas(n) for n in range(6)] == [2, 1, 3, 4, 7, 11]
    assert lucas(-1) == -1
    assert lucas(-2) == 3


def test_presets_reproduce_the_numbers() -> None:
    """Test R_n and S_n of the bundled presets."""
    assert rn(fibonacci(), 10) == 55
    assert sn(lucas_preset(), 5) == 11
    assert rn(fibonacci_lucas(), 7) == 13
    assert sn(fibonacci_lucas(), 7) == 29


def test_get_preset_unknown() -> None:
    """Test that unknown preset names are rejected."""
    assert get_preset("lucas").name == "lucas"
    with pytest.raises(InvalidParameters):
        get_preset("pell")


def test_validate_params(ctx: PrecisionContext) -> None:
    """Test |gamma1| > 1 and gamma1 * gamma2 = +-1."""
    assert validate_params(fibonacci(), ctx) == -1
    assert validate_params(remark6_params(), ctx) == 1
    with pytest.raises(InvalidParameters):
        validate_params(LucasPairParams(Fraction(1, 2), 2, 1, 1, 1, 1), ctx)
    with pytest.raises(InvalidParameters):
        validate_params(LucasPairParams(2, Fraction(1, 3), 1, 1, 1, 1), ctx)


def test_omega_of_fibonacci_lucas(ctx: PrecisionContext) -> None:
    """Test Omega = g1 h2 / (g2 h1) = -1."""
    assert omega(fibonacci_lucas(), ctx) == -1


def test_fibonacci_reciprocal_sum(ctx: PrecisionContext) -> None:
    """Test sum 1/F_(2^h) = (7 - sqrt 5)/2."""
    params = fibonacci()
    result = eval_number_series(params, number(NumberFamily.R), ctx)
    expected = embed(QuadExt(Fraction(7, 2), Fraction(-1, 2), 5), ctx)
    with ctx.workprec():
        assert result.value.overlaps(expected)
        assert abs(result.value.mid - mp.mpf("2.3819660112501051518")) < mp.mpf("1e-18")
    assert result.skipped_terms == ()


def test_zero_denominators_are_skipped(ctx: PrecisionContext) -> None:
    """Test the primed sum: F_0 = 0 and negative indices are left out."""
    params = fibonacci()
    shifted = eval_number_series(params, number(NumberFamily.R, ell=-1), ctx)
    assert shifted.skipped_terms == (0,)
    with ctx.workprec():
        head = Fraction(1) + Fraction(1, 2) + Fraction(1, 13) + Fraction(1, 610)
        assert abs(shifted.value.mid - mp.mpf(head.numerator) / head.denominator) < mp.mpf("1e-6")
    twice = eval_number_series(params, number(NumberFamily.R, ell=-2), ctx)
    assert twice.skipped_terms == (0, 1)


def test_q_family_matches_gamma_series(ctx: PrecisionContext) -> None:
    """Test q_{1,2} = Gamma_{1,2}(1/gamma1)."""
    params = fibonacci()
    q_value = eval_number_series(params, number(NumberFamily.Q, mu=1), ctx).value
    spec = SeriesSpec(SeriesKind.GAMMA, 2, GeometricCoefficients(1), mu=1)
    gamma_value = eval_series(spec, GOLDEN ** (-1), ctx).value
    with ctx.workprec():
        assert q_value.overlaps(gamma_value)


def test_number_spec_validation() -> None:
    """Test structural checks on reciprocal-sum specifications."""
    with pytest.raises(InvalidParameters):
        number(NumberFamily.Q, mu=None)
    with pytest.raises(InvalidParameters):
        number(NumberFamily.R, k=0)
    with pytest.raises(InvalidParameters):
        number(NumberFamily.R, coeffs=PeriodicSeq((0,)))
    assert number(NumberFamily.R).label(fibonacci()) == "F_{0,2}"
    assert number(NumberFamily.S, ell=1).label(fibonacci_lucas()) == "L_{1,2}"


@pytest.mark.parametrize("family", [NumberFamily.R, NumberFamily.S])
def test_h_exact_transform(family: NumberFamily) -> None:
    """Test R_{k r^h + l} = E gamma1^M (gamma1^(-2M) - e) exactly."""
    params = fibonacci_lucas()
    for k, r, ell in [(1, 2, 0), (1, 3, -2), (2, 2, 3), (3, 4, -1)]:
        for h in range(0, 5):
            assert h_exact_identity_holds(params, family, k, r, ell, h)


def test_h_independent_constants_agree_for_h_at_least_one() -> None:
    """Test that the h-independent form matches the h-exact one for h >= 1."""
    params = fibonacci_lucas()
    general = transform_consts(params, 1, 2, 0)
    for h in (1, 2, 3):
        exact = transform_consts(params, 1, 2, 0, h)
        assert (exact.E, exact.e, exact.F, exact.f) == (general.E, general.e, general.F, general.f)
    assert not general.h_exact


def test_h_zero_sign_discrepancy() -> None:
    """Test that at h = 0 the sign of E differs when delta = -1, k odd and r even."""
    params = fibonacci_lucas()
    at_zero = transform_consts(params, 1, 2, 0, 0)
    general = transform_consts(params, 1, 2, 0)
    assert at_zero.E == -general.E
    assert h_exact_identity_holds(params, NumberFamily.R, 1, 2, 0, 0)


@pytest.mark.parametrize(
    "family, ell, mu",
    [(NumberFamily.R, 0, None), (NumberFamily.R, 1, None), (NumberFamily.S, -1, None), (NumberFamily.Q, 0, 1)],
)
def test_bridge_to_function_side(family: NumberFamily, ell: int, mu: int | None, ctx: PrecisionContext) -> None:
    """Test that the number sum equals the function side at z = gamma1^(-k)."""
    params = fibonacci_lucas()
    spec = number(family, ell=ell, mu=mu, coeffs=PeriodicSeq((2, -1)))
    h0 = default_bridge_start(params, spec, ctx)
    assert h0 >= 1
    residual = verify_bridge(params, spec, 0, ctx, h0=h0)
    assert residual.contains_zero()
    with ctx.workprec():
        assert residual.abs_upper() < mp.ldexp(1, -150)


def test_bridge_rejects_h0_zero(ctx: PrecisionContext) -> None:
    """Test that the bridge needs h0 >= 1."""
    with pytest.raises(InvalidParameters):
        verify_bridge(fibonacci(), number(NumberFamily.R), 0, ctx, h0=0)


def test_remark6_dependence(ctx: PrecisionContext) -> None:
    """Test g2 R_{l,r} = h2 gamma2^l1 S_{l+l1,r} when Omega = (gamma1/gamma2)^l1."""
    params = remark6_params()
    for k, r, ell in [(1, 2, 0), (1, 3, 1), (2, 2, -1)]:
        residual = remark6_residual(params, k, r, ell, ctx)
        assert residual.contains_zero()
    assert remark6_residual(params, 1, 2, 0, ctx, ell1=1).contains_zero()
    with pytest.raises(NotApplicable):
        remark6_residual(params, 1, 2, 0, ctx, ell1=-1)


def test_remark6_needs_power_relation(ctx: PrecisionContext) -> None:
    """Test that Omega = -1 admits no dependence relation for Fibonacci/Lucas."""
    with pytest.raises(NotApplicable):
        remark6_residual(fibonacci_lucas(), 1, 2, 0, ctx)


def test_induced_poles_fibonacci_lucas(ctx: PrecisionContext) -> None:
    """Test Omega = -1 gives lemma2 mode with l1 = 0 and Delta = -1."""
    poles = induced_poles(fibonacci_lucas(), 1, 2, 1, ctx)
    assert poles.mode is LemmaMode.LEMMA2
    assert poles.ell1 == 0
    assert poles.Delta == -1
    assert poles.ell0 == 0
    assert sorted(poles.alphas) == [-1, 0, 1]
    assert sorted(poles.betas) == [-1, 0, 1]


def test_tabulate_rows(ctx: PrecisionContext) -> None:
    """Test one row per admissible (k, r, l)."""
    params = fibonacci_lucas()
    rows = tabulate(params, NumberFamily.R, [1], [2, 3], [0, 1], UNIT, ctx)
    assert len(rows) == 4
    assert rows[0]["label"] == "F_{0,2}"
    assert rows[0]["value"].startswith("2.38196601125010515")
    q_rows = tabulate(params, NumberFamily.Q, [1], [2, 3], [1, 2], UNIT, ctx)
    assert [(row["r"], row["index"]) for row in q_rows] == [(2, 1), (3, 1), (3, 2)]
