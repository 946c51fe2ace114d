"""Rigorous evaluation of Mahler-type series.

A series is sum_{h >= h0} c_h * q(z^(r^h)) where c_h = a^h (geometric) or a
periodic sequence, and q(w) is w^mu, w/(w^2 - alpha) or w/(w^2 - beta).
Every evaluation sums exactly the terms h0..h_max chosen by
truncation_depth and adds a rigorous tail bound to the error radius.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

from mpmath import mp, mpf

from mahler_sums.application.periodic import dft_decompose
from mahler_sums.domain.entities import (
    EvalResult,
    GeometricCoefficients,
    PeriodicSeq,
    SeriesKind,
    SeriesSpec,
    is_zero_input,
)
from mahler_sums.domain.errors import (
    DomainError,
    InvalidParameters,
    PoleCollision,
    PrecisionTooLow,
    UnknownCase,
)
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    PrecisionContext,
    QuadExt,
    accumulation_bits,
    root_of_unity_here,
    to_ball,
    zeta6,
)
from mahler_sums.logger import logger

ZPoint = Union[BigComplex, AlgebraicInput]

MAX_TAIL_SEARCH = 256


@dataclass(frozen=True)
class TailPlan:
    """Last summed index and a power-of-two bound on the remaining tail."""

    h_max: int
    bound: mpf


def _log2(x: mpf) -> mpf:
    return mp.log(x, 2)


def _coefficient_log_bound(coeffs: GeometricCoefficients | PeriodicSeq) -> Callable[[int], mpf]:
    if isinstance(coeffs, GeometricCoefficients):
        log_a = _log2(to_ball(coeffs.a).abs_upper())
        return lambda h: h * log_a
    largest = max(to_ball(v).abs_upper() for v in coeffs.values)
    log_c = _log2(largest)
    return lambda h: log_c


def plan_tail(spec: SeriesSpec, z: BigComplex, target_bits: int) -> TailPlan:
    """Choose h_max so that the tail after h_max is at most 2^-target_bits.

    For h > h_max the terms are bounded by u_h = C_h |z|^(m r^h) (times
    2/|pole| for the pole shapes, once |z|^(2 r^h) <= |pole|/2). The ratio
    u_{h+1}/u_h decreases in h, so u_{H+2} <= u_{H+1}/2 gives a tail of at
    most 2 u_{H+1}.
    """
    if z.is_exact_zero():
        return TailPlan(0, mpf(0))
    with mp.workprec(64):
        z_abs = z.abs_upper()
        if z_abs >= 1:
            raise DomainError(f"series argument must satisfy |z| < 1, got |z| <= {mp.nstr(z_abs, 8)}")
        if z_abs == 0:
            return TailPlan(spec.start_index, mpf(0))
        log_z = _log2(z_abs)
        log_c = _coefficient_log_bound(spec.coeffs)
        if spec.kind is SeriesKind.GAMMA:
            exponent_scale = spec.mu
            log_pole = None
        else:
            exponent_scale = 1
            pole_low = to_ball(spec.pole_param).abs_lower()
            log_pole = _log2(pole_low)

        def log_u(h: int) -> mpf:
            value = log_c(h) + exponent_scale * spec.r**h * log_z
            if log_pole is not None:
                value += 1 - log_pole
            return value

        for H in range(spec.start_index, spec.start_index + MAX_TAIL_SEARCH):
            if log_pole is not None and 2 * spec.r ** (H + 1) * log_z > log_pole - 1:
                continue
            first, second = log_u(H + 1), log_u(H + 2)
            # half a bit of slack for the 64-bit logarithms
            if first <= -target_bits - mpf(1.5) and second <= first - 1:
                exponent = int(mp.ceil(first + 1 + mpf(0.5)))
                return TailPlan(H, mp.ldexp(mpf(1), exponent))
    raise PrecisionTooLow(
        f"no truncation within {MAX_TAIL_SEARCH} terms reaches 2^-{target_bits} for {spec.label()}"
    )


def truncation_depth(spec: SeriesSpec, z: ZPoint, target_bits: int) -> int:
    """Index h_max of the last term needed for a tail below 2^-target_bits."""
    with mp.workprec(max(64, target_bits)):
        ball = _as_point(z)
    return plan_tail(spec, ball, target_bits).h_max


def _as_point(z: ZPoint) -> BigComplex:
    return z if isinstance(z, BigComplex) else to_ball(z)


def _coefficients(spec: SeriesSpec) -> Iterator[BigComplex]:
    """c_0, c_1, ... as balls at the current precision."""
    if isinstance(spec.coeffs, GeometricCoefficients):
        a = to_ball(spec.coeffs.a)
        power = BigComplex.one()
        while True:
            yield power
            power = power * a
    balls = [to_ball(v) for v in spec.coeffs.values]
    h = 0
    while True:
        yield balls[h % len(balls)]
        h += 1


def _term_shape(spec: SeriesSpec, w: BigComplex, pole: Optional[BigComplex], h: int, ctx: PrecisionContext) -> BigComplex:
    if spec.kind is SeriesKind.GAMMA:
        return w**spec.mu
    denominator = w * w - pole
    if denominator.abs_lower() < ctx.pole_threshold():
        raise PoleCollision(h, f"z^(2*{spec.r}^{h}) is within 2^-{ctx.working_bits // 4} of the pole parameter")
    return w / denominator


def inhomogeneity(spec: SeriesSpec, w: ZPoint, ctx: PrecisionContext) -> BigComplex:
    """q(w): w^mu, or w/(w^2 - pole)."""
    with ctx.workprec():
        point = _as_point(w)
        pole = None if spec.kind is SeriesKind.GAMMA else to_ball(spec.pole_param)
        return _term_shape(spec, point, pole, 0, ctx)


def eval_series(spec: SeriesSpec, z: ZPoint, ctx: PrecisionContext) -> EvalResult:
    """Certified value of the series at z (|z| < 1)."""
    with ctx.workprec():
        point = _as_point(z)
    if point.is_exact_zero():
        return EvalResult(BigComplex.zero(), 0, mpf(0))
    plan = plan_tail(spec, point, ctx.certified_bits + 1)
    terms = plan.h_max - spec.start_index + 1
    with ctx.workprec(accumulation_bits(terms) + 8):
        pole = None if spec.kind is SeriesKind.GAMMA else to_ball(spec.pole_param)
        total = BigComplex.zero()
        w = point
        coefficients = _coefficients(spec)
        for h in range(plan.h_max + 1):
            coefficient = next(coefficients)
            if h >= spec.start_index and not coefficient.is_exact_zero():
                total = total + coefficient * _term_shape(spec, w, pole, h, ctx)
            if h < plan.h_max:
                w = w**spec.r
        value = total.with_err(plan.bound)
    logger.debug("eval_series %s: h_max=%d, terms=%d", spec.label(), plan.h_max, terms)
    return EvalResult(value, terms, plan.bound)


def partial_sum(spec: SeriesSpec, z: ZPoint, m: int, ctx: PrecisionContext) -> BigComplex:
    """Sum of the terms h0 <= h < h0 + m (no tail)."""
    with ctx.workprec(accumulation_bits(max(m, 1)) + 8):
        point = _as_point(z)
        pole = None if spec.kind is SeriesKind.GAMMA else to_ball(spec.pole_param)
        total = BigComplex.zero()
        w = point
        coefficients = _coefficients(spec)
        for h in range(spec.start_index + m):
            coefficient = next(coefficients)
            if h >= spec.start_index and not coefficient.is_exact_zero():
                total = total + coefficient * _term_shape(spec, w, pole, h, ctx)
            w = w**spec.r
    return total


def feq_residual(spec: SeriesSpec, z: ZPoint, ctx: PrecisionContext) -> BigComplex:
    """Residual of the functional equation at z; the exact value is 0.

    Geometric coefficients: a*f(z^r) - f(z) + a^h0 * q(z^(r^h0)).
    Periodic coefficients (period p): f(z^(r^p)) - f(z) + sum_{h0 <= h < h0+p} b_h q(z^(r^h)).
    """
    with ctx.workprec():
        point = _as_point(z)
    f_z = eval_series(spec, point, ctx).value
    if isinstance(spec.coeffs, GeometricCoefficients):
        with ctx.workprec():
            shifted = point**spec.r
        f_shift = eval_series(spec, shifted, ctx).value
        with ctx.workprec():
            a = to_ball(spec.coeffs.a)
            base = point ** (spec.r**spec.start_index)
            forcing = a**spec.start_index * inhomogeneity(spec, base, ctx)
            return a * f_shift - f_z + forcing
    period = spec.coeffs.period
    with ctx.workprec():
        shifted = point ** (spec.r**period)
    f_shift = eval_series(spec, shifted, ctx).value
    forcing = partial_sum(spec, point, period, ctx)
    with ctx.workprec():
        return f_shift - f_z + forcing


def dft_split_residual(spec: SeriesSpec, z: ZPoint, ctx: PrecisionContext) -> BigComplex:
    """Phi(z) - sum_i A_i * phi(omega^i, z) for periodic coefficients.

    A_i are the finite Fourier coefficients of the period, so the periodic
    series splits into geometric series with roots of unity as ratios.
    """
    if not isinstance(spec.coeffs, PeriodicSeq):
        raise InvalidParameters("dft_split_residual needs periodic coefficients")
    period = spec.coeffs.period
    coefficients = dft_decompose(spec.coeffs, period, ctx)
    total = eval_series(spec, z, ctx).value
    for i, weight in enumerate(coefficients):
        if weight.is_exact_zero():
            continue
        with ctx.workprec():
            ratio = root_of_unity_here(period, i)
        split = _geometric_with_ball_ratio(spec, ratio, z, ctx)
        with ctx.workprec():
            total = total - weight * split
    return total


def _geometric_with_ball_ratio(spec: SeriesSpec, ratio: BigComplex, z: ZPoint, ctx: PrecisionContext) -> BigComplex:
    """sum_h ratio^h q(z^(r^h)) for a unimodular ball ratio."""
    with ctx.workprec():
        point = _as_point(z)
    bounding = SeriesSpec(
        kind=spec.kind, r=spec.r, coeffs=GeometricCoefficients(Fraction(1)),
        mu=spec.mu, pole_param=spec.pole_param, start_index=spec.start_index,
    )
    plan = plan_tail(bounding, point, ctx.certified_bits + 1)
    terms = plan.h_max - spec.start_index + 1
    with ctx.workprec(accumulation_bits(terms) + 8):
        pole = None if spec.kind is SeriesKind.GAMMA else to_ball(spec.pole_param)
        total = BigComplex.zero()
        power = BigComplex.one()
        w = point
        for h in range(plan.h_max + 1):
            if h >= spec.start_index:
                total = total + power * _term_shape(spec, w, pole, h, ctx)
            power = power * ratio
            w = w**spec.r
        # |ratio| <= 1 + err, so the unit-coefficient tail bound still applies up to a factor 2
        return total.with_err(2 * plan.bound)


def choose_start_index(pole_params: Sequence[AlgebraicInput], z: ZPoint, r: int, ctx: PrecisionContext) -> int:
    """Smallest h0 >= 1 with |z|^(2 r^h0) < min |pole| (the smallness condition)."""
    with ctx.workprec():
        point = _as_point(z)
        z_abs = point.abs_upper()
        if z_abs >= 1:
            raise DomainError("start index needs |z| < 1")
        smallest = min(to_ball(p).abs_lower() for p in pole_params)
        h0 = 1
        while z_abs ** (2 * r**h0) >= smallest:
            h0 += 1
            if h0 > MAX_TAIL_SEARCH:
                raise PrecisionTooLow("smallness condition not reached")
    return h0


# ---------------------------------------------------------------------------
# Rational identities for the six exceptional configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Remark2Case:
    """weights[i] * series[i] summed equals rhs(z)."""

    case_id: int
    a: int
    alpha0: AlgebraicInput
    beta0: AlgebraicInput
    u0: AlgebraicInput
    v0: AlgebraicInput
    rhs_name: str

    def series(self) -> list[tuple[AlgebraicInput, SeriesSpec]]:
        terms = []
        if self.u0 != 0:
            terms.append((self.u0, SeriesSpec(SeriesKind.PHI, 2, GeometricCoefficients(self.a), pole_param=self.alpha0)))
        if self.v0 != 0:
            terms.append((self.v0, SeriesSpec(SeriesKind.LAMBDA, 2, GeometricCoefficients(self.a), pole_param=self.beta0)))
        return terms


def _rhs(name: str, z: BigComplex) -> BigComplex:
    one = BigComplex.one()
    if name == "z/(z-1)":
        return z / (z - one)
    cyclic = z * z + z + one
    if name == "(2z^2+z)/(z^2+z+1)":
        return (z * z * 2 + z) / cyclic
    return z / cyclic


def remark2_cases() -> dict[int, Remark2Case]:
    """The six rational configurations with zeta = e^(pi*i/3)."""
    zeta = zeta6()
    zeta2, zeta4 = zeta**2, zeta**4
    one = QuadExt(1, 0, -3)
    inv = (one + zeta).inverse()
    return {
        1: Remark2Case(1, 1, one, -one, one, 0 * one, "z/(z-1)"),
        2: Remark2Case(2, 1, -one, one, 0 * one, one, "z/(z-1)"),
        3: Remark2Case(3, 1, zeta2, zeta4, zeta2.inverse(), zeta2, "(2z^2+z)/(z^2+z+1)"),
        4: Remark2Case(4, -1, zeta2, zeta4, inv, zeta * inv, "z/(z^2+z+1)"),
        5: Remark2Case(5, 1, zeta4, zeta2, zeta2, zeta2.inverse(), "(2z^2+z)/(z^2+z+1)"),
        6: Remark2Case(6, -1, zeta4, zeta2, zeta * inv, inv, "z/(z^2+z+1)"),
    }


def remark2_residual(case_id: int, z: ZPoint, ctx: PrecisionContext) -> BigComplex:
    """Left side minus rational right side for one of the six identities."""
    cases = remark2_cases()
    if case_id not in cases:
        raise UnknownCase(f"case_id must be 1..6, got {case_id}")
    case = cases[case_id]
    with ctx.workprec():
        point = _as_point(z)
    total = BigComplex.zero()
    for weight, spec in case.series():
        value = eval_series(spec, point, ctx).value
        with ctx.workprec():
            total = total + to_ball(weight) * value
    with ctx.workprec():
        return total - _rhs(case.rhs_name, point)


def lemma3_function(
    r: int,
    a: AlgebraicInput,
    alpha0: AlgebraicInput,
    beta0: AlgebraicInput,
    p_coeffs: Sequence[AlgebraicInput],
    u0: AlgebraicInput,
    v0: AlgebraicInput,
    z: ZPoint,
    ctx: PrecisionContext,
) -> BigComplex:
    """g0(z) = sum_mu p_mu gamma_mu(a, z) + u0 phi_0(a, z) + v0 lambda_0(a, z)."""
    if len(p_coeffs) != r - 1:
        raise InvalidParameters(f"expected {r - 1} polynomial coefficients p_1..p_(r-1)")
    coefficients = GeometricCoefficients(a)
    parts: list[tuple[AlgebraicInput, SeriesSpec]] = [
        (p, SeriesSpec(SeriesKind.GAMMA, r, coefficients, mu=mu))
        for mu, p in enumerate(p_coeffs, start=1)
    ]
    parts.append((u0, SeriesSpec(SeriesKind.PHI, r, coefficients, pole_param=alpha0)))
    parts.append((v0, SeriesSpec(SeriesKind.LAMBDA, r, coefficients, pole_param=beta0)))
    with ctx.workprec():
        point = _as_point(z)
    total = BigComplex.zero()
    for weight, spec in parts:
        if is_zero_input(weight):
            continue
        value = eval_series(spec, point, ctx).value
        with ctx.workprec():
            total = total + to_ball(weight) * value
    return total
