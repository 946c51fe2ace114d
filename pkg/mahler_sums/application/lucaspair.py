"""Binary recurrences R_n, S_n and their reciprocal sums.

R_n = g1*gamma1^n + g2*gamma2^n and S_n = h1*gamma1^n + h2*gamma2^n with
|gamma1| > 1 and gamma1*gamma2 = delta = +-1. The reciprocal sums

    Q = sum a_h * gamma1^(-mu*k*r^h)
    R = sum' b_h / R_{k*r^h + l}
    S = sum' c_h / S_{k*r^h + l}

are values of the function-side series at z = gamma1^(-k); verify_bridge
checks that correspondence by computing both sides independently.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from mpmath import mp, mpf

from mahler_sums.application.membership import (
    evaluate,
    modulus_exceeds_one,
    modulus_exponent,
    power_membership,
    values_equal,
)
from mahler_sums.application.series import eval_series
from mahler_sums.domain.entities import (
    EvalResult,
    InducedPoles,
    LemmaMode,
    LucasPairParams,
    NumberFamily,
    NumberSeriesSpec,
    PeriodicSeq,
    SeriesKind,
    SeriesSpec,
    TransformConsts,
)
from mahler_sums.domain.errors import (
    EmptySeries,
    ExactnessRequired,
    InvalidParameters,
    NotApplicable,
    PoleCollision,
    PrecisionTooLow,
)
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    ExactValue,
    PrecisionContext,
    accumulation_bits,
    require_exact,
    to_ball,
)
from mahler_sums.logger import logger

Value = Union[AlgebraicInput, BigComplex]

MAX_NUMBER_TERMS = 64


# ---------------------------------------------------------------------------
# Fibonacci and Lucas numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _fib_pair(n: int) -> tuple[int, int]:
    """(F_n, F_(n+1)) for n >= 0 by fast doubling."""
    if n == 0:
        return 0, 1
    a, b = _fib_pair(n >> 1)
    c = a * (2 * b - a)
    d = a * a + b * b
    if n & 1:
        return d, c + d
    return c, d


def fib(n: int) -> int:
    """F_n for any integer n; F_(-n) = (-1)^(n+1) F_n."""
    if n >= 0:
        return _fib_pair(n)[0]
    value = _fib_pair(-n)[0]
    return value if n % 2 else -value


def lucas(n: int) -> int:
    """L_n for any integer n; L_(-n) = (-1)^n L_n."""
    m = abs(n)
    f, f_next = _fib_pair(m)
    value = 2 * f_next - f
    return -value if n < 0 and m % 2 else value


# ---------------------------------------------------------------------------
# Parameter checks
# ---------------------------------------------------------------------------


def _sign_power(delta: int, exponent: int) -> int:
    return 1 if delta == 1 or exponent % 2 == 0 else -1


def delta_of(params: LucasPairParams, ctx: PrecisionContext) -> int:
    """delta = gamma1 * gamma2, which must be +1 or -1."""
    product = evaluate(lambda a, b: a * b, [params.gamma1, params.gamma2], ctx)
    for delta in (1, -1):
        if values_equal(product, Fraction(delta), ctx):
            return delta
    raise InvalidParameters(f"gamma1 * gamma2 must be +1 or -1, got {product}")


def validate_params(params: LucasPairParams, ctx: PrecisionContext) -> int:
    """Check |gamma1| > 1 and gamma1*gamma2 = +-1; returns delta."""
    if not modulus_exceeds_one(params.gamma1, ctx):
        raise InvalidParameters(f"|gamma1| must exceed 1, got gamma1 = {params.gamma1}")
    return delta_of(params, ctx)


def omega(params: LucasPairParams, ctx: PrecisionContext) -> Value:
    """Omega = (g1*h2) / (g2*h1)."""
    return evaluate(lambda g1, g2, h1, h2: (g1 * h2) / (g2 * h1), [params.g1, params.g2, params.h1, params.h2], ctx)


def q_ratio(params: LucasPairParams, ctx: PrecisionContext) -> Value:
    """gamma1 / gamma2."""
    return evaluate(lambda a, b: a / b, [params.gamma1, params.gamma2], ctx)


# ---------------------------------------------------------------------------
# Recurrence values
# ---------------------------------------------------------------------------


def _recurrence(params: LucasPairParams, family: NumberFamily, n: int) -> ExactValue:
    first, second = (params.g1, params.g2) if family is NumberFamily.R else (params.h1, params.h2)
    gamma1, gamma2, c1, c2 = require_exact([params.gamma1, params.gamma2, first, second])
    return c1 * gamma1**n + c2 * gamma2**n


def rn(params: LucasPairParams, n: int) -> ExactValue:
    """R_n computed exactly in the common field of the parameters."""
    return _recurrence(params, NumberFamily.R, n)


def sn(params: LucasPairParams, n: int) -> ExactValue:
    """S_n computed exactly in the common field of the parameters."""
    return _recurrence(params, NumberFamily.S, n)


def recurrence_value(params: LucasPairParams, family: NumberFamily, n: int, ctx: PrecisionContext) -> Value:
    """R_n or S_n, exact when possible and a ball otherwise."""
    if family is NumberFamily.Q:
        raise InvalidParameters("family Q has no recurrence denominator")
    try:
        return _recurrence(params, family, n)
    except ExactnessRequired:
        pass
    first, second = (params.g1, params.g2) if family is NumberFamily.R else (params.h1, params.h2)
    with ctx.workprec(8):
        gamma1, gamma2 = to_ball(params.gamma1), to_ball(params.gamma2)
        return to_ball(first) * gamma1**n + to_ball(second) * gamma2**n


# ---------------------------------------------------------------------------
# Reciprocal sums
# ---------------------------------------------------------------------------


def _log2_bounds(params: LucasPairParams, family: NumberFamily, ctx: PrecisionContext) -> tuple[mpf, mpf, mpf]:
    """log2 |gamma1| (lower), log2 |c1| (lower), log2 |c2| (upper)."""
    first, second = (params.g1, params.g2) if family is not NumberFamily.S else (params.h1, params.h2)
    with ctx.workprec():
        gamma_low = to_ball(params.gamma1).abs_lower()
        first_low = to_ball(first).abs_lower()
        second_up = to_ball(second).abs_upper()
    with mp.workprec(64):
        return mp.log(gamma_low, 2), mp.log(first_low, 2), mp.log(second_up, 2)


def plan_number_tail(params: LucasPairParams, spec: NumberSeriesSpec, target_bits: int, ctx: PrecisionContext) -> tuple[int, mpf]:
    """(h_max, bound) with the tail after h_max at most bound <= 2^-target_bits.

    For R/S the terms past the crossover where |c2/c1| |gamma1|^(-2N) <= 1/2
    are bounded by 2 C / (|c1| |gamma1|^N); family Q uses C |gamma1|^(-mu k r^h).
    """
    log_gamma, log_first, log_second = _log2_bounds(params, spec.family, ctx)
    with ctx.workprec():
        largest = max(to_ball(v).abs_upper() for v in spec.coeffs.values)
    with mp.workprec(64):
        log_c = mp.log(largest, 2)

        def admissible(h: int) -> bool:
            if spec.family is NumberFamily.Q:
                return True
            n = spec.index(h)
            return n >= 0 and log_second - log_first - 2 * n * log_gamma <= -1

        def log_u(h: int) -> mpf:
            if spec.family is NumberFamily.Q:
                return log_c - spec.mu * spec.k * spec.r**h * log_gamma
            return 1 + log_c - log_first - spec.index(h) * log_gamma

        for H in range(spec.start_index, spec.start_index + MAX_NUMBER_TERMS):
            if not admissible(H + 1):
                continue
            first, second = log_u(H + 1), log_u(H + 2)
            if first <= -target_bits - mpf(1.5) and second <= first - 1:
                return H, mp.ldexp(mpf(1), int(mp.ceil(first + 1 + mpf(0.5))))
    raise PrecisionTooLow(f"no truncation within {MAX_NUMBER_TERMS} terms for {spec.label(params)}")


def _sum_terms(params: LucasPairParams, spec: NumberSeriesSpec, h_stop: int, ctx: PrecisionContext) -> tuple[BigComplex, int, list[int]]:
    """Sum of the admissible terms start_index <= h <= h_stop."""
    skipped: list[int] = []
    summed = 0
    count = max(1, h_stop - spec.start_index + 1)
    with ctx.workprec(accumulation_bits(count) + 8):
        total = BigComplex.zero()
        base = None
        if spec.family is NumberFamily.Q:
            base = evaluate(lambda g: g ** (-spec.k), [params.gamma1], ctx)
            base = to_ball(base)
        for h in range(spec.start_index, h_stop + 1):
            coefficient = spec.coeffs.term(h)
            ball = to_ball(coefficient)
            if ball.is_exact_zero():
                continue
            if spec.family is NumberFamily.Q:
                total = total + ball * base ** (spec.mu * spec.r**h)
                summed += 1
                continue
            n = spec.index(h)
            if n < 0:
                skipped.append(h)
                continue
            denominator = recurrence_value(params, spec.family, n, ctx)
            if isinstance(denominator, BigComplex):
                if denominator.abs_upper() < ctx.tolerance() or denominator.contains_zero():
                    raise PoleCollision(h, f"{spec.family.value}_{n} is below resolution")
            elif denominator == 0:
                skipped.append(h)
                continue
            total = total + ball / to_ball(denominator)
            summed += 1
    return total, summed, skipped


def eval_number_series(params: LucasPairParams, spec: NumberSeriesSpec, ctx: PrecisionContext) -> EvalResult:
    """Certified value of a Q, R or S reciprocal sum (primed-sum convention)."""
    validate_params(params, ctx)
    h_max, bound = plan_number_tail(params, spec, ctx.certified_bits + 1, ctx)
    total, summed, skipped = _sum_terms(params, spec, h_max, ctx)
    if summed == 0:
        raise EmptySeries(f"every term of {spec.label(params)} up to h={h_max} was skipped")
    with ctx.workprec():
        value = total.with_err(bound)
    logger.debug("eval_number_series %s: h_max=%d, summed=%d, skipped=%s", spec.label(params), h_max, summed, skipped)
    return EvalResult(value, summed, bound, tuple(skipped))


def partial_number_sum(params: LucasPairParams, spec: NumberSeriesSpec, h_stop: int, ctx: PrecisionContext) -> BigComplex:
    """Admissible terms start_index <= h < h_stop, without a tail."""
    if h_stop <= spec.start_index:
        return BigComplex.zero()
    return _sum_terms(params, spec, h_stop - 1, ctx)[0]


# ---------------------------------------------------------------------------
# Transform constants
# ---------------------------------------------------------------------------


def transform_consts(
    params: LucasPairParams,
    k: int,
    r: int,
    ell: int,
    h: Optional[int] = None,
    ctx: Optional[PrecisionContext] = None,
) -> TransformConsts:
    """E, e, F, f with R_{M+l} = E gamma1^M (gamma1^(-2M) - e), M = k r^h.

    With h given the sign is delta^(k r^h); without it the h-independent
    form delta^(k r) is returned, which agrees for every h >= 1.
    """
    ctx = ctx or PrecisionContext()
    delta = validate_params(params, ctx)
    M = k * r**h if h is not None else k * r
    sign_E = _sign_power(delta, M)
    sign_e = -_sign_power(delta, M + ell)

    def constants(gamma1, gamma2, first, second):
        return sign_E * second * gamma2**ell, sign_e * (first / second) * gamma1 ** (2 * ell)

    E, e = evaluate(constants, [params.gamma1, params.gamma2, params.g1, params.g2], ctx)
    F, f = evaluate(constants, [params.gamma1, params.gamma2, params.h1, params.h2], ctx)
    with ctx.workprec():
        abs_e, abs_f = abs(to_ball(e).mid), abs(to_ball(f).mid)
    return TransformConsts(E=E, e=e, F=F, f=f, h_exact=h is not None, h=h, abs_e=abs_e, abs_f=abs_f)


def h_exact_identity_holds(params: LucasPairParams, family: NumberFamily, k: int, r: int, ell: int, h: int) -> bool:
    """Exact check of R_{k r^h + l} = E gamma1^M (gamma1^(-2M) - e) (or the S analogue)."""
    consts = transform_consts(params, k, r, ell, h)
    scale, pole = (consts.E, consts.e) if family is NumberFamily.R else (consts.F, consts.f)
    M = k * r**h
    gamma1, scale, pole = require_exact([params.gamma1, scale, pole])
    return _recurrence(params, family, M + ell) == scale * gamma1**M * (gamma1 ** (-2 * M) - pole)


# ---------------------------------------------------------------------------
# Number side <-> function side
# ---------------------------------------------------------------------------


def bridge_point(params: LucasPairParams, k: int, ctx: PrecisionContext) -> Value:
    """z = gamma1^(-k), exact when gamma1 is."""
    return evaluate(lambda g: g ** (-k), [params.gamma1], ctx)


def default_bridge_start(params: LucasPairParams, spec: NumberSeriesSpec, ctx: PrecisionContext) -> int:
    """Smallest h0 >= 1 with k r^h0 + l >= 0 and |gamma1|^(-2 k r^h0) <= |pole| / 2."""
    if spec.family is NumberFamily.Q:
        return max(1, spec.start_index)
    consts = transform_consts(params, spec.k, spec.r, spec.ell, ctx=ctx)
    pole_abs = consts.abs_e if spec.family is NumberFamily.R else consts.abs_f
    with ctx.workprec():
        gamma_abs = to_ball(params.gamma1).abs_lower()
    h0 = max(1, spec.start_index)
    with mp.workprec(64):
        log_gamma, log_pole = mp.log(gamma_abs, 2), mp.log(pole_abs, 2)
        while spec.index(h0) < 0 or -2 * spec.k * spec.r**h0 * log_gamma >= log_pole - 1:
            h0 += 1
            if h0 > MAX_NUMBER_TERMS:
                raise PrecisionTooLow("no admissible bridge start index")
    return h0


def function_side(params: LucasPairParams, spec: NumberSeriesSpec, h0: int, ctx: PrecisionContext) -> BigComplex:
    """Value of the tail h >= h0 computed through eval_series at z = gamma1^(-k)."""
    z = bridge_point(params, spec.k, ctx)
    if spec.family is NumberFamily.Q:
        series = SeriesSpec(SeriesKind.GAMMA, spec.r, spec.coeffs, mu=spec.mu, start_index=h0)
        return eval_series(series, z, ctx).value
    consts = transform_consts(params, spec.k, spec.r, spec.ell, ctx=ctx)
    if spec.family is NumberFamily.R:
        kind, scale, pole = SeriesKind.PHI, consts.E, consts.e
    else:
        kind, scale, pole = SeriesKind.LAMBDA, consts.F, consts.f
    series = SeriesSpec(kind, spec.r, spec.coeffs, pole_param=pole, start_index=h0)
    value = eval_series(series, z, ctx).value
    with ctx.workprec():
        return value / to_ball(scale)


def verify_bridge(
    params: LucasPairParams,
    spec: NumberSeriesSpec,
    ell0: int,
    ctx: PrecisionContext,
    h0: Optional[int] = None,
) -> BigComplex:
    """(number sum - partial sum up to h0) - (function-side tail at gamma1^(-k)).

    The pole parameter of the function side is alpha_{l-l0} = e_{l0+(l-l0)},
    so ell0 only shifts the label. The exact residual is 0.
    """
    if h0 is None:
        h0 = default_bridge_start(params, spec, ctx)
    if h0 < max(1, spec.start_index):
        raise InvalidParameters(f"bridge checks need a start index h0 >= max(1, {spec.start_index}), got {h0}")
    if spec.family is not NumberFamily.Q and spec.index(h0) < 0:
        raise InvalidParameters(f"k r^h0 + l must be >= 0, got {spec.index(h0)}")
    full = eval_number_series(params, spec, ctx).value
    head = partial_number_sum(params, spec, h0, ctx)
    tail = function_side(params, spec, h0, ctx)
    logger.debug("verify_bridge %s: l0=%d, h0=%d", spec.label(params), ell0, h0)
    with ctx.workprec():
        return (full - head) - tail


def remark6_residual(
    params: LucasPairParams,
    k: int,
    r: int,
    ell: int,
    ctx: PrecisionContext,
    ell1: Optional[int] = None,
) -> BigComplex:
    """g2 * R_{l,r} - h2 * gamma2^l1 * S_{l+l1,r} for unit coefficients.

    Requires Omega = (gamma1/gamma2)^l1 exactly; the derived l1 must match
    ell1 when it is given.
    """
    validate_params(params, ctx)
    membership = power_membership(omega(params, ctx), q_ratio(params, ctx), ctx)
    if not membership.member:
        raise NotApplicable("Omega is not a power of gamma1/gamma2, so no dependence relation exists")
    derived = membership.exponent
    if ell1 is not None and ell1 != derived:
        raise NotApplicable(f"Omega = (gamma1/gamma2)^{derived}, not ^{ell1}")
    h = 0
    while k * r**h + min(ell, ell + derived) < 0:
        if (k * r**h + ell < 0) != (k * r**h + ell + derived < 0):
            raise NotApplicable(f"term h={h} is kept in one sum and skipped in the other")
        h += 1
    unit = PeriodicSeq((Fraction(1),))
    r_value = eval_number_series(params, NumberSeriesSpec(NumberFamily.R, k, r, unit, ell=ell), ctx).value
    s_value = eval_number_series(params, NumberSeriesSpec(NumberFamily.S, k, r, unit, ell=ell + derived), ctx).value
    weight = evaluate(lambda h2, gamma2: h2 * gamma2**derived, [params.h2, params.gamma2], ctx)
    with ctx.workprec():
        return to_ball(params.g2) * r_value - to_ball(weight) * s_value


def induced_poles(params: LucasPairParams, k: int, r: int, window: int, ctx: PrecisionContext) -> InducedPoles:
    """alpha_l = e_{l0+l,r} and beta_l = f_{l1+l0+l,r} for |l| <= window.

    l1 and Delta come from Omega = Delta (gamma1/gamma2)^l1 when
    |Omega| is a power of |gamma1/gamma2| (lemma2 mode); otherwise the
    moduli are disjoint and l1 = 0 (remark1 mode). l0 is the index with
    |e_{l0,r}| = 1, or 0 when there is none.
    """
    validate_params(params, ctx)
    q = q_ratio(params, ctx)
    big_omega = omega(params, ctx)
    ell1 = modulus_exponent(big_omega, q, ctx)
    if ell1 is None:
        mode, ell1, Delta = LemmaMode.REMARK1, 0, None
    else:
        mode = LemmaMode.LEMMA2
        Delta = evaluate(lambda o, base: o / base**ell1, [big_omega, q], ctx)
    ratio = evaluate(lambda g1, g2: g2 / g1, [params.g1, params.g2], ctx)
    gamma_squared = evaluate(lambda g: g * g, [params.gamma1], ctx)
    ell0 = modulus_exponent(ratio, gamma_squared, ctx)
    if ell0 is None:
        ell0 = 0
    alphas, betas = {}, {}
    for ell in range(-window, window + 1):
        alphas[ell] = transform_consts(params, k, r, ell0 + ell, ctx=ctx).e
        betas[ell] = transform_consts(params, k, r, ell1 + ell0 + ell, ctx=ctx).f
    logger.debug("induced_poles: mode=%s, l0=%d, l1=%d", mode.value, ell0, ell1)
    return InducedPoles(mode=mode, ell0=ell0, ell1=ell1, Delta=Delta, alphas=alphas, betas=betas)


def tabulate(
    params: LucasPairParams,
    family: NumberFamily,
    ks: Sequence[int],
    rs: Sequence[int],
    ells: Sequence[int],
    coeffs: PeriodicSeq,
    ctx: PrecisionContext,
) -> list[dict[str, object]]:
    """One row per (k, r, l); for family Q the third index is mu."""
    rows: list[dict[str, object]] = []
    for k in ks:
        for r in rs:
            for second in ells:
                if family is NumberFamily.Q:
                    if not 1 <= second <= r - 1:
                        continue
                    spec = NumberSeriesSpec(family, k, r, coeffs, mu=second)
                else:
                    spec = NumberSeriesSpec(family, k, r, coeffs, ell=second)
                result = eval_number_series(params, spec, ctx)
                rows.append(
                    {
                        "label": spec.label(params),
                        "family": family.value,
                        "k": k,
                        "r": r,
                        "index": second,
                        "value": result.value.to_string(40),
                        "err_exponent": result.value.err_exponent(),
                        "terms": result.terms_used,
                        "skipped_terms": list(result.skipped_terms),
                    }
                )
    return rows
