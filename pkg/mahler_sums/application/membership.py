"""Comparisons shared by the number-side and the classifiers.

Each helper decides exactly when both operands live in one exact field and
falls back to a tolerance test (2^-(P/2)) on embedded values otherwise.
"""

from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from mpmath import mp, mpf

from mahler_sums.domain.entities import MembershipResult
from mahler_sums.domain.errors import Ambiguous, InvalidParameters
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    ComplexLiteral,
    ExactValue,
    PrecisionContext,
    QuadExt,
    common_exact,
    to_ball,
)

Value = Union[AlgebraicInput, BigComplex]


def evaluate(fn: Callable[..., object], values: Sequence[Value], ctx: PrecisionContext):
    """fn applied to the values, exactly when they share a field and on balls otherwise."""
    if not any(isinstance(v, BigComplex) for v in values):
        exact = common_exact(values)
        if exact is not None:
            return fn(*exact)
    with ctx.workprec(8):
        return fn(*(to_ball(v) for v in values))


def exact_pair(x: Value, y: Value) -> Optional[tuple[ExactValue, ExactValue]]:
    """Both values lifted into one exact field, or None."""
    if isinstance(x, BigComplex) or isinstance(y, BigComplex):
        return None
    lifted = common_exact([x, y])
    if lifted is None:
        return None
    return lifted[0], lifted[1]


def abs_squared_exact(value: Value) -> Optional[ExactValue]:
    """|value|^2 as an exact number when value is exact."""
    if isinstance(value, (BigComplex, ComplexLiteral)):
        return None
    if isinstance(value, QuadExt):
        if value.D < 0:
            return value.norm()
        return value * value
    return Fraction(value) * Fraction(value)


def values_equal(x: Value, y: Value, ctx: PrecisionContext) -> bool:
    """x == y exactly, or |x - y| <= 2^-(P/2) * max(1, |x|)."""
    pair = exact_pair(x, y)
    if pair is not None:
        return pair[0] == pair[1]
    with ctx.workprec():
        bx, by = to_ball(x), to_ball(y)
        scale = max(mpf(1), bx.magnitude())
        return (bx - by).abs_lower() <= ctx.tolerance() * scale


def is_zero(x: Value, ctx: PrecisionContext) -> bool:
    return values_equal(x, Fraction(0), ctx)


def moduli_equal(x: Value, y: Value, ctx: PrecisionContext) -> bool:
    """|x| == |y|, exactly through |.|^2 when both are exact."""
    ax, ay = abs_squared_exact(x), abs_squared_exact(y)
    if ax is not None and ay is not None:
        return ax == ay
    with ctx.workprec():
        mx, my = abs(to_ball(x).mid), abs(to_ball(y).mid)
        return abs(mx - my) <= ctx.tolerance() * max(mpf(1), mx)


def _log_modulus(value: Value, ctx: PrecisionContext) -> mpf:
    with ctx.workprec():
        modulus = abs(to_ball(value).mid)
    with mp.workprec(128):
        return mp.log(modulus)


def isolate_exponent(x: Value, q: Value, ctx: PrecisionContext) -> int:
    """n* = round(log|x| / log|q|)."""
    if moduli_equal(q, Fraction(1), ctx):
        raise Ambiguous("|q| = 1: the exponent cannot be isolated by magnitudes")
    log_q = _log_modulus(q, ctx)
    log_x = _log_modulus(x, ctx)
    with mp.workprec(128):
        return int(mp.nint(log_x / log_q))


def power_membership(x: Value, q: Value, ctx: PrecisionContext) -> MembershipResult:
    """Decide whether x = q^n for some integer n."""
    if is_zero(x, ctx):
        raise InvalidParameters("power_membership needs x != 0")
    n = isolate_exponent(x, q, ctx)
    pair = exact_pair(x, q)
    if pair is not None:
        exact_x, exact_q = pair
        member = exact_q**n == exact_x
    else:
        with ctx.workprec():
            difference = to_ball(q) ** n - to_ball(x)
            scale = max(mpf(1), to_ball(x).magnitude())
            member = difference.abs_lower() <= ctx.tolerance() * scale
    return MembershipResult(member=member, exponent=n if member else None)


def modulus_exponent(x: Value, q: Value, ctx: PrecisionContext) -> Optional[int]:
    """n with |x| = |q|^n, or None when |x| is not in |q|^Z."""
    n = isolate_exponent(x, q, ctx)
    ax, aq = abs_squared_exact(x), abs_squared_exact(q)
    if ax is not None and aq is not None:
        return n if aq**n == ax else None
    with ctx.workprec():
        mx, mq = abs(to_ball(x).mid), abs(to_ball(q).mid)
        return n if abs(mq**n - mx) <= ctx.tolerance() * max(mpf(1), mx) else None


def real_sign(value: ExactValue) -> int:
    """Sign of a real exact number; a + b*sqrt(D) is compared through a^2 vs D*b^2."""
    if isinstance(value, Fraction):
        return (value > 0) - (value < 0)
    if value.b == 0:
        return (value.a > 0) - (value.a < 0)
    if value.D < 0:
        raise InvalidParameters(f"{value} is not real")
    sign_a = (value.a > 0) - (value.a < 0)
    sign_b = 1 if value.b > 0 else -1
    if sign_a == 0 or sign_a == sign_b:
        return sign_b
    return sign_a if value.a * value.a > value.D * value.b * value.b else sign_b


def modulus_exceeds_one(value: Value, ctx: PrecisionContext) -> bool:
    """|value| > 1, decided exactly for exact inputs."""
    squared = abs_squared_exact(value)
    if squared is not None:
        return real_sign(squared - 1) > 0
    with ctx.workprec():
        embedded = to_ball(value)
        if embedded.abs_lower() > 1:
            return True
        if embedded.abs_upper() <= 1:
            return False
    raise Ambiguous(f"cannot decide |{value}| > 1 at {ctx.working_bits} bits")
