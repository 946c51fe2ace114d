"""Exact quadratic-field arithmetic and error-bounded complex numbers.

Two number worlds live here:

* exact values: ``Fraction`` (the rationals) and ``QuadExt`` (a + b*sqrt(D)),
  closed under + - * / inside one field;
* ``BigComplex``: an mpmath midpoint plus a rigorous absolute error radius.

``embed`` moves an exact value into the numeric world under a
``PrecisionContext``. Every BigComplex operation evaluates the midpoint at the
current mpmath precision and propagates the radius with upward-rounded
triangle-inequality rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

import mpmath
from mpmath import mp, mpc, mpf

from mahler_sums.domain.errors import (
    DivByZero,
    ExactnessRequired,
    FieldMismatch,
    IndeterminateDivision,
    InvalidOrder,
    InvalidParameters,
    InvalidPrecision,
)

Rational = Fraction

_ZERO = mpf(0)


def as_fraction(value: int | str | Fraction) -> Fraction:
    """Parse "7/2", "0.25", "-3" or an int into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidParameters("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameters(f"not a rational literal: {value!r}") from exc


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


# ---------------------------------------------------------------------------
# Exact values
# ---------------------------------------------------------------------------


class QuadExt:
    """Element a + b*sqrt(D) of the quadratic field Q(sqrt(D)).

    D is squarefree and not 0 or 1. Arithmetic with ints and Fractions lifts
    them into the field; arithmetic with another QuadExt requires the same D.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a: int | str | Fraction, b: int | str | Fraction, D: int) -> None:
        if D in (0, 1) or not _is_squarefree(D):
            raise InvalidParameters(f"D must be squarefree and not 0 or 1, got {D}")
        object.__setattr__(self, "a", as_fraction(a))
        object.__setattr__(self, "b", as_fraction(b))
        object.__setattr__(self, "D", int(D))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("QuadExt is immutable")

    def __reduce__(self):
        return (QuadExt, (self.a, self.b, self.D))

    # -- structure ---------------------------------------------------------

    def _coerce(self, other: object) -> QuadExt | None:
        if isinstance(other, QuadExt):
            if other.D != self.D:
                raise FieldMismatch(f"Q(sqrt({self.D})) and Q(sqrt({other.D})) cannot be mixed exactly")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadExt(Fraction(other), 0, self.D)
        return None

    def norm(self) -> Fraction:
        """Field norm a^2 - D*b^2."""
        return self.a * self.a - self.D * self.b * self.b

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b, self.D)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise DivByZero("inverse of zero in a quadratic field")
        return QuadExt(self.a / n, -self.b / n, self.D)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __sub__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(
            self.a * o.a + self.D * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.D,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivByZero("division by zero in a quadratic field")
        return self * o.inverse()

    def __rtruediv__(self, other: object):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> QuadExt:
        return QuadExt(-self.a, -self.b, self.D)

    def __pos__(self) -> QuadExt:
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExt(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadExt):
            if other.D != self.D:
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"QuadExt({str(self.a)!r}, {str(self.b)!r}, {self.D})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.D})"
        coeff = "" if abs(self.b) == 1 else f"{abs(self.b)}*"
        if self.a == 0:
            sign = "-" if self.b < 0 else ""
            return f"{sign}{coeff}{root}"
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {coeff}{root}"


@dataclass(frozen=True)
class ComplexLiteral:
    """Numeric complex input re + i*im with rational (or decimal) parts.

    Literals never take part in exact arithmetic; they are embedded and
    computed with numerically.
    """

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)}*i"


AlgebraicInput = Union[Fraction, QuadExt, ComplexLiteral]
ExactValue = Union[Fraction, QuadExt]


def as_algebraic(value: object) -> AlgebraicInput:
    """Normalize ints, strings and Python complex numbers to AlgebraicInput."""
    if isinstance(value, (Fraction, QuadExt, ComplexLiteral)):
        return value
    if isinstance(value, complex):
        return ComplexLiteral(Fraction(value.real), Fraction(value.imag))
    if isinstance(value, (int, str)):
        return as_fraction(value)
    raise InvalidParameters(f"unsupported algebraic input: {value!r}")


def is_exact(value: object) -> bool:
    return isinstance(value, (Fraction, QuadExt, int)) and not isinstance(value, bool)


def field_of(values: Iterable[AlgebraicInput]) -> int | None:
    """Common field discriminant of exact inputs.

    Returns 0 when every value is rational, D for a single quadratic field and
    None when a complex literal is present. Two different fields raise
    FieldMismatch.
    """
    field = 0
    for value in values:
        if isinstance(value, ComplexLiteral):
            return None
        if isinstance(value, QuadExt) and not value.is_rational():
            if field and value.D != field:
                raise FieldMismatch(f"values live in Q(sqrt({field})) and Q(sqrt({value.D}))")
            field = value.D
    return field


def common_exact(values: Iterable[AlgebraicInput]) -> list[ExactValue] | None:
    """Return the values lifted into one exact field, or None if impossible."""
    values = list(values)
    try:
        field = field_of(values)
    except FieldMismatch:
        return None
    if field is None:
        return None
    lifted: list[ExactValue] = []
    for value in values:
        if isinstance(value, QuadExt) and value.is_rational():
            value = value.a
        if field and isinstance(value, Fraction):
            value = QuadExt(value, 0, field)
        lifted.append(value)
    return lifted


def require_exact(values: Iterable[AlgebraicInput]) -> list[ExactValue]:
    """Like common_exact but raising instead of returning None."""
    values = list(values)
    field = field_of(values)
    if field is None:
        raise ExactnessRequired("exact arithmetic requested on a numeric literal")
    lifted = common_exact(values)
    assert lifted is not None
    return lifted


class QuadOp(str, Enum):
    """Exact field operations."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


def quad_arith(op: QuadOp | str, x: QuadExt | Fraction, y: QuadExt | Fraction) -> QuadExt:
    """Exact field operation; the result is always returned as a QuadExt."""
    op = QuadOp(op)
    field = field_of([x, y])
    if not field:
        field = x.D if isinstance(x, QuadExt) else (y.D if isinstance(y, QuadExt) else None)
    if field is None:
        raise FieldMismatch("quad_arith needs at least one QuadExt operand")
    if isinstance(x, QuadExt) and isinstance(y, QuadExt) and x.D != y.D:
        raise FieldMismatch(f"Q(sqrt({x.D})) and Q(sqrt({y.D})) cannot be mixed exactly")
    qx = x if isinstance(x, QuadExt) else QuadExt(x, 0, field)
    qy = y if isinstance(y, QuadExt) else QuadExt(y, 0, field)
    if op is QuadOp.ADD:
        return qx + qy
    if op is QuadOp.SUB:
        return qx - qy
    if op is QuadOp.MUL:
        return qx * qy
    return qx / qy


# ---------------------------------------------------------------------------
# Precision
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision P and guard bits g.

    Values produced under this context are certified to P - g bits relative
    to max(1, |value|).
    """

    working_bits: int = 256
    guard_bits: int = 32

    def __post_init__(self) -> None:
        if self.working_bits < 64:
            raise InvalidPrecision(f"working_bits must be >= 64, got {self.working_bits}")
        if not 1 <= self.guard_bits < self.working_bits / 2:
            raise InvalidPrecision(
                f"guard_bits must satisfy 1 <= g < P/2, got g={self.guard_bits} P={self.working_bits}"
            )

    @property
    def certified_bits(self) -> int:
        return self.working_bits - self.guard_bits

    def doubled(self) -> PrecisionContext:
        return PrecisionContext(2 * self.working_bits, self.guard_bits)

    def workprec(self, extra: int = 0):
        """mpmath precision context manager at P + extra bits."""
        return mp.workprec(self.working_bits + extra)

    def tolerance(self) -> mpf:
        """Zero-test threshold 2^(-P/2)."""
        return mp.ldexp(mpf(1), -(self.working_bits // 2))

    def pole_threshold(self) -> mpf:
        """Near-pole abort threshold 2^(-P/4)."""
        return mp.ldexp(mpf(1), -(self.working_bits // 4))


def accumulation_bits(count: int) -> int:
    """Extra guard bits for summing `count` terms: ceil(log2(count))."""
    return max(0, (count - 1).bit_length())


# ---------------------------------------------------------------------------
# Error-bounded complex numbers
# ---------------------------------------------------------------------------


def _as_mpf(value: object) -> mpf:
    if isinstance(value, mpf):
        return value
    return mp.mpf(value)


def _up(*terms: mpf) -> mpf:
    total = _ZERO
    for term in terms:
        total = mp.fadd(total, term, rounding="u")
    return total


def _mul_up(x: mpf, y: mpf) -> mpf:
    return mp.fmul(x, y, rounding="u")


def _abs_up(value: mpc) -> mpf:
    return _mul_up(abs(value), 1 + mp.ldexp(mpf(1), 2 - mp.prec))


def _abs_down(value: mpc) -> mpf:
    return mp.fmul(abs(value), 1 - mp.ldexp(mpf(1), 2 - mp.prec), rounding="d")


def _slack(magnitude: mpf) -> mpf:
    """Bound for the roundings of one operation at the current precision."""
    return mp.ldexp(magnitude, 3 - mp.prec)


@dataclass(frozen=True, eq=False)
class BigComplex:
    """Midpoint (re, im) with a rigorous absolute error radius err."""

    re: mpf
    im: mpf = _ZERO
    err: mpf = _ZERO

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _as_mpf(self.re))
        object.__setattr__(self, "im", _as_mpf(self.im))
        err = _as_mpf(self.err)
        if err < 0:
            raise ValueError("error radius must be non-negative")
        object.__setattr__(self, "err", err)

    @classmethod
    def from_mid(cls, value: mpc, err: mpf) -> BigComplex:
        value = mp.mpc(value)
        return cls(value.real, value.imag, err)

    @classmethod
    def zero(cls) -> BigComplex:
        return cls(_ZERO, _ZERO, _ZERO)

    @classmethod
    def one(cls) -> BigComplex:
        return cls(mpf(1), _ZERO, _ZERO)

    @property
    def mid(self) -> mpc:
        return mp.mpc(self.re, self.im)

    # -- magnitudes ----------------------------------------------------------

    def magnitude(self) -> mpf:
        """|midpoint|, rounded up."""
        return _abs_up(self.mid)

    def abs_upper(self) -> mpf:
        """Upper bound for the modulus of every value in the ball."""
        return _up(self.magnitude(), self.err)

    def abs_lower(self) -> mpf:
        """Lower bound for the modulus of every value in the ball (>= 0)."""
        low = mp.fsub(_abs_down(self.mid), self.err, rounding="d")
        return low if low > 0 else _ZERO

    def contains_zero(self) -> bool:
        return self.abs_lower() == 0

    def is_exact_zero(self) -> bool:
        return self.re == 0 and self.im == 0 and self.err == 0

    def overlaps(self, other: object) -> bool:
        """True when the two balls may represent the same number."""
        return (self - other).contains_zero()

    def with_err(self, extra: mpf) -> BigComplex:
        """Same midpoint with the radius enlarged by `extra`."""
        return BigComplex(self.re, self.im, _up(self.err, _as_mpf(extra)))

    def err_exponent(self) -> int | None:
        """Smallest e with err <= 2^e, or None for an exact value."""
        if self.err == 0:
            return None
        return int(mp.ceil(mp.log(self.err, 2)))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: object):
        o = _lift(other)
        if o is None:
            return NotImplemented
        value = self.mid + o.mid
        slack = _slack(_up(self.magnitude(), o.magnitude()))
        return BigComplex.from_mid(value, _up(self.err, o.err, slack))

    __radd__ = __add__

    def __neg__(self) -> BigComplex:
        return BigComplex(-self.re, -self.im, self.err)

    def __sub__(self, other: object):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object):
        o = _lift(other)
        if o is None:
            return NotImplemented
        mx, my = self.magnitude(), o.magnitude()
        value = self.mid * o.mid
        err = _up(
            _mul_up(mx, o.err),
            _mul_up(my, self.err),
            _mul_up(self.err, o.err),
            _slack(_mul_up(mx, my)),
        )
        return BigComplex.from_mid(value, err)

    __rmul__ = __mul__

    def __truediv__(self, other: object):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return _divide(self, o)

    def __rtruediv__(self, other: object):
        o = _lift(other)
        if o is None:
            return NotImplemented
        return _divide(o, self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return BigComplex.one() / (self ** (-n))
        result = BigComplex.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> BigComplex:
        return BigComplex(self.re, -self.im, self.err)

    def scale2(self, exponent: int) -> BigComplex:
        """Exact multiplication by 2**exponent."""
        return BigComplex(
            mp.ldexp(self.re, exponent),
            mp.ldexp(self.im, exponent),
            mp.ldexp(self.err, exponent),
        )

    # -- display -------------------------------------------------------------

    def to_string(self, digits: int = 30) -> str:
        if self.im == 0:
            return mpmath.nstr(self.re, digits)
        return mpmath.nstr(self.mid, digits)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"BigComplex({self.to_string(20)}, err={mpmath.nstr(self.err, 5)})"


def _divide(x: BigComplex, y: BigComplex) -> BigComplex:
    y_up = y.magnitude()
    y_down = _abs_down(y.mid)
    y_low = mp.fsub(y_down, y.err, rounding="d")
    if y_low <= 0:
        raise IndeterminateDivision("divisor ball contains zero")
    mx = x.magnitude()
    value = x.mid / y.mid
    numerator = _up(_mul_up(y_up, x.err), _mul_up(mx, y.err))
    denominator = mp.fmul(y_down, y_low, rounding="d")
    err = _up(
        mp.fdiv(numerator, denominator, rounding="u"),
        _slack(mp.fdiv(mx, y_low, rounding="u")),
    )
    return BigComplex.from_mid(value, err)


def _fraction_ball(q: Fraction) -> BigComplex:
    num, den = q.numerator, q.denominator
    if den & (den - 1) == 0 and abs(num).bit_length() <= mp.prec:
        return BigComplex(mp.ldexp(mp.mpf(num), 1 - den.bit_length()), _ZERO, _ZERO)
    value = mp.fdiv(num, den)
    return BigComplex(value, _ZERO, mp.ldexp(abs(value), 1 - mp.prec))


def _sqrt_ball(n: int) -> BigComplex:
    root = math.isqrt(n)
    if root * root == n:
        return BigComplex(mp.mpf(root), _ZERO, _ZERO)
    value = mp.sqrt(n)
    return BigComplex(value, _ZERO, mp.ldexp(value, 1 - mp.prec))


def _embed_here(value: AlgebraicInput) -> BigComplex:
    """Embed at the current mpmath precision."""
    if isinstance(value, bool):
        raise InvalidParameters("booleans are not numbers here")
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return _fraction_ball(value)
    if isinstance(value, ComplexLiteral):
        re, im = _fraction_ball(value.re), _fraction_ball(value.im)
        return BigComplex(re.re, im.re, _up(re.err, im.err))
    if isinstance(value, QuadExt):
        a = _fraction_ball(value.a)
        if value.b == 0:
            return a
        b = _fraction_ball(value.b)
        root = _sqrt_ball(abs(value.D))
        if value.D < 0:
            imag = b * root
            return BigComplex(a.re, imag.re, _up(a.err, imag.err))
        if value.a * value.b >= 0:
            return a + b * root
        # a and b*sqrt(D) cancel: go through the exact norm instead.
        return _fraction_ball(value.norm()) / (a - b * root)
    raise InvalidParameters(f"cannot embed {value!r}")


def _lift(value: object) -> BigComplex | None:
    if isinstance(value, BigComplex):
        return value
    if isinstance(value, (int, Fraction, QuadExt, ComplexLiteral)) and not isinstance(value, bool):
        return _embed_here(value)
    if isinstance(value, float):
        return BigComplex(mp.mpf(value), _ZERO, _ZERO)
    return None


def embed(value: AlgebraicInput | BigComplex, ctx: PrecisionContext) -> BigComplex:
    """Numeric value of an exact or literal input under ctx.

    The radius satisfies err <= 2^-(P-g) * max(1, |value|); dyadic rationals
    that fit in P bits embed exactly.
    """
    if isinstance(value, BigComplex):
        return value
    with ctx.workprec():
        return _embed_here(as_algebraic(value) if not isinstance(value, int) else Fraction(value))


def to_ball(value: AlgebraicInput | BigComplex | int) -> BigComplex:
    """Embed at the current mpmath precision (for use inside a workprec block)."""
    lifted = _lift(value)
    if lifted is None:
        raise InvalidParameters(f"cannot embed {value!r}")
    return lifted


# ---------------------------------------------------------------------------
# Roots of unity
# ---------------------------------------------------------------------------

_HALF = Fraction(1, 2)


def root_of_unity_exact(n: int, k: int) -> ExactValue | None:
    """Exact e^(2*pi*i*k/n) when it lies in Q or a single quadratic field.

    This covers reduced orders 1, 2, 3, 4 and 6 (so n = 12 only for even k);
    primitive 12th roots live in Q(sqrt(3), i) and return None.
    """
    if n < 1:
        raise InvalidOrder(f"root of unity order must be >= 1, got {n}")
    k %= n
    g = math.gcd(k, n)
    order, j = n // g, k // g
    if order == 1:
        return Fraction(1)
    if order == 2:
        return Fraction(-1)
    if order == 3:
        return QuadExt(-_HALF, _HALF if j == 1 else -_HALF, -3)
    if order == 4:
        return QuadExt(0, 1 if j == 1 else -1, -1)
    if order == 6:
        return QuadExt(_HALF, _HALF if j == 1 else -_HALF, -3)
    return None


def root_of_unity(n: int, k: int, ctx: PrecisionContext) -> BigComplex:
    """e^(2*pi*i*k/n) under the ctx error contract."""
    with ctx.workprec():
        return root_of_unity_here(n, k)


def root_of_unity_here(n: int, k: int) -> BigComplex:
    """e^(2*pi*i*k/n) at the current mpmath precision."""
    exact = root_of_unity_exact(n, k)
    if exact is not None:
        return _embed_here(exact)
    turns = mp.fdiv(2 * (k % n), n)
    return BigComplex(mp.cospi(turns), mp.sinpi(turns), mp.ldexp(mpf(1), 5 - mp.prec))


def zeta6() -> QuadExt:
    """e^(pi*i/3) = 1/2 + (1/2)*sqrt(-3)."""
    return QuadExt(_HALF, _HALF, -3)


def theta3(sign: int = 1) -> QuadExt:
    """e^(+-2*pi*i/3) = -1/2 +- (1/2)*sqrt(-3)."""
    return QuadExt(-_HALF, _HALF if sign > 0 else -_HALF, -3)


# ---------------------------------------------------------------------------
# Helpers shared by the application layer
# ---------------------------------------------------------------------------


def exact_is_zero(value: ExactValue) -> bool:
    return value == 0


def modulus(value: AlgebraicInput | BigComplex, ctx: PrecisionContext) -> mpf:
    """Midpoint modulus (not a bound) at ctx precision."""
    ball = embed(value, ctx)
    with ctx.workprec():
        return abs(ball.mid)


def format_value(value: AlgebraicInput | BigComplex | int) -> str:
    """Stable string form for reports."""
    if isinstance(value, BigComplex):
        return value.to_string(40)
    return str(value)
