"""Bundled Lucas-pair parameter tuples.

gamma1 = (1 + sqrt 5)/2 and gamma2 = (1 - sqrt 5)/2 are the roots of
x^2 - x - 1, so gamma1 * gamma2 = -1. Fibonacci numbers use
g1 = -g2 = 1/sqrt 5 and Lucas numbers use g1 = g2 = 1.
"""

from fractions import Fraction

from mahler_sums.domain.entities import LucasPairParams
from mahler_sums.domain.errors import InvalidParameters
from mahler_sums.domain.numerics import QuadExt

GOLDEN = QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
GOLDEN_CONJUGATE = QuadExt(Fraction(1, 2), Fraction(-1, 2), 5)
INV_SQRT5 = QuadExt(0, Fraction(1, 5), 5)
ONE = QuadExt(1, 0, 5)


def fibonacci() -> LucasPairParams:
    """R_n = S_n = F_n."""
    return LucasPairParams(
        GOLDEN, GOLDEN_CONJUGATE, INV_SQRT5, -INV_SQRT5, INV_SQRT5, -INV_SQRT5,
        name="fibonacci", r_label="F", s_label="F", q_label="q",
    )


def lucas() -> LucasPairParams:
    """R_n = S_n = L_n."""
    return LucasPairParams(
        GOLDEN, GOLDEN_CONJUGATE, ONE, ONE, ONE, ONE,
        name="lucas", r_label="L", s_label="L", q_label="q",
    )


def fibonacci_lucas() -> LucasPairParams:
    """R_n = F_n and S_n = L_n, so Omega = -1."""
    return LucasPairParams(
        GOLDEN, GOLDEN_CONJUGATE, INV_SQRT5, -INV_SQRT5, ONE, ONE,
        name="fibonacci-lucas", r_label="F", s_label="L", q_label="q",
    )


PRESETS = {
    "fibonacci": fibonacci,
    "lucas": lucas,
    "fibonacci-lucas": fibonacci_lucas,
}


def get_preset(name: str) -> LucasPairParams:
    """Look up a preset by name."""
    try:
        return PRESETS[name]()
    except KeyError:
        raise InvalidParameters(
            f"unknown preset {name!r}; choose one of {', '.join(sorted(PRESETS))}"
        ) from None
