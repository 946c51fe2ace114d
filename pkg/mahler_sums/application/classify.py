"""Case tables for rationality and algebraic independence.

Each classifier returns a CaseReport; an empty case list means the generic
statement applies. Exact comparisons are used whenever the inputs share a
quadratic field; mixed inputs are compared on balls within 2^-(P/2).
"""

from typing import Callable, Mapping, Optional, Sequence, Union

from mpmath import mp, mpc

from mahler_sums.application.lucaspair import omega, q_ratio, validate_params
from mahler_sums.application.membership import (
    evaluate,
    is_zero,
    moduli_equal,
    power_membership,
    values_equal,
)
from mahler_sums.domain.entities import (
    CaseEntry,
    CaseReport,
    HypothesisDiagnostics,
    LemmaMode,
    LucasPairParams,
    NumberFamily,
    PeriodicSeq,
    TheoremId,
    Verdict,
)
from mahler_sums.domain.errors import InvalidHypotheses
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    PrecisionContext,
    common_exact,
    format_value,
    theta3,
    zeta6,
)
from mahler_sums.logger import logger

__all__ = [
    "check_lemma2_hypotheses",
    "classify_lemma3",
    "classify_remark3",
    "classify_thm2",
    "classify_thm3",
    "power_membership",
    "refute_rationality",
]

Value = Union[AlgebraicInput, BigComplex]

ZERO_CONDITION_NOTE = (
    "cases 1 and 2 test R_{l0} = 0 and S_{l0} = 0, equivalently e_{l0,2} = 1 and f_{l0,2} = 1; "
    "the printed condition R_{l0} = 1 is not used"
)
ADDITIVE_CONSTANT_NOTE = "for a = 1 the rational solution is only determined up to an additive constant"


# ---------------------------------------------------------------------------
# Hypotheses
# ---------------------------------------------------------------------------


def _distinct_moduli(values: Mapping[int, Value], name: str, ctx: PrecisionContext) -> list[str]:
    violations = []
    keys = sorted(values)
    for i, first in enumerate(keys):
        for second in keys[i + 1 :]:
            if moduli_equal(values[first], values[second], ctx):
                violations.append(f"|{name}_{first}| = |{name}_{second}|")
    return violations


def check_lemma2_hypotheses(
    alphas: Mapping[int, Value],
    betas: Mapping[int, Value],
    mode: LemmaMode,
    ctx: PrecisionContext,
) -> HypothesisDiagnostics:
    """Report every violated modulus hypothesis on the window of pole parameters."""
    mode = LemmaMode(mode)
    violations: list[str] = []
    if 0 not in alphas:
        violations.append("alpha_0 is missing")
    elif not moduli_equal(alphas[0], 1, ctx):
        violations.append(f"|alpha_0| != 1 (alpha_0 = {format_value(alphas[0])})")
    violations.extend(_distinct_moduli(alphas, "alpha", ctx))
    if mode is LemmaMode.LEMMA2:
        for ell in sorted(betas):
            if ell not in alphas:
                violations.append(f"beta_{ell} has no matching alpha_{ell}")
                continue
            delta = evaluate(lambda b, a: b / a, [betas[ell], alphas[ell]], ctx)
            if not moduli_equal(delta, 1, ctx):
                violations.append(f"|delta_{ell}| != 1")
            elif values_equal(delta, 1, ctx):
                violations.append(f"delta_{ell} = 1")
    else:
        violations.extend(_distinct_moduli(betas, "beta", ctx))
        for first in sorted(alphas):
            for second in sorted(betas):
                if moduli_equal(alphas[first], betas[second], ctx):
                    violations.append(f"|alpha_{first}| = |beta_{second}|")
    return HypothesisDiagnostics(mode=mode, violations=tuple(violations))


def _lemma3_hypotheses(
    r: int,
    alpha0: Value,
    beta0: Optional[Value],
    p_coeffs: Sequence[Value],
    weights: Sequence[Value],
    ctx: PrecisionContext,
) -> None:
    violations = []
    if r < 2:
        violations.append(f"r must be >= 2, got {r}")
    if len(p_coeffs) != r - 1:
        violations.append(f"expected {r - 1} coefficients p_1..p_(r-1), got {len(p_coeffs)}")
    if not moduli_equal(alpha0, 1, ctx):
        violations.append("|alpha_0| != 1")
    if beta0 is not None:
        if not moduli_equal(beta0, 1, ctx):
            violations.append("|beta_0| != 1")
        elif values_equal(beta0, alpha0, ctx):
            violations.append("delta_0 = 1")
    if all(is_zero(v, ctx) for v in [*p_coeffs, *weights]):
        violations.append("all coefficients are zero")
    if violations:
        raise InvalidHypotheses("; ".join(violations))


# ---------------------------------------------------------------------------
# Rationality of the combined function
# ---------------------------------------------------------------------------


def _a_squared_in(a: Value, targets: Sequence[int], ctx: PrecisionContext) -> bool:
    square = evaluate(lambda x: x * x, [a], ctx)
    return any(values_equal(square, t, ctx) for t in targets)


def classify_lemma3(
    r: int,
    a: Value,
    alpha0: Value,
    beta0: Value,
    p_coeffs: Sequence[Value],
    u0: Value,
    v0: Value,
    ctx: PrecisionContext,
) -> CaseReport:
    """Rationality of sum p_mu gamma_mu(a, z) + u0 phi_0(a, z) + v0 lambda_0(a, z)."""
    _lemma3_hypotheses(r, alpha0, beta0, p_coeffs, [u0, v0], ctx)
    if r >= 4:
        return CaseReport(TheoremId.L3, verdict=Verdict.NOT_RATIONAL, notes=("r >= 4",))
    if r == 3:
        if _a_squared_in(a, [9], ctx):
            return CaseReport(TheoremId.L3, verdict=Verdict.UNDETERMINED, notes=("r = 3 and a^2 = 9",))
        return CaseReport(TheoremId.L3, verdict=Verdict.NOT_RATIONAL, notes=("r = 3 and a^2 != 9",))
    if _a_squared_in(a, [2, 4], ctx):
        return CaseReport(TheoremId.L3, verdict=Verdict.UNDETERMINED, notes=("r = 2 and a^2 in {2, 4}",))
    if not is_zero(p_coeffs[0], ctx):
        return CaseReport(TheoremId.L3, verdict=Verdict.NOT_RATIONAL, notes=("p_1 != 0",))

    zeta = zeta6()
    zeta2, zeta4 = zeta**2, zeta**4
    sign = 1 if values_equal(a, 1, ctx) else (-1 if values_equal(a, -1, ctx) else 0)
    matched: list[CaseEntry] = []
    if sign == 1 and values_equal(alpha0, 1, ctx) and is_zero(v0, ctx):
        matched.append(CaseEntry("1", {"a": "1", "alpha0": "1", "v0": "0"}))
    if sign == 1 and values_equal(beta0, 1, ctx) and is_zero(u0, ctx):
        matched.append(CaseEntry("2", {"a": "1", "beta0": "1", "u0": "0"}))
    if sign:
        offset = 0 if sign == 1 else 1
        linked_v = evaluate(lambda u, z: -sign * u * z, [u0, zeta], ctx)
        if values_equal(alpha0, zeta2, ctx) and values_equal(beta0, zeta4, ctx) and values_equal(v0, linked_v, ctx):
            matched.append(CaseEntry(str(3 + offset), {"a": str(sign), "alpha0": "zeta^2", "beta0": "zeta^4"}))
        linked_u = evaluate(lambda v, z: -sign * v * z, [v0, zeta], ctx)
        if values_equal(alpha0, zeta4, ctx) and values_equal(beta0, zeta2, ctx) and values_equal(u0, linked_u, ctx):
            matched.append(CaseEntry(str(5 + offset), {"a": str(sign), "alpha0": "zeta^4", "beta0": "zeta^2"}))
    notes = ["zeta = e^(pi*i/3)"]
    if matched and sign == 1:
        notes.append(ADDITIVE_CONSTANT_NOTE)
    verdict = Verdict.RATIONAL if matched else Verdict.NOT_RATIONAL
    return CaseReport(TheoremId.L3, cases=tuple(matched), notes=tuple(notes), verdict=verdict)


def classify_remark3(
    r: int,
    a: Value,
    alpha0: Value,
    p_coeffs: Sequence[Value],
    u0: Value,
    ctx: PrecisionContext,
) -> CaseReport:
    """Rationality of sum p_mu gamma_mu(a, z) + u0 phi_0(a, z) under disjoint moduli.

    Rational exactly when r = 2, p_1 = 0 and a = alpha_0 = 1.
    """
    _lemma3_hypotheses(r, alpha0, None, p_coeffs, [u0], ctx)
    rational = r == 2 and is_zero(p_coeffs[0], ctx) and values_equal(a, 1, ctx) and values_equal(alpha0, 1, ctx)
    if not rational:
        return CaseReport(TheoremId.R3, verdict=Verdict.NOT_RATIONAL)
    case = CaseEntry("1", {"a": "1", "alpha0": "1"}, removals=("phi_0(1, z) = z/(z-1)",))
    return CaseReport(TheoremId.R3, cases=(case,), notes=(ADDITIVE_CONSTANT_NOTE,), verdict=Verdict.RATIONAL)


def refute_rationality(
    f: Callable[[mpc], BigComplex],
    degree: int,
    sample_points: Sequence[mpc],
    test_points: Sequence[mpc],
    ctx: PrecisionContext,
    gap: float = 1e-3,
) -> tuple[bool, float]:
    """Interpolate-and-refute: is f far from every rational function of degree <= degree?

    For each d <= degree, P/Q with deg P, deg Q <= d and Q(0) = 1 is fitted
    through the first 2d+1 sample points and compared with f on the test
    points. Returns (refuted, smallest max-gap over d).
    """
    if len(sample_points) < 2 * degree + 1:
        raise InvalidHypotheses(f"need {2 * degree + 1} sample points for degree {degree}")
    best = mp.inf
    with ctx.workprec():
        samples = [(mp.mpc(z), f(mp.mpc(z)).mid) for z in sample_points]
        tests = [(mp.mpc(z), f(mp.mpc(z)).mid) for z in test_points]
        for d in range(0, degree + 1):
            size = 2 * d + 1
            matrix = mp.matrix(size, size)
            rhs = mp.matrix(size, 1)
            for row, (z, value) in enumerate(samples[:size]):
                for j in range(d + 1):
                    matrix[row, j] = z**j
                for j in range(1, d + 1):
                    matrix[row, d + j] = -value * z**j
                rhs[row] = value
            try:
                solution = mp.lu_solve(matrix, rhs)
            except ZeroDivisionError:
                continue
            numerator = [solution[j] for j in range(d + 1)]
            denominator = [mp.mpf(1)] + [solution[d + j] for j in range(1, d + 1)]
            worst = mp.mpf(0)
            for z, value in tests:
                q_value = mp.polyval(denominator[::-1], z)
                if q_value == 0:
                    worst = mp.inf
                    break
                worst = max(worst, abs(value - mp.polyval(numerator[::-1], z) / q_value))
            best = min(best, worst)
        best_gap = float(best)
    logger.debug("refute_rationality: degree=%d, best gap=%.3e", degree, best_gap)
    return best_gap > gap, best_gap


# ---------------------------------------------------------------------------
# Exceptional cases for Lucas pairs and for pole parameters
# ---------------------------------------------------------------------------


def _numeric_note(params: LucasPairParams) -> Optional[str]:
    if common_exact(list(params.values())) is None:
        return "membership and zero tests were decided numerically within 2^-(P/2)"
    return None


def classify_thm2(
    params: LucasPairParams,
    b: PeriodicSeq,
    c: PeriodicSeq,
    search_bound: int,
    ctx: PrecisionContext,
) -> CaseReport:
    """Exceptional l0 for the numbers Q_{mu,r}, R_{l,r}, S_{l,r}.

    The candidate l0 is isolated from |(gamma1/gamma2)^l0| = |g2/g1| (or the
    S and theta analogues), so one membership test per case is complete.
    """
    validate_params(params, ctx)
    theorem = TheoremId.T1 if params.name == "fibonacci-lucas" else TheoremId.T2
    q = q_ratio(params, ctx)
    big_omega = omega(params, ctx)
    notes = [ZERO_CONDITION_NOTE]
    numeric = _numeric_note(params)
    if numeric:
        notes.append(numeric)
    r_label = params.label_for(NumberFamily.R)
    s_label = params.label_for(NumberFamily.S)

    dependent = power_membership(big_omega, q, ctx)
    if dependent.member:
        ell1 = dependent.exponent
        notes.append(
            f"Omega = (gamma1/gamma2)^{ell1}: g2*{r_label}_{{l,r}} = h2*gamma2^{ell1}*{s_label}_{{l+{ell1},r}} "
            "for unit coefficients, so the independence statement does not apply"
        )
        case = CaseEntry("dependent", {"l1": str(ell1), "Omega": format_value(big_omega)})
        return CaseReport(theorem, cases=(case,), notes=tuple(notes))

    def within(exponent: Optional[int]) -> bool:
        if exponent is None:
            return False
        if abs(exponent) > search_bound:
            notes.append(f"candidate l0 = {exponent} lies outside the search bound {search_bound}")
            return False
        return True

    cases: list[CaseEntry] = []
    r_zero = power_membership(evaluate(lambda g1, g2: -g2 / g1, [params.g1, params.g2], ctx), q, ctx)
    if within(r_zero.exponent):
        ell0 = r_zero.exponent
        if b.is_constant():
            cases.append(CaseEntry("1", {"l0": str(ell0)}, removals=(f"{r_label}_{{{ell0},2}}",)))
        else:
            notes.append(f"{r_label}_{ell0} = 0 but (b_h) is not constant")
    s_zero = power_membership(evaluate(lambda h1, h2: -h2 / h1, [params.h1, params.h2], ctx), q, ctx)
    if within(s_zero.exponent):
        ell0 = s_zero.exponent
        if c.is_constant():
            cases.append(CaseEntry("2", {"l0": str(ell0)}, removals=(f"{s_label}_{{{ell0},2}}",)))
        else:
            notes.append(f"{s_label}_{ell0} = 0 but (c_h) is not constant")
    for case_id, sign in (("3", 1), ("4", -1)):
        theta = theta3(sign)
        target = evaluate(lambda g1, g2, t: -g2 * t / g1, [params.g1, params.g2, theta], ctx)
        found = power_membership(target, q, ctx)
        if not within(found.exponent):
            continue
        rotated = evaluate(lambda o, t: o * t, [big_omega, theta], ctx)
        if power_membership(rotated, q, ctx).member:
            ell0 = found.exponent
            witnesses = {"l0": str(ell0), "theta": "e^(2*pi*i/3)" if sign > 0 else "e^(-2*pi*i/3)"}
            cases.append(CaseEntry(case_id, witnesses, removals=(f"{r_label}_{{{ell0},2^j}} (j >= 1)",)))
    logger.info("classify_thm2 %s: cases=%s", params.name, [case.case_id for case in cases] or "generic")
    return CaseReport(theorem, cases=tuple(cases), notes=tuple(notes))


def classify_thm3(
    alphas: Mapping[int, Value],
    betas: Mapping[int, Value],
    b: PeriodicSeq,
    c: PeriodicSeq,
    mode: LemmaMode,
    ctx: PrecisionContext,
) -> CaseReport:
    """Exceptional cases for the functions Gamma_{mu,r}, Phi_{l,r}, Lambda_{l,r}."""
    mode = LemmaMode(mode)
    diagnostics = check_lemma2_hypotheses(alphas, betas, mode, ctx)
    if not diagnostics.passed:
        raise InvalidHypotheses("; ".join(diagnostics.violations))
    alpha0, beta0 = alphas[0], betas[0]
    cases: list[CaseEntry] = []
    notes: list[str] = []
    if b.is_constant() and values_equal(alpha0, 1, ctx):
        cases.append(CaseEntry("1", {"alpha0": "1"}, removals=("Phi_{0,2}",)))
    if c.is_constant() and values_equal(beta0, 1, ctx):
        cases.append(CaseEntry("2", {"beta0": "1"}, removals=("Lambda_{0,2}",)))
    if mode is LemmaMode.LEMMA2:
        squared = evaluate(lambda x: x * x, [alpha0], ctx)
        for case_id, sign in (("3", 1), ("4", -1)):
            if values_equal(alpha0, theta3(sign), ctx) and values_equal(beta0, squared, ctx):
                witnesses = {"alpha0": "e^(2*pi*i/3)" if sign > 0 else "e^(-2*pi*i/3)", "beta0": "alpha0^2"}
                cases.append(CaseEntry(case_id, witnesses, removals=("Phi_{0,2^j} or Lambda_{0,2^j} (j >= 1)",)))
    else:
        notes.append("cases 3 and 4 cannot occur when all moduli of alpha_l and beta_l differ")
    return CaseReport(TheoremId.T3, cases=tuple(cases), notes=tuple(notes))
