"""Seeded item plans and item checks for the bundled verification suites.

plan_suite turns (suite, seed) into an ordered list of VerificationItems;
run_item executes one item and never raises for a library error, so a
single failing configuration shows up as a failed outcome in the report.
"""

import random
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import mp, mpc, mpf

from mahler_sums.application.classify import (
    classify_lemma3,
    classify_remark3,
    classify_thm2,
    refute_rationality,
)
from mahler_sums.application.lattice import independence_smoke, minimal_polynomial
from mahler_sums.application.lucaspair import (
    eval_number_series,
    h_exact_identity_holds,
    remark6_residual,
    transform_consts,
    verify_bridge,
)
from mahler_sums.application.series import (
    eval_series,
    feq_residual,
    lemma3_function,
    remark2_cases,
    remark2_residual,
)
from mahler_sums.domain.entities import (
    GeometricCoefficients,
    LucasPairParams,
    NumberFamily,
    NumberSeriesSpec,
    PeriodicSeq,
    SeriesKind,
    SeriesSpec,
    Suite,
    Verdict,
    VerificationItem,
    VerificationOutcome,
)
from mahler_sums.domain.errors import MahlerError
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    ComplexLiteral,
    PrecisionContext,
    QuadExt,
    embed,
    to_ball,
    zeta6,
)
from mahler_sums.domain.presets import fibonacci, fibonacci_lucas, lucas
from mahler_sums.logger import logger

SUITE_DEFAULT_BITS = {
    Suite.FEQ: 192,
    Suite.REMARK2: 256,
    Suite.BRIDGE: 256,
    Suite.TRANSFORMS: 256,
    Suite.THEOREM1: 512,
    Suite.LEMMA3_TABLE: 256,
}

FEQ_SPECS_PER_KIND = 50
REMARK2_POINTS = 20
LEMMA3_POINTS = 10
REFUTE_DEGREE = 4
SMOKE_HEIGHT = 2**20
MINPOLY_HEIGHT = 10**6

Check = Callable[[VerificationItem, PrecisionContext], VerificationOutcome]


def default_bits(suite: Suite) -> int:
    return SUITE_DEFAULT_BITS[Suite(suite)]


# ---------------------------------------------------------------------------
# Seeded sampling
# ---------------------------------------------------------------------------


def _random_complex(rng: random.Random, low: Fraction, high: Fraction, scale: int = 1000) -> ComplexLiteral:
    """Rational point with low <= |z| <= high on a 1/scale grid."""
    bound = int(high * scale) + 1
    while True:
        re = Fraction(rng.randint(-bound, bound), scale)
        im = Fraction(rng.randint(-bound, bound), scale)
        norm = re * re + im * im
        if low * low <= norm <= high * high:
            return ComplexLiteral(re, im)


def _random_periodic(rng: random.Random) -> PeriodicSeq:
    period = rng.randint(1, 4)
    while True:
        values = tuple(Fraction(rng.randint(-3, 3)) for _ in range(period))
        if any(values):
            return PeriodicSeq(values)


def _ring_points(rng: random.Random, radius: float, count: int) -> list[mpc]:
    with mp.workprec(64):
        return [radius * mp.expjpi(2 * mpf(rng.random())) for _ in range(count)]


# ---------------------------------------------------------------------------
# Plans
# ---------------------------------------------------------------------------


def _plan_feq(rng: random.Random) -> list[dict[str, object]]:
    plans = []
    for kind in SeriesKind:
        for style in ("geometric", "periodic"):
            for n in range(FEQ_SPECS_PER_KIND):
                r = rng.randint(2, 4)
                if style == "geometric":
                    coeffs = GeometricCoefficients(_random_complex(rng, Fraction(1, 4), Fraction(2)))
                else:
                    coeffs = _random_periodic(rng)
                mu = rng.randint(1, r - 1) if kind is SeriesKind.GAMMA else None
                pole = None if kind is SeriesKind.GAMMA else _random_complex(rng, Fraction(7, 10), Fraction(2), 100)
                spec = SeriesSpec(kind, r, coeffs, mu=mu, pole_param=pole, start_index=rng.randint(0, 2))
                z = _random_complex(rng, Fraction(1, 20), Fraction(4, 5))
                plans.append({
                    "id": f"feq/{kind.value}/{style}/{n:02d}",
                    "check": "feq",
                    "spec": spec,
                    "z": z,
                })
    return plans


def _plan_remark2(rng: random.Random) -> list[dict[str, object]]:
    return [
        {
            "id": f"remark2/case-{case_id}",
            "check": "remark2",
            "case_id": case_id,
            "points": [_random_complex(rng, Fraction(1, 20), Fraction(9, 10)) for _ in range(REMARK2_POINTS)],
        }
        for case_id in sorted(remark2_cases())
    ]


def _bridge_coefficients(rng: random.Random) -> tuple[PeriodicSeq, ...]:
    drawn = (Fraction(rng.randint(1, 3)), Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
    return PeriodicSeq((Fraction(1),)), PeriodicSeq((Fraction(2), Fraction(-1))), PeriodicSeq(drawn)


def _plan_bridge(rng: random.Random) -> list[dict[str, object]]:
    plans = []
    for preset in (fibonacci(), lucas()):
        for coeffs in _bridge_coefficients(rng):
            for k in (1, 2):
                for r in (2, 3):
                    specs = [
                        NumberSeriesSpec(family, k, r, coeffs, ell=ell)
                        for family in (NumberFamily.R, NumberFamily.S)
                        for ell in (-1, 0, 1)
                    ]
                    specs += [NumberSeriesSpec(NumberFamily.Q, k, r, coeffs, mu=mu) for mu in range(1, r)]
                    plans.extend(
                        {
                            "id": f"bridge/{preset.name}/{spec.family.value}/{spec.label(preset)}/k={k}/b={coeffs}",
                            "check": "bridge",
                            "params": preset,
                            "spec": spec,
                        }
                        for spec in specs
                    )
    return plans



def _plan_transforms(rng: random.Random) -> list[dict[str, object]]:
    params = fibonacci_lucas()
    return [
        {
            "id": f"transforms/k={k}/r={r}/l={ell}/h={h}",
            "check": "transforms",
            "params": params,
            "k": k,
            "r": r,
            "ell": ell,
            "h": h,
        }
        for k in (1, 2, 3)
        for r in (2, 3, 4)
        for ell in range(-3, 4)
        for h in range(0, 9)
    ]


def remark6_params() -> LucasPairParams:
    """gamma1 = 2, gamma2 = 1/2 with Omega = gamma1/gamma2, so l1 = 1 and Delta = 1."""
    return LucasPairParams(
        Fraction(2), Fraction(1, 2), Fraction(1), Fraction(1), Fraction(1), Fraction(4), name="remark6",
    )


def _plan_theorem1(rng: random.Random) -> list[dict[str, object]]:
    plans: list[dict[str, object]] = [
        {"id": "theorem1/minpoly-F02", "check": "minpoly"},
        {"id": "theorem1/classify-constant", "check": "thm1-classify", "b": (1,), "expected": ["1"]},
        {"id": "theorem1/classify-nonconstant", "check": "thm1-classify", "b": (1, 2), "expected": []},
        {"id": "theorem1/smoke-F02", "check": "smoke-F02"},
        {"id": "theorem1/smoke-gamma", "check": "smoke-gamma"},
        {"id": "theorem1/smoke-numbers", "check": "smoke-numbers"},
    ]
    for k, r, ell in ((1, 2, 0), (1, 3, 1), (2, 2, -1)):
        plans.append({"id": f"theorem1/remark6/k={k}/r={r}/l={ell}", "check": "remark6", "k": k, "r": r, "ell": ell})
    return plans


def _lemma3_configurations() -> list[dict[str, object]]:
    zeta = zeta6()
    one = QuadExt(1, 0, -3)
    i = QuadExt(0, 1, -1)
    zero = Fraction(0)
    rows: list[dict[str, object]] = []
    for case in remark2_cases().values():
        rows.append({
            "name": f"case-{case.case_id}", "r": 2, "a": Fraction(case.a), "alpha0": case.alpha0,
            "beta0": case.beta0, "p": [zero], "u0": case.u0, "v0": case.v0,
            "verdict": Verdict.RATIONAL, "case": str(case.case_id), "refute": True,
        })
    # r = 2, a = +-1 outside the six cases
    for name, a, alpha0, beta0, u0, v0 in (
        ("a1-alpha1-v", 1, one, -one, one, one),
        ("a-1-alpha1", -1, one, -one, one, 0 * one),
        ("a1-zeta-unlinked", 1, zeta**2, zeta**4, one, one),
        ("a1-i", 1, i, -i, QuadExt(1, 0, -1), QuadExt(0, 0, -1)),
    ):
        rows.append({
            "name": name, "r": 2, "a": Fraction(a), "alpha0": alpha0, "beta0": beta0, "p": [zero],
            "u0": u0, "v0": v0, "verdict": Verdict.NOT_RATIONAL, "case": None, "refute": True,
        })
    for name, r, a, p, verdict in (
        ("r2-a2", 2, 2, [zero], Verdict.UNDETERMINED),
        ("r2-p1", 2, 1, [Fraction(1)], Verdict.NOT_RATIONAL),
        ("r3-a3", 3, 3, [zero, zero], Verdict.UNDETERMINED),
        ("r3-a1", 3, 1, [zero, zero], Verdict.NOT_RATIONAL),
        ("r4-a1", 4, 1, [zero, zero, zero], Verdict.NOT_RATIONAL),
    ):
        rows.append({
            "name": name, "r": r, "a": Fraction(a), "alpha0": Fraction(1), "beta0": Fraction(-1), "p": p,
            "u0": Fraction(1), "v0": zero, "verdict": verdict, "case": None, "refute": False,
        })
    return rows


def _plan_lemma3_table(rng: random.Random) -> list[dict[str, object]]:
    plans: list[dict[str, object]] = []
    for row in _lemma3_configurations():
        plans.append({
            "id": f"lemma3-table/{row['name']}",
            "check": "lemma3",
            "row": row,
            "points": [_random_complex(rng, Fraction(1, 20), Fraction(9, 10)) for _ in range(LEMMA3_POINTS)],
            "samples": _ring_points(rng, 0.5, 2 * REFUTE_DEGREE + 1),
            "tests": _ring_points(rng, 0.9, 6),
        })
    plans.append({"id": "lemma3-table/remark3-rational", "check": "remark3", "r": 2, "p": [Fraction(0)],
                  "verdict": Verdict.RATIONAL})
    plans.append({"id": "lemma3-table/remark3-r3", "check": "remark3", "r": 3, "p": [Fraction(0), Fraction(0)],
                  "verdict": Verdict.NOT_RATIONAL})
    return plans


_PLANNERS: dict[Suite, Callable[[random.Random], list[dict[str, object]]]] = {
    Suite.FEQ: _plan_feq,
    Suite.REMARK2: _plan_remark2,
    Suite.BRIDGE: _plan_bridge,
    Suite.TRANSFORMS: _plan_transforms,
    Suite.THEOREM1: _plan_theorem1,
    Suite.LEMMA3_TABLE: _plan_lemma3_table,
}


def plan_suite(suite: Suite, seed: int) -> list[VerificationItem]:
    """Ordered items of a suite; the same seed always yields the same items."""
    suite = Suite(suite)
    rng = random.Random(f"{suite.value}:{seed}")
    plans = _PLANNERS[suite](rng)
    return [
        VerificationItem(index=i, suite=suite, item_id=plan["id"], payload=plan)
        for i, plan in enumerate(plans)
    ]


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def _fmt(value: mpf) -> str:
    return mp.nstr(value, 5)


def _outcome(item: VerificationItem, passed: bool, residual: str = "-", bound: str = "-", note: str = "",
             expected_note: bool = False) -> VerificationOutcome:
    return VerificationOutcome(item.index, item.item_id, passed, residual, bound, note, expected_note)


def _ball_outcome(item: VerificationItem, residuals: Sequence[BigComplex], ctx: PrecisionContext,
                  note: str = "") -> VerificationOutcome:
    """Passes when every residual ball contains 0 and its radius is below 2^-(P/2)."""
    with ctx.workprec():
        worst = max(abs(ball.mid) for ball in residuals)
        bound = max(ball.err for ball in residuals)
    passed = all(ball.contains_zero() for ball in residuals) and bound <= ctx.tolerance()
    return _outcome(item, passed, _fmt(worst), _fmt(bound), note)


def _check_feq(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    spec = item.payload["spec"]
    return _ball_outcome(item, [feq_residual(spec, item.payload["z"], ctx)], ctx, spec.label())


def _check_remark2(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    case_id = item.payload["case_id"]
    residuals = [remark2_residual(case_id, z, ctx) for z in item.payload["points"]]
    case = remark2_cases()[case_id]
    return _ball_outcome(item, residuals, ctx, f"= {case.rhs_name} at {len(residuals)} points")


def _check_bridge(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    residual = verify_bridge(item.payload["params"], item.payload["spec"], 0, ctx, h0=1)
    return _ball_outcome(item, [residual], ctx, "h0 = 1")


def _check_transforms(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    p = item.payload
    params, k, r, ell, h = p["params"], p["k"], p["r"], p["ell"], p["h"]
    for family in (NumberFamily.R, NumberFamily.S):
        if not h_exact_identity_holds(params, family, k, r, ell, h):
            return _outcome(item, False, note=f"h-exact identity fails for {params.label_for(family)}")
    exact = transform_consts(params, k, r, ell, h, ctx)
    independent = transform_consts(params, k, r, ell, None, ctx)
    agree = (exact.E, exact.e, exact.F, exact.f) == (independent.E, independent.e, independent.F, independent.f)
    if agree:
        return _outcome(item, True, "0", "0", "exact")
    if h == 0:
        note = f"h = 0: the h-independent sign delta^{k * r} differs from delta^{k}"
        return _outcome(item, True, "-", "-", note, expected_note=True)
    return _outcome(item, False, note="h-independent constants differ from the h-exact ones")


def _f02_source(ctx: PrecisionContext) -> BigComplex:
    spec = NumberSeriesSpec(NumberFamily.R, 1, 2, PeriodicSeq((Fraction(1),)), ell=0)
    return eval_number_series(fibonacci(), spec, ctx).value


def _check_minpoly(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    value = _f02_source(ctx)
    polynomial = minimal_polynomial(_f02_source, 4, MINPOLY_HEIGHT, ctx)
    if polynomial is None:
        return _outcome(item, False, note="no minimal polynomial up to degree 4")
    closed_form = embed(QuadExt(Fraction(7, 2), Fraction(-1, 2), 5), ctx)
    with ctx.workprec(16):
        residual = BigComplex.zero()
        for power, c in enumerate(polynomial.coefficients):
            residual = residual + value**power * c
        matches = value.overlaps(closed_form)
    passed = polynomial.coefficients == (11, -7, 1) and matches and residual.contains_zero()
    return _outcome(item, passed, _fmt(abs(residual.mid)), _fmt(residual.err), f"{polynomial}; value (7 - sqrt 5)/2")


def _check_thm1_classify(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    b = PeriodicSeq(tuple(Fraction(x) for x in item.payload["b"]))
    report = classify_thm2(fibonacci_lucas(), b, PeriodicSeq((Fraction(1),)), 64, ctx)
    expected = item.payload["expected"]
    passed = report.case_ids() == expected
    if expected == ["1"]:
        passed = passed and report.removals == ("F_{0,2}",)
    removals = ", ".join(report.removals) or "generic"
    return _outcome(item, passed, note=f"{report.theorem.value}: {removals}")


def _check_smoke_f02(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    report = independence_smoke({"F02": _f02_source}, 2, MINPOLY_HEIGHT, ctx)
    passed = report.found and report.coefficients == (11, -7, 1)
    return _outcome(item, passed, _fmt(report.residual), note=f"relation {report.coefficients}")


def _relation_free(item: VerificationItem, sources: dict[str, Callable[[PrecisionContext], BigComplex]],
                   ctx: PrecisionContext) -> VerificationOutcome:
    report = independence_smoke(sources, 2, SMOKE_HEIGHT, ctx)
    passed = not report.found and report.certified_height == SMOKE_HEIGHT
    note = f"no relation up to height {report.certified_height} among {len(report.basis_names)} monomials"
    return _outcome(item, passed, _fmt(report.residual), note=note)


def _gamma_source(mu: int, r: int) -> Callable[[PrecisionContext], BigComplex]:
    spec = SeriesSpec(SeriesKind.GAMMA, r, PeriodicSeq((Fraction(1),)), mu=mu)
    return lambda c: eval_series(spec, Fraction(1, 2), c).value


def _number_source(params: LucasPairParams, spec: NumberSeriesSpec) -> Callable[[PrecisionContext], BigComplex]:
    return lambda c: eval_number_series(params, spec, c).value


def _check_smoke_gamma(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    sources = {"G12": _gamma_source(1, 2), "G13": _gamma_source(1, 3), "G23": _gamma_source(2, 3)}
    return _relation_free(item, sources, ctx)


def _check_smoke_numbers(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    params = fibonacci_lucas()
    b = PeriodicSeq((Fraction(1), Fraction(2)))
    sources = {
        "q12": _number_source(params, NumberSeriesSpec(NumberFamily.Q, 1, 2, b, mu=1)),
        "F12": _number_source(params, NumberSeriesSpec(NumberFamily.R, 1, 2, b, ell=1)),
        "L02": _number_source(params, NumberSeriesSpec(NumberFamily.S, 1, 2, b, ell=0)),
    }
    return _relation_free(item, sources, ctx)


def _check_remark6(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    p = item.payload
    params = remark6_params()
    k, r, ell = p["k"], p["r"], p["ell"]
    residual = remark6_residual(params, k, r, ell, ctx)
    unit = PeriodicSeq((Fraction(1),))
    r_source = _number_source(params, NumberSeriesSpec(NumberFamily.R, k, r, unit, ell=ell))
    s_source = _number_source(params, NumberSeriesSpec(NumberFamily.S, k, r, unit, ell=ell + 1))
    sources = {
        "R": lambda c: _scaled(r_source(c), params.g2, c),
        "S": lambda c: _scaled(s_source(c), params.h2 * params.gamma2, c),
    }
    report = independence_smoke(sources, 1, SMOKE_HEIGHT, ctx)
    outcome = _ball_outcome(item, [residual], ctx, f"relation {report.coefficients}")
    if report.coefficients != (0, 1, -1):
        return _outcome(item, False, outcome.residual, outcome.bound, f"expected relation (0, 1, -1), got {report.coefficients}")
    return outcome


def _scaled(ball: BigComplex, weight: AlgebraicInput, ctx: PrecisionContext) -> BigComplex:
    with ctx.workprec(16):
        return ball * to_ball(weight)


def _check_lemma3(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    row = item.payload["row"]
    report = classify_lemma3(row["r"], row["a"], row["alpha0"], row["beta0"], row["p"], row["u0"], row["v0"], ctx)
    if report.verdict is not row["verdict"]:
        return _outcome(item, False, note=f"verdict {report.verdict.value}, expected {row['verdict'].value}")
    if row["case"] is not None and row["case"] not in report.case_ids():
        return _outcome(item, False, note=f"cases {report.case_ids()}, expected {row['case']}")
    if not row["refute"]:
        return _outcome(item, True, note="; ".join(report.notes))

    def combined(z: mpc) -> BigComplex:
        point = BigComplex.from_mid(z, mpf(0))
        return lemma3_function(row["r"], row["a"], row["alpha0"], row["beta0"], row["p"], row["u0"], row["v0"], point, ctx)

    refuted, gap = refute_rationality(combined, REFUTE_DEGREE, item.payload["samples"], item.payload["tests"], ctx)
    if report.verdict is Verdict.RATIONAL:
        case_id = int(row["case"])
        residuals = [remark2_residual(case_id, z, ctx) for z in item.payload["points"]]
        outcome = _ball_outcome(item, residuals, ctx, f"case {case_id}; interpolation gap {gap:.3e}")
        if refuted:
            return _outcome(item, False, outcome.residual, outcome.bound, f"rational case refuted (gap {gap:.3e})")
        return outcome
    return _outcome(item, refuted, f"{gap:.3e}", "1e-3", "interpolate-and-refute gap")


def _check_remark3(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    p = item.payload
    report = classify_remark3(p["r"], Fraction(1), Fraction(1), p["p"], Fraction(1), ctx)
    passed = report.verdict is p["verdict"]
    return _outcome(item, passed, note=", ".join(report.removals) or report.verdict.value)


_CHECKS: dict[str, Check] = {
    "feq": _check_feq,
    "remark2": _check_remark2,
    "bridge": _check_bridge,
    "transforms": _check_transforms,
    "minpoly": _check_minpoly,
    "thm1-classify": _check_thm1_classify,
    "smoke-F02": _check_smoke_f02,
    "smoke-gamma": _check_smoke_gamma,
    "smoke-numbers": _check_smoke_numbers,
    "remark6": _check_remark6,
    "lemma3": _check_lemma3,
    "remark3": _check_remark3,
}


def run_item(item: VerificationItem, ctx: PrecisionContext) -> VerificationOutcome:
    """Run one item; library errors become a failed outcome naming the error."""
    check = _CHECKS[item.payload["check"]]
    try:
        return check(item, ctx)
    except MahlerError as error:
        logger.warning("[Verify] %s raised %s: %s", item.item_id, type(error).__name__, error)
        return _outcome(item, False, note=f"{type(error).__name__}: {error}")
