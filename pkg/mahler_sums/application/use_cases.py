"""Use cases behind the command line, one per command.

Each use case runs the computation and assembles a RunReport whose result
holds only strings, numbers, lists and dicts, so every writer can
serialize it deterministically.
"""

from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from mpmath import mp

from mahler_sums import __version__
from mahler_sums.application.classify import (
    check_lemma2_hypotheses,
    classify_lemma3,
    classify_remark3,
    classify_thm2,
    classify_thm3,
)
from mahler_sums.application.lattice import (
    ValueSource,
    find_integer_relation,
    independence_smoke,
    minimal_polynomial,
)
from mahler_sums.application.lucaspair import (
    default_bridge_start,
    eval_number_series,
    induced_poles,
    tabulate,
    verify_bridge,
)
from mahler_sums.application.radix import decompose, group_by_base
from mahler_sums.application.series import eval_series, feq_residual
from mahler_sums.application.verification_workflow import create_verification_workflow
from mahler_sums.application.verification_workflow.suites import plan_suite
from mahler_sums.domain.entities import (
    CaseReport,
    ConstantSpec,
    EvalResult,
    LucasPairParams,
    NumberFamily,
    NumberSeriesSpec,
    PeriodicSeq,
    RelationReport,
    RunConfig,
    RunReport,
    SeriesSpec,
    Suite,
    TheoremId,
)
from mahler_sums.domain.errors import InvalidParameters
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    PrecisionContext,
    embed,
    format_value,
)
from mahler_sums.domain.repositories import IInputRepository
from mahler_sums.logger import logger


# Type for progress callback: (suite_name, current, total)
ProgressCallback = Callable[[str, int, int], None]


def _digits(ctx: PrecisionContext) -> int:
    """Decimal digits covered by the certified bits."""
    return max(15, ctx.certified_bits * 30103 // 100000)


def ball_to_dict(ball: BigComplex, ctx: PrecisionContext) -> dict[str, object]:
    return {"value": ball.to_string(_digits(ctx)), "err_exponent": ball.err_exponent()}


def eval_result_to_dict(result: EvalResult, ctx: PrecisionContext) -> dict[str, object]:
    data = ball_to_dict(result.value, ctx)
    data["terms"] = result.terms_used
    data["truncation_bound"] = mp.nstr(result.truncation_bound, 5)
    data["skipped_terms"] = list(result.skipped_terms)
    return data


def case_report_to_dict(report: CaseReport) -> dict[str, object]:
    return {
        "theorem": report.theorem.value,
        "generic": report.generic,
        "cases": [
            {"case": case.case_id, "witnesses": dict(case.witnesses), "removals": list(case.removals)}
            for case in report.cases
        ],
        "removals": list(report.removals),
        "notes": list(report.notes),
        "verdict": report.verdict.value if report.verdict else None,
    }


def relation_report_to_dict(report: RelationReport) -> dict[str, object]:
    return {
        "found": report.found,
        "coefficients": list(report.coefficients) if report.coefficients else None,
        "basis": list(report.basis_names),
        "residual": mp.nstr(report.residual, 5),
        "certified_height": report.certified_height,
        "height_bound": report.height_bound,
        "working_bits": report.working_bits,
        "verified_bits": report.verified_bits,
        "other_relations": [list(c) for c in report.other_relations],
    }


def constant_source(constant: ConstantSpec) -> ValueSource:
    """A callable evaluating the constant at any precision."""
    if constant.value is not None:
        value = constant.value
        return lambda ctx: embed(value, ctx)
    if constant.series is not None:
        series, z = constant.series, constant.z
        return lambda ctx: eval_series(series, z, ctx).value
    params, number = constant.params, constant.number
    return lambda ctx: eval_number_series(params, number, ctx).value


def _report(config: RunConfig, result: dict[str, object], rows: Optional[list[dict[str, object]]] = None) -> RunReport:
    return RunReport(config=config, version=__version__, result=result, rows=rows or [])


class EvalSeriesUseCase:
    """Evaluate Gamma, Phi or Lambda at a point."""

    def __init__(self, input_repository: IInputRepository) -> None:
        self.input_repo = input_repository

    def execute(
        self,
        config: RunConfig,
        ctx: PrecisionContext,
        z: AlgebraicInput,
        spec: Optional[SeriesSpec] = None,
        spec_path: Optional[Path] = None,
        check_feq: bool = False,
    ) -> RunReport:
        """
        Execute the evaluation.

        Args:
            config: Run configuration recorded in the report
            ctx: Precision context
            z: Evaluation point, |z| < 1
            spec: Series specification (ignored when spec_path is given)
            spec_path: JSON file holding the series specification
            check_feq: Also report the functional-equation residual at z

        Returns:
            RunReport with the certified value
        """
        if spec_path is not None:
            spec = self.input_repo.load_series_spec(spec_path)
        if spec is None:
            raise InvalidParameters("eval needs a series specification")
        logger.info("=== eval %s at z = %s, P = %d ===", spec.label(), z, ctx.working_bits)
        result = eval_series(spec, z, ctx)
        data: dict[str, object] = {"label": spec.label(), "z": format_value(z)}
        data.update(eval_result_to_dict(result, ctx))
        if check_feq:
            data["feq_residual"] = ball_to_dict(feq_residual(spec, z, ctx), ctx)
        return _report(config, data)


class EvalNumberUseCase:
    """Evaluate a reciprocal sum Q, R or S of a Lucas pair."""

    def execute(
        self,
        config: RunConfig,
        ctx: PrecisionContext,
        params: LucasPairParams,
        spec: NumberSeriesSpec,
        bridge: bool = False,
    ) -> RunReport:
        logger.info("=== eval-number %s (%s), P = %d ===", spec.label(params), params.name, ctx.working_bits)
        result = eval_number_series(params, spec, ctx)
        data: dict[str, object] = {"label": spec.label(params), "params": params.name}
        data.update(eval_result_to_dict(result, ctx))
        if bridge:
            h0 = default_bridge_start(params, spec, ctx)
            residual = verify_bridge(params, spec, 0, ctx, h0=h0)
            data["bridge"] = {"h0": h0, "residual": ball_to_dict(residual, ctx), "holds": residual.contains_zero()}
        return _report(config, data)


class ClassifyUseCase:
    """Case tables: numbers of a Lucas pair, pole functions, and g0 rationality."""

    def __init__(self, input_repository: IInputRepository) -> None:
        self.input_repo = input_repository

    def execute(
        self,
        config: RunConfig,
        ctx: PrecisionContext,
        theorem: TheoremId,
        params: Optional[LucasPairParams] = None,
        b: Optional[PeriodicSeq] = None,
        c: Optional[PeriodicSeq] = None,
        search_bound: int = 64,
        k: int = 1,
        r: int = 2,
        window: int = 2,
        input_path: Optional[Path] = None,
    ) -> RunReport:
        """
        Execute one classifier.

        T1/T2 classify the numbers of params; T3 uses explicit pole families
        from input_path or the poles induced by params at (k, r); L3 and R3
        read the parameters of g0 from input_path.
        """
        theorem = TheoremId(theorem)
        logger.info("=== classify %s ===", theorem.value)
        # unset coefficient sequences default to the constant sequence 1
        b = b or PeriodicSeq((Fraction(1),))
        c = c or PeriodicSeq((Fraction(1),))
        data: dict[str, object] = {}
        if theorem in (TheoremId.T1, TheoremId.T2):
            if params is None:
                raise InvalidParameters("classifying numbers needs a Lucas pair: give --preset or --params")
            report = classify_thm2(params, b, c, search_bound, ctx)
        elif theorem is TheoremId.T3:
            if input_path is not None:
                families = self.input_repo.load_pole_families(input_path)
                alphas, betas, mode = families.alphas, families.betas, families.mode
            elif params is not None:
                poles = induced_poles(params, k, r, window, ctx)
                alphas, betas, mode = poles.alphas, poles.betas, poles.mode
                data["induced"] = {
                    "mode": poles.mode.value,
                    "l0": poles.ell0,
                    "l1": poles.ell1,
                    "Delta": format_value(poles.Delta) if poles.Delta is not None else None,
                }
            else:
                raise InvalidParameters("classifying functions needs pole families or parameters")
            diagnostics = check_lemma2_hypotheses(alphas, betas, mode, ctx)
            data["hypotheses"] = {"mode": diagnostics.mode.value, "violations": list(diagnostics.violations)}
            report = classify_thm3(alphas, betas, b, c, mode, ctx)
        else:
            if input_path is None:
                raise InvalidParameters(f"{theorem.value} reads its parameters from --input")
            g0 = self.input_repo.load_lemma3_input(input_path)
            if theorem is TheoremId.L3:
                if g0.beta0 is None:
                    raise InvalidParameters("L3 needs beta0")
                report = classify_lemma3(g0.r, g0.a, g0.alpha0, g0.beta0, g0.p_coeffs, g0.u0, g0.v0, ctx)
            else:
                report = classify_remark3(g0.r, g0.a, g0.alpha0, g0.p_coeffs, g0.u0, ctx)
        data.update(case_report_to_dict(report))
        return _report(config, data)


class RelationsUseCase:
    """Integer relations among named constants (or their monomials)."""

    def __init__(self, input_repository: IInputRepository) -> None:
        self.input_repo = input_repository

    def execute(
        self,
        config: RunConfig,
        ctx: PrecisionContext,
        values_path: Path,
        height_bound: int,
        monomial_degree: int = 0,
    ) -> RunReport:
        """
        Search for a relation.

        monomial_degree = 0 searches sum c_i x_i = 0 among the constants
        themselves; a positive degree searches among all monomials up to it.
        """
        constants = self.input_repo.load_constants(values_path)
        sources = {constant.name: constant_source(constant) for constant in constants}
        logger.info("=== relations among %s (degree %d, height %d) ===", list(sources), monomial_degree, height_bound)
        if monomial_degree > 0:
            report = independence_smoke(sources, monomial_degree, height_bound, ctx)
        else:
            report = find_integer_relation(list(sources.values()), height_bound, ctx, names=list(sources))
        return _report(config, relation_report_to_dict(report))


class MinpolyUseCase:
    """Minimal polynomial of one constant."""

    def execute(
        self,
        config: RunConfig,
        ctx: PrecisionContext,
        constant: ConstantSpec,
        max_degree: int,
        height_bound: int,
    ) -> RunReport:
        logger.info("=== minpoly %s (degree <= %d, height %d) ===", constant.name, max_degree, height_bound)
        source = constant_source(constant)
        value = source(ctx)
        polynomial = minimal_polynomial(source, max_degree, height_bound, ctx)
        data: dict[str, object] = {"name": constant.name, "x": ball_to_dict(value, ctx)}
        if polynomial is None:
            data.update({"found": False, "polynomial": None, "coefficients": None})
        else:
            data.update({
                "found": True,
                "polynomial": str(polynomial),
                "coefficients": list(polynomial.coefficients),
                "degree": polynomial.degree,
            })
        return _report(config, data)


class RadixUseCase:
    """r = d^j decompositions and grouping by base."""

    def execute(self, config: RunConfig, radices: Sequence[int]) -> RunReport:
        if not radices:
            raise InvalidParameters("radix needs at least one integer")
        if len(radices) == 1:
            decomposition = decompose(radices[0])
            return _report(config, {"d": decomposition.d, "j": decomposition.j})
        rows = []
        for r in radices:
            decomposition = decompose(r)
            rows.append({"r": r, "d": decomposition.d, "j": decomposition.j})
        groups = {str(d): members for d, members in group_by_base(list(radices)).items()}
        return _report(config, {"groups": groups}, rows)


class TabulateUseCase:
    """Values of a reciprocal-sum family over a grid of (k, r, l)."""

    def execute(
        self,
        config: RunConfig,
        ctx: PrecisionContext,
        params: LucasPairParams,
        family: NumberFamily,
        ks: Sequence[int],
        rs: Sequence[int],
        ells: Sequence[int],
        coeffs: PeriodicSeq,
    ) -> RunReport:
        logger.info("=== tabulate %s (%s): %d x %d x %d ===", family.value, params.name, len(ks), len(rs), len(ells))
        rows = tabulate(params, family, ks, rs, ells, coeffs, ctx)
        return _report(config, {"params": params.name, "family": family.value, "count": len(rows)}, rows)


class VerifyUseCase:
    """Run a bundled verification suite through the Verification workflow."""

    async def execute(
        self,
        config: RunConfig,
        ctx: PrecisionContext,
        suite: Suite,
        seed: int,
        progress_callback: Optional[ProgressCallback] = None,
    ) -> RunReport:
        items = plan_suite(suite, seed)
        logger.info("=== verify %s: %d items, seed=%d, P=%d ===", suite.value, len(items), seed, ctx.working_bits)

        workflow = create_verification_workflow()
        summary = await workflow.execute(
            suite=suite,
            items=items,
            ctx=ctx,
            seed=seed,
            progress_callback=progress_callback,
        )

        rows = [
            {
                "index": outcome.index,
                "item": outcome.item_id,
                "passed": outcome.passed,
                "residual": outcome.residual,
                "bound": outcome.bound,
                "note": outcome.note,
                "expected_note": outcome.expected_note,
            }
            for outcome in summary.outcomes
        ]
        passed = sum(1 for outcome in summary.outcomes if outcome.passed)
        data: dict[str, object] = {
            "suite": suite.value,
            "passed": summary.passed,
            "passed_items": passed,
            "total_items": len(summary.outcomes),
            "expected_notes": [o.item_id for o in summary.outcomes if o.expected_note],
            "failures": [o.item_id for o in summary.failures],
        }
        logger.info("=== verify %s complete: %d/%d ===", suite.value, passed, len(summary.outcomes))
        return _report(config, data, rows)
