"""Pydantic schemas for every JSON input.

Values are written either as a bare integer, a rational string ("3/4",
"-0.25") or a typed object discriminated by "type":

    {"type": "rational", "value": "1/3"}
    {"type": "quad", "a": "1/2", "b": "1/2", "D": 5}
    {"type": "complex", "re": "0.3", "im": "-0.4"}

Each model converts itself to a domain object with to_domain(); domain
validation errors (InvalidParameters and friends) surface unchanged.
"""

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from mahler_sums.domain.entities import (
    ConstantSpec,
    GeometricCoefficients,
    Lemma3Input,
    LemmaMode,
    LucasPairParams,
    NumberFamily,
    NumberSeriesSpec,
    PeriodicSeq,
    PoleFamilies,
    SeriesKind,
    SeriesSpec,
)
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    ComplexLiteral,
    QuadExt,
    as_fraction,
)
from mahler_sums.domain.presets import get_preset


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RationalModel(_Strict):
    """Exact rational number."""
    type: Literal["rational"]
    value: Union[int, str] = Field(description="Integer or rational string such as '3/4'")

    def to_domain(self) -> AlgebraicInput:
        return as_fraction(self.value)


class QuadModel(_Strict):
    """Exact element a + b*sqrt(D) of a quadratic field."""
    type: Literal["quad"]
    a: Union[int, str] = 0
    b: Union[int, str] = 0
    D: int = Field(description="Squarefree discriminant, not 0 or 1")

    def to_domain(self) -> AlgebraicInput:
        return QuadExt(self.a, self.b, self.D)


class ComplexModel(_Strict):
    """Numeric complex literal; never used in exact arithmetic."""
    type: Literal["complex"]
    re: Union[int, str]
    im: Union[int, str] = 0

    def to_domain(self) -> AlgebraicInput:
        return ComplexLiteral(as_fraction(self.re), as_fraction(self.im))


TypedValue = Annotated[Union[RationalModel, QuadModel, ComplexModel], Field(discriminator="type")]
ValueInput = Union[int, str, TypedValue]


def value_to_domain(raw: ValueInput) -> AlgebraicInput:
    """Convert a validated value (shorthand or typed) to an AlgebraicInput."""
    if isinstance(raw, (int, str)):
        return as_fraction(raw)
    return raw.to_domain()


class ValueDocument(_Strict):
    """Wrapper used to validate a single inline value."""
    value: ValueInput


class SequenceDocument(_Strict):
    """Wrapper used to validate an inline coefficient list."""
    values: list[ValueInput] = Field(min_length=1)

    def to_domain(self) -> PeriodicSeq:
        return PeriodicSeq(tuple(value_to_domain(v) for v in self.values))


# ---------------------------------------------------------------------------
# Lucas pairs and series
# ---------------------------------------------------------------------------


class LucasPairModel(_Strict):
    """(gamma1, gamma2, g1, g2, h1, h2) with optional display labels."""
    gamma1: ValueInput
    gamma2: ValueInput
    g1: ValueInput
    g2: ValueInput
    h1: ValueInput
    h2: ValueInput
    name: str = "custom"
    r_label: str = "R"
    s_label: str = "S"
    q_label: str = "Q"

    def to_domain(self) -> LucasPairParams:
        return LucasPairParams(
            gamma1=value_to_domain(self.gamma1),
            gamma2=value_to_domain(self.gamma2),
            g1=value_to_domain(self.g1),
            g2=value_to_domain(self.g2),
            h1=value_to_domain(self.h1),
            h2=value_to_domain(self.h2),
            name=self.name,
            r_label=self.r_label,
            s_label=self.s_label,
            q_label=self.q_label,
        )


class GeometricModel(_Strict):
    """Coefficients a^h."""
    type: Literal["geometric"]
    a: ValueInput

    def to_domain(self) -> GeometricCoefficients:
        return GeometricCoefficients(value_to_domain(self.a))


class PeriodicModel(_Strict):
    """Periodic coefficients given by one period."""
    type: Literal["periodic"]
    values: list[ValueInput] = Field(min_length=1)

    def to_domain(self) -> PeriodicSeq:
        return PeriodicSeq(tuple(value_to_domain(v) for v in self.values))


CoefficientsModel = Annotated[Union[GeometricModel, PeriodicModel], Field(discriminator="type")]


class SeriesSpecModel(_Strict):
    """One of the series Gamma, Phi, Lambda."""
    kind: SeriesKind
    r: int = Field(ge=2)
    coeffs: CoefficientsModel
    mu: Optional[int] = None
    pole: Optional[ValueInput] = None
    start_index: int = Field(default=0, ge=0)

    def to_domain(self) -> SeriesSpec:
        return SeriesSpec(
            kind=self.kind,
            r=self.r,
            coeffs=self.coeffs.to_domain(),
            mu=self.mu,
            pole_param=value_to_domain(self.pole) if self.pole is not None else None,
            start_index=self.start_index,
        )


class NumberSeriesModel(_Strict):
    """One reciprocal sum Q, R or S."""
    family: NumberFamily
    k: int = Field(ge=1)
    r: int = Field(ge=2)
    coeffs: list[ValueInput] = Field(min_length=1)
    ell: int = 0
    mu: Optional[int] = None
    start_index: int = Field(default=0, ge=0)

    def to_domain(self) -> NumberSeriesSpec:
        return NumberSeriesSpec(
            family=self.family,
            k=self.k,
            r=self.r,
            coeffs=PeriodicSeq(tuple(value_to_domain(v) for v in self.coeffs)),
            ell=self.ell,
            mu=self.mu,
            start_index=self.start_index,
        )


# ---------------------------------------------------------------------------
# Named constants
# ---------------------------------------------------------------------------


class SeriesConstantModel(_Strict):
    """A series evaluated at a point."""
    type: Literal["series"]
    spec: SeriesSpecModel
    z: ValueInput


class NumberConstantModel(_Strict):
    """A reciprocal sum of a preset or explicit Lucas pair."""
    type: Literal["number"]
    preset: Optional[str] = None
    params: Optional[LucasPairModel] = None
    series: NumberSeriesModel

    @model_validator(mode="after")
    def _one_pair(self) -> "NumberConstantModel":
        if (self.preset is None) == (self.params is None):
            raise ValueError("give exactly one of preset or params")
        return self

    def lucas_pair(self) -> LucasPairParams:
        if self.preset is not None:
            return get_preset(self.preset)
        return self.params.to_domain()


ConstantInput = Union[
    int,
    str,
    Annotated[
        Union[RationalModel, QuadModel, ComplexModel, SeriesConstantModel, NumberConstantModel],
        Field(discriminator="type"),
    ],
]


class ConstantsDocument(_Strict):
    """{"values": {name: constant, ...}}; the order of names is kept."""
    values: dict[str, ConstantInput] = Field(min_length=1)

    def to_domain(self) -> list[ConstantSpec]:
        constants = []
        for name, raw in self.values.items():
            if isinstance(raw, SeriesConstantModel):
                constants.append(ConstantSpec(name, series=raw.spec.to_domain(), z=value_to_domain(raw.z)))
            elif isinstance(raw, NumberConstantModel):
                constants.append(ConstantSpec(name, params=raw.lucas_pair(), number=raw.series.to_domain()))
            else:
                constants.append(ConstantSpec(name, value=value_to_domain(raw)))
        return constants


# ---------------------------------------------------------------------------
# Classifier inputs
# ---------------------------------------------------------------------------


class Lemma3Model(_Strict):
    """Parameters of g0 = sum p_mu Gamma_mu + u0 Phi_0 (+ v0 Lambda_0)."""
    r: int = Field(ge=2)
    a: ValueInput
    alpha0: ValueInput
    beta0: Optional[ValueInput] = None
    p: list[ValueInput]
    u0: ValueInput
    v0: ValueInput = 0

    def to_domain(self) -> Lemma3Input:
        return Lemma3Input(
            r=self.r,
            a=value_to_domain(self.a),
            alpha0=value_to_domain(self.alpha0),
            beta0=value_to_domain(self.beta0) if self.beta0 is not None else None,
            p_coeffs=tuple(value_to_domain(v) for v in self.p),
            u0=value_to_domain(self.u0),
            v0=value_to_domain(self.v0),
        )


class PoleFamiliesModel(_Strict):
    """Explicit alpha_l and beta_l keyed by l."""
    alphas: dict[int, ValueInput]
    betas: dict[int, ValueInput]
    mode: LemmaMode = LemmaMode.LEMMA2

    def to_domain(self) -> PoleFamilies:
        return PoleFamilies(
            alphas={ell: value_to_domain(v) for ell, v in self.alphas.items()},
            betas={ell: value_to_domain(v) for ell, v in self.betas.items()},
            mode=self.mode,
        )
