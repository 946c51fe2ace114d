"""Domain entities for Mahler-type series, reciprocal sums and their case tables."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from mpmath import mpf

from mahler_sums.domain.errors import InvalidParameters
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    ComplexLiteral,
    as_algebraic,
)


def is_zero_input(value: AlgebraicInput | BigComplex) -> bool:
    """Exact zero test for any AlgebraicInput variant or a ball."""
    if isinstance(value, BigComplex):
        return value.is_exact_zero()
    if isinstance(value, ComplexLiteral):
        return value.re == 0 and value.im == 0
    return value == 0


class SeriesKind(str, Enum):
    """Shape of the series term q(w) evaluated at w = z^(r^h)."""

    GAMMA = "gamma"  # w^mu
    PHI = "phi"  # w / (w^2 - alpha)
    LAMBDA = "lambda"  # w / (w^2 - beta)


class NumberFamily(str, Enum):
    """Reciprocal-sum families built from a Lucas pair."""

    Q = "Q"  # sum a_h * gamma1^(-mu*k*r^h)
    R = "R"  # sum b_h / R_{k*r^h + l}
    S = "S"  # sum c_h / S_{k*r^h + l}


class LemmaMode(str, Enum):
    """Which modulus hypotheses the pole parameters satisfy."""

    LEMMA2 = "lemma2"  # beta_l = delta_l * alpha_l with |delta_l| = 1
    REMARK1 = "remark1"  # |alpha_l1| != |beta_l2| for all indices


class TheoremId(str, Enum):
    """Case table a CaseReport was produced from."""

    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    L3 = "L3"
    R3 = "R3"


class Verdict(str, Enum):
    """Rationality verdict for the combined function of a case table."""

    RATIONAL = "rational"
    NOT_RATIONAL = "not-rational"
    UNDETERMINED = "undetermined-by-paper"


class OutputFormat(str, Enum):
    """Report output format."""

    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class Suite(str, Enum):
    """Bundled verification suites."""

    FEQ = "feq"
    REMARK2 = "remark2"
    BRIDGE = "bridge"
    TRANSFORMS = "transforms"
    THEOREM1 = "theorem1"
    LEMMA3_TABLE = "lemma3-table"


@dataclass(frozen=True)
class RadixDecomposition:
    """r = d^j with d not a perfect power."""

    d: int
    j: int

    def __str__(self) -> str:
        return f"{self.d}^{self.j}"


@dataclass(frozen=True)
class PeriodicSeq:
    """Periodic coefficient sequence; term(h) = values[h mod period]."""

    values: tuple[AlgebraicInput, ...]

    def __post_init__(self) -> None:
        values = tuple(as_algebraic(v) for v in self.values)
        if not values:
            raise InvalidParameters("a periodic sequence needs at least one value")
        object.__setattr__(self, "values", values)

    @property
    def period(self) -> int:
        return len(self.values)

    def term(self, h: int) -> AlgebraicInput:
        if h < 0:
            raise InvalidParameters(f"sequence index must be >= 0, got {h}")
        return self.values[h % self.period]

    def is_zero(self) -> bool:
        return all(is_zero_input(v) for v in self.values)

    def is_constant(self) -> bool:
        first = self.values[0]
        return all(v == first for v in self.values)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class GeometricCoefficients:
    """Coefficients a^h (the single-parameter series gamma_mu, phi_l, lambda_l)."""

    a: AlgebraicInput

    def __post_init__(self) -> None:
        a = as_algebraic(self.a)
        if is_zero_input(a):
            raise InvalidParameters("geometric ratio a must be non-zero")
        object.__setattr__(self, "a", a)

    def __str__(self) -> str:
        return f"a={self.a}"


Coefficients = Union[GeometricCoefficients, PeriodicSeq]


@dataclass(frozen=True)
class SeriesSpec:
    """sum_{h >= start_index} coeff_h * q(z^(r^h)) for one of the three term shapes."""

    kind: SeriesKind
    r: int
    coeffs: Coefficients
    mu: Optional[int] = None
    pole_param: Optional[AlgebraicInput | BigComplex] = None
    start_index: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", SeriesKind(self.kind))
        if self.r < 2:
            raise InvalidParameters(f"r must be >= 2, got {self.r}")
        if self.start_index < 0:
            raise InvalidParameters("start index must be >= 0")
        if isinstance(self.coeffs, PeriodicSeq) and self.coeffs.is_zero():
            raise InvalidParameters("periodic coefficients must not vanish identically")
        if self.kind is SeriesKind.GAMMA:
            if self.mu is None or not 1 <= self.mu <= self.r - 1:
                raise InvalidParameters(f"gamma needs 1 <= mu <= r-1, got mu={self.mu}, r={self.r}")
        else:
            if self.pole_param is None:
                raise InvalidParameters(f"{self.kind.value} needs a pole parameter")
            pole = self.pole_param if isinstance(self.pole_param, BigComplex) else as_algebraic(self.pole_param)
            if is_zero_input(pole):
                raise InvalidParameters("pole parameter must be non-zero")
            object.__setattr__(self, "pole_param", pole)

    def label(self) -> str:
        head = {SeriesKind.GAMMA: "Gamma", SeriesKind.PHI: "Phi", SeriesKind.LAMBDA: "Lambda"}[self.kind]
        param = f"mu={self.mu}" if self.kind is SeriesKind.GAMMA else f"pole={self.pole_param}"
        return f"{head}[r={self.r}, {param}, {self.coeffs}, h0={self.start_index}]"


@dataclass(frozen=True)
class EvalResult:
    """A certified series value."""

    value: BigComplex
    terms_used: int
    truncation_bound: mpf
    skipped_terms: tuple[int, ...] = ()


@dataclass(frozen=True)
class LucasPairParams:
    """(gamma1, gamma2, g1, g2, h1, h2) defining R_n and S_n.

    R_n = g1*gamma1^n + g2*gamma2^n and S_n = h1*gamma1^n + h2*gamma2^n.
    The labels are only used to name series in reports.
    """

    gamma1: AlgebraicInput
    gamma2: AlgebraicInput
    g1: AlgebraicInput
    g2: AlgebraicInput
    h1: AlgebraicInput
    h2: AlgebraicInput
    name: str = "custom"
    r_label: str = "R"
    s_label: str = "S"
    q_label: str = "Q"

    def __post_init__(self) -> None:
        for attr in ("gamma1", "gamma2", "g1", "g2", "h1", "h2"):
            value = as_algebraic(getattr(self, attr))
            if is_zero_input(value):
                raise InvalidParameters(f"{attr} must be non-zero")
            object.__setattr__(self, attr, value)

    def values(self) -> tuple[AlgebraicInput, ...]:
        return (self.gamma1, self.gamma2, self.g1, self.g2, self.h1, self.h2)

    def label_for(self, family: NumberFamily) -> str:
        return {NumberFamily.Q: self.q_label, NumberFamily.R: self.r_label, NumberFamily.S: self.s_label}[family]


@dataclass(frozen=True)
class NumberSeriesSpec:
    """One reciprocal sum of a Lucas pair."""

    family: NumberFamily
    k: int
    r: int
    coeffs: PeriodicSeq
    ell: int = 0
    mu: Optional[int] = None
    start_index: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", NumberFamily(self.family))
        if self.k < 1:
            raise InvalidParameters(f"k must be >= 1, got {self.k}")
        if self.r < 2:
            raise InvalidParameters(f"r must be >= 2, got {self.r}")
        if self.start_index < 0:
            raise InvalidParameters("start index must be >= 0")
        if self.coeffs.is_zero():
            raise InvalidParameters("coefficients must not vanish identically")
        if self.family is NumberFamily.Q and (self.mu is None or not 1 <= self.mu <= self.r - 1):
            raise InvalidParameters(f"family Q needs 1 <= mu <= r-1, got mu={self.mu}, r={self.r}")

    def index(self, h: int) -> int:
        """Recurrence index k*r^h + l (R/S families)."""
        return self.k * self.r**h + self.ell

    def label(self, params: Optional[LucasPairParams] = None) -> str:
        name = params.label_for(self.family) if params else self.family.value
        second = self.mu if self.family is NumberFamily.Q else self.ell
        return f"{name}_{{{second},{self.r}}}"


@dataclass(frozen=True)
class TransformConsts:
    """Constants with R_{k r^h + l} = E * gamma1^M * (gamma1^(-2M) - e), M = k r^h.

    F and f play the same role for S. h is None for the h-independent form.
    """

    E: AlgebraicInput | BigComplex
    e: AlgebraicInput | BigComplex
    F: AlgebraicInput | BigComplex
    f: AlgebraicInput | BigComplex
    h_exact: bool
    h: Optional[int]
    abs_e: mpf
    abs_f: mpf


@dataclass(frozen=True)
class CaseEntry:
    """One matched exceptional case with its witnesses and removals."""

    case_id: str
    witnesses: dict[str, str] = field(default_factory=dict)
    removals: tuple[str, ...] = ()


@dataclass(frozen=True)
class CaseReport:
    """Classifier verdict; generic means no exceptional case matched."""

    theorem: TheoremId
    cases: tuple[CaseEntry, ...] = ()
    notes: tuple[str, ...] = ()
    verdict: Optional[Verdict] = None

    @property
    def generic(self) -> bool:
        return not self.cases

    @property
    def removals(self) -> tuple[str, ...]:
        return tuple(removal for case in self.cases for removal in case.removals)

    def case_ids(self) -> list[str]:
        return [case.case_id for case in self.cases]


@dataclass(frozen=True)
class MembershipResult:
    """Whether x = q^n for some integer n."""

    member: bool
    exponent: Optional[int] = None


@dataclass(frozen=True)
class HypothesisDiagnostics:
    """Outcome of a hypothesis check; violations are human-readable."""

    mode: LemmaMode
    violations: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class InducedPoles:
    """Pole parameters induced by a Lucas pair for the function-side classifiers."""

    mode: LemmaMode
    ell0: int
    ell1: Optional[int]
    Delta: Optional[AlgebraicInput | BigComplex]
    alphas: dict[int, AlgebraicInput | BigComplex]
    betas: dict[int, AlgebraicInput | BigComplex]


@dataclass(frozen=True)
class LatticeBasis:
    """Integer row vectors of equal dimension."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        if not rows:
            raise InvalidParameters("a lattice basis needs at least one row")
        width = len(rows[0])
        if width == 0 or any(len(row) != width for row in rows):
            raise InvalidParameters("lattice rows must be non-empty and of equal dimension")
        object.__setattr__(self, "rows", rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def dimension(self) -> int:
        return len(self.rows[0])


@dataclass(frozen=True)
class RelationReport:
    """Result of an integer-relation search.

    found = False is a bounded certificate: no relation with max |c_i| at most
    certified_height exists among the values at working_bits precision.
    Independent relations accepted next to the first one are listed in
    other_relations.
    """

    found: bool
    coefficients: Optional[tuple[int, ...]]
    residual: mpf
    certified_height: int
    height_bound: int
    working_bits: int
    verified_bits: int = 0
    basis_names: tuple[str, ...] = ()
    other_relations: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class IntegerPolynomial:
    """Integer polynomial, coefficients in ascending degree order."""

    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        parts: list[str] = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                body = ("" if magnitude == 1 else str(magnitude)) + ("x" if power == 1 else f"x^{power}")
            parts.append(f"{sign} {body}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a command run."""

    command: str
    bits: int
    guard_bits: int
    output_format: OutputFormat
    seed: int
    inputs: dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class RunReport:
    """Report envelope written by every command."""

    config: RunConfig
    version: str
    result: dict[str, object]
    rows: list[dict[str, object]] = field(default_factory=list)


@dataclass(frozen=True)
class VerificationItem:
    """One unit of work inside a verification suite."""

    index: int
    suite: Suite
    item_id: str
    payload: dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class VerificationOutcome:
    """Result of one verification item."""

    index: int
    item_id: str
    passed: bool
    residual: str
    bound: str
    note: str = ""
    expected_note: bool = False


@dataclass(frozen=True)
class SuiteSummary:
    """Ordered outcomes of one suite run."""

    suite: Suite
    seed: int
    bits: int
    outcomes: tuple[VerificationOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)

    @property
    def failures(self) -> tuple[VerificationOutcome, ...]:
        return tuple(outcome for outcome in self.outcomes if not outcome.passed)


@dataclass(frozen=True)
class ConstantSpec:
    """A named constant for relation searches.

    Exactly one source is set: a literal value, a series at a point, or a
    reciprocal sum of a Lucas pair.
    """

    name: str
    value: Optional[AlgebraicInput] = None
    series: Optional[SeriesSpec] = None
    z: Optional[AlgebraicInput] = None
    params: Optional[LucasPairParams] = None
    number: Optional[NumberSeriesSpec] = None

    def __post_init__(self) -> None:
        sources = [self.value is not None, self.series is not None, self.number is not None]
        if sum(sources) != 1:
            raise InvalidParameters(f"constant {self.name!r} needs exactly one of value, series or number")
        if self.series is not None and self.z is None:
            raise InvalidParameters(f"constant {self.name!r} needs a point z for its series")
        if self.number is not None and self.params is None:
            raise InvalidParameters(f"constant {self.name!r} needs Lucas-pair parameters")


@dataclass(frozen=True)
class Lemma3Input:
    """r, a, alpha0, beta0, p_1..p_(r-1), u0, v0 of the combined function g0."""

    r: int
    a: AlgebraicInput
    alpha0: AlgebraicInput
    p_coeffs: tuple[AlgebraicInput, ...]
    u0: AlgebraicInput
    beta0: Optional[AlgebraicInput] = None
    v0: AlgebraicInput = Fraction(0)


@dataclass(frozen=True)
class PoleFamilies:
    """Explicit pole parameters alpha_l, beta_l for the function-side classifier."""

    alphas: dict[int, AlgebraicInput]
    betas: dict[int, AlgebraicInput]
    mode: LemmaMode = LemmaMode.LEMMA2

    def __post_init__(self) -> None:
        if 0 not in self.alphas or 0 not in self.betas:
            raise InvalidParameters("alpha_0 and beta_0 are required")
