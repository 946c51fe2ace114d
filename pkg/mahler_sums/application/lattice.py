"""Integer relations among computed constants.

A single engine serves every check: integral LLL on the usual relation
lattice (identity block plus scaled real and imaginary columns). A result
with found = False is a bounded certificate for the stated height and
precision, never an independence proof.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from math import gcd
from typing import Callable, Mapping, Optional, Sequence, Union

from mpmath import mp, mpf

from mahler_sums.domain.entities import IntegerPolynomial, LatticeBasis, RelationReport
from mahler_sums.domain.errors import (
    DegenerateBasis,
    InvalidParameters,
    PrecisionTooLow,
    TooManyMonomials,
)
from mahler_sums.domain.numerics import BigComplex, PrecisionContext
from mahler_sums.logger import logger

ValueSource = Union[BigComplex, Callable[[PrecisionContext], BigComplex]]

MAX_MONOMIALS = 200
DEFAULT_LOVASZ = Fraction(99, 100)


# ---------------------------------------------------------------------------
# Exact lattice helpers
# ---------------------------------------------------------------------------


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def gram_schmidt_coefficients(basis: LatticeBasis) -> tuple[list[list[Fraction]], list[Fraction]]:
    """(mu, B) with b_i = b*_i + sum_{j<i} mu[i][j] b*_j and B[i] = |b*_i|^2."""
    rows = [[Fraction(x) for x in row] for row in basis.rows]
    ortho: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[Fraction(0)] * basis.rank for _ in range(basis.rank)]
    for i, row in enumerate(rows):
        vector = list(row)
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = sum((a * b for a, b in zip(row, ortho[j])), Fraction(0)) / norms[j]
            vector = [v - mu[i][j] * o for v, o in zip(vector, ortho[j])]
        mu[i][i] = Fraction(1)
        ortho.append(vector)
        norms.append(sum((v * v for v in vector), Fraction(0)))
    return mu, norms


def gram_determinant(basis: LatticeBasis) -> int:
    """det(B B^T), computed exactly."""
    _, norms = gram_schmidt_coefficients(basis)
    product = reduce(lambda acc, x: acc * x, norms, Fraction(1))
    return int(product)


@dataclass
class _IntegralState:
    """Working copy for integral LLL, 1-indexed as in the textbook form."""

    b: list[list[int]]
    d: list[int]
    lam: list[list[int]]


def _size_reduce(state: _IntegralState, k: int, l: int) -> None:
    d_l = state.d[l]
    if 2 * abs(state.lam[k][l]) <= d_l:
        return
    q = (2 * state.lam[k][l] + d_l) // (2 * d_l)
    state.b[k] = [x - q * y for x, y in zip(state.b[k], state.b[l])]
    state.lam[k][l] -= q * d_l
    for i in range(1, l):
        state.lam[k][i] -= q * state.lam[l][i]


def _swap(state: _IntegralState, k: int, k_max: int) -> None:
    b, d, lam = state.b, state.d, state.lam
    b[k], b[k - 1] = b[k - 1], b[k]
    for j in range(1, k - 1):
        lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
    mu = lam[k][k - 1]
    new_d = (d[k - 2] * d[k] + mu * mu) // d[k - 1]
    for i in range(k + 1, k_max + 1):
        t = lam[i][k]
        lam[i][k] = (d[k] * lam[i][k - 1] - mu * t) // d[k - 1]
        lam[i][k - 1] = (new_d * t + mu * lam[i][k]) // d[k]
    d[k - 1] = new_d


def lll_reduce(basis: LatticeBasis, lovasz_param: Fraction = DEFAULT_LOVASZ) -> LatticeBasis:
    """Integral LLL reduction (all quantities kept as exact integers).

    d[i] are the leading Gram minors and lam[k][j] = d[j] * mu[k][j]; every
    division in the update formulas is exact.
    """
    lovasz_param = Fraction(lovasz_param)
    if not Fraction(1, 4) < lovasz_param < 1:
        raise InvalidParameters(f"lovasz_param must lie in (1/4, 1), got {lovasz_param}")
    n = basis.rank
    p, q = lovasz_param.numerator, lovasz_param.denominator
    state = _IntegralState(
        b=[[]] + [list(row) for row in basis.rows],
        d=[1] + [0] * n,
        lam=[[0] * (n + 1) for _ in range(n + 1)],
    )
    state.d[1] = _dot(state.b[1], state.b[1])
    if state.d[1] == 0:
        raise DegenerateBasis("first basis row is zero")
    k, k_max = 2, 1
    while k <= n:
        if k > k_max:
            k_max = k
            for j in range(1, k + 1):
                u = _dot(state.b[k], state.b[j])
                for i in range(1, j):
                    u = (state.d[i] * u - state.lam[k][i] * state.lam[j][i]) // state.d[i - 1]
                if j < k:
                    state.lam[k][j] = u
                else:
                    state.d[k] = u
            if state.d[k] == 0:
                raise DegenerateBasis(f"basis rows are linearly dependent (row {k})")
        while True:
            _size_reduce(state, k, k - 1)
            lam = state.lam[k][k - 1]
            if q * state.d[k] * state.d[k - 2] < p * state.d[k - 1] ** 2 - q * lam * lam:
                _swap(state, k, k_max)
                k = max(2, k - 1)
                continue
            for l in range(k - 2, 0, -1):
                _size_reduce(state, k, l)
            k += 1
            break
    return LatticeBasis(tuple(tuple(row) for row in state.b[1:]))


# ---------------------------------------------------------------------------
# Relation search
# ---------------------------------------------------------------------------


def _resolve(values: Sequence[ValueSource], ctx: PrecisionContext) -> list[BigComplex]:
    return [v(ctx) if callable(v) else v for v in values]


def _combination(coefficients: Sequence[int], balls: Sequence[BigComplex], ctx: PrecisionContext) -> BigComplex:
    with ctx.workprec(16):
        total = BigComplex.zero()
        for c, x in zip(coefficients, balls):
            if c:
                total = total + x * c
    return total


def _normalized(coefficients: Sequence[int]) -> tuple[int, ...]:
    """Content removed and first non-zero entry positive."""
    content = reduce(gcd, (abs(c) for c in coefficients), 0) or 1
    scaled = [c // content for c in coefficients]
    lead = next(c for c in scaled if c)
    return tuple(-c for c in scaled) if lead < 0 else tuple(scaled)


def _relation_lattice(balls: Sequence[BigComplex], scale_bits: int) -> tuple[LatticeBasis, bool]:
    complex_values = any(x.im != 0 for x in balls)
    n = len(balls)
    rows = []
    for i, x in enumerate(balls):
        row = [1 if j == i else 0 for j in range(n)]
        row.append(int(mp.nint(mp.ldexp(x.re, scale_bits))))
        if complex_values:
            row.append(int(mp.nint(mp.ldexp(x.im, scale_bits))))
        rows.append(tuple(row))
    return LatticeBasis(tuple(rows)), complex_values


def _certified_height(reduced: LatticeBasis, balls: Sequence[BigComplex], scale_bits: int, columns: int) -> int:
    """Largest H with H * sqrt(n + columns * T^2) below the shortest Gram-Schmidt vector.

    T = sum_i (1/2 + 2^s err_i) bounds the rounding in each scaled column,
    so any relation of height <= H maps to a lattice vector that is too
    short to exist.
    """
    _, norms = gram_schmidt_coefficients(reduced)
    n = len(balls)
    with mp.workprec(128):
        shortest = mp.sqrt(mp.mpf(min(norms).numerator) / min(norms).denominator)
        rounding = mp.fsum(mp.mpf(0.5) + mp.ldexp(x.err, scale_bits) for x in balls)
        per_height = mp.sqrt(n + columns * rounding**2)
        height = int(mp.floor(shortest / per_height))
        if height > 0 and height * per_height >= shortest:
            height -= 1
    return max(0, height)


def select_relations(
    candidates: Sequence[tuple[mpf, tuple[int, ...]]],
    threshold: mpf,
    gap_bits: int,
) -> list[tuple[int, ...]]:
    """Accepted relations among candidates sorted by residual, best first.

    Every candidate below the threshold is a relation. The set is accepted
    only when the first candidate above the threshold is at least 2^gap_bits
    times the largest accepted residual; otherwise nothing is accepted.
    """
    accepted = [item for item in candidates if item[0] < threshold]
    if not accepted:
        return []
    rest = candidates[len(accepted):]
    if rest and rest[0][0] < mp.ldexp(accepted[-1][0], gap_bits):
        logger.debug("gap test failed (%s vs %s)", accepted[-1][0], rest[0][0])
        return []
    return [coefficients for _, coefficients in accepted]


def _verify(
    coefficients: tuple[int, ...],
    values: Sequence[ValueSource],
    balls: Sequence[BigComplex],
    ctx: PrecisionContext,
) -> tuple[bool, int]:
    if any(callable(v) for v in values):
        doubled = ctx.doubled()
        check = _combination(coefficients, _resolve(values, doubled), doubled)
        return check.magnitude() <= mp.ldexp(mpf(1), -ctx.working_bits), doubled.working_bits
    return _combination(coefficients, balls, ctx).contains_zero(), ctx.working_bits


def find_integer_relation(
    values: Sequence[ValueSource],
    height_bound: int,
    ctx: PrecisionContext,
    names: Sequence[str] = (),
) -> RelationReport:
    """Search for integers c, 0 < max |c_i| <= height_bound, with sum c_i x_i = 0.

    Values may be balls or callables returning a ball for a given precision;
    callables are re-evaluated at doubled precision to confirm a relation,
    plain balls are confirmed by containment of zero.
    """
    n = len(values)
    if n < 2:
        raise InvalidParameters("find_integer_relation needs at least two values")
    if height_bound < 1:
        raise InvalidParameters(f"height_bound must be >= 1, got {height_bound}")
    scale_bits = ctx.certified_bits
    with mp.workprec(64):
        needed = int(mp.ceil(n * mp.log(height_bound, 2))) + 32
    if scale_bits < needed:
        raise PrecisionTooLow(
            f"{n} values at height {height_bound} need P - g >= {needed} bits, have {scale_bits}"
        )
    balls = _resolve(values, ctx)
    with ctx.workprec():
        basis, complex_values = _relation_lattice(balls, scale_bits)
    reduced = lll_reduce(basis)
    columns = 2 if complex_values else 1

    candidates: list[tuple[mpf, tuple[int, ...]]] = []
    for row in reduced.rows:
        coefficients = row[:n]
        if not any(coefficients) or max(abs(c) for c in coefficients) > height_bound:
            continue
        residual = _combination(coefficients, balls, ctx).magnitude()
        candidates.append((residual, _normalized(coefficients)))
    candidates.sort(key=lambda item: item[0])

    certified = min(height_bound, _certified_height(reduced, balls, scale_bits, columns))
    threshold = mp.ldexp(mpf(1), -(scale_bits // 2))
    report = RelationReport(
        found=False,
        coefficients=None,
        residual=candidates[0][0] if candidates else mpf(0),
        certified_height=certified,
        height_bound=height_bound,
        working_bits=ctx.working_bits,
        basis_names=tuple(names),
    )
    relations = select_relations(candidates, threshold, scale_bits // 4)
    if not relations:
        logger.debug("find_integer_relation: none up to height %d (certified %d)", height_bound, certified)
        return report

    confirmed: list[tuple[int, ...]] = []
    verified_bits = 0
    for coefficients in relations:
        verified, verified_bits = _verify(coefficients, values, balls, ctx)
        if verified:
            confirmed.append(coefficients)
        else:
            logger.warning("relation %s did not survive re-verification", coefficients)
    if not confirmed:
        return report
    best = confirmed[0]
    if len(confirmed) > 1:
        logger.info("%d independent integer relations found; first: %s", len(confirmed), best)
    else:
        logger.info("integer relation found: %s", best)
    return RelationReport(
        found=True,
        coefficients=best,
        residual=next(residual for residual, c in candidates if c == best),
        certified_height=certified,
        height_bound=height_bound,
        working_bits=ctx.working_bits,
        verified_bits=verified_bits,
        basis_names=tuple(names),
        other_relations=tuple(confirmed[1:]),
    )


def _power(source: ValueSource, exponent: int) -> ValueSource:
    if callable(source):
        return lambda c: _raise(source(c), exponent, c)
    return source**exponent


def _raise(ball: BigComplex, exponent: int, ctx: PrecisionContext) -> BigComplex:
    with ctx.workprec(16):
        return ball**exponent


def minimal_polynomial(
    x: ValueSource,
    max_degree: int,
    height_bound: int,
    ctx: PrecisionContext,
) -> Optional[IntegerPolynomial]:
    """Lowest-degree integer polynomial (up to max_degree) vanishing at x, or None."""
    for degree in range(1, max_degree + 1):
        with ctx.workprec(16):
            powers = [_power(x, j) for j in range(degree + 1)]
        try:
            report = find_integer_relation(powers, height_bound, ctx)
        except PrecisionTooLow as error:
            logger.warning("minimal_polynomial stops at degree %d: %s", degree, error)
            return None
        if report.found and report.coefficients[-1] != 0:
            coefficients = report.coefficients
            if coefficients[-1] < 0:
                coefficients = tuple(-c for c in coefficients)
            return IntegerPolynomial(coefficients)
    return None


def _monomial_name(names: Sequence[str], exponents: Sequence[int]) -> str:
    if not exponents:
        return "1"
    parts = []
    for index in sorted(set(exponents)):
        power = exponents.count(index)
        parts.append(names[index] if power == 1 else f"{names[index]}^{power}")
    return "*".join(parts)


def monomial_basis(names: Sequence[str], degree: int) -> list[tuple[int, ...]]:
    """Index tuples of all monomials of total degree <= degree, constant first."""
    monomials: list[tuple[int, ...]] = []
    for total in range(degree + 1):
        monomials.extend(combinations_with_replacement(range(len(names)), total))
    return monomials


def _monomial_value(sources: Sequence[ValueSource], exponents: Sequence[int]) -> ValueSource:
    """Product of the sources; a callable when any factor is one."""

    def product(ctx: Optional[PrecisionContext]) -> BigComplex:
        total = BigComplex.one()
        for index in exponents:
            source = sources[index]
            total = total * (source(ctx) if callable(source) else source)
        return total

    if any(callable(sources[i]) for i in exponents):

        def at(ctx: PrecisionContext) -> BigComplex:
            with ctx.workprec(16):
                return product(ctx)

        return at
    return product(None)


def independence_smoke(
    values: Mapping[str, ValueSource],
    monomial_degree: int,
    height_bound: int,
    ctx: PrecisionContext,
) -> RelationReport:
    """Relation search among all monomials of the values up to monomial_degree."""
    names = list(values)
    monomials = monomial_basis(names, monomial_degree)
    if len(monomials) > MAX_MONOMIALS:
        raise TooManyMonomials(f"{len(monomials)} monomials exceed the limit of {MAX_MONOMIALS}")
    sources = [values[name] for name in names]
    with ctx.workprec(16):
        entries = [_monomial_value(sources, exponents) for exponents in monomials]
    labels = [_monomial_name(names, exponents) for exponents in monomials]
    return find_integer_relation(entries, height_bound, ctx, names=labels)
