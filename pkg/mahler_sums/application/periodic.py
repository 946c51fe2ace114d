"""Periodic coefficient sequences: interleaving, finite Fourier split and exact rank."""

import math
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from mahler_sums.domain.entities import PeriodicSeq
from mahler_sums.domain.errors import InvalidParameters, PeriodMismatch
from mahler_sums.domain.numerics import (
    AlgebraicInput,
    BigComplex,
    ExactValue,
    PrecisionContext,
    accumulation_bits,
    require_exact,
    root_of_unity_here,
    to_ball,
)
from mahler_sums.logger import logger


def term(seq: PeriodicSeq, h: int) -> AlgebraicInput:
    """values[h mod p]."""
    return seq.term(h)


def interleave(seq: PeriodicSeq, j: int) -> PeriodicSeq:
    """(a_0, 0, ..., 0, a_1, 0, ...) with j - 1 zeros after each value."""
    if j < 1:
        raise InvalidParameters(f"interleave factor must be >= 1, got {j}")
    if j == 1:
        return seq
    values: list[AlgebraicInput] = []
    for value in seq.values:
        values.append(value)
        values.extend([Fraction(0)] * (j - 1))
    return PeriodicSeq(tuple(values))


def lcm_period(seqs: Sequence[PeriodicSeq]) -> int:
    return reduce(math.lcm, (s.period for s in seqs), 1)


def combine(seqs: Sequence[PeriodicSeq], weights: Sequence[AlgebraicInput]) -> PeriodicSeq:
    """Exact sum_j w_j * seqs[j] on the common period."""
    if len(seqs) != len(weights) or not seqs:
        raise InvalidParameters("combine needs one weight per sequence")
    period = lcm_period(seqs)
    lifted = require_exact([*weights, *(v for s in seqs for v in s.values)])
    w = lifted[: len(weights)]
    values = []
    for h in range(period):
        total: ExactValue = Fraction(0)
        for weight, seq in zip(w, seqs):
            total = total + weight * seq.term(h)
        values.append(total)
    return PeriodicSeq(tuple(values))


def is_constant(seq: PeriodicSeq) -> bool:
    return seq.is_constant()


def dft_decompose(combined: PeriodicSeq, N: int, ctx: PrecisionContext) -> list[BigComplex]:
    """A_0..A_{N-1} with term(h) = sum_i A_i * omega^(i*h), omega = e^(2*pi*i/N)."""
    if N < 1 or N % combined.period:
        raise PeriodMismatch(f"period {combined.period} does not divide N={N}")
    coefficients: list[BigComplex] = []
    with ctx.workprec(accumulation_bits(N) + 4):
        values = [to_ball(combined.term(h)) for h in range(N)]
        for i in range(N):
            total = BigComplex.zero()
            for h, value in enumerate(values):
                if value.is_exact_zero():
                    continue
                total = total + value * root_of_unity_here(N, -i * h)
            coefficients.append(total / N)
    return coefficients


def reconstruct(coefficients: Sequence[BigComplex], h: int, ctx: PrecisionContext) -> BigComplex:
    """sum_i A_i * omega^(i*h); inverse of dft_decompose."""
    N = len(coefficients)
    with ctx.workprec(accumulation_bits(N) + 4):
        total = BigComplex.zero()
        for i, coefficient in enumerate(coefficients):
            total = total + coefficient * root_of_unity_here(N, i * h)
    return total


def _rank(rows: list[list[ExactValue]]) -> int:
    """Exact Gaussian elimination with full pivoting."""
    matrix = [list(row) for row in rows]
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if matrix else 0
    rank = 0
    active_cols = list(range(n_cols))
    for row_index in range(n_rows):
        pivot: Optional[tuple[int, int]] = None
        for i in range(row_index, n_rows):
            for j in active_cols:
                if matrix[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        matrix[row_index], matrix[i] = matrix[i], matrix[row_index]
        active_cols.remove(j)
        head = matrix[row_index][j]
        for below in range(row_index + 1, n_rows):
            factor = matrix[below][j]
            if factor == 0:
                continue
            ratio = factor / head
            matrix[below] = [x - ratio * y for x, y in zip(matrix[below], matrix[row_index])]
        rank += 1
    return rank


def rank_exact(seqs: Sequence[PeriodicSeq], num_terms: Optional[int] = None) -> int:
    """Rank of the matrix of initial terms, over Q or the common quadratic field."""
    if not seqs:
        return 0
    period = lcm_period(seqs)
    if num_terms is None:
        num_terms = 2 * period
    if num_terms < period:
        raise InvalidParameters(f"num_terms={num_terms} is below the common period {period}")
    flat = require_exact([seq.term(h) for seq in seqs for h in range(num_terms)])
    rows = [flat[i * num_terms : (i + 1) * num_terms] for i in range(len(seqs))]
    rank = _rank(rows)
    logger.debug("rank_exact: %d sequences, %d terms -> rank %d", len(seqs), num_terms, rank)
    return rank
