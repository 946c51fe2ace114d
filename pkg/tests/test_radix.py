"""Tests for the perfect-power structure of radices."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler_sums.application.radix import decompose, group_by_base, integer_root, is_perfect_power
from mahler_sums.domain.errors import OutOfDomain


@pytest.mark.parametrize(
    "r, d, j",
    [(729, 3, 6), (64, 2, 6), (36, 6, 2), (12, 12, 1), (2, 2, 1), (1024, 2, 10), (3**20, 3, 20)],
)
def test_decompose(r: int, d: int, j: int) -> None:
    """Test r = d^j with d not a perfect power."""
    decomposition = decompose(r)
    assert (decomposition.d, decomposition.j) == (d, j)
    assert str(decomposition) == f"{d}^{j}"


def test_decompose_rejects_small() -> None:
    """Test that r < 2 is out of domain."""
    with pytest.raises(OutOfDomain):
        decompose(1)


def test_is_perfect_power() -> None:
    """Test maximal perfect-power representations."""
    assert is_perfect_power(8) == (2, 3)
    assert is_perfect_power(10) is None
    assert is_perfect_power(2**12) == (2, 12)


def test_integer_root() -> None:
    """Test floor roots."""
    assert integer_root(26, 3) == 2
    assert integer_root(27, 3) == 3
    assert integer_root(10**30, 5) == 10**6


def test_group_by_base() -> None:
    """Test grouping radices by their base."""
    assert group_by_base([2, 4, 8, 3, 9, 6]) == {2: [2, 4, 8], 3: [3, 9], 6: [6]}


@settings(max_examples=200, deadline=None)
@given(n=st.integers(min_value=2, max_value=10**9))
def test_decomposition_is_unique(n: int) -> None:
    """Test d^j = n and that d is not itself a perfect power."""
    decomposition = decompose(n)
    assert decomposition.d**decomposition.j == n
    assert decomposition.d < 2 or is_perfect_power(decomposition.d) is None


@settings(max_examples=100, deadline=None)
@given(base=st.integers(min_value=2, max_value=50), exponent=st.integers(min_value=1, max_value=8))
def test_powers_share_a_base(base: int, exponent: int) -> None:
    """Test d(b^e) = d(b)."""
    assert decompose(base**exponent).d == decompose(base).d
