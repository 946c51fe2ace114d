"""State definitions for the Verification workflow."""

from typing import Annotated, Callable, Optional, TypedDict
import operator

from mahler_sums.domain.entities import Suite, VerificationItem, VerificationOutcome
from mahler_sums.domain.numerics import PrecisionContext


class VerificationStateDict(TypedDict):
    """State dict for the Verification workflow (LangGraph state)."""
    suite: Suite
    items: list[VerificationItem]
    ctx: PrecisionContext
    outcomes: Annotated[list[VerificationOutcome], operator.add]
    ordered_outcomes: list[VerificationOutcome]
    progress_callback: Optional[Callable[[str, int, int], None]]


class SingleItemState(TypedDict):
    """State for running one suite item in parallel."""
    item: VerificationItem
    total: int
    ctx: PrecisionContext
    outcomes: Annotated[list[VerificationOutcome], operator.add]
    progress_callback: Optional[Callable[[str, int, int], None]]
