"""Edge functions for the Verification workflow."""

from langgraph.types import Send

from mahler_sums.application.verification_workflow.nodes import fan_out_items
from mahler_sums.application.verification_workflow.state import VerificationStateDict


def route_items(state: VerificationStateDict) -> list[Send] | str:
    """Fan out one task per item, or go straight to the summary for an empty suite."""
    if not state["items"]:
        return "summarize"
    return fan_out_items(state)
