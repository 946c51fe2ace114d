"""Node functions for the Verification workflow."""

from typing import Any

from langgraph.types import Send

from mahler_sums.application.verification_workflow.state import (
    SingleItemState,
    VerificationStateDict,
)
from mahler_sums.application.verification_workflow.suites import run_item
from mahler_sums.logger import logger


def fan_out_items(state: VerificationStateDict) -> list[Send]:
    """Fan out to run each suite item in parallel."""
    total = len(state["items"])
    return [
        Send(
            "run_item",
            {
                "item": item,
                "total": total,
                "ctx": state["ctx"],
                "outcomes": [],
                "progress_callback": state.get("progress_callback"),
            }
        )
        for item in state["items"]
    ]


async def run_item_node(state: SingleItemState) -> dict[str, Any]:
    """Run a single item under the shared precision context."""
    item = state["item"]
    progress_callback = state.get("progress_callback")

    logger.debug("[Verify] Running %s (%d/%d)", item.item_id, item.index + 1, state["total"])
    outcome = run_item(item, state["ctx"])
    if not outcome.passed:
        logger.warning("[Verify] FAILED %s: residual=%s bound=%s %s",
                       item.item_id, outcome.residual, outcome.bound, outcome.note)

    if progress_callback:
        progress_callback(item.suite.value, item.index + 1, state["total"])

    return {"outcomes": [outcome]}


async def summarize_node(state: VerificationStateDict) -> dict[str, Any]:
    """Order the collected outcomes by item index."""
    ordered = sorted(state["outcomes"], key=lambda outcome: outcome.index)
    passed = sum(1 for outcome in ordered if outcome.passed)
    notes = sum(1 for outcome in ordered if outcome.expected_note)
    logger.info("[Verify] %s: %d/%d passed (%d expected notes)",
                state["suite"].value, passed, len(ordered), notes)
    return {"ordered_outcomes": ordered}
