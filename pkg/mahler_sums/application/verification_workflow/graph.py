"""Graph construction for the Verification workflow."""

from typing import Callable, Optional

from langgraph.graph import StateGraph, END

from mahler_sums.domain.entities import Suite, SuiteSummary, VerificationItem
from mahler_sums.domain.numerics import PrecisionContext
from mahler_sums.application.verification_workflow.state import VerificationStateDict
from mahler_sums.application.verification_workflow.nodes import (
    run_item_node,
    summarize_node,
)
from mahler_sums.application.verification_workflow.edges import route_items


class VerificationWorkflow:
    """Wrapper for the Verification workflow."""

    def __init__(self, graph: StateGraph) -> None:
        self.app = graph.compile()

    async def execute(
        self,
        suite: Suite,
        items: list[VerificationItem],
        ctx: PrecisionContext,
        seed: int,
        progress_callback: Optional[Callable[[str, int, int], None]] = None,
    ) -> SuiteSummary:
        """Execute the Verification workflow."""
        initial_state: VerificationStateDict = {
            "suite": suite,
            "items": items,
            "ctx": ctx,
            "outcomes": [],
            "ordered_outcomes": [],
            "progress_callback": progress_callback,
        }

        result = await self.app.ainvoke(initial_state)
        return SuiteSummary(
            suite=suite,
            seed=seed,
            bits=ctx.working_bits,
            outcomes=tuple(result["ordered_outcomes"]),
        )


def create_verification_workflow() -> VerificationWorkflow:
    """Create the Verification workflow graph."""

    workflow = StateGraph(VerificationStateDict)

    workflow.add_node("run_item", run_item_node)
    workflow.add_node("summarize", summarize_node)

    # One Send per item; all items finish before the summary runs
    workflow.add_conditional_edges("__start__", route_items, ["run_item", "summarize"])
    workflow.add_edge("run_item", "summarize")
    workflow.add_edge("summarize", END)

    return VerificationWorkflow(workflow)
