"""Tests for the verification suites and their workflow."""

import asyncio

import pytest

from mahler_sums.application.verification_workflow import create_verification_workflow
from mahler_sums.application.verification_workflow.suites import default_bits, plan_suite, run_item
from mahler_sums.domain.entities import NumberFamily, Suite
from mahler_sums.domain.numerics import PrecisionContext


def run_suite(suite: Suite, seed: int = 0):
    ctx = PrecisionContext(default_bits(suite), 32)
    workflow = create_verification_workflow()
    return asyncio.run(workflow.execute(suite=suite, items=plan_suite(suite, seed), ctx=ctx, seed=seed))


def test_default_bits() -> None:
    """Test the per-suite default precision."""
    assert default_bits(Suite.FEQ) == 192
    assert default_bits(Suite.THEOREM1) == 512
    assert default_bits(Suite.REMARK2) == 256


@pytest.mark.parametrize("suite", list(Suite))
def test_plan_is_deterministic(suite: Suite) -> None:
    """Test that a seed always yields the same items."""
    first = plan_suite(suite, 11)
    second = plan_suite(suite, 11)
    assert [item.item_id for item in first] == [item.item_id for item in second]
    assert [item.payload for item in first] == [item.payload for item in second]
    assert [item.index for item in first] == list(range(len(first)))


def test_seed_changes_sample_points() -> None:
    """Test that different seeds draw different points."""
    first = plan_suite(Suite.REMARK2, 1)
    second = plan_suite(Suite.REMARK2, 2)
    assert [item.item_id for item in first] == [item.item_id for item in second]
    assert first[0].payload["points"] != second[0].payload["points"]


def test_remark2_suite_passes() -> None:
    """Test the six rational identities through the workflow."""
    summary = run_suite(Suite.REMARK2)
    assert summary.passed
    assert len(summary.outcomes) == 6
    assert [outcome.index for outcome in summary.outcomes] == list(range(6))


def test_lemma3_table_suite_passes() -> None:
    """Test every verdict of the rationality table."""
    summary = run_suite(Suite.LEMMA3_TABLE)
    assert summary.passed, [outcome.note for outcome in summary.failures]


def test_progress_callback_counts_every_item() -> None:
    """Test one progress call per item."""
    calls: list[tuple[str, int, int]] = []
    items = plan_suite(Suite.REMARK2, 0)
    workflow = create_verification_workflow()
    asyncio.run(workflow.execute(
        suite=Suite.REMARK2,
        items=items,
        ctx=PrecisionContext(256, 32),
        seed=0,
        progress_callback=lambda name, current, total: calls.append((name, current, total)),
    ))
    assert len(calls) == len(items)
    assert {call[0] for call in calls} == {"remark2"}
    assert sorted(call[1] for call in calls) == list(range(1, len(items) + 1))


def test_empty_suite_goes_straight_to_summary() -> None:
    """Test the workflow with no items."""
    workflow = create_verification_workflow()
    summary = asyncio.run(workflow.execute(suite=Suite.FEQ, items=[], ctx=PrecisionContext(128, 16), seed=0))
    assert summary.outcomes == ()
    assert summary.passed


def test_failed_item_reports_error() -> None:
    """Test that a library error becomes a failed outcome."""
    item = plan_suite(Suite.REMARK2, 0)[0]
    broken = type(item)(index=item.index, suite=item.suite, item_id=item.item_id,
                        payload={**item.payload, "case_id": 9})
    outcome = run_item(broken, PrecisionContext(128, 16))
    assert not outcome.passed
    assert "UnknownCase" in outcome.note


def test_bridge_plan_covers_every_family() -> None:
    """Test that R, S and Q sums all reach the bridge suite."""
    items = plan_suite(Suite.BRIDGE, 4)
    families = [item.payload["spec"].family for item in items]
    assert families.count(NumberFamily.R) == families.count(NumberFamily.S) == 72
    assert families.count(NumberFamily.Q) == 36
    assert len({item.item_id for item in items}) == len(items)


def test_bridge_plan_draws_coefficients_from_seed() -> None:
    """Test that the seed picks the third coefficient sequence."""
    def drawn(seed: int) -> set[str]:
        return {str(item.payload["spec"].coeffs) for item in plan_suite(Suite.BRIDGE, seed)}

    assert drawn(4) == drawn(4)
    assert any(drawn(seed) != drawn(4) for seed in range(5, 15))


def test_bridge_items_for_the_s_family_pass() -> None:
    """Test a slice of S-family bridge items at the suite precision."""
    ctx = PrecisionContext(default_bits(Suite.BRIDGE), 32)
    items = [
        item for item in plan_suite(Suite.BRIDGE, 0)
        if item.payload["spec"].family is NumberFamily.S and item.payload["spec"].k == 1
        and item.payload["spec"].r == 2
    ]
    assert len(items) == 2 * 3 * 3
    for item in items:
        outcome = run_item(item, ctx)
        assert outcome.passed, (item.item_id, outcome.note)
