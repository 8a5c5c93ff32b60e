import asyncio

import pytest

from levy_exits.pool import run_pool
from levy_exits.scheduler import Shard, create_campaign_plan


def shard_span(shard: Shard) -> tuple[int, int]:
    return (shard.start, shard.stop)


def fail_on_second(shard: Shard) -> int:
    if shard.index == 1:
        raise ValueError("boom")
    return shard.size


@pytest.mark.parametrize("workers", [1, 2])
def test_every_shard_runs_once(workers):
    plan = create_campaign_plan([5, 3], shard_size=2)
    seen = []

    async def on_done(result):
        seen.append(result.shard.index)

    status = asyncio.run(run_pool(plan, shard_span, max_concurrent=workers, on_shard_complete=on_done))
    assert status.completed == {0, 1, 2, 3, 4}
    assert not status.failed
    assert sorted(seen) == [0, 1, 2, 3, 4]
    assert status.ordered_values() == [(0, 2), (2, 4), (4, 5), (0, 2), (2, 3)]


def test_failures_are_recorded():
    plan = create_campaign_plan([6], shard_size=2)
    status = asyncio.run(run_pool(plan, fail_on_second, max_concurrent=1))
    assert status.failed == {1}
    assert status.completed == {0, 2}
    assert "ValueError: boom" in status.results[1].error
    assert not status.results[1].success


def test_empty_plan():
    status = asyncio.run(run_pool(create_campaign_plan([], shard_size=4), shard_span))
    assert status.results == {}
