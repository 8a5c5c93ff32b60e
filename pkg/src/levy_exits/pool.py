"""Worker pool for concurrent shard execution."""

import asyncio
from collections.abc import Awaitable, Callable
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Generic, TypeVar

from .scheduler import CampaignPlan, Shard, get_ready_shards

T = TypeVar("T")


@dataclass
class ShardResult(Generic[T]):
    """Result of one shard."""

    shard: Shard
    success: bool
    value: T | None = None
    error: str = ""


@dataclass
class PoolStatus(Generic[T]):
    """Status of the execution pool."""

    completed: set[int] = field(default_factory=set)
    failed: set[int] = field(default_factory=set)
    in_progress: set[int] = field(default_factory=set)
    results: dict[int, ShardResult[T]] = field(default_factory=dict)

    def ordered_values(self) -> list[T]:
        """Values of completed shards in shard-index order."""
        return [self.results[i].value for i in sorted(self.completed)]


def _executor(max_concurrent: int) -> Executor:
    if max_concurrent > 1:
        return ProcessPoolExecutor(max_workers=max_concurrent)
    return ThreadPoolExecutor(max_workers=1)


async def run_pool(
    plan: CampaignPlan,
    shard_fn: Callable[[Shard], T],
    max_concurrent: int = 4,
    on_shard_complete: Callable[[ShardResult[T]], Awaitable[None]] | None = None,
) -> PoolStatus[T]:
    """Run every shard of the plan with bounded parallelism.

    Args:
        plan: Campaign plan with shards
        shard_fn: Picklable callable run in a worker process for each shard
        max_concurrent: Maximum shards in flight; 1 runs everything in-process
        on_shard_complete: Optional callback for shard completion
    """
    status: PoolStatus[T] = PoolStatus()
    if not plan.shards:
        return status

    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(max_concurrent)
    shard_map = {s.index: s for s in plan.shards}

    with _executor(max_concurrent) as executor:

        async def execute_shard(index: int) -> ShardResult[T]:
            async with semaphore:
                shard = shard_map[index]
                value = await loop.run_in_executor(executor, shard_fn, shard)
                return ShardResult(shard=shard, success=True, value=value)

        pending: set[asyncio.Task] = set()
        task_to_index: dict[asyncio.Task, int] = {}

        while len(status.completed) + len(status.failed) < len(plan.shards):
            # Start new shards up to limit
            for index in get_ready_shards(plan, status.completed | status.failed, status.in_progress):
                if len(pending) >= max_concurrent:
                    break
                status.in_progress.add(index)
                task = asyncio.create_task(execute_shard(index))
                pending.add(task)
                task_to_index[task] = index

            if not pending:
                break

            done, pending = await asyncio.wait(pending, return_when=asyncio.FIRST_COMPLETED)

            for finished in done:
                index = task_to_index.pop(finished)
                status.in_progress.discard(index)

                try:
                    result = finished.result()
                    status.completed.add(index)
                except Exception as e:
                    result = ShardResult(shard=shard_map[index], success=False, error=f"{type(e).__name__}: {e}")
                    status.failed.add(index)

                status.results[index] = result
                if on_shard_complete:
                    await on_shard_complete(result)

    return status
