"""Shard partitioning of a campaign's path indices."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Shard:
    """A contiguous range of path indices of one campaign row."""

    index: int  # position in campaign order
    row: int
    start: int
    stop: int

    @property
    def size(self) -> int:
        return self.stop - self.start


@dataclass
class CampaignPlan:
    """Shards of every row, in row-major path order."""

    shards: list[Shard]
    row_shards: dict[int, list[int]]  # row -> shard indices, in path order
    shard_size: int


def create_campaign_plan(row_sizes: list[int], shard_size: int) -> CampaignPlan:
    """Cut each row's paths into fixed-size shards.

    The shard boundaries depend only on the row sizes and shard_size, never
    on the worker count, so merging shard counts in index order gives the
    same aggregates however the shards were dispatched.

    Args:
        row_sizes: Number of paths per campaign row
        shard_size: Paths per shard (the last shard of a row may be smaller)
    """
    if shard_size <= 0:
        raise ValueError(f"shard_size must be positive, got {shard_size}")

    shards: list[Shard] = []
    row_shards: dict[int, list[int]] = {}
    for row, n in enumerate(row_sizes):
        if n < 0:
            raise ValueError(f"row {row} has a negative path count: {n}")
        row_shards[row] = []
        for start in range(0, n, shard_size):
            shard = Shard(index=len(shards), row=row, start=start, stop=min(start + shard_size, n))
            row_shards[row].append(shard.index)
            shards.append(shard)

    return CampaignPlan(shards=shards, row_shards=row_shards, shard_size=shard_size)


def get_ready_shards(plan: CampaignPlan, completed: set[int], in_progress: set[int]) -> list[int]:
    """Get shards not yet started, in campaign order."""
    return [s.index for s in plan.shards if s.index not in completed and s.index not in in_progress]
