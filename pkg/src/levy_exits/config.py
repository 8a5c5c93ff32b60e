"""Configuration management for levy-exits.

All campaign defaults live in one table, the ``Defaults`` dataclass:

============  ==========  ==================================================
field         default     meaning
============  ==========  ==================================================
paths         100000      Monte Carlo paths per (model, query) row
alpha         0.05        Wilson intervals are reported at level 1 - alpha
dt            1e-4        grid step of schemes simulating a Gaussian part
horizon       16          censoring horizon factor: 16 * max(m, 1) for M=inf
seed          42          campaign seed
workers       4           worker processes for verification campaigns
shard_size    4096        path indices per shard (fixed, so aggregates do
                          not depend on the worker count)
max_jump_rate 1000        cap on the retained jump rate of truncated
                          infinite-activity models (Gaussian substitution)
============  ==========  ==================================================
"""

import json
import math
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

DEFAULT_CONFIG_DIR = Path.home() / ".levy-exits"

SCHEMA_VERSION = "levy-exits/1"


@dataclass
class Defaults:
    """Campaign defaults, optionally overridden from ~/.levy-exits/config.json."""

    paths: int = 100_000
    alpha: float = 0.05
    dt: float = 1e-4
    horizon: float = 16.0
    seed: int = 42
    workers: int = 4
    shard_size: int = 4096
    max_jump_rate: float = 1000.0

    def horizon_for(self, m: float, M: float) -> float:
        """Censoring horizon for the window [m, M)."""
        if math.isfinite(M):
            return M
        return self.horizon * max(m, 1.0)

    def save(self, base_dir: Path = DEFAULT_CONFIG_DIR) -> Path:
        """Save defaults to the config file."""
        config_file = base_dir / "config.json"
        config_file.parent.mkdir(parents=True, exist_ok=True)
        config_file.write_text(json.dumps(asdict(self), indent=2))
        return config_file

    @classmethod
    def load(cls, base_dir: Path = DEFAULT_CONFIG_DIR) -> "Defaults":
        """Load defaults, applying the config file and then environment overrides."""
        defaults = cls()
        config_file = base_dir / "config.json"
        if config_file.exists():
            data = json.loads(config_file.read_text())
            known = {f.name for f in fields(cls)}
            defaults = cls(**{k: v for k, v in data.items() if k in known})

        # Environment wins over the file
        workers = os.environ.get("LEVY_EXITS_WORKERS")
        if workers:
            defaults.workers = int(workers)
        seed = os.environ.get("LEVY_EXITS_SEED")
        if seed:
            defaults.seed = int(seed)
        return defaults


DEFAULTS = Defaults()
