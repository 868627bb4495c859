"""Run settings for the sampled checks."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

SEED_ENV = "PI_LATTICE_SEED"


@dataclass(frozen=True)
class CheckConfig:
    trials: int = 100
    seed: int = 0
    field: str = "rational"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "CheckConfig":
        """Defaults, then ``PI_LATTICE_SEED``, then any non-None override."""
        base = cls()
        raw = os.environ.get(SEED_ENV)
        if raw is not None:
            try:
                base = replace(base, seed=int(raw))
            except ValueError:
                raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
        return replace(base, **{k: v for k, v in overrides.items() if v is not None})
