"""
Workbench Configuration
Size caps and the default seed, overridable from the environment and the CLI
"""
import os
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional

from pydantic import BaseModel, Field

VERSION = "1.0.0"

MAX_PRIME = 251


class WorkbenchConfig(BaseModel):
    """Process-wide limits for constructions and brute-force oracles"""

    model_config = {"frozen": True}

    dim_cap: int = Field(default=64, ge=1, le=4096, description="Largest algebra dimension built")
    enumeration_cap: int = Field(default=4096, ge=1, description="Largest element count enumerated")
    seed: int = Field(default=20240229, ge=0, description="Seed for randomized suites")

    @classmethod
    def from_env(cls) -> "WorkbenchConfig":
        """Build the config, letting STONE_* environment variables override defaults"""
        overrides = {}
        for env_name, key in (
            ("STONE_DIM_CAP", "dim_cap"),
            ("STONE_ENUM_CAP", "enumeration_cap"),
            ("STONE_SEED", "seed"),
        ):
            raw = os.environ.get(env_name)
            if raw is not None and raw.strip():
                overrides[key] = int(raw)
        return cls(**overrides)


# Global config instance, read from the environment once
_config: Optional[WorkbenchConfig] = None

# Per-context override; threads and tasks each see their own
_override: ContextVar[Optional[WorkbenchConfig]] = ContextVar("workbench_config_override", default=None)


def get_config() -> WorkbenchConfig:
    """Get the config in effect for the current context"""
    global _config
    override = _override.get()
    if override is not None:
        return override
    if _config is None:
        _config = WorkbenchConfig.from_env()
    return _config


def reset_config():
    """Drop the cached config so the environment is read again"""
    global _config
    _config = None


@contextmanager
def override_config(**changes) -> Iterator[WorkbenchConfig]:
    """Temporarily replace config fields (CLI flags, tests).

    The replacement lives in a context variable, so concurrent callers on
    other threads or asyncio tasks keep their own values.
    """
    changes = {k: v for k, v in changes.items() if v is not None}
    config = WorkbenchConfig.model_validate({**get_config().model_dump(), **changes})
    token = _override.set(config)
    try:
        yield config
    finally:
        _override.reset(token)
