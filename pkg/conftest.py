"""
Shared test setup: a clean config per test and a Hypothesis profile sized for GF(p) brute force
"""
import pytest
from hypothesis import HealthCheck, settings

from config import reset_config
from expr_parser import clear_cache

settings.register_profile(
    "workbench",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow],
)
settings.load_profile("workbench")


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    for name in ("STONE_DIM_CAP", "STONE_ENUM_CAP", "STONE_SEED"):
        monkeypatch.delenv(name, raising=False)
    reset_config()
    clear_cache()
    yield
    reset_config()
    clear_cache()
