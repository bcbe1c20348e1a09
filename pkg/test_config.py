"""
Tests for configuration and error reporting
"""
import asyncio
import threading

import pytest
from pydantic import ValidationError

from config import WorkbenchConfig, get_config, override_config, reset_config
from errors import DimCapExceeded, ExprSyntaxError, NotPBoolean, WorkbenchError


def test_defaults():
    config = get_config()
    assert (config.dim_cap, config.enumeration_cap, config.seed) == (64, 4096, 20240229)


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("STONE_DIM_CAP", "12")
    monkeypatch.setenv("STONE_SEED", "5")
    reset_config()
    assert get_config().dim_cap == 12 and get_config().seed == 5


def test_environment_values_are_validated(monkeypatch):
    monkeypatch.setenv("STONE_DIM_CAP", "0")
    reset_config()
    with pytest.raises(ValidationError):
        get_config()


def test_override_is_scoped():
    with override_config(dim_cap=8, seed=None) as config:
        assert get_config() is config and config.dim_cap == 8
        assert config.seed == 20240229
    assert get_config().dim_cap == 64


def test_invalid_override_leaves_config_alone():
    with pytest.raises(ValidationError):
        with override_config(enumeration_cap=0):
            pass
    assert get_config().enumeration_cap == 4096


def test_overrides_on_separate_threads_do_not_leak():
    barrier = threading.Barrier(2, timeout=5)
    seen = {}

    def worker(cap):
        with override_config(dim_cap=cap):
            barrier.wait()  # both overrides active
            seen[cap] = get_config().dim_cap
            barrier.wait()
        seen[f"after-{cap}"] = get_config().dim_cap

    threads = [threading.Thread(target=worker, args=(cap,)) for cap in (5, 9)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    assert seen == {5: 5, 9: 9, "after-5": 64, "after-9": 64}
    assert get_config().dim_cap == 64


def test_override_follows_work_into_to_thread():
    async def run():
        with override_config(dim_cap=7):
            return await asyncio.to_thread(lambda: get_config().dim_cap)

    assert asyncio.run(run()) == 7
    assert get_config().dim_cap == 64


def test_config_is_frozen():
    with pytest.raises(ValidationError):
        WorkbenchConfig().dim_cap = 3


def test_error_codes_and_exit_statuses():
    err = NotPBoolean("not p-Boolean", {"witness": 1})
    assert err.code == "NotPBoolean" and err.exit_code == 2
    assert err.to_dict() == {"error": "NotPBoolean", "message": "not p-Boolean", "details": {"witness": 1}}
    assert DimCapExceeded("too big").exit_code == 3
    syntax = ExprSyntaxError(4, {"')'", "integer"}, "x")
    assert isinstance(syntax, WorkbenchError) and syntax.exit_code == 1
    assert syntax.details == {"offset": 4, "expected": ["')'", "integer"], "found": "x"}
