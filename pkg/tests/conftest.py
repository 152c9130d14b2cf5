from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def scenario_dir() -> Path:
    return ROOT / "scenarios"
