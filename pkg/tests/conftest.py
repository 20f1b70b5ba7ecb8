from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from vocabregistry import core
from vocabregistry.scoring import Thresholds
from vocabregistry.store import Store


class FakeClock:
    """Deterministic, manually advanced clock."""

    def __init__(self, start: datetime | None = None):
        self.now = start or datetime(2025, 3, 1, 12, 0, 0, tzinfo=timezone.utc)

    def __call__(self) -> datetime:
        return self.now

    def advance(self, days: float = 0.0, seconds: float = 0.0) -> None:
        self.now += timedelta(days=days, seconds=seconds)


@pytest.fixture
def clock() -> FakeClock:
    return FakeClock()


@pytest.fixture
def store(clock, tmp_path) -> Store:
    return Store(clock=clock, outbox_path=tmp_path / "outbox.log")


@pytest.fixture
def th() -> Thresholds:
    return Thresholds()


@pytest.fixture
def users(store):
    """Four users: alice has a complete profile, the rest are bare."""
    alice = core.register_user(
        store, "alice", secret="alice-secret", display_name="Alice",
        location="Springfield", external_links=[("orcid", "https://orcid.org/0000-0001")],
    )
    bob = core.register_user(store, "bob", secret="bob-secret")
    carol = core.register_user(store, "carol", secret="carol-secret")
    dave = core.register_user(store, "dave", secret="dave-secret", is_admin=True)
    return {"alice": alice, "bob": bob, "carol": carol, "dave": dave}
