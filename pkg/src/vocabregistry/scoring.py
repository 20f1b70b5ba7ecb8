"""Consensus scoring: raw and reputation-weighted scores, vote weights,
reputation, stability and applicability updates.

Everything here is a pure function of its arguments; the queue-driven rescore
procedure in rescore.py composes these against the store.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Sequence

from .errors import ValidationFailed
from .models import AuditOutcome, TermStatus, VoteDirection, VoterRole


@dataclass
class Voter:
    user: str
    reputation: float
    direction: VoteDirection
    role: VoterRole = VoterRole.PLAIN


@dataclass
class VoteSlate:
    """One term's votes: t registered users total, one entry per voter."""

    t: int
    voters: list[Voter] = field(default_factory=list)

    def __post_init__(self):
        if self.t < 0:
            raise ValidationFailed("total user count must be nonnegative")
        if len(self.voters) > self.t:
            raise ValidationFailed("more voters than registered users")
        for v in self.voters:
            if not (v.reputation >= 0.0) or v.reputation != v.reputation:
                raise ValidationFailed("voter reputations must be finite and >= 0")


@dataclass
class Thresholds:
    """All scoring knobs with their defaults; every value is overridable from
    the service configuration."""

    canonical_threshold: float = 0.75
    deprecate_threshold: float = 0.25
    stability_threshold: float = 0.75
    mismatch_penalty: float = 0.10
    unreachable_penalty: float = 0.25
    applicability_half_life_days: float = 180.0
    moderator_multiplier: float = 2.0
    followed_multiplier: float = 1.25
    # comparisons are strict per the published wording ("exceeds", "falls
    # below"); flippable so the strictness itself is regression-testable
    canonical_strict: bool = True
    deprecate_strict: bool = True
    no_vote_default: float = 0.5
    interaction_bonus: float = 0.05
    stability_window_days: float = 30.0
    # reputation coefficients: base 1 + profile bonus + capped follower and
    # activity contributions
    profile_bonus: float = 1.0
    follower_coefficient: float = 0.1
    follower_cap: float = 1.0
    activity_coefficient: float = 0.05
    activity_cap: float = 1.0
    activity_window_days: float = 30.0
    sweep_cadence_days: float = 1.0

    def validate(self) -> "Thresholds":
        if not (0.0 <= self.deprecate_threshold < self.canonical_threshold <= 1.0):
            raise ValidationFailed("need 0 <= deprecate_threshold < canonical_threshold <= 1")
        for name in ("mismatch_penalty", "unreachable_penalty"):
            p = getattr(self, name)
            if not (0.0 < p < 1.0):
                raise ValidationFailed(f"{name} must be in (0,1)")
        if self.moderator_multiplier < 1.0 or self.followed_multiplier < 1.0:
            raise ValidationFailed("role multipliers must be >= 1")
        if not self.followed_multiplier < self.moderator_multiplier:
            raise ValidationFailed("followed_multiplier must be below moderator_multiplier")
        if self.applicability_half_life_days <= 0 or self.stability_window_days <= 0:
            raise ValidationFailed("time windows must be positive")
        return self


def raw_score(u: int, d: int, thresholds: Thresholds | None = None) -> float:
    """Up-vote fraction u/(u+d); the configured no-vote default when nobody
    has voted."""
    if u < 0 or d < 0:
        raise ValidationFailed("vote counts must be nonnegative")
    if u + d == 0:
        return (thresholds or Thresholds()).no_vote_default
    return u / (u + d)


def vote_weight(r_i: float, r_total: float, t: int, v: int) -> float:
    """Base weight 1 + (R_i/R)(t - v).

    When the voters' total reputation is zero, every voter gets the 1/v share,
    which preserves the sum-of-weights identity. Calling with v == 0 is a
    caller error: weights are undefined without votes.
    """
    if v == 0:
        raise ValidationFailed("vote weights are undefined with no voters")
    if not (t >= v >= 1):
        raise ValidationFailed("need t >= v >= 1")
    if r_total == 0.0:
        return 1.0 + (t - v) / v
    # single division after the product keeps the worked examples exact
    return 1.0 + r_i * (t - v) / r_total


_ROLE_MULTIPLIER_FIELD = {
    VoterRole.PLAIN: None,
    VoterRole.MODERATOR: "moderator_multiplier",
    VoterRole.FOLLOWED_BY_CUSTODIAN: "followed_multiplier",
}


def weighted_score(slate: VoteSlate, thresholds: Thresholds | None = None) -> float:
    """Reputation-weighted consensus: sum of up-voter weights over the sum of
    all weights, with role multipliers applied on top of the base weights."""
    th = thresholds or Thresholds()
    if not slate.voters:
        return th.no_vote_default
    v = len(slate.voters)
    r_total = sum(voter.reputation for voter in slate.voters)
    up = 0.0
    total = 0.0
    for voter in slate.voters:
        w = vote_weight(voter.reputation, r_total, slate.t, v)
        mult_field = _ROLE_MULTIPLIER_FIELD[voter.role]
        if mult_field is not None:
            w *= getattr(th, mult_field)
        total += w
        if voter.direction is VoteDirection.UP:
            up += w
    return up / total


def reputation(
    profile_complete: bool,
    follower_count: int,
    recent_action_count: int,
    thresholds: Thresholds | None = None,
) -> float:
    """Base 1 plus profile-completeness bonus plus capped follower and
    recent-activity contributions. Monotone nondecreasing in each input."""
    th = thresholds or Thresholds()
    r = 1.0
    if profile_complete:
        r += th.profile_bonus
    r += min(th.follower_cap, th.follower_coefficient * follower_count)
    r += min(th.activity_cap, th.activity_coefficient * recent_action_count)
    return r


def recent_actions(
    action_log: Iterable[tuple[str, datetime]], now: datetime, thresholds: Thresholds | None = None
) -> int:
    th = thresholds or Thresholds()
    cutoff_seconds = th.activity_window_days * 86400.0
    return sum(1 for _, ts in action_log if (now - ts).total_seconds() <= cutoff_seconds)


def stability_update(
    current: float,
    check: AuditOutcome | str,
    elapsed_days: float = 0.0,
    thresholds: Thresholds | None = None,
) -> float:
    """One stability step: audit outcomes move the score down, the "aged"
    check accrues it linearly for manually entered terms.

    "changed" only adjusts the score; the caller must also set the term flag.
    """
    th = thresholds or Thresholds()
    if not (0.0 <= current <= 1.0):
        raise ValidationFailed("stability must be in [0,1]")
    kind = check.value if isinstance(check, AuditOutcome) else check
    if kind == "unchanged":
        return current
    if kind == "changed":
        return max(0.0, current - th.mismatch_penalty)
    if kind == "unreachable":
        return max(0.0, current - th.mismatch_penalty - th.unreachable_penalty)
    if kind == "aged":
        return min(1.0, current + elapsed_days / th.stability_window_days)
    raise ValidationFailed(f"unknown stability check {check!r}")


def applicability_decay(
    current: float, days_since_interaction: float, thresholds: Thresholds | None = None
) -> float:
    """Exponential half-life decay of the applicability score."""
    if current < 0 or days_since_interaction < 0:
        raise ValidationFailed("applicability inputs must be nonnegative")
    th = thresholds or Thresholds()
    return current * 2.0 ** (-days_since_interaction / th.applicability_half_life_days)


def interaction_bump(current: float, thresholds: Thresholds | None = None) -> float:
    """Any interaction adds the configured bonus, clamped to 1."""
    th = thresholds or Thresholds()
    return min(1.0, current + th.interaction_bonus)


def classify(consensus: float, stability: float, thresholds: Thresholds | None = None) -> TermStatus:
    """The three-way status decision. Deprecation wins below the lower
    threshold; canonical requires both consensus above the upper threshold and
    sufficient stability; everything else is vernacular."""
    th = thresholds or Thresholds()
    if not (0.0 <= consensus <= 1.0 and 0.0 <= stability <= 1.0):
        raise ValidationFailed("consensus and stability must be in [0,1]")
    below = consensus < th.deprecate_threshold if th.deprecate_strict else consensus <= th.deprecate_threshold
    if below:
        return TermStatus.DEPRECATED
    above = consensus > th.canonical_threshold if th.canonical_strict else consensus >= th.canonical_threshold
    if above and stability >= th.stability_threshold:
        return TermStatus.CANONICAL
    return TermStatus.VERNACULAR


def tally(directions: Sequence[VoteDirection]) -> tuple[int, int]:
    """(up, down) counts for a sequence of vote directions."""
    u = sum(1 for d in directions if d is VoteDirection.UP)
    return u, len(directions) - u
