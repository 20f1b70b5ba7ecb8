"""Consensus mathematics: worked examples against independent oracles, plus
the algebraic properties as hypothesis tests."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vocabregistry.errors import ValidationFailed
from vocabregistry.models import TermStatus, VoteDirection
from vocabregistry.scoring import (
    Thresholds,
    Voter,
    VoteSlate,
    VoterRole,
    applicability_decay,
    classify,
    interaction_bump,
    raw_score,
    reputation,
    stability_update,
    vote_weight,
    weighted_score,
)

UP, DOWN = VoteDirection.UP, VoteDirection.DOWN


def brute_force_score(t, rows, moderator_multiplier=2.0, followed_multiplier=1.25):
    """Independent oracle: per-voter weights computed via the ratio-first
    float path, summed longhand."""
    total_rep = sum(rep for rep, _, _ in rows)
    v = len(rows)
    up_sum = 0.0
    all_sum = 0.0
    for rep, direction, role in rows:
        r_i = rep / total_rep if total_rep else 1.0 / v
        w = 1.0 + r_i * (t - v)
        if role == "moderator":
            w *= moderator_multiplier
        elif role == "followed":
            w *= followed_multiplier
        all_sum += w
        if direction == "up":
            up_sum += w
    return up_sum / all_sum


def make_slate(t, rows):
    role_map = {"plain": VoterRole.PLAIN, "moderator": VoterRole.MODERATOR,
                "followed": VoterRole.FOLLOWED_BY_CUSTODIAN}
    voters = [
        Voter(user=f"u{i}", reputation=rep,
              direction=UP if d == "up" else DOWN, role=role_map[role])
        for i, (rep, d, role) in enumerate(rows)
    ]
    return VoteSlate(t=t, voters=voters)


class TestRawScore:
    def test_direct_substitution(self):
        assert raw_score(3, 1) == 0.75

    def test_no_votes_default(self):
        assert raw_score(0, 0) == 0.5

    def test_all_down(self):
        assert raw_score(0, 5) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValidationFailed):
            raw_score(-1, 0)

    def test_configurable_default(self):
        assert raw_score(0, 0, Thresholds(no_vote_default=0.4)) == 0.4


class TestVoteWeight:
    def test_worked_example(self):
        assert vote_weight(4, 10, 10, 3) == pytest.approx(3.8, abs=1e-12)
        assert vote_weight(2, 10, 10, 3) == pytest.approx(2.4, abs=1e-12)

    def test_full_participation_weight_is_one(self):
        for r_i in (0.0, 1.0, 7.3, 1000.0):
            assert vote_weight(r_i, 1000.0, 12, 12) == 1.0

    def test_zero_total_reputation_preserves_sum(self):
        t, v = 10, 4
        weights = [vote_weight(0.0, 0.0, t, v) for _ in range(v)]
        assert sum(weights) == pytest.approx(t, abs=1e-9)

    def test_no_voters_is_caller_error(self):
        with pytest.raises(ValidationFailed):
            vote_weight(1.0, 1.0, 10, 0)


class TestWeightedScore:
    def test_worked_example_exact(self):
        slate = make_slate(10, [(4, "up", "plain"), (4, "up", "plain"), (2, "down", "plain")])
        assert weighted_score(slate) == 0.76

    def test_worked_example_matches_oracle(self):
        rows = [(4, "up", "plain"), (4, "up", "plain"), (2, "down", "plain")]
        assert weighted_score(make_slate(10, rows)) == pytest.approx(
            brute_force_score(10, rows), abs=1e-12
        )

    def test_moderator_down_vote_drops_score(self):
        rows = [(4, "up", "plain"), (4, "up", "plain"), (2, "down", "moderator")]
        score = weighted_score(make_slate(10, rows))
        assert score == pytest.approx(7.6 / 12.4, abs=1e-12)
        assert score < 0.75  # no longer canonical-eligible

    def test_followed_voter_weighting(self):
        rows = [(4, "up", "followed"), (4, "up", "plain"), (2, "down", "plain")]
        assert weighted_score(make_slate(10, rows)) == pytest.approx(
            (3.8 * 1.25 + 3.8) / (3.8 * 1.25 + 3.8 + 2.4), abs=1e-12
        )

    def test_empty_slate_default(self):
        assert weighted_score(VoteSlate(t=10, voters=[])) == 0.5

    def test_full_participation_reduces_to_raw(self):
        rows = [(3.0, "up", "plain")] * 4 + [(3.0, "down", "plain")] * 2
        assert weighted_score(make_slate(6, rows)) == raw_score(4, 2)

    def test_more_voters_than_users_rejected(self):
        with pytest.raises(ValidationFailed):
            make_slate(1, [(1, "up", "plain"), (1, "down", "plain")])


class TestReputation:
    def test_fresh_user(self):
        assert reputation(False, 0, 0) == 1.0

    def test_complete_profile_with_activity(self):
        assert reputation(True, 5, 10) == 3.0

    def test_saturation(self):
        assert reputation(True, 1000, 1000) == 4.0

    @given(
        st.booleans(),
        st.integers(0, 2000), st.integers(0, 2000),
        st.integers(0, 2000), st.integers(0, 2000),
    )
    def test_monotone(self, complete, f1, f2, a1, a2):
        lo = reputation(complete, min(f1, f2), min(a1, a2))
        hi = reputation(complete, max(f1, f2), max(a1, a2))
        assert hi >= lo
        assert reputation(True, f1, a1) >= reputation(False, f1, a1)


class TestStability:
    def test_changed_penalty(self):
        assert stability_update(1.0, "changed") == pytest.approx(0.90, abs=1e-12)

    def test_unreachable_penalty(self):
        assert stability_update(0.90, "unreachable") == pytest.approx(0.55, abs=1e-12)

    @given(st.floats(0.0, 1.0))
    def test_unchanged_identity(self, x):
        assert stability_update(x, "unchanged") == x

    def test_aged_accrual(self):
        assert stability_update(0.0, "aged", 15.0) == 0.5
        assert stability_update(0.0, "aged", 45.0) == 1.0

    def test_floor_at_zero(self):
        assert stability_update(0.05, "unreachable") == 0.0


class TestApplicability:
    def test_one_half_life(self):
        assert applicability_decay(0.8, 180.0) == pytest.approx(0.4, abs=1e-9)

    @given(st.floats(0.0, 1.0))
    def test_zero_days_identity(self, x):
        assert applicability_decay(x, 0.0) == x

    def test_interaction_bonus_clamped(self):
        assert interaction_bump(0.98) == 1.0
        assert interaction_bump(0.5) == pytest.approx(0.55, abs=1e-12)

    @given(st.floats(0.0, 1.0), st.floats(0.0, 400.0), st.floats(0.0, 400.0))
    def test_decay_semigroup(self, x, a, b):
        once = applicability_decay(x, a + b)
        twice = applicability_decay(applicability_decay(x, a), b)
        assert twice == pytest.approx(once, abs=1e-12)


class TestClassify:
    def test_canonical_above_threshold_with_stability(self):
        assert classify(0.76, 1.0) is TermStatus.CANONICAL

    def test_deprecated_below_threshold(self):
        assert classify(0.20, 1.0) is TermStatus.DEPRECATED

    def test_vernacular_default(self):
        assert classify(0.50, 0.0) is TermStatus.VERNACULAR

    def test_thresholds_are_strict(self):
        # "exceeds" / "falls below": the boundary values stay vernacular
        assert classify(0.75, 1.0) is TermStatus.VERNACULAR
        assert classify(0.25, 1.0) is TermStatus.VERNACULAR

    def test_non_strict_flip_changes_only_the_boundary(self):
        lax = Thresholds(canonical_strict=False)
        assert classify(0.76, 1.0, lax) is TermStatus.CANONICAL
        assert classify(0.75, 1.0, lax) is TermStatus.CANONICAL
        assert classify(0.75, 1.0) is TermStatus.VERNACULAR

    def test_canonical_needs_stability(self):
        assert classify(0.9, 0.5) is TermStatus.VERNACULAR
        assert classify(0.9, 0.75) is TermStatus.CANONICAL

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_total_and_single_valued(self, consensus, stability):
        status = classify(consensus, stability)
        assert status in (TermStatus.VERNACULAR, TermStatus.CANONICAL, TermStatus.DEPRECATED)
        # the three predicate regions partition the unit square
        regions = [
            consensus < 0.25,
            (consensus > 0.75) and stability >= 0.75,
            not (consensus < 0.25) and not ((consensus > 0.75) and stability >= 0.75),
        ]
        assert sum(regions) == 1
        assert [TermStatus.DEPRECATED, TermStatus.CANONICAL, TermStatus.VERNACULAR][
            regions.index(True)
        ] is status


@st.composite
def plain_slates(draw, max_t=80, min_v=1):
    t = draw(st.integers(min_value=max(1, min_v), max_value=max_t))
    v = draw(st.integers(min_value=min_v, max_value=t))
    reps = draw(st.lists(
        st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False),
        min_size=v, max_size=v,
    ))
    dirs = draw(st.lists(st.sampled_from([UP, DOWN]), min_size=v, max_size=v))
    voters = [Voter(f"u{i}", reps[i], dirs[i]) for i in range(v)]
    return VoteSlate(t=t, voters=voters)


class TestSlateProperties:
    @given(plain_slates())
    def test_weight_sum_identity(self, slate):
        v = len(slate.voters)
        r_total = sum(voter.reputation for voter in slate.voters)
        total = sum(
            vote_weight(voter.reputation, r_total, slate.t, v) for voter in slate.voters
        )
        assert abs(total - slate.t) <= 1e-9 * slate.t

    @given(plain_slates())
    def test_bounded(self, slate):
        assert 0.0 <= weighted_score(slate) <= 1.0

    @given(plain_slates())
    def test_matches_brute_force(self, slate):
        rows = [(v.reputation, "up" if v.direction is UP else "down", "plain")
                for v in slate.voters]
        assert weighted_score(slate) == pytest.approx(
            brute_force_score(slate.t, rows), abs=1e-9
        )

    @given(plain_slates(max_t=60), st.floats(min_value=1e-3, max_value=1e3))
    def test_up_vote_monotone(self, slate, new_rep):
        if len(slate.voters) >= slate.t:
            return
        before = weighted_score(slate)
        grown = VoteSlate(
            t=slate.t,
            voters=slate.voters + [Voter("new", new_rep, UP)],
        )
        assert weighted_score(grown) >= before - 1e-12

    @given(plain_slates(max_t=60), st.floats(min_value=1e-3, max_value=1e3))
    def test_down_vote_antitone(self, slate, new_rep):
        if len(slate.voters) >= slate.t:
            return
        before = weighted_score(slate)
        grown = VoteSlate(
            t=slate.t,
            voters=slate.voters + [Voter("new", new_rep, DOWN)],
        )
        assert weighted_score(grown) <= before + 1e-12

    @given(plain_slates(), st.sampled_from([0.001, 0.5, 2.0, 1000.0]))
    def test_reputation_scale_invariance(self, slate, c):
        scaled = VoteSlate(
            t=slate.t,
            voters=[Voter(v.user, v.reputation * c, v.direction, v.role) for v in slate.voters],
        )
        assert weighted_score(scaled) == pytest.approx(weighted_score(slate), abs=1e-12)


class TestThresholdsValidation:
    def test_defaults_valid(self):
        Thresholds().validate()

    def test_ordering_enforced(self):
        with pytest.raises(ValidationFailed):
            Thresholds(deprecate_threshold=0.8, canonical_threshold=0.7).validate()

    def test_followed_below_moderator(self):
        with pytest.raises(ValidationFailed):
            Thresholds(followed_multiplier=3.0, moderator_multiplier=2.0).validate()

    def test_penalty_range(self):
        with pytest.raises(ValidationFailed):
            Thresholds(mismatch_penalty=0.0).validate()
