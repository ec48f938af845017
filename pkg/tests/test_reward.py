import math

import pytest
from hypothesis import given, strategies as st

from softretrace.answers import AnswerLabel, Origin, Trajectory, UNEXTRACTABLE, count_answers
from softretrace.errors import EmptyGroup, EmptySet, SetSizeMismatch
from softretrace.reward import (
    RewardConfig,
    RewardMode,
    TieBreak,
    base_frequency,
    group_advantage,
    majority_vote_reward,
    reinference_frequency,
    score_group,
    softened_reward,
)

A = AnswerLabel("a")
B = AnswerLabel("b")
C = AnswerLabel("c")


def _maternal(answer, idx=0):
    return Trajectory(
        prompt_id="p", tokens=(1, 2), origin=Origin.MATERNAL, answer=answer
    )


def _child(answer, parent):
    return Trajectory(
        prompt_id="p",
        tokens=(1, 2),
        origin=Origin.REINFERENCE,
        parent_index=parent,
        anchor_index=1,
        answer=answer,
    )


def _group(maternal_labels, re_labels):
    maternal = [_maternal(a) for a in maternal_labels]
    per_parent = len(re_labels) // len(maternal_labels)
    reinference = [
        _child(a, i // per_parent) for i, a in enumerate(re_labels)
    ]
    return maternal, reinference


def test_base_frequency_example():
    config = RewardConfig(n=2, m=2)
    all_set = count_answers([A, A, A, B, B, C])
    assert base_frequency(A, all_set, config.n, config.m) == 0.5
    assert base_frequency(B, all_set, config.n, config.m) == pytest.approx(1 / 3)
    assert base_frequency(AnswerLabel("zzz"), all_set, config.n, config.m) == 0.0


def test_reinference_frequency_example():
    config = RewardConfig(n=2, m=2)
    re_set = count_answers([A, A, B, C])
    assert reinference_frequency(A, re_set, config.n, config.m) == 0.5
    assert reinference_frequency(C, re_set, config.n, config.m) == 0.25


def test_frequency_total_mismatch():
    config = RewardConfig(n=2, m=2)
    with pytest.raises(SetSizeMismatch):
        base_frequency(A, count_answers([A]), config.n, config.m)
    with pytest.raises(SetSizeMismatch):
        reinference_frequency(A, count_answers([A] * 5), config.n, config.m)


def test_softened_reward_worked_values():
    config = RewardConfig(n=8, m=5, gamma=0.2, sfr_beta=5.0)
    # a: 16 of 48 combined, 10 of 40 re-inferred; b: 32 of 48, 30 of 40
    r_a = softened_reward(16 / 48, 10 / 40, config)
    r_b = softened_reward(32 / 48, 30 / 40, config)
    assert r_a == pytest.approx(0.276781, abs=1e-6)
    assert r_b == pytest.approx(0.740613, abs=1e-6)
    # the losing answer is damped below its base frequency, the gaining
    # answer boosted above it
    assert r_a < 16 / 48 < (16 / 48) * 1.2
    assert 32 / 48 < r_b < (32 / 48) * 1.2


def test_softened_reward_gamma_zero_is_base():
    config = RewardConfig(gamma=0.0)
    for fb, fr in [(0.5, 0.1), (0.25, 0.25), (0.125, 0.9)]:
        assert softened_reward(fb, fr, config) == fb


@given(
    st.floats(min_value=1e-6, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=0.999),
)
def test_softened_reward_multiplier_bounds(f_base, f_r, gamma):
    config = RewardConfig(gamma=gamma)
    r = softened_reward(f_base, f_r, config)
    assert (1.0 - gamma) * f_base - 1e-12 <= r <= (1.0 + gamma) * f_base + 1e-12


@given(st.floats(min_value=1e-3, max_value=1.0))
def test_softened_reward_monotone_in_f_r(f_base):
    config = RewardConfig()
    grid = [i / 16 for i in range(17)]
    vals = [softened_reward(f_base, fr, config) for fr in grid]
    assert all(lo <= hi for lo, hi in zip(vals, vals[1:]))


def test_softened_reward_neutral_when_frequency_holds():
    # f_r == f_base leaves the reward at f_base up to the epsilon guard
    config = RewardConfig()
    for fb in (0.05, 0.25, 0.5, 1.0):
        r = softened_reward(fb, fb, config)
        assert abs(r - fb) <= config.gamma * config.sfr_beta * config.epsilon


def test_majority_vote_unique_mode():
    ms = count_answers([A, A, A, B])
    assert majority_vote_reward(A, ms) == 1.0
    assert majority_vote_reward(B, ms) == 0.0
    assert majority_vote_reward(C, ms) == 0.0


def test_majority_vote_ties_all_win():
    ms = count_answers([A, A, B, B, C])
    assert majority_vote_reward(A, ms) == 1.0
    assert majority_vote_reward(B, ms) == 1.0
    assert majority_vote_reward(C, ms) == 0.0


def test_majority_vote_empty_set():
    with pytest.raises(EmptySet):
        majority_vote_reward(A, count_answers([]))


def test_group_advantage_example():
    adv = group_advantage([1.0, 0.0, 0.0, 1.0])
    assert adv == [0.5, -0.5, -0.5, 0.5]


def test_group_advantage_empty():
    with pytest.raises(EmptyGroup):
        group_advantage([])


@given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=32))
def test_group_advantage_zero_sum(rewards):
    assert sum(group_advantage(rewards)) == pytest.approx(0.0, abs=1e-9)


def test_score_group_worked_case():
    maternal, reinference = _group([A] * 6 + [B] * 2, [A] * 10 + [B] * 30)
    batch = score_group(maternal, reinference, RewardConfig(n=8, m=5))
    assert batch.rewards[0] == pytest.approx(0.276781, abs=1e-6)
    assert batch.rewards[7] == pytest.approx(0.740613, abs=1e-6)
    assert batch.entries[0].f_base == pytest.approx(16 / 48)
    assert batch.entries[0].f_r == pytest.approx(10 / 40)
    assert batch.entries[7].f_base == pytest.approx(32 / 48)
    assert batch.entries[7].f_r == pytest.approx(30 / 40)
    assert sum(batch.advantages) == pytest.approx(0.0, abs=1e-12)
    # the answer that gained frequency under re-inference wins the group
    assert batch.advantages[7] > 0 > batch.advantages[0]
    assert batch.mean_reward == pytest.approx(sum(batch.rewards) / 8)


def test_score_group_majority_vote_mode():
    maternal, reinference = _group([A] * 6 + [B] * 2, [B] * 40)
    config = RewardConfig(n=8, m=5, mode=RewardMode.MAJORITY_VOTE)
    batch = score_group(maternal, reinference, config)
    # vote is over the maternal group alone; re-inference counts do not move it
    assert batch.rewards == (1.0,) * 6 + (0.0,) * 2
    assert batch.advantages[0] == pytest.approx(0.25)
    assert batch.advantages[6] == pytest.approx(-0.75)


def test_score_group_sentinel_for_missing_answers():
    maternal = [_maternal(A), _maternal(None)]
    reinference = [_child(None, 0), _child(A, 0), _child(A, 1), _child(A, 1)]
    batch = score_group(maternal, reinference, RewardConfig(n=2, m=2))
    assert batch.entries[1].answer == UNEXTRACTABLE
    # sentinel answers share one bucket: 2 of 6 combined, 1 of 4 re-inferred
    assert batch.entries[1].f_base == pytest.approx(2 / 6)
    assert batch.entries[1].f_r == pytest.approx(1 / 4)


def test_score_group_size_validation():
    maternal, reinference = _group([A, B], [A, A, B, B])
    with pytest.raises(SetSizeMismatch):
        score_group(maternal, reinference, RewardConfig(n=3, m=2))
    with pytest.raises(SetSizeMismatch):
        score_group(maternal, reinference[:3], RewardConfig(n=2, m=2))


def test_score_group_frequencies_partition():
    maternal, reinference = _group([A, B, C, A], [B] * 4 + [C] * 4)
    batch = score_group(maternal, reinference, RewardConfig(n=4, m=2))
    distinct = {}
    for e in batch.entries:
        distinct[e.answer] = e.f_base
    # base frequencies over the distinct answers present anywhere sum to 1
    all_answers = count_answers(
        [e.answer for e in batch.entries]
    ).union(count_answers([B] * 4 + [C] * 4))
    total = sum(
        base_frequency(a, count_answers([A, B, C, A] + [B] * 4 + [C] * 4), 4, 2)
        for a in all_answers.counts
    )
    assert total == pytest.approx(1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        RewardConfig(n=0)
    with pytest.raises(ValueError):
        RewardConfig(m=0)
    with pytest.raises(ValueError):
        RewardConfig(gamma=1.0)
    with pytest.raises(ValueError):
        RewardConfig(gamma=-0.1)
    with pytest.raises(ValueError):
        RewardConfig(sfr_beta=0.0)
    with pytest.raises(ValueError):
        RewardConfig(epsilon=0.0)


def test_tie_break_enum_is_closed():
    assert list(TieBreak) == [TieBreak.ALL_MODES_WIN]
