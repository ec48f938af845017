"""Frequency rewards: softened scoring, majority-vote baseline, advantages.

The softened reward multiplies an answer's base frequency by
``gamma * tanh(beta * (f_r / (f_base + epsilon) - 1)) + 1``: answers that
gain frequency under re-inference are boosted, answers that lose it are
damped, and the multiplier stays inside [1-gamma, 1+gamma] so the reward
can never flip sign or exceed (1+gamma) * f_base.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .answers import AnswerLabel, AnswerMultiset, Trajectory, UNEXTRACTABLE, count_answers
from .errors import EmptyGroup, EmptySet, SetSizeMismatch


class RewardMode(enum.Enum):
    SFR = "sfr"
    MAJORITY_VOTE = "majority_vote"


class TieBreak(enum.Enum):
    # the only supported rule: every count-tied mode receives reward 1
    ALL_MODES_WIN = "all_modes_win"


@dataclass(frozen=True)
class RewardConfig:
    n: int = 8
    m: int = 5
    gamma: float = 0.2
    sfr_beta: float = 5.0
    epsilon: float = 1e-8
    mode: RewardMode = RewardMode.SFR
    tie_break: TieBreak = TieBreak.ALL_MODES_WIN

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError(f"n and m must be positive, got n={self.n} m={self.m}")
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError(f"gamma must be in [0,1), got {self.gamma}")
        if self.sfr_beta <= 0.0:
            raise ValueError(f"sfr_beta must be > 0, got {self.sfr_beta}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")


@dataclass(frozen=True)
class RewardEntry:
    """Scored view of one maternal trajectory."""

    answer: AnswerLabel
    f_base: float
    f_r: float
    r_base: float
    r_final: float
    advantage: float


@dataclass(frozen=True)
class RewardBatch:
    entries: tuple[RewardEntry, ...]
    baseline: float

    @property
    def rewards(self) -> tuple[float, ...]:
        return tuple(e.r_final for e in self.entries)

    @property
    def advantages(self) -> tuple[float, ...]:
        return tuple(e.advantage for e in self.entries)

    @property
    def mean_reward(self) -> float:
        return self.baseline


def base_frequency(answer: AnswerLabel, all_set: AnswerMultiset, n: int, m: int) -> float:
    """Count(answer, all_set) / ((m+1)*n); the set total must match."""
    expected = (m + 1) * n
    if all_set.total != expected:
        raise SetSizeMismatch(
            f"combined set totals {all_set.total}, expected (m+1)*n = {expected}"
        )
    return all_set.count(answer) / expected


def reinference_frequency(answer: AnswerLabel, re_set: AnswerMultiset, n: int, m: int) -> float:
    """Count(answer, re_set) / (m*n); the set total must match."""
    expected = m * n
    if re_set.total != expected:
        raise SetSizeMismatch(
            f"re-inference set totals {re_set.total}, expected m*n = {expected}"
        )
    return re_set.count(answer) / expected


def softened_reward(f_base: float, f_r: float, config: RewardConfig) -> float:
    """(gamma * tanh(beta * (f_r/(f_base+eps) - 1)) + 1) * f_base."""
    ratio = f_r / (f_base + config.epsilon)
    return (config.gamma * math.tanh(config.sfr_beta * (ratio - 1.0)) + 1.0) * f_base


def majority_vote_reward(
    answer: AnswerLabel, maternal_set: AnswerMultiset, tie_break: TieBreak = TieBreak.ALL_MODES_WIN
) -> float:
    """1.0 iff the answer's count ties the maximum in the maternal set."""
    if maternal_set.total == 0:
        raise EmptySet("majority vote over an empty answer set")
    assert tie_break is TieBreak.ALL_MODES_WIN
    return 1.0 if answer in maternal_set.modes() else 0.0


def group_advantage(rewards: list[float] | tuple[float, ...]) -> list[float]:
    """r_i - mean(r); sums to zero up to float noise."""
    if len(rewards) == 0:
        raise EmptyGroup("advantage over an empty reward group")
    mean = sum(rewards) / len(rewards)
    return [r - mean for r in rewards]


def _answer_of(traj: Trajectory) -> AnswerLabel:
    # a missing answer participates in counting via the sentinel so that
    # group denominators never drift
    return traj.answer if traj.answer is not None else UNEXTRACTABLE


def score_group(
    maternal: list[Trajectory] | tuple[Trajectory, ...],
    reinference: list[Trajectory] | tuple[Trajectory, ...],
    config: RewardConfig,
) -> RewardBatch:
    """Score n maternal trajectories against their m*n re-inferences.

    Builds the combined answer multiset, computes per-maternal base and
    re-inference frequencies, applies the configured reward (softened or
    majority-vote), and returns group-mean-relative advantages over the
    n maternal rewards only.
    """
    if len(maternal) != config.n:
        raise SetSizeMismatch(f"expected {config.n} maternal trajectories, got {len(maternal)}")
    if len(reinference) != config.m * config.n:
        raise SetSizeMismatch(
            f"expected m*n = {config.m * config.n} re-inference trajectories, "
            f"got {len(reinference)}"
        )
    maternal_answers = [_answer_of(t) for t in maternal]
    re_answers = [_answer_of(t) for t in reinference]
    maternal_set = count_answers(maternal_answers)
    re_set = count_answers(re_answers)
    all_set = maternal_set.union(re_set)

    rewards = []
    freqs = []
    for a in maternal_answers:
        fb = base_frequency(a, all_set, config.n, config.m)
        fr = reinference_frequency(a, re_set, config.n, config.m)
        freqs.append((fb, fr))
        if config.mode is RewardMode.SFR:
            rewards.append(softened_reward(fb, fr, config))
        else:
            rewards.append(majority_vote_reward(a, maternal_set, config.tie_break))

    advantages = group_advantage(rewards)
    baseline = sum(rewards) / len(rewards)
    entries = tuple(
        RewardEntry(
            answer=a,
            f_base=fb,
            f_r=fr,
            r_base=fb,
            r_final=r,
            advantage=adv,
        )
        for a, (fb, fr), r, adv in zip(maternal_answers, freqs, rewards, advantages)
    )
    return RewardBatch(entries=entries, baseline=baseline)
