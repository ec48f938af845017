"""Monte Carlo pipeline over a synthetic answer world.

The world is a categorical answer distribution plus a two-knob
re-inference law: with probability kappa a re-inference repeats its
parent's answer (persistence); otherwise it lands on the correct answer
with probability lam (reflection) or redraws from the maternal
distribution.  This generative law is deliberately simple plumbing; it
exists to let the full sample / retrace / resample / score / update loop
run end to end with known statistics.

All randomness is drawn as raw uniform doubles from per-(seed, step,
pipeline) substreams, so serial and parallel execution of the n
per-maternal pipelines produce identical results and the draw sequence
is pinned by this module alone.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .answers import AnswerLabel, Origin, Trajectory, count_answers
from .dynamics import PolicyState, evolve_step
from .errors import EmptyBatch, OutOfRange
from .retrace import RetraceConfig, retrace
from .reward import RewardConfig, score_group

DEFAULT_BINS = ((0.0, 0.2), (0.2, 0.4), (0.4, 0.6), (0.6, 0.8), (0.8, 1.0))
HIGH_CONFIDENCE_THRESHOLD = 0.8

_TOKEN_SPACE = 1000


@dataclass(frozen=True)
class SyntheticWorld:
    maternal_dist: PolicyState
    correct_index: int
    kappa: float
    lam: float
    length_min: int = 8
    length_max: int = 24

    def __post_init__(self) -> None:
        if not (0 <= self.correct_index < self.maternal_dist.k):
            raise ValueError(f"correct_index {self.correct_index} out of range")
        if not (0.0 <= self.kappa <= 1.0):
            raise ValueError(f"kappa must be in [0,1], got {self.kappa}")
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"lam must be in [0,1], got {self.lam}")
        if self.length_min < 2 or self.length_max < self.length_min:
            raise ValueError(
                f"need 2 <= length_min <= length_max, got [{self.length_min}, {self.length_max}]"
            )

    @property
    def k(self) -> int:
        return self.maternal_dist.k


@dataclass(frozen=True)
class StepStats:
    """Empirical diagnostics for one evolution step, plus the post-step
    policy snapshot the run-log layer persists."""

    step: int
    modal_freq: float
    answer_stats: tuple[tuple[str, float, bool], ...]
    mean_reward: float
    empirical_entropy: float
    high_confidence: bool
    policy: PolicyState
    realized_factor: float | None
    underflow: bool

    def __post_init__(self) -> None:
        if not (0.0 < self.modal_freq <= 1.0):
            raise ValueError(f"modal_freq must be in (0,1], got {self.modal_freq}")


def _label(atom: int) -> AnswerLabel:
    return AnswerLabel(str(atom))


def _draw_atom(probs: tuple[float, ...], rng: np.random.Generator) -> int:
    u = rng.random()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if u < acc:
            return i
    return len(probs) - 1


def _draw_int(lo: int, hi: int, rng: np.random.Generator) -> int:
    # inclusive bounds, derived from a raw uniform so the stream stays
    # pinned by this module
    span = hi - lo + 1
    return lo + min(span - 1, int(rng.random() * span))


def _body_tokens(length: int, rng: np.random.Generator) -> list[int]:
    return [int(rng.random() * _TOKEN_SPACE) for _ in range(length)]


def pipeline_rng(seed: int, step: int, index: int) -> np.random.Generator:
    """Substream for maternal pipeline *index* at *step*."""
    return np.random.default_rng(np.random.SeedSequence((seed, step, index)))


def sample_maternal(world: SyntheticWorld, n: int, rng: np.random.Generator) -> list[Trajectory]:
    """Draw n maternal trajectories; the answer atom sits in the final token."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = []
    for _ in range(n):
        atom = _draw_atom(world.maternal_dist.probs, rng)
        length = _draw_int(world.length_min, world.length_max, rng)
        tokens = tuple(_body_tokens(length - 1, rng) + [atom])
        out.append(
            Trajectory(
                prompt_id="sim",
                tokens=tokens,
                origin=Origin.MATERNAL,
                answer=_label(atom),
            )
        )
    return out


def sample_reinference(
    world: SyntheticWorld,
    parent: Trajectory,
    anchor: int,
    m: int,
    rng: np.random.Generator,
    parent_index: int = 0,
) -> list[Trajectory]:
    """Draw m re-inference children of *parent* cut at *anchor*."""
    if parent.origin is not Origin.MATERNAL:
        raise ValueError("re-inference requires a maternal parent")
    if not (1 <= anchor <= len(parent.tokens) - 1):
        raise ValueError(f"anchor {anchor} invalid for {len(parent.tokens)} tokens")
    parent_atom = int(parent.tokens[-1])
    out = []
    for _ in range(m):
        u = rng.random()
        if u < world.kappa:
            atom = parent_atom
        elif u < world.kappa + (1.0 - world.kappa) * world.lam:
            atom = world.correct_index
        else:
            atom = _draw_atom(world.maternal_dist.probs, rng)
        length = max(anchor + 1, _draw_int(world.length_min, world.length_max, rng))
        tail = _body_tokens(length - anchor - 1, rng) + [atom]
        out.append(
            Trajectory(
                prompt_id=parent.prompt_id,
                tokens=tuple(parent.tokens[:anchor]) + tuple(tail),
                origin=Origin.REINFERENCE,
                parent_index=parent_index,
                anchor_index=anchor,
                answer=_label(atom),
            )
        )
    return out


def _empirical_entropy(freqs: list[float]) -> float:
    return -sum(f * math.log(f) for f in freqs if f > 0.0)


def simulate_run(
    world: SyntheticWorld,
    reward_config: RewardConfig,
    retrace_config: RetraceConfig,
    steps: int,
    update_eta: float,
    seed: int,
) -> tuple[list[StepStats], SyntheticWorld]:
    """Run the full loop for *steps* steps; returns stats and the final world.

    Each step: sample n maternal trajectories from the current answer
    distribution, retrace each, sample m re-inference children each,
    score the group, then tilt the distribution by exp(eta * advantage)
    where an atom's advantage is the mean reward of its maternal
    trajectories minus the group mean (unobserved atoms get zero).
    """
    if reward_config.m != retrace_config.m:
        raise ValueError(
            f"reward m={reward_config.m} and retrace m={retrace_config.m} disagree"
        )
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    n, m = reward_config.n, reward_config.m
    correct_label = _label(world.correct_index)
    current = world
    stats: list[StepStats] = []

    for step in range(1, steps + 1):
        maternal: list[Trajectory] = []
        children: list[Trajectory] = []
        for i in range(n):
            rng = pipeline_rng(seed, step, i)
            parent = sample_maternal(current, 1, rng)[0]
            maternal.append(parent)
            _, anchor = retrace(parent, retrace_config, rng)
            children.extend(
                sample_reinference(current, parent, anchor, m, rng, parent_index=i)
            )

        batch = score_group(maternal, children, reward_config)

        # mean reward per observed atom, relative to the group mean
        sums: dict[int, float] = {}
        counts: dict[int, int] = {}
        for traj, entry in zip(maternal, batch.entries):
            atom = int(traj.tokens[-1])
            sums[atom] = sums.get(atom, 0.0) + entry.r_final
            counts[atom] = counts.get(atom, 0) + 1
        adv = [0.0] * current.k
        for atom, total in sums.items():
            adv[atom] = total / counts[atom] - batch.baseline

        pre = current.maternal_dist
        post = evolve_step(pre, adv, update_eta)
        underflow = any(p > 0.0 and q == 0.0 for p, q in zip(pre.probs, post.probs))

        mode_pre = max(range(pre.k), key=lambda j: pre.probs[j])
        realized: float | None = None
        ci = world.correct_index
        if mode_pre != ci and pre.probs[ci] > 0.0 and post.probs[ci] > 0.0:
            realized = (post.probs[mode_pre] / post.probs[ci]) / (
                pre.probs[mode_pre] / pre.probs[ci]
            )

        # confidence diagnostics describe the policy's own samples, so
        # they are computed over the maternal group, not the combined
        # set (whose composition also reflects the re-inference law)
        maternal_set = count_answers([t.answer for t in maternal])
        total = maternal_set.total
        answer_stats = tuple(
            sorted(
                (lab.text, c / total, lab == correct_label)
                for lab, c in maternal_set.counts.items()
            )
        )
        freqs = [c / total for c in maternal_set.counts.values()]
        modal = max(freqs)

        current = dataclasses.replace(current, maternal_dist=post)
        stats.append(
            StepStats(
                step=step,
                modal_freq=modal,
                answer_stats=answer_stats,
                mean_reward=batch.baseline,
                empirical_entropy=_empirical_entropy(freqs),
                high_confidence=modal >= HIGH_CONFIDENCE_THRESHOLD,
                policy=post,
                realized_factor=realized,
                underflow=underflow,
            )
        )
    return stats, current


def high_confidence_fraction(modal_freqs: list[float] | tuple[float, ...]) -> float:
    """Fraction of entries at or above the 0.8 modal-frequency threshold."""
    if len(modal_freqs) == 0:
        raise EmptyBatch("high-confidence fraction over zero samples")
    hits = sum(1 for f in modal_freqs if f >= HIGH_CONFIDENCE_THRESHOLD)
    return hits / len(modal_freqs)


def accuracy_by_frequency_bin(
    samples: list[tuple[float, bool]],
    bins: tuple[tuple[float, float], ...] = DEFAULT_BINS,
) -> dict[tuple[float, float], tuple[float, int]]:
    """Per-bin (accuracy, count) over (frequency, is_correct) samples.

    Bins are half-open (low, high] and must partition (0, 1].  Empty
    bins are absent from the result, never reported as zero.
    """
    ordered = sorted(bins)
    if not ordered or ordered[0][0] != 0.0 or ordered[-1][1] != 1.0:
        raise ValueError("bins must cover (0, 1]")
    for (_, hi), (lo2, _) in zip(ordered, ordered[1:]):
        if hi != lo2:
            raise ValueError("bins must be contiguous and non-overlapping")
    correct: dict[tuple[float, float], int] = {}
    totals: dict[tuple[float, float], int] = {}
    for freq, is_correct in samples:
        if not (0.0 < freq <= 1.0):
            raise OutOfRange(f"frequency {freq} outside (0, 1]")
        for lo, hi in ordered:
            if lo < freq <= hi:
                totals[(lo, hi)] = totals.get((lo, hi), 0) + 1
                if is_correct:
                    correct[(lo, hi)] = correct.get((lo, hi), 0) + 1
                break
    return {
        b: (correct.get(b, 0) / t, t)
        for b, t in totals.items()
    }
