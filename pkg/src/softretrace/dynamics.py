"""Closed-form policy evolution and its collapse diagnostics.

Each step multiplies every atom's probability by exp(eta * advantage)
and renormalizes.  Under the majority-vote advantage field the
mode-to-tail ratio grows by exp(eta) per step regardless of the current
distribution; under the softened field it grows by exp(eta * (mode mass
- tail mass)) < exp(eta), which is the whole collapse-damping story in
one inequality.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateUpdate, ZeroDenominator
from .runlog import RunRecord

# eta = 1/beta_kl.  Training-scale regularization (beta_kl = 0.01) gives
# eta = 100, which collapses in a single step and hides the per-step
# structure; desk runs default to eta = 1 and the theory is uniform in
# eta > 0.
DESK_ETA = 1.0
TRAINING_ETA = 100.0

_FLUSH = 1e-300


class AdvantageField(enum.Enum):
    MV = "mv"
    SFR = "sfr"


class TailSelect(enum.Enum):
    LARGEST_NON_MODE = "largest_non_mode"
    SMALLEST = "smallest"


@dataclass(frozen=True)
class PolicyState:
    """Probability vector over K answer atoms, optionally tagging which
    atom is the correct one for tail-mass diagnostics."""

    probs: tuple[float, ...]
    correct_index: int | None = None

    def __post_init__(self) -> None:
        if len(self.probs) < 1:
            raise ValueError("PolicyState needs at least one atom")
        if any(p < 0.0 for p in self.probs):
            raise ValueError("probabilities must be non-negative")
        total = sum(self.probs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        if self.correct_index is not None and not (0 <= self.correct_index < len(self.probs)):
            raise ValueError(f"correct_index {self.correct_index} out of range")

    @property
    def k(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class DynamicsConfig:
    eta: float = DESK_ETA
    steps: int = 1
    reward_field: AdvantageField = AdvantageField.MV
    tail_select: TailSelect = TailSelect.LARGEST_NON_MODE

    def __post_init__(self) -> None:
        if self.eta <= 0.0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")


def mv_advantage(state: PolicyState) -> list[float]:
    """1 - rho for every mode atom, -rho elsewhere (rho = max prob)."""
    rho = max(state.probs)
    return [(1.0 if p == rho else 0.0) - rho for p in state.probs]


def sfr_advantage(state: PolicyState) -> list[float]:
    """P(x) minus the collision probability sum(P(y)^2)."""
    collision = sum(p * p for p in state.probs)
    return [p - collision for p in state.probs]


def evolve_step(state: PolicyState, advantages: list[float], eta: float) -> PolicyState:
    """Exponential tilt: P'(x) proportional to P(x) * exp(eta * A(x)).

    The max advantage is subtracted inside the exponential (a no-op
    after normalization) so large eta cannot overflow.  Results below
    1e-300 are flushed to zero and the state renormalized.
    """
    if len(advantages) != state.k:
        raise ValueError(f"advantage vector length {len(advantages)} != K = {state.k}")
    if eta <= 0.0:
        raise ValueError(f"eta must be > 0, got {eta}")
    a_max = max(advantages)
    weights = [p * math.exp(eta * (a - a_max)) for p, a in zip(state.probs, advantages)]
    total = sum(weights)
    if total == 0.0:
        raise DegenerateUpdate("all update numerators vanished")
    probs = [w / total for w in weights]
    if any(0.0 < p < _FLUSH for p in probs):
        probs = [p if p >= _FLUSH else 0.0 for p in probs]
        total = sum(probs)
        probs = [p / total for p in probs]
    return PolicyState(probs=tuple(probs), correct_index=state.correct_index)


def contrast_ratio(state: PolicyState, i: int, j: int) -> float:
    """probs[i] / probs[j]."""
    if state.probs[j] == 0.0:
        raise ZeroDenominator(f"atom {j} has zero probability")
    return state.probs[i] / state.probs[j]


def contrastive_factor(delta_r: float, eta: float) -> float:
    """Per-step multiplicative ratio growth exp(eta * delta_r)."""
    if eta <= 0.0:
        raise ValueError(f"eta must be > 0, got {eta}")
    return math.exp(eta * delta_r)


def entropy(state: PolicyState) -> float:
    """Shannon entropy in nats, with 0 * log 0 taken as 0."""
    return -sum(p * math.log(p) for p in state.probs if p > 0.0)


def _mode_index(probs: tuple[float, ...]) -> int:
    return max(range(len(probs)), key=lambda i: probs[i])


def _tail_index(probs: tuple[float, ...], mode: int, select: TailSelect) -> int | None:
    candidates = [i for i in range(len(probs)) if i != mode]
    if not candidates:
        return None
    if select is TailSelect.SMALLEST:
        return min(candidates, key=lambda i: probs[i])
    return max(candidates, key=lambda i: probs[i])


def advantage_field(state: PolicyState, field: AdvantageField) -> list[float]:
    if field is AdvantageField.MV:
        return mv_advantage(state)
    return sfr_advantage(state)


def run_dynamics(initial: PolicyState, config: DynamicsConfig) -> list[RunRecord]:
    """Iterate the configured advantage field for config.steps steps.

    One record per step, after the update.  The realized factor is the
    growth of the pre-step mode-vs-tail ratio across the step; the
    recorded contrast_ratio describes the post-step state on its own
    terms.  Both are null when no tail atom exists (K = 1) or the tail
    has already hit zero probability.
    """
    state = initial
    records: list[RunRecord] = []
    for step in range(1, config.steps + 1):
        pre = state
        mode_pre = _mode_index(pre.probs)
        tail_pre = _tail_index(pre.probs, mode_pre, config.tail_select)
        adv = advantage_field(pre, config.reward_field)
        state = evolve_step(pre, adv, config.eta)
        underflow = any(p > 0.0 and q == 0.0 for p, q in zip(pre.probs, state.probs))

        realized: float | None = None
        if tail_pre is not None and pre.probs[tail_pre] > 0.0 and state.probs[tail_pre] > 0.0:
            before = pre.probs[mode_pre] / pre.probs[tail_pre]
            after = state.probs[mode_pre] / state.probs[tail_pre]
            realized = after / before

        mode_post = _mode_index(state.probs)
        tail_post = _tail_index(state.probs, mode_post, config.tail_select)
        contrast: float | None = None
        tail_mass = 0.0
        if tail_post is not None:
            tail_mass = state.probs[tail_post]
            if state.probs[tail_post] > 0.0:
                contrast = state.probs[mode_post] / state.probs[tail_post]

        records.append(
            RunRecord(
                step=step,
                entropy=entropy(state),
                mode_mass=state.probs[mode_post],
                tail_mass=tail_mass,
                contrast_ratio=contrast,
                realized_factor=realized,
                freq_table={str(i): p for i, p in enumerate(state.probs)},
                underflow=underflow,
            )
        )
    return records
