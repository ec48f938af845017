"""Retracing: anchor computation, truncation, and prompt rebuilding.

A maternal trajectory is cut at a positional anchor and re-inference
resumes from the surviving prefix.  The anchor is clamped into
[1, L-1]: an empty prefix would be plain regeneration and a full-length
prefix leaves nothing to re-infer, so both are excluded.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .answers import Origin, Trajectory
from .errors import EmptyPrefix, TrajectoryTooShort


class RetraceMode(enum.Enum):
    FIXED = "fixed"
    UNIFORM_RANDOM = "uniform_random"


@dataclass(frozen=True)
class RetraceConfig:
    """Retracing rate, mode, and re-inference fan-out per maternal."""

    omega: float = 0.7
    mode: RetraceMode = RetraceMode.FIXED
    m: int = 5

    def __post_init__(self) -> None:
        if self.mode is RetraceMode.FIXED and not (0.0 < self.omega < 1.0):
            raise ValueError(f"omega must be in (0,1) for fixed mode, got {self.omega}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")


def anchor_index(length: int, omega: float) -> int:
    """clamp(floor(omega * length), 1, length - 1).

    Raises TrajectoryTooShort for length < 2, where no strict prefix
    exists.
    """
    if length < 2:
        raise TrajectoryTooShort(f"length {length} admits no strict prefix")
    return max(1, min(length - 1, math.floor(omega * length)))


def retrace(trajectory: Trajectory, config: RetraceConfig, rng=None) -> tuple[tuple, int]:
    """Truncate a maternal trajectory; returns (prefix tokens, anchor).

    In FIXED mode the anchor is a pure function of (length, omega).  In
    UNIFORM_RANDOM mode omega is drawn fresh from U(0,1) per call, so a
    seeded rng is required.
    """
    if trajectory.origin is not Origin.MATERNAL:
        raise ValueError("retrace applies to maternal trajectories only")
    length = len(trajectory.tokens)
    if length < 2:
        raise TrajectoryTooShort(f"trajectory of {length} tokens cannot be retraced")
    if config.mode is RetraceMode.UNIFORM_RANDOM:
        if rng is None:
            raise ValueError("uniform-random retracing requires an rng")
        omega = rng.random()
    else:
        omega = config.omega
    anchor = max(1, min(length - 1, math.floor(omega * length)))
    return trajectory.tokens[:anchor], anchor


def build_reinference_prompt(prompt: tuple, prefix: tuple) -> tuple:
    """Concatenate the original prompt with the retraced prefix."""
    if len(prefix) == 0:
        raise EmptyPrefix("re-inference prompt requires a non-empty prefix")
    return tuple(prompt) + tuple(prefix)
