import numpy as np
import pytest
from hypothesis import given, strategies as st

from softretrace.answers import Origin, Trajectory
from softretrace.errors import EmptyPrefix, TrajectoryTooShort
from softretrace.retrace import (
    RetraceConfig,
    RetraceMode,
    anchor_index,
    build_reinference_prompt,
    retrace,
)


def _maternal(tokens):
    return Trajectory(prompt_id="p", tokens=tuple(tokens), origin=Origin.MATERNAL)


def test_anchor_examples():
    assert anchor_index(10, 0.7) == 7
    assert anchor_index(3, 0.1) == 1  # floor gives 0, clamped up
    assert anchor_index(5, 0.9) == 4


def test_anchor_too_short():
    with pytest.raises(TrajectoryTooShort):
        anchor_index(1, 0.5)


@given(st.integers(min_value=2, max_value=10_000), st.floats(min_value=1e-9, max_value=1 - 1e-9))
def test_anchor_stays_in_bounds(length, omega):
    anchor = anchor_index(length, omega)
    assert 1 <= anchor <= length - 1


@given(st.integers(min_value=2, max_value=500))
def test_anchor_monotone_in_omega(length):
    grid = [i / 64 for i in range(1, 64)]
    anchors = [anchor_index(length, w) for w in grid]
    assert anchors == sorted(anchors)


def test_retrace_fixed_prefix():
    traj = _maternal(range(1, 11))
    prefix, anchor = retrace(traj, RetraceConfig(omega=0.7, m=5))
    assert anchor == 7
    assert prefix == tuple(range(1, 8))


def test_retrace_smallest_legal_trajectory():
    traj = _maternal([1, 2])
    for omega in (0.01, 0.5, 0.99):
        prefix, anchor = retrace(traj, RetraceConfig(omega=omega, m=1))
        assert (prefix, anchor) == ((1,), 1)


def test_retrace_rejects_short_and_reinference():
    with pytest.raises(TrajectoryTooShort):
        retrace(_maternal([1]), RetraceConfig())
    child = Trajectory(
        prompt_id="p", tokens=(1, 2, 3), origin=Origin.REINFERENCE, parent_index=0, anchor_index=1
    )
    with pytest.raises(ValueError):
        retrace(child, RetraceConfig())


def test_uniform_random_deterministic_under_seed():
    traj = _maternal(range(10))
    config = RetraceConfig(mode=RetraceMode.UNIFORM_RANDOM, m=2)
    first = retrace(traj, config, np.random.default_rng(99))
    second = retrace(traj, config, np.random.default_rng(99))
    assert first == second
    assert 1 <= first[1] <= 9


def test_uniform_random_requires_rng():
    with pytest.raises(ValueError):
        retrace(_maternal(range(10)), RetraceConfig(mode=RetraceMode.UNIFORM_RANDOM))


def test_build_prompt_concat():
    assert build_reinference_prompt(("p1", "p2"), ("y1", "y2", "y3")) == (
        "p1",
        "p2",
        "y1",
        "y2",
        "y3",
    )


def test_build_prompt_empty_prompt_edge():
    assert build_reinference_prompt((), ("y1",)) == ("y1",)


def test_build_prompt_lengths():
    prompt = tuple(range(8))
    prefix = tuple(range(100, 107))
    out = build_reinference_prompt(prompt, prefix)
    assert len(out) == 15
    assert out[:8] == prompt


def test_build_prompt_rejects_empty_prefix():
    with pytest.raises(EmptyPrefix):
        build_reinference_prompt((1, 2), ())


@given(
    st.integers(min_value=2, max_value=200),
    st.floats(min_value=1e-6, max_value=1 - 1e-6),
)
def test_prefix_is_strict_and_contiguous(length, omega):
    traj = _maternal(range(length))
    prefix, anchor = retrace(traj, RetraceConfig(omega=omega, m=1))
    assert 0 < len(prefix) < length
    assert prefix == traj.tokens[:anchor]


def test_fan_out():
    config = RetraceConfig(omega=0.5, m=4)
    maternal = [_maternal(range(5 + i)) for i in range(3)]
    prompts = []
    for traj in maternal:
        prefix, _ = retrace(traj, config)
        prompts.extend(build_reinference_prompt(("q",), prefix) for _ in range(config.m))
    assert len(prompts) == 12


def test_config_validation():
    with pytest.raises(ValueError):
        RetraceConfig(omega=0.0)
    with pytest.raises(ValueError):
        RetraceConfig(omega=1.0)
    with pytest.raises(ValueError):
        RetraceConfig(m=0)
    # omega is unused when every call draws fresh
    RetraceConfig(omega=0.7, mode=RetraceMode.UNIFORM_RANDOM, m=3)
