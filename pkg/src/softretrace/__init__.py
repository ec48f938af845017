"""softretrace: a retracing-resampling self-evolution toolkit.

Core loop: sample a group of answers, truncate each trajectory at a
positional anchor, resample continuations from the anchors, score every
answer by smoothed frequency statistics over the combined group, and
tilt the answer distribution by the group-relative advantages.  The
dynamics module carries the closed-form version of that loop; the sim
module carries the Monte Carlo version; perturb and remote support
image-perturbed rollouts against chat-completion endpoints.
"""

from .answers import (
    AnswerLabel,
    AnswerMultiset,
    Origin,
    Trajectory,
    UNEXTRACTABLE,
    count_answers,
    extract_boxed_answer,
    normalize_answer,
)
from .dynamics import (
    AdvantageField,
    DynamicsConfig,
    PolicyState,
    TailSelect,
    contrast_ratio,
    contrastive_factor,
    entropy,
    evolve_step,
    mv_advantage,
    run_dynamics,
    sfr_advantage,
)
from .perturb import PerturbConfig, RasterImage, gaussian_perturb, read_image, write_image
from .remote import GenerationRequest, RemoteConfig, complete, generate_group
from .retrace import RetraceConfig, RetraceMode, anchor_index, build_reinference_prompt, retrace
from .reward import (
    RewardBatch,
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
from .sim import (
    StepStats,
    SyntheticWorld,
    accuracy_by_frequency_bin,
    high_confidence_fraction,
    sample_maternal,
    sample_reinference,
    simulate_run,
)

__all__ = [
    "AnswerLabel",
    "AnswerMultiset",
    "Origin",
    "Trajectory",
    "UNEXTRACTABLE",
    "count_answers",
    "extract_boxed_answer",
    "normalize_answer",
    "AdvantageField",
    "DynamicsConfig",
    "PolicyState",
    "TailSelect",
    "contrast_ratio",
    "contrastive_factor",
    "entropy",
    "evolve_step",
    "mv_advantage",
    "run_dynamics",
    "sfr_advantage",
    "PerturbConfig",
    "RasterImage",
    "gaussian_perturb",
    "read_image",
    "write_image",
    "GenerationRequest",
    "RemoteConfig",
    "complete",
    "generate_group",
    "RetraceConfig",
    "RetraceMode",
    "anchor_index",
    "build_reinference_prompt",
    "retrace",
    "RewardBatch",
    "RewardConfig",
    "RewardMode",
    "TieBreak",
    "base_frequency",
    "group_advantage",
    "majority_vote_reward",
    "reinference_frequency",
    "score_group",
    "softened_reward",
    "StepStats",
    "SyntheticWorld",
    "accuracy_by_frequency_bin",
    "high_confidence_fraction",
    "sample_maternal",
    "sample_reinference",
    "simulate_run",
]
