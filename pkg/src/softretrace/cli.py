"""Experiment runner: config files in, run directories out.

Every subcommand takes ``--config PATH --out DIR [--seed N]`` (the seed
flag overrides the config's seed).  Configs are JSON with a mandatory
``"schema": 1`` field; unknown keys are hard errors because a silently
ignored typo corrupts experiments.  Exit codes: 0 success, 2 config or
input-data error, 3 I/O or remote-transport failure.

Run directories are self-describing: a manifest lands before any step
executes, records.jsonl is the source of truth, and the CSVs are fixed-
column views for plotting (see runlog for the column sets).
"""
from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from .answers import AnswerLabel, Origin, Trajectory, normalize_answer
from .dynamics import (
    AdvantageField,
    DynamicsConfig,
    PolicyState,
    TailSelect,
    DESK_ETA,
    TRAINING_ETA,
    entropy,
)
from . import dynamics as dyn
from .errors import AuthFailure, ConfigError, RemoteError, SoftretraceError
from .mockserver import MockChatServer
from .perturb import PerturbConfig, RasterImage, gaussian_perturb, read_image, write_image
from .remote import RemoteConfig, generate_group
from .retrace import RetraceConfig, RetraceMode
from .reward import RewardConfig, RewardMode, score_group
from .runlog import (
    FREQ_BIN_COLUMNS,
    HC_COLUMNS,
    REWARD_COLUMNS,
    RunManifest,
    RunRecord,
    write_csv,
    write_records,
    write_summary,
)
from .sim import StepStats, SyntheticWorld, accuracy_by_frequency_bin, simulate_run

SCHEMA_VERSION = 1

ETA_PRESETS = {"desk": DESK_ETA, "training": TRAINING_ETA}

PAIRED_COMPARE_COLUMNS = [
    "step",
    "entropy_mv",
    "entropy_sfr",
    "entropy_delta",
    "hc_mv",
    "hc_sfr",
    "hc_delta",
    "tail_mv",
    "tail_sfr",
    "tail_delta",
]

BATCH_COMPARE_COLUMNS = ["step"] + [
    f"{stat}_{metric}_{arm}"
    for metric in ("hc", "tail", "entropy")
    for arm in ("mv", "sfr")
    for stat in ("mean", "min", "max")
]


def preset_path(name: str) -> Path:
    """Filesystem path of a bundled preset config."""
    return Path(str(resources.files("softretrace") / "presets" / name))


# ---------------------------------------------------------------- parsing


def _no_unknown(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} at {path}")


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise ConfigError(f"missing required key {key!r} at {path}")
    return obj[key]


def _enum(value: str, mapping: dict, path: str):
    if value not in mapping:
        raise ConfigError(f"{path}: expected one of {sorted(mapping)}, got {value!r}")
    return mapping[value]


def load_json_config(path: Path) -> dict:
    text = path.read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    if cfg.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"{path}: config must declare \"schema\": {SCHEMA_VERSION}")
    return cfg


def _wrap_value_error(fn, path: str):
    try:
        return fn()
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_reward(obj: dict, path: str) -> RewardConfig:
    _no_unknown(obj, {"n", "m", "gamma", "sfr_beta", "epsilon", "mode"}, path)
    mode = _enum(
        obj.get("mode", "sfr"),
        {"sfr": RewardMode.SFR, "majority_vote": RewardMode.MAJORITY_VOTE},
        f"{path}.mode",
    )
    return _wrap_value_error(
        lambda: RewardConfig(
            n=obj.get("n", 8),
            m=obj.get("m", 5),
            gamma=obj.get("gamma", 0.2),
            sfr_beta=obj.get("sfr_beta", 5.0),
            epsilon=obj.get("epsilon", 1e-8),
            mode=mode,
        ),
        path,
    )


def parse_retrace(obj: dict, path: str) -> RetraceConfig:
    _no_unknown(obj, {"omega", "mode", "m"}, path)
    mode = _enum(
        obj.get("mode", "fixed"),
        {"fixed": RetraceMode.FIXED, "uniform_random": RetraceMode.UNIFORM_RANDOM},
        f"{path}.mode",
    )
    return _wrap_value_error(
        lambda: RetraceConfig(omega=obj.get("omega", 0.7), mode=mode, m=obj.get("m", 5)),
        path,
    )


def parse_world(obj: dict, path: str) -> SyntheticWorld:
    _no_unknown(
        obj,
        {"maternal_probs", "correct_index", "kappa", "lam", "length_min", "length_max"},
        path,
    )
    probs = _require(obj, "maternal_probs", path)
    return _wrap_value_error(
        lambda: SyntheticWorld(
            maternal_dist=PolicyState(probs=tuple(float(p) for p in probs)),
            correct_index=_require(obj, "correct_index", path),
            kappa=_require(obj, "kappa", path),
            lam=_require(obj, "lam", path),
            length_min=obj.get("length_min", 8),
            length_max=obj.get("length_max", 24),
        ),
        path,
    )


def parse_remote(obj: dict, path: str, base_url: str | None = None) -> RemoteConfig:
    _no_unknown(
        obj,
        {
            "base_url",
            "model_name",
            "api_key_env",
            "temperature",
            "top_p",
            "max_tokens",
            "timeout_s",
            "max_concurrency",
            "retries",
            "backoff_s",
        },
        path,
    )
    url = base_url if base_url is not None else _require(obj, "base_url", path)
    return _wrap_value_error(
        lambda: RemoteConfig(
            base_url=url,
            model_name=obj.get("model_name", "mock-model"),
            api_key_env=obj.get("api_key_env"),
            temperature=obj.get("temperature", 1.0),
            top_p=obj.get("top_p", 1.0),
            max_tokens=obj.get("max_tokens", 512),
            timeout_s=obj.get("timeout_s", 30.0),
            max_concurrency=obj.get("max_concurrency", 4),
            retries=obj.get("retries", 2),
            backoff_s=obj.get("backoff_s", 0.25),
        ),
        path,
    )


def _jsonable(value):
    if isinstance(value, enum.Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(value).items()}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _effective_seed(cfg: dict, override: int | None) -> int:
    if override is not None:
        return override
    seed = cfg.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    return seed


# ---------------------------------------------------------------- dynamics


def cmd_dynamics(cfg: dict, out_dir: Path, seed: int) -> int:
    _no_unknown(
        cfg,
        {"schema", "initial_probs", "correct_index", "field", "eta", "eta_preset", "steps", "tail_select", "seed"},
        "config",
    )
    probs = _require(cfg, "initial_probs", "config")
    state = _wrap_value_error(
        lambda: PolicyState(
            probs=tuple(float(p) for p in probs),
            correct_index=cfg.get("correct_index"),
        ),
        "config.initial_probs",
    )
    if "eta" in cfg and "eta_preset" in cfg:
        raise ConfigError("config: give either eta or eta_preset, not both")
    if "eta_preset" in cfg:
        eta = _enum(cfg["eta_preset"], ETA_PRESETS, "config.eta_preset")
    else:
        eta = cfg.get("eta", DESK_ETA)
    field = _enum(
        _require(cfg, "field", "config"),
        {"mv": AdvantageField.MV, "sfr": AdvantageField.SFR},
        "config.field",
    )
    tail = _enum(
        cfg.get("tail_select", "largest_non_mode"),
        {"largest_non_mode": TailSelect.LARGEST_NON_MODE, "smallest": TailSelect.SMALLEST},
        "config.tail_select",
    )
    config = _wrap_value_error(
        lambda: DynamicsConfig(
            eta=eta, steps=_require(cfg, "steps", "config"), reward_field=field, tail_select=tail
        ),
        "config",
    )

    manifest = RunManifest.create({**cfg, "seed": seed, "resolved": _jsonable(config)}, seed)
    manifest.write(out_dir)
    records = dyn.run_dynamics(state, config)
    write_records(records, out_dir)
    write_summary(records, out_dir)
    return 0


# ---------------------------------------------------------------- simulate


def _sim_records(stats: list[StepStats], correct_index: int) -> list[RunRecord]:
    records = []
    for s in stats:
        probs = s.policy.probs
        mode = max(range(len(probs)), key=lambda i: probs[i])
        tail_mass = probs[correct_index]
        contrast = probs[mode] / tail_mass if tail_mass > 0.0 else None
        records.append(
            RunRecord(
                step=s.step,
                entropy=entropy(s.policy),
                mode_mass=probs[mode],
                tail_mass=tail_mass,
                contrast_ratio=contrast,
                realized_factor=s.realized_factor,
                freq_table={label: freq for label, freq, _ in s.answer_stats},
                mean_reward=s.mean_reward,
                high_confidence=s.high_confidence,
                underflow=s.underflow,
            )
        )
    return records


def _write_sim_outputs(stats: list[StepStats], out_dir: Path, correct_index: int) -> list[RunRecord]:
    records = _sim_records(stats, correct_index)
    write_records(records, out_dir)
    write_summary(records, out_dir)
    write_csv(
        out_dir / "hc_fraction.csv",
        HC_COLUMNS,
        [
            {"step": s.step, "modal_freq": s.modal_freq, "high_confidence": s.high_confidence}
            for s in stats
        ],
    )
    bin_rows = []
    for s in stats:
        samples = [(freq, is_correct) for _, freq, is_correct in s.answer_stats]
        for (lo, hi), (acc, count) in sorted(accuracy_by_frequency_bin(samples).items()):
            bin_rows.append(
                {"step": s.step, "bin_low": lo, "bin_high": hi, "accuracy": acc, "count": count}
            )
    write_csv(out_dir / "freq_bins.csv", FREQ_BIN_COLUMNS, bin_rows)
    return records


def _run_sim_arm(
    world: SyntheticWorld,
    reward: RewardConfig,
    retrace_cfg: RetraceConfig,
    steps: int,
    update_eta: float,
    seed: int,
    out_dir: Path,
    cfg: dict,
    arm: str,
) -> list[StepStats]:
    manifest = RunManifest.create(
        {**cfg, "seed": seed, "arm": arm, "reward_mode": reward.mode.value}, seed
    )
    manifest.write(out_dir)
    stats, _ = simulate_run(world, reward, retrace_cfg, steps, update_eta, seed)
    _write_sim_outputs(stats, out_dir, world.correct_index)
    return stats


def cmd_simulate(cfg: dict, out_dir: Path, seed: int) -> int:
    _no_unknown(
        cfg,
        {"schema", "world", "reward", "retrace", "steps", "update_eta", "seed", "compare_modes", "num_seeds"},
        "config",
    )
    world = parse_world(_require(cfg, "world", "config"), "config.world")
    reward = parse_reward(_require(cfg, "reward", "config"), "config.reward")
    retrace_cfg = parse_retrace(_require(cfg, "retrace", "config"), "config.retrace")
    steps = _require(cfg, "steps", "config")
    update_eta = cfg.get("update_eta", DESK_ETA)
    compare = cfg.get("compare_modes", False)
    num_seeds = cfg.get("num_seeds")
    if num_seeds is not None and not compare:
        raise ConfigError("config.num_seeds requires compare_modes = true")
    if num_seeds is not None and (not isinstance(num_seeds, int) or num_seeds < 1):
        raise ConfigError(f"config.num_seeds must be a positive integer, got {num_seeds!r}")

    top = RunManifest.create({**cfg, "seed": seed}, seed)
    top.write(out_dir)

    if not compare:
        stats, _ = simulate_run(world, reward, retrace_cfg, steps, update_eta, seed)
        _write_sim_outputs(stats, out_dir, world.correct_index)
        return 0

    arms = {
        "mv": dataclasses.replace(reward, mode=RewardMode.MAJORITY_VOTE),
        "sfr": dataclasses.replace(reward, mode=RewardMode.SFR),
    }

    if num_seeds is None:
        results = {
            arm: _run_sim_arm(
                world, arm_reward, retrace_cfg, steps, update_eta, seed, out_dir / arm, cfg, arm
            )
            for arm, arm_reward in arms.items()
        }
        rows = []
        for mv_s, sfr_s in zip(results["mv"], results["sfr"]):
            e_mv, e_sfr = entropy(mv_s.policy), entropy(sfr_s.policy)
            h_mv = 1.0 if mv_s.high_confidence else 0.0
            h_sfr = 1.0 if sfr_s.high_confidence else 0.0
            t_mv = mv_s.policy.probs[world.correct_index]
            t_sfr = sfr_s.policy.probs[world.correct_index]
            rows.append(
                {
                    "step": mv_s.step,
                    "entropy_mv": e_mv,
                    "entropy_sfr": e_sfr,
                    "entropy_delta": e_sfr - e_mv,
                    "hc_mv": h_mv,
                    "hc_sfr": h_sfr,
                    "hc_delta": h_sfr - h_mv,
                    "tail_mv": t_mv,
                    "tail_sfr": t_sfr,
                    "tail_delta": t_sfr - t_mv,
                }
            )
        write_csv(out_dir / "compare.csv", PAIRED_COMPARE_COLUMNS, rows)
        return 0

    # matched-seed batch: seed + k for k in [0, num_seeds), both arms per k
    tasks = [(arm, k) for arm in ("mv", "sfr") for k in range(num_seeds)]

    def run_task(task):
        arm, k = task
        return _run_sim_arm(
            world,
            arms[arm],
            retrace_cfg,
            steps,
            update_eta,
            seed + k,
            out_dir / arm / f"s{k:04d}",
            cfg,
            arm,
        )

    with ThreadPoolExecutor(max_workers=8) as pool:
        outputs = list(pool.map(run_task, tasks))
    by_arm: dict[str, list[list[StepStats]]] = {"mv": [], "sfr": []}
    for (arm, _), stats in zip(tasks, outputs):
        by_arm[arm].append(stats)

    def series(stats: list[StepStats], metric: str) -> list[float]:
        if metric == "hc":
            return [1.0 if s.high_confidence else 0.0 for s in stats]
        if metric == "tail":
            return [s.policy.probs[world.correct_index] for s in stats]
        return [entropy(s.policy) for s in stats]

    rows = []
    for idx in range(steps):
        row: dict = {"step": idx + 1}
        for metric in ("hc", "tail", "entropy"):
            for arm in ("mv", "sfr"):
                values = [series(run, metric)[idx] for run in by_arm[arm]]
                row[f"mean_{metric}_{arm}"] = sum(values) / len(values)
                row[f"min_{metric}_{arm}"] = min(values)
                row[f"max_{metric}_{arm}"] = max(values)
        rows.append(row)
    write_csv(out_dir / "compare.csv", BATCH_COMPARE_COLUMNS, rows)
    return 0


# ---------------------------------------------------------------- score


def cmd_score(cfg: dict, out_dir: Path, seed: int) -> int:
    _no_unknown(cfg, {"schema", "maternal", "reinference", "reward", "seed"}, "config")
    maternal_raw = _require(cfg, "maternal", "config")
    re_raw = _require(cfg, "reinference", "config")
    reward = parse_reward(_require(cfg, "reward", "config"), "config.reward")

    def as_trajectories(raw: list, origin: Origin) -> list[Trajectory]:
        out = []
        for i, answer in enumerate(raw):
            if not isinstance(answer, str):
                raise ConfigError(f"answer entries must be strings, got {answer!r}")
            kwargs = {}
            if origin is Origin.REINFERENCE:
                kwargs = {"parent_index": i // reward.m, "anchor_index": 1}
            out.append(
                Trajectory(
                    prompt_id="score",
                    tokens=(0, 1),
                    origin=origin,
                    answer=normalize_answer(answer),
                    **kwargs,
                )
            )
        return out

    maternal = as_trajectories(maternal_raw, Origin.MATERNAL)
    reinference = as_trajectories(re_raw, Origin.REINFERENCE)

    manifest = RunManifest.create({**cfg, "seed": seed}, seed)
    manifest.write(out_dir)
    batch = score_group(maternal, reinference, reward)

    rows = [
        {
            "index": i,
            "answer": e.answer.text,
            "f_base": e.f_base,
            "f_r": e.f_r,
            "r_base": e.r_base,
            "r_final": e.r_final,
            "advantage": e.advantage,
        }
        for i, e in enumerate(batch.entries)
    ]
    write_csv(out_dir / "rewards.csv", REWARD_COLUMNS, rows)

    header = f"{'answer':>12} {'f_base':>10} {'f_r':>10} {'r_base':>10} {'r_final':>10} {'advantage':>10}"
    print(header)
    for e in batch.entries:
        print(
            f"{e.answer.text:>12} {e.f_base:>10.6f} {e.f_r:>10.6f} "
            f"{e.r_base:>10.6f} {e.r_final:>10.6f} {e.advantage:>+10.6f}"
        )
    print(f"group baseline: {batch.baseline:.6f}")
    return 0


# ---------------------------------------------------------------- perturb


def cmd_perturb(cfg: dict, out_dir: Path, seed: int) -> int:
    _no_unknown(cfg, {"schema", "input_path", "synthetic", "sigma", "seed", "output_name"}, "config")
    has_path = "input_path" in cfg
    has_synth = "synthetic" in cfg
    if has_path == has_synth:
        raise ConfigError("config: give exactly one of input_path or synthetic")
    if has_synth:
        synth = cfg["synthetic"]
        _no_unknown(synth, {"width", "height", "value", "channels"}, "config.synthetic")
        image = _wrap_value_error(
            lambda: RasterImage.constant(
                width=_require(synth, "width", "config.synthetic"),
                height=_require(synth, "height", "config.synthetic"),
                value=_require(synth, "value", "config.synthetic"),
                channels=synth.get("channels", 1),
            ),
            "config.synthetic",
        )
    else:
        image = read_image(cfg["input_path"])
    sigma = _require(cfg, "sigma", "config")
    config = _wrap_value_error(lambda: PerturbConfig(sigma=sigma, seed=seed), "config.sigma")

    manifest = RunManifest.create({**cfg, "seed": seed}, seed)
    manifest.write(out_dir)

    perturbed = gaussian_perturb(image, config)
    default_name = "perturbed.pgm" if image.channels == 1 else "perturbed.ppm"
    write_image(perturbed, out_dir / cfg.get("output_name", default_name))

    before = image.pixels.astype(np.float64)
    after = perturbed.pixels.astype(np.float64)
    delta = after - before
    stats = {
        "width": image.width,
        "height": image.height,
        "channels": image.channels,
        "sigma": sigma,
        "seed": seed,
        "mean_abs_delta": float(np.mean(np.abs(delta))),
        "max_abs_delta": float(np.max(np.abs(delta))),
        "mean_delta": float(np.mean(delta)),
        "clipped_fraction": float(np.mean((after == 0) | (after == 255))),
    }
    (out_dir / "stats.json").write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n")
    print(f"mean |delta| = {stats['mean_abs_delta']:.4f} over {image.width}x{image.height}")
    return 0


# ---------------------------------------------------------------- rollout


def cmd_rollout(cfg: dict, out_dir: Path, seed: int) -> int:
    _no_unknown(
        cfg,
        {
            "schema",
            "prompt",
            "system_text",
            "n",
            "m",
            "retrace",
            "reward",
            "perturb",
            "image_path",
            "remote",
            "mock",
            "noise_per_rollout",
            "seed",
        },
        "config",
    )
    prompt = _require(cfg, "prompt", "config")
    n = _require(cfg, "n", "config")
    m = _require(cfg, "m", "config")
    retrace_cfg = parse_retrace(_require(cfg, "retrace", "config"), "config.retrace")
    reward = parse_reward(_require(cfg, "reward", "config"), "config.reward")
    perturb_cfg = None
    if "perturb" in cfg:
        _no_unknown(cfg["perturb"], {"sigma"}, "config.perturb")
        perturb_cfg = _wrap_value_error(
            lambda: PerturbConfig(sigma=_require(cfg["perturb"], "sigma", "config.perturb"), seed=seed),
            "config.perturb",
        )
    image = read_image(cfg["image_path"]) if "image_path" in cfg else None

    mock_cfg = cfg.get("mock")
    server = None
    try:
        if mock_cfg is not None:
            _no_unknown(mock_cfg, {"text", "latency_ms", "script"}, "config.mock")
            server = MockChatServer(
                default_text=mock_cfg.get("text", "Final answer: \\boxed{5}"),
                script=mock_cfg.get("script"),
                latency_s=mock_cfg.get("latency_ms", 0.0) / 1000.0,
            )
            server.start()
            remote = parse_remote(cfg.get("remote", {}), "config.remote", base_url=server.url)
        else:
            remote = parse_remote(_require(cfg, "remote", "config"), "config.remote")

        manifest = RunManifest.create({**cfg, "seed": seed}, seed)
        manifest.write(out_dir)

        wire: list[dict] = []
        maternal, children = generate_group(
            prompt=prompt,
            image=image,
            n=n,
            m=m,
            retrace_config=retrace_cfg,
            perturb_config=perturb_cfg,
            reward_config=reward,
            remote_config=remote,
            seed=seed,
            system_text=cfg.get("system_text"),
            noise_per_rollout=cfg.get("noise_per_rollout", True),
            wire=wire,
        )
    finally:
        if server is not None:
            server.stop()

    with (out_dir / "wire.jsonl").open("w") as fh:
        for entry in wire:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")

    with (out_dir / "trajectories.jsonl").open("w") as fh:
        for traj in maternal + children:
            prefix = ""
            if traj.origin is Origin.REINFERENCE:
                prefix = " ".join(str(t) for t in traj.tokens[: traj.anchor_index])
            fh.write(
                json.dumps(
                    {
                        "kind": traj.origin.value,
                        "prompt": prompt,
                        "prefix": prefix,
                        "text": " ".join(str(t) for t in traj.tokens),
                        "answer": traj.answer.text if traj.answer else None,
                        "anchor": traj.anchor_index,
                        "parent_index": traj.parent_index,
                    },
                    sort_keys=True,
                )
                + "\n"
            )

    batch = score_group(maternal, children, reward)
    rows = [
        {
            "index": i,
            "answer": e.answer.text,
            "f_base": e.f_base,
            "f_r": e.f_r,
            "r_base": e.r_base,
            "r_final": e.r_final,
            "advantage": e.advantage,
        }
        for i, e in enumerate(batch.entries)
    ]
    write_csv(out_dir / "rewards.csv", REWARD_COLUMNS, rows)
    print(
        f"rollout complete: {len(maternal)} maternal + {len(children)} re-inference "
        f"trajectories, group baseline {batch.baseline:.6f}"
    )
    return 0


# ---------------------------------------------------------------- entry


COMMANDS = {
    "dynamics": cmd_dynamics,
    "simulate": cmd_simulate,
    "score": cmd_score,
    "perturb": cmd_perturb,
    "rollout": cmd_rollout,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softretrace",
        description="retracing-resampling self-evolution toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "dynamics": "closed-form policy evolution with collapse diagnostics",
        "simulate": "Monte Carlo sample/retrace/resample/score/update loop",
        "score": "score explicit answer groups with frequency rewards",
        "perturb": "seeded Gaussian pixel noise over a PGM/PPM image",
        "rollout": "full rollout group against a chat-completion endpoint",
    }
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, type=Path, help="JSON config file")
        p.add_argument("--out", required=True, type=Path, help="output run directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.set_defaults(fn=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_json_config(args.config)
        seed = _effective_seed(cfg, args.seed)
        args.out.mkdir(parents=True, exist_ok=True)
        return args.fn(cfg, args.out, seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AuthFailure as exc:
        print(f"auth error: {exc}", file=sys.stderr)
        return 2
    except RemoteError as exc:
        print(f"remote error: {exc}", file=sys.stderr)
        return 3
    except SoftretraceError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
