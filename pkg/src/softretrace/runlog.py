"""Run persistence: manifests, per-step records, and CSV summaries.

JSONL is the source of truth (append-safe, one record per line, sorted
keys so byte-identical reruns are checkable with cmp).  CSVs are
derived, plot-friendly views with fixed, documented column sets:

    summary.csv      step, entropy, mode_mass, tail_mass, realized_factor
    hc_fraction.csv  step, modal_freq, high_confidence
    freq_bins.csv    step, bin_low, bin_high, accuracy, count
    rewards.csv      index, answer, f_base, f_r, r_base, r_final, advantage
"""
from __future__ import annotations

import csv
import datetime
import hashlib
import json
import subprocess
from dataclasses import dataclass
from importlib import metadata
from pathlib import Path

SUMMARY_COLUMNS = ["step", "entropy", "mode_mass", "tail_mass", "realized_factor"]
HC_COLUMNS = ["step", "modal_freq", "high_confidence"]
FREQ_BIN_COLUMNS = ["step", "bin_low", "bin_high", "accuracy", "count"]
REWARD_COLUMNS = ["index", "answer", "f_base", "f_r", "r_base", "r_final", "advantage"]


@dataclass(frozen=True)
class RunRecord:
    """One evolution step's diagnostics; key set is fixed, absent values
    are explicit nulls so every line parses against the same schema."""

    step: int
    entropy: float
    mode_mass: float
    tail_mass: float
    contrast_ratio: float | None
    realized_factor: float | None
    freq_table: dict[str, float]
    mean_reward: float | None = None
    high_confidence: bool | None = None
    underflow: bool = False

    def to_json(self) -> str:
        payload = {
            "step": self.step,
            "entropy": self.entropy,
            "mode_mass": self.mode_mass,
            "tail_mass": self.tail_mass,
            "contrast_ratio": self.contrast_ratio,
            "realized_factor": self.realized_factor,
            "freq_table": self.freq_table,
            "mean_reward": self.mean_reward,
            "high_confidence": self.high_confidence,
            "underflow": self.underflow,
        }
        return json.dumps(payload, sort_keys=True)


def _version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=2,
            cwd=Path(__file__).resolve().parent,
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    try:
        return "v" + metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unversioned"


@dataclass(frozen=True)
class RunManifest:
    run_id: str
    created_at: str
    config: dict
    seed: int
    version: str

    @classmethod
    def create(cls, config: dict, seed: int) -> "RunManifest":
        digest = hashlib.sha256(
            json.dumps(config, sort_keys=True).encode() + str(seed).encode()
        ).hexdigest()[:12]
        return cls(
            run_id=digest,
            created_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
            config=config,
            seed=seed,
            version=_version_string(),
        )

    def write(self, out_dir: Path) -> None:
        # the manifest lands before any step executes so a crashed run
        # is still attributable
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
        }
        (out_dir / "manifest.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_records(records: list[RunRecord], out_dir: Path) -> None:
    lines = [r.to_json() for r in records]
    (out_dir / "records.jsonl").write_text("\n".join(lines) + ("\n" if lines else ""))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1.0" if value else "0.0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])


def write_summary(records: list[RunRecord], out_dir: Path) -> None:
    rows = [
        {
            "step": r.step,
            "entropy": r.entropy,
            "mode_mass": r.mode_mass,
            "tail_mass": r.tail_mass,
            "realized_factor": r.realized_factor,
        }
        for r in records
    ]
    write_csv(out_dir / "summary.csv", SUMMARY_COLUMNS, rows)


def read_csv(path: Path) -> tuple[list[str], list[dict]]:
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [dict(zip(header, line)) for line in reader]
    return header, rows
