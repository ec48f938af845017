"""Answer extraction, canonicalization, and multiset counting.

Answers are compared by exact string equality after normalization.  No
numeric or symbolic equivalence is attempted: "0.5" and "1/2" are
different answers on purpose, because frequency counting over surface
forms is the contract the reward layer depends on.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import UnextractableAnswer

_BOXED = "\\boxed"


@dataclass(frozen=True)
class AnswerLabel:
    """A canonical answer string; always non-empty."""

    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("AnswerLabel text must be non-empty")


# Reserved label for trajectories whose generation or extraction failed.
# It participates in counting like any other answer so that group
# denominators stay fixed at (m+1)*n.
UNEXTRACTABLE = AnswerLabel("<unextractable>")


class Origin(enum.Enum):
    MATERNAL = "maternal"
    REINFERENCE = "reinference"


@dataclass(frozen=True)
class Trajectory:
    """One sampled response: token sequence plus answer bookkeeping.

    Tokens are abstract ids (ints) in synthetic mode and
    whitespace-delimited words (strs) in remote mode; only positions
    matter to the retracing layer.
    """

    prompt_id: str
    tokens: tuple
    origin: Origin
    parent_index: int | None = None
    anchor_index: int | None = None
    answer: AnswerLabel | None = None

    def __post_init__(self) -> None:
        if self.origin is Origin.REINFERENCE:
            if self.parent_index is None or self.anchor_index is None:
                raise ValueError(
                    "re-inference trajectories require parent_index and anchor_index"
                )
        if self.anchor_index is not None and self.anchor_index < 1:
            raise ValueError("anchor_index must be >= 1")


@dataclass
class AnswerMultiset:
    """Counts per answer label; zero-count entries are never stored."""

    counts: dict[AnswerLabel, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label, c in self.counts.items():
            if c <= 0:
                raise ValueError(f"zero or negative count for {label.text!r}")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def count(self, label: AnswerLabel) -> int:
        return self.counts.get(label, 0)

    def modes(self) -> set[AnswerLabel]:
        """All labels tied at the maximum count; empty for an empty set."""
        if not self.counts:
            return set()
        top = max(self.counts.values())
        return {a for a, c in self.counts.items() if c == top}

    def union(self, other: "AnswerMultiset") -> "AnswerMultiset":
        merged = dict(self.counts)
        for label, c in other.counts.items():
            merged[label] = merged.get(label, 0) + c
        return AnswerMultiset(merged)


def extract_boxed_answer(text: str) -> str | None:
    """Content of the last balanced ``\\boxed{...}`` in *text*, else None.

    The scan is brace-balanced so nested groups like ``\\sqrt{65}``
    survive intact.  Later occurrences win: models restate, and the
    final statement is the intended answer.
    """
    starts = []
    idx = text.find(_BOXED)
    while idx != -1:
        starts.append(idx)
        idx = text.find(_BOXED, idx + 1)
    for start in reversed(starts):
        pos = start + len(_BOXED)
        # tolerate spaces between \boxed and the brace
        while pos < len(text) and text[pos] == " ":
            pos += 1
        if pos >= len(text) or text[pos] != "{":
            continue
        depth = 0
        for end in range(pos, len(text)):
            ch = text[end]
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    return text[pos + 1 : end]
        # unbalanced here; try an earlier occurrence
    return None


def _surrounding_brace_matches(s: str) -> bool:
    # True only when the opening brace at 0 closes at the final char,
    # so "{a},{b}" is left alone.
    depth = 0
    for i, ch in enumerate(s):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i == len(s) - 1
    return False


def normalize_answer(raw: str) -> AnswerLabel:
    """Canonicalize *raw* to an AnswerLabel.

    Trims outer whitespace, collapses internal whitespace runs to one
    space, and strips surrounding ``$...$`` or ``{...}`` pairs.
    Stripping iterates to a fixed point so the operation is idempotent
    even on multiply-wrapped input like ``{{14}}``.
    """
    s = raw
    while True:
        prev = s
        s = " ".join(s.split())
        if len(s) >= 2 and s[0] == "$" and s[-1] == "$" and "$" not in s[1:-1]:
            s = s[1:-1]
        elif len(s) >= 2 and s[0] == "{" and s[-1] == "}" and _surrounding_brace_matches(s):
            s = s[1:-1]
        if s == prev:
            break
    if not s:
        raise UnextractableAnswer(f"answer normalized to empty: {raw!r}")
    return AnswerLabel(s)


def count_answers(answers: list[AnswerLabel] | tuple[AnswerLabel, ...]) -> AnswerMultiset:
    """Tally labels into a multiset; total always equals len(answers)."""
    counts: dict[AnswerLabel, int] = {}
    for a in answers:
        counts[a] = counts.get(a, 0) + 1
    return AnswerMultiset(counts)
