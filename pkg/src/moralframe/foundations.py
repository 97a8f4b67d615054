"""Core moral-foundation vocabulary shared by every other module.

Five foundations (care, fairness, loyalty, authority, purity), the three
framing presets built on them, per-text confidence profiles, and the loaders
for the word->foundation lexicon and the aspect->foundation map.

All types here are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Mapping


class MoralFoundation(str, Enum):
    """One of the five moral foundations."""

    CARE = "care"
    FAIRNESS = "fairness"
    LOYALTY = "loyalty"
    AUTHORITY = "authority"
    PURITY = "purity"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


FOUNDATIONS: tuple[MoralFoundation, ...] = tuple(MoralFoundation)

INDIVIDUALIZING: frozenset[MoralFoundation] = frozenset(
    {MoralFoundation.CARE, MoralFoundation.FAIRNESS}
)
BINDING: frozenset[MoralFoundation] = frozenset(
    {MoralFoundation.LOYALTY, MoralFoundation.AUTHORITY, MoralFoundation.PURITY}
)


class Framing(str, Enum):
    """Moral framing preset: which foundations an argument is allowed to express."""

    INDIVIDUALIZING = "individualizing"
    BINDING = "binding"
    UNCONTROLLED = "uncontrolled"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def framing_to_morals(framing: Framing) -> frozenset[MoralFoundation] | None:
    """Resolve a framing preset to its target foundation set.

    ``uncontrolled`` returns None, meaning the moral filter is disabled.
    """
    if framing == Framing.INDIVIDUALIZING:
        return INDIVIDUALIZING
    if framing == Framing.BINDING:
        return BINDING
    return None


def parse_foundation(label: str) -> MoralFoundation:
    """Parse a foundation label case-insensitively; raises ValueError if unknown."""
    try:
        return MoralFoundation(label.strip().lower())
    except ValueError:
        known = ", ".join(f.value for f in FOUNDATIONS)
        raise ValueError(f"unknown moral foundation {label!r} (expected one of: {known})")


@dataclass(frozen=True)
class MoralProfile:
    """Per-foundation confidence scores in [0, 1] for a text span."""

    care: float = 0.0
    fairness: float = 0.0
    loyalty: float = 0.0
    authority: float = 0.0
    purity: float = 0.0

    def __post_init__(self) -> None:
        for f in FOUNDATIONS:
            score = getattr(self, f.value)
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"{f.value} score {score} outside [0, 1]")

    def score(self, foundation: MoralFoundation) -> float:
        return getattr(self, foundation.value)

    def above(self, threshold: float) -> frozenset[MoralFoundation]:
        """Foundations whose score is strictly above the threshold."""
        return frozenset(f for f in FOUNDATIONS if self.score(f) > threshold)

    def as_dict(self) -> dict[str, float]:
        return {f.value: self.score(f) for f in FOUNDATIONS}

    @classmethod
    def from_dict(cls, scores: Mapping[str, float]) -> "MoralProfile":
        return cls(**{f.value: float(scores.get(f.value, 0.0)) for f in FOUNDATIONS})


class LexiconError(ValueError):
    """A lexicon or aspect-map source failed to parse or validate."""


def _as_lines(source: str | IO[str]) -> Iterable[str]:
    if isinstance(source, str):
        return io.StringIO(source)
    return source


@dataclass(frozen=True)
class MoralLexicon:
    """Word -> [(foundation, weight)] lookup used by the lexicon scorer.

    Words are nonempty, lowercase, and whitespace-free; weights are in (0, 1].
    """

    entries: Mapping[str, tuple[tuple[MoralFoundation, float], ...]] = field(
        default_factory=dict
    )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def hits(self, word: str) -> tuple[tuple[MoralFoundation, float], ...]:
        return self.entries.get(word, ())

    def words_for(self, foundation: MoralFoundation) -> frozenset[str]:
        return frozenset(
            w for w, pairs in self.entries.items() if any(f == foundation for f, _ in pairs)
        )

    def to_csv(self) -> str:
        """Serialize back to the lexicon CSV format (word,foundation,weight)."""
        out = io.StringIO()
        writer = csv.writer(out)
        for word in sorted(self.entries):
            for foundation, weight in sorted(self.entries[word], key=lambda p: p[0].value):
                writer.writerow([word, foundation.value, repr(weight)])
        return out.getvalue()


def load_moral_lexicon(source: str | IO[str]) -> MoralLexicon:
    """Load a moral lexicon from CSV rows ``word,foundation[,weight]``.

    The header row is optional. A missing weight column defaults to 1.0 so
    plain word lists can serve as lexicons. Duplicate (word, foundation) rows
    keep the maximum weight. Foundation labels match case-insensitively.
    """
    merged: dict[str, dict[MoralFoundation, float]] = {}
    reader = csv.reader(_as_lines(source))
    for lineno, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        cells = [c.strip() for c in row]
        if lineno == 1 and cells[0].lower() == "word":
            continue
        if len(cells) not in (2, 3):
            raise LexiconError(
                f"line {lineno}: expected word,foundation[,weight], got {len(cells)} columns"
            )
        word = cells[0].lower()
        if not word or any(ch.isspace() for ch in word):
            raise LexiconError(f"line {lineno}: invalid lexicon word {cells[0]!r}")
        try:
            foundation = parse_foundation(cells[1])
        except ValueError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from exc
        weight = 1.0
        if len(cells) == 3 and cells[2]:
            try:
                weight = float(cells[2])
            except ValueError:
                raise LexiconError(f"line {lineno}: weight {cells[2]!r} is not a number")
        if not 0.0 < weight <= 1.0:
            raise LexiconError(f"line {lineno}: weight {weight} outside (0, 1]")
        slot = merged.setdefault(word, {})
        slot[foundation] = max(slot.get(foundation, 0.0), weight)
    return MoralLexicon(
        entries={w: tuple(sorted(fs.items(), key=lambda p: p[0].value)) for w, fs in merged.items()}
    )


@dataclass(frozen=True)
class AspectMoralMap:
    """Aspect term -> foundation set, used for distant supervision."""

    entries: Mapping[str, frozenset[MoralFoundation]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def morals_for(self, aspect: str) -> frozenset[MoralFoundation]:
        return self.entries.get(aspect.strip().lower(), frozenset())

    def to_tsv(self) -> str:
        lines = []
        for aspect in sorted(self.entries):
            labels = ",".join(sorted(f.value for f in self.entries[aspect]))
            lines.append(f"{aspect}\t{labels}")
        return "\n".join(lines) + ("\n" if lines else "")


def load_aspect_map(source: str | IO[str]) -> AspectMoralMap:
    """Load an aspect map from TSV rows ``aspect<TAB>foundation[,foundation...]``.

    Foundations listed for the same aspect across rows are unioned; every
    mapped set ends up nonempty.
    """
    merged: dict[str, set[MoralFoundation]] = {}
    for lineno, raw in enumerate(_as_lines(source), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"line {lineno}: expected aspect<TAB>foundations, got {line!r}")
        aspect = parts[0].strip().lower()
        if not aspect:
            raise LexiconError(f"line {lineno}: empty aspect term")
        labels = [p for p in (s.strip() for s in parts[1].split(",")) if p]
        if not labels:
            raise LexiconError(f"line {lineno}: no foundations listed for {aspect!r}")
        try:
            foundations = {parse_foundation(label) for label in labels}
        except ValueError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from exc
        merged.setdefault(aspect, set()).update(foundations)
    return AspectMoralMap(entries={a: frozenset(fs) for a, fs in merged.items()})


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable thresholds and limits used across the generation pipeline."""

    moral_confidence_threshold: float = 0.5
    claim_threshold: float = 0.8
    evidence_threshold: float = 0.6
    window_size: int = 12
    min_len: int = 6
    max_len: int = 60
    per_query_limit: int = 10_000
    max_themes: int = 4
    dedupe_threshold: float = 0.8

    def __post_init__(self) -> None:
        for name in ("moral_confidence_threshold", "claim_threshold", "evidence_threshold", "dedupe_threshold"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} {value} outside [0, 1]")
        for name in ("window_size", "min_len", "max_len", "per_query_limit", "max_themes"):
            value = getattr(self, name)
            if not (isinstance(value, int) and value > 0):
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.min_len > self.max_len:
            raise ValueError(f"min_len {self.min_len} > max_len {self.max_len}")

    @classmethod
    def from_mapping(cls, values: Mapping[str, str | float | int]) -> "PipelineConfig":
        """Build a config from a string-keyed mapping (e.g. an INI section)."""
        kwargs: dict[str, float | int] = {}
        for f in (
            "moral_confidence_threshold",
            "claim_threshold",
            "evidence_threshold",
            "dedupe_threshold",
        ):
            if f in values:
                kwargs[f] = float(values[f])
        for f in ("window_size", "min_len", "max_len", "per_query_limit", "max_themes"):
            if f in values:
                kwargs[f] = int(values[f])
        unknown = set(values) - {
            "moral_confidence_threshold",
            "claim_threshold",
            "evidence_threshold",
            "dedupe_threshold",
            "window_size",
            "min_len",
            "max_len",
            "per_query_limit",
            "max_themes",
        }
        if unknown:
            raise ValueError(f"unknown pipeline config keys: {sorted(unknown)}")
        return cls(**kwargs)
