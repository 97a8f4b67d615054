"""Moral scoring of sentences, aggregation and filtering, and the
distant-supervision dataset builder.

Scorers are pure given their configuration and safe for concurrent use.
Supervision (aspect-based labels) and prediction (scorer output) stay on
independent paths by design.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Protocol, Sequence

import httpx

from .corpus import Sentence
from .foundations import (
    FOUNDATIONS,
    AspectMoralMap,
    MoralFoundation,
    MoralLexicon,
    MoralProfile,
)


class MoralScorer(Protocol):
    """Anything that can assign a per-foundation confidence profile to a sentence."""

    def score(self, sentence: Sentence) -> MoralProfile: ...


def score_sentence_morals_lexicon(
    sentence: Sentence, lexicon: MoralLexicon, normalize: bool = True
) -> MoralProfile:
    """Lexicon scorer: per-foundation sum of hit weights, capped at 1.

    With ``normalize`` (the default) the sum is divided by the token count so
    thresholds are length-independent; without it the raw weight sum is used,
    replicating a plain frequency baseline.
    """
    totals = {f: 0.0 for f in FOUNDATIONS}
    for token in sentence.tokens:
        for foundation, weight in lexicon.hits(token):
            totals[foundation] += weight
    scale = len(sentence.tokens) if normalize else 1
    return MoralProfile(**{f.value: min(1.0, totals[f] / scale) for f in FOUNDATIONS})


@dataclass(frozen=True)
class LexiconMoralScorer:
    """Default MoralScorer backed by a word->foundation lexicon."""

    lexicon: MoralLexicon
    normalize: bool = True

    def score(self, sentence: Sentence) -> MoralProfile:
        return score_sentence_morals_lexicon(sentence, self.lexicon, self.normalize)


class ScorerTransportError(RuntimeError):
    """The external scorer endpoint could not be reached."""


class ScorerProtocolError(RuntimeError):
    """The external scorer endpoint answered outside its wire contract."""


@dataclass(frozen=True)
class ExternalMoralScorer:
    """MoralScorer backed by a remote service.

    Wire contract: POST ``{"text": ...}`` to the endpoint; the response body is
    an object with one score in [0, 1] per foundation.
    """

    endpoint: str
    timeout: float = 10.0

    def score(self, sentence: Sentence) -> MoralProfile:
        try:
            response = httpx.post(
                self.endpoint, json={"text": sentence.text}, timeout=self.timeout
            )
            response.raise_for_status()
            payload = response.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise ScorerTransportError(f"scorer endpoint {self.endpoint}: {exc}") from exc
        if not isinstance(payload, dict):
            raise ScorerProtocolError(f"scorer returned non-object payload: {payload!r}")
        scores = {}
        for f in FOUNDATIONS:
            if f.value not in payload:
                raise ScorerProtocolError(f"scorer response missing {f.value!r}")
            value = payload[f.value]
            if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
                raise ScorerProtocolError(f"{f.value} score {value!r} outside [0, 1]")
            scores[f.value] = float(value)
        return MoralProfile(**scores)


def aggregate_text_morals(
    profiles: Sequence[MoralProfile], threshold: float
) -> frozenset[MoralFoundation]:
    """Union of foundations scored strictly above ``threshold`` over all sentences."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    morals: set[MoralFoundation] = set()
    for profile in profiles:
        morals |= profile.above(threshold)
    return frozenset(morals)


def filter_by_target_morals(
    sentence_morals: frozenset[MoralFoundation] | set[MoralFoundation],
    target: frozenset[MoralFoundation] | None,
) -> bool:
    """Moral filter: with a target set, keep only nonempty subsets of it.

    Without a target (uncontrolled framing) everything is kept.
    """
    if target is None:
        return True
    return bool(sentence_morals) and set(sentence_morals) <= set(target)


# --- distant supervision ----------------------------------------------------


class DatasetEmptyError(RuntimeError):
    """No corpus example received any moral label."""


@dataclass(frozen=True)
class LabeledExample:
    """A text with distantly-supervised moral labels and their trigger aspects."""

    text: str
    topic: str
    morals: frozenset[MoralFoundation]
    provenance: Mapping[MoralFoundation, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.morals:
            raise ValueError("labeled example must carry at least one moral")
        if not set(self.provenance) <= set(self.morals):
            raise ValueError("provenance keys must be a subset of the morals")


@dataclass(frozen=True)
class DistantDataset:
    train: tuple[LabeledExample, ...]
    validation: tuple[LabeledExample, ...]
    topic_split: tuple[frozenset[str], frozenset[str]]


def distant_label(
    text: str, aspects: Sequence[str], aspect_map: AspectMoralMap
) -> frozenset[MoralFoundation]:
    """Union of mapped foundations over the text's aspects; unmapped aspects add nothing."""
    morals: set[MoralFoundation] = set()
    for aspect in aspects:
        morals |= aspect_map.morals_for(aspect)
    return frozenset(morals)


def label_with_provenance(
    aspects: Sequence[str], aspect_map: AspectMoralMap
) -> tuple[frozenset[MoralFoundation], dict[MoralFoundation, tuple[str, ...]]]:
    triggers: dict[MoralFoundation, list[str]] = {}
    for aspect in aspects:
        for foundation in aspect_map.morals_for(aspect):
            bucket = triggers.setdefault(foundation, [])
            if aspect not in bucket:
                bucket.append(aspect)
    return frozenset(triggers), {f: tuple(a) for f, a in triggers.items()}


def _foundation_counts(examples: Iterable[LabeledExample]) -> dict[MoralFoundation, int]:
    counts = {f: 0 for f in FOUNDATIONS}
    for example in examples:
        for foundation in example.morals:
            counts[foundation] += 1
    return counts


def _greedy_downsample(
    examples: Sequence[LabeledExample], quota: int
) -> list[LabeledExample]:
    # Keep lowest-ingest-order examples; drop any example that would push one
    # of its foundations over the quota.
    kept: list[LabeledExample] = []
    counts = {f: 0 for f in FOUNDATIONS}
    for example in examples:
        if all(counts[f] + 1 <= quota for f in example.morals):
            kept.append(example)
            for f in example.morals:
                counts[f] += 1
    return kept


def balance_examples(examples: Sequence[LabeledExample]) -> list[LabeledExample]:
    """Downsample so every represented foundation's example count is equal.

    Starts from the minimum per-foundation count and greedily keeps examples
    in ingest order; because multi-label examples count toward every label,
    one greedy pass can leave a foundation under quota, in which case the
    quota is lowered to the minimum achieved count and the pass repeats until
    the counts agree. Foundations with no labeled example at all stay empty.
    Deterministic.
    """
    if not examples:
        return []
    initial = _foundation_counts(examples)
    represented = [f for f, count in initial.items() if count > 0]
    quota = min(initial[f] for f in represented)
    while quota > 0:
        kept = _greedy_downsample(examples, quota)
        counts = _foundation_counts(kept)
        if all(counts[f] == quota for f in represented):
            return kept
        quota = min(counts[f] for f in represented)
    return []


def build_distant_dataset(
    corpus: Iterable[tuple[str, str, Sequence[str]]],
    aspect_map: AspectMoralMap,
    validation_topics: set[str] | frozenset[str],
) -> DistantDataset:
    """Label a (text, topic, aspects) stream and split/balance it.

    Texts whose aspects map to no foundation are dropped. The topic split puts
    every validation topic's examples aside untouched; the training split is
    then downsampled to exactly equal per-foundation counts.
    """
    validation_topics = frozenset(t.strip().lower() for t in validation_topics)
    train: list[LabeledExample] = []
    validation: list[LabeledExample] = []
    seen_topics: set[str] = set()
    for text, topic, aspects in corpus:
        topic_key = topic.strip().lower()
        seen_topics.add(topic_key)
        morals, provenance = label_with_provenance(aspects, aspect_map)
        if not morals:
            continue
        example = LabeledExample(text=text, topic=topic, morals=morals, provenance=provenance)
        (validation if topic_key in validation_topics else train).append(example)
    if not train and not validation:
        raise DatasetEmptyError("no example received any moral label")
    missing = validation_topics - seen_topics
    if missing:
        raise ValueError(f"validation topics absent from corpus: {sorted(missing)}")
    train_topics = frozenset(e.topic.strip().lower() for e in train)
    return DistantDataset(
        train=tuple(balance_examples(train)),
        validation=tuple(validation),
        topic_split=(train_topics, validation_topics),
    )


def topic_moral_report(examples: Iterable[LabeledExample]) -> dict[str, dict[str, float]]:
    """Per-topic share of each foundation among the topic's label instances.

    Shaped like a foundations-by-topics percentage table; each topic column
    sums to 100 (up to rounding).
    """
    per_topic: dict[str, dict[MoralFoundation, int]] = {}
    for example in examples:
        bucket = per_topic.setdefault(example.topic, {f: 0 for f in FOUNDATIONS})
        for foundation in example.morals:
            bucket[foundation] += 1
    report: dict[str, dict[str, float]] = {}
    for topic in sorted(per_topic):
        total = sum(per_topic[topic].values())
        report[topic] = {
            f.value: (100.0 * per_topic[topic][f] / total if total else 0.0)
            for f in FOUNDATIONS
        }
    return report


def write_dataset_jsonl(examples: Iterable[LabeledExample], out: IO[str]) -> int:
    """Serialize labeled examples as JSON-lines; returns the number written."""
    count = 0
    for example in examples:
        out.write(
            json.dumps(
                {
                    "text": example.text,
                    "topic": example.topic,
                    "morals": sorted(f.value for f in example.morals),
                    "provenance": {
                        f.value: list(aspects) for f, aspects in sorted(
                            example.provenance.items(), key=lambda kv: kv[0].value
                        )
                    },
                },
                ensure_ascii=False,
            )
            + "\n"
        )
        count += 1
    return count
