"""Generation orchestration: request validation, retrieval fan-out, and the
retrieve -> select -> dedupe -> cluster -> assemble pipeline.

Generation is stateless given an engine; requests may run in parallel.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping

from .corpus import Sentence, tokenize
from .foundations import Framing, MoralFoundation, PipelineConfig, framing_to_morals
from .index import SentenceIndex, build_topic_queries, retrieve
from .mining import MiningConfig, Stance, select_units
from .morals import MoralScorer
from .narrative import CompositionError, MoralArgument, assemble_argument, cluster_themes, dedupe


@dataclass(frozen=True)
class GenerationRequest:
    """Topic, stance, and either a framing preset or an explicit moral set."""

    topic: str
    stance: Stance
    framing: Framing | None = None
    morals: frozenset[MoralFoundation] | None = None
    overrides: Mapping[str, float | int] | None = None

    def __post_init__(self) -> None:
        if (self.framing is None) == (self.morals is None):
            raise ValueError("exactly one of framing or morals must be given")
        if not self.topic.strip():
            raise ValueError("topic must be nonempty")

    def target_morals(self) -> frozenset[MoralFoundation] | None:
        if self.framing is not None:
            return framing_to_morals(self.framing)
        return self.morals


@dataclass(frozen=True)
class GenerationOutcome:
    status: str  # "ok" or "insufficient_material"
    argument: MoralArgument | None
    reason: str = ""
    timings_ms: Mapping[str, float] = field(default_factory=dict)
    counts: Mapping[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def retrieve_all(index: SentenceIndex, topic: str, config: PipelineConfig) -> list[Sentence]:
    """Union of the four query results, first-seen order preserved."""
    seen: set[int] = set()
    merged: list[Sentence] = []
    for query in build_topic_queries(topic, config):
        for sentence in retrieve(index, query):
            if sentence.id not in seen:
                seen.add(sentence.id)
                merged.append(sentence)
    return merged


@dataclass(frozen=True)
class ArgumentEngine:
    """Everything needed to serve generation requests against one index."""

    index: SentenceIndex
    scorer: MoralScorer
    mining_config: MiningConfig = MiningConfig()

    def config_for(self, request: GenerationRequest) -> PipelineConfig:
        config = self.index.config
        if request.overrides:
            config = replace(config, **dict(request.overrides))
        return config

    def generate(self, request: GenerationRequest) -> GenerationOutcome:
        """Run the full pipeline; scarcity surfaces as a structured outcome."""
        config = self.config_for(request)
        timings: dict[str, float] = {}
        counts: dict[str, int] = {}
        t0 = time.perf_counter()
        try:
            retrieved = retrieve_all(self.index, request.topic, config)
        except ValueError as exc:
            return GenerationOutcome(status="insufficient_material", argument=None, reason=str(exc))
        timings["retrieve"] = (time.perf_counter() - t0) * 1000
        counts["retrieved"] = len(retrieved)

        topic_tokens, _ = tokenize(request.topic)
        t0 = time.perf_counter()
        units = select_units(
            retrieved,
            topic_tokens,
            request.stance,
            request.target_morals(),
            self.scorer,
            config,
            self.mining_config,
        )
        timings["select"] = (time.perf_counter() - t0) * 1000
        counts["selected"] = len(units)

        t0 = time.perf_counter()
        kept = dedupe(units, config.dedupe_threshold)
        timings["dedupe"] = (time.perf_counter() - t0) * 1000
        counts["deduped"] = len(kept)

        t0 = time.perf_counter()
        try:
            clusters = cluster_themes(kept, config.max_themes, topic_tokens)
            argument = assemble_argument(
                clusters,
                request.topic,
                request.stance,
                request.framing,
                request.target_morals(),
            )
        except CompositionError as exc:
            return GenerationOutcome(
                status="insufficient_material",
                argument=None,
                reason=str(exc),
                timings_ms=timings,
                counts=counts,
            )
        timings["compose"] = (time.perf_counter() - t0) * 1000
        counts["themes"] = len(clusters)
        return GenerationOutcome(
            status="ok", argument=argument, timings_ms=timings, counts=counts
        )

    def batch_generate(
        self, topics: list[str]
    ) -> Iterator[tuple[GenerationRequest, GenerationOutcome]]:
        """The full topic x stance x framing grid, in deterministic order."""
        for topic in topics:
            for stance in (Stance.PRO, Stance.CON):
                for framing in Framing:
                    request = GenerationRequest(topic=topic, stance=stance, framing=framing)
                    yield request, self.generate(request)
