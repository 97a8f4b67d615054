"""Inverted sentence index and the four-query retrieval scheme.

On-disk layout (format version 1) is a directory of three files:

* ``manifest.json`` — format version, echo of the build config, and counts.
* ``sentences.jsonl`` — one object per sentence: ``id`` (global ingest
  ordinal), ``doc_id``, ``text``, ``tokens``, and marker position lists.
* ``postings.bin`` — magic ``MFPI``, varint format version, varint number of
  terms; then per term: varint UTF-8 byte length, term bytes, varint posting
  count, and the sorted sentence ids delta-encoded as unsigned little-endian
  base-128 varints.

A built index is immutable and supports unlimited concurrent readers;
retrieval is pure given the index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .corpus import (
    Document,
    IngestError,
    MarkerLexicon,
    Sentence,
    segment_and_tokenize,
    tokenize,
    with_markers,
)
from .foundations import PipelineConfig

_MAGIC = b"MFPI"
FORMAT_VERSION = 1

Position = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class MarkerLexicons:
    """The three marker lexicons consulted during index construction."""

    sentiment: MarkerLexicon
    causality: MarkerLexicon
    evidence_cues: MarkerLexicon


class QueryKind(str, Enum):
    TOPIC_ONLY = "topic_only"
    TOPIC_CAUSALITY = "topic_causality"
    TOPIC_CAUSALITY_SENTIMENT = "topic_causality_sentiment"
    EVIDENCE_CUE = "evidence_cue"


@dataclass(frozen=True)
class QuerySpec:
    kind: QueryKind
    topic: tuple[str, ...]
    window_size: int
    min_len: int
    max_len: int
    limit: int

    def __post_init__(self) -> None:
        if not self.topic:
            raise ValueError("query topic must be nonempty")


@dataclass(frozen=True)
class IndexStats:
    sentence_count: int
    token_count: int
    document_count: int


@dataclass(frozen=True)
class SentenceIndex:
    sentences: Mapping[int, Sentence]
    postings: Mapping[str, tuple[int, ...]]
    stats: IndexStats
    config: PipelineConfig

    def __len__(self) -> int:
        return self.stats.sentence_count

    def posting(self, token: str) -> tuple[int, ...]:
        return self.postings.get(token, ())


def build_topic_queries(topic: str, config: PipelineConfig) -> list[QuerySpec]:
    """The four retrieval queries for a topic, in fixed order.

    Topic keywords are used as-is, without any expansion.
    """
    tokens, _ = tokenize(topic)
    if not tokens:
        raise ValueError(f"topic {topic!r} has no tokens")
    return [
        QuerySpec(
            kind=kind,
            topic=tokens,
            window_size=config.window_size,
            min_len=config.min_len,
            max_len=config.max_len,
            limit=config.per_query_limit,
        )
        for kind in (
            QueryKind.TOPIC_ONLY,
            QueryKind.TOPIC_CAUSALITY,
            QueryKind.TOPIC_CAUSALITY_SENTIMENT,
            QueryKind.EVIDENCE_CUE,
        )
    ]


def _as_span(position: Position) -> tuple[int, int]:
    if isinstance(position, int):
        return (position, position)
    return (position[0], position[1])


def window_cooccurs(
    tokens: Sequence[str],
    positions_a: Iterable[Position],
    positions_b: Iterable[Position],
    window_size: int,
) -> bool:
    """True iff some position pair lies strictly within ``window_size`` tokens.

    Positions may be single token indices or (start, end) spans; for spans the
    nearest boundaries are compared (overlapping spans have distance 0).
    """
    spans_a = [_as_span(p) for p in positions_a]
    spans_b = [_as_span(p) for p in positions_b]
    n = len(tokens)
    for s1, s2 in spans_a + spans_b:
        if not (0 <= s1 <= s2 < n):
            raise ValueError(f"position ({s1}, {s2}) outside token range 0..{n - 1}")
    for a1, a2 in spans_a:
        for b1, b2 in spans_b:
            if max(a1 - b2, b1 - a2, 0) < window_size:
                return True
    return False


def build_index(
    documents: Iterable[Document],
    config: PipelineConfig,
    lexicons: MarkerLexicons,
) -> SentenceIndex:
    """Index all sentences whose token count lies in [min_len, max_len].

    Sentence ids are global ingest ordinals, so the result is deterministic
    given input order. Duplicate document ids abort ingestion.
    """
    sentences: dict[int, Sentence] = {}
    postings: dict[str, list[int]] = {}
    seen_docs: set[str] = set()
    token_total = 0
    for document in documents:
        if document.id in seen_docs:
            raise IngestError(f"duplicate document id {document.id!r}")
        seen_docs.add(document.id)
        for sentence in segment_and_tokenize(document):
            if not config.min_len <= len(sentence.tokens) <= config.max_len:
                continue
            sid = len(sentences)
            annotated = with_markers(
                replace(sentence, id=sid),
                lexicons.sentiment,
                lexicons.causality,
                lexicons.evidence_cues,
            )
            sentences[sid] = annotated
            token_total += len(annotated.tokens)
            for token in set(annotated.tokens):
                postings.setdefault(token, []).append(sid)
    return SentenceIndex(
        sentences=sentences,
        postings={t: tuple(ids) for t, ids in postings.items()},
        stats=IndexStats(
            sentence_count=len(sentences),
            token_count=token_total,
            document_count=len(seen_docs),
        ),
        config=config,
    )


def _topic_positions(sentence: Sentence, topic: tuple[str, ...]) -> list[int]:
    terms = set(topic)
    return [i for i, tok in enumerate(sentence.tokens) if tok in terms]


def _matched_marker_count(
    sentence: Sentence, query: QuerySpec, topic_positions: list[int]
) -> tuple[bool, int]:
    """Apply the query's marker constraints; returns (matches, matched positions)."""
    markers = sentence.markers
    if query.kind == QueryKind.TOPIC_ONLY:
        return True, 0
    if query.kind == QueryKind.EVIDENCE_CUE:
        count = len(markers.evidence_cue_positions)
        return count > 0, count
    near_causality = [
        p
        for p in markers.causality_positions
        if window_cooccurs(sentence.tokens, [p], topic_positions, query.window_size)
    ]
    if query.kind == QueryKind.TOPIC_CAUSALITY:
        return bool(near_causality), len(near_causality)
    near_sentiment = [
        p
        for p in markers.sentiment_positions
        if window_cooccurs(sentence.tokens, [p], topic_positions, query.window_size)
    ]
    matches = bool(near_causality) and bool(near_sentiment)
    return matches, len(near_causality) + len(near_sentiment)


def retrieve(index: SentenceIndex, query: QuerySpec) -> list[Sentence]:
    """Run one query against the index.

    All topic tokens must occur in a matching sentence; the marker constraints
    depend on the query kind. Results are ordered by descending count of
    matched marker positions, ties broken by ascending sentence id, and capped
    at ``query.limit`` after the constraints are applied.
    """
    candidate_ids: set[int] | None = None
    for token in set(query.topic):
        ids = set(index.posting(token))
        candidate_ids = ids if candidate_ids is None else candidate_ids & ids
        if not candidate_ids:
            return []
    assert candidate_ids is not None
    scored: list[tuple[int, int]] = []
    for sid in candidate_ids:
        sentence = index.sentences[sid]
        topic_positions = _topic_positions(sentence, query.topic)
        matches, count = _matched_marker_count(sentence, query, topic_positions)
        if matches:
            scored.append((sid, count))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [index.sentences[sid] for sid, _ in scored[: query.limit]]


# --- persistence -----------------------------------------------------------


def _write_varint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("varints are unsigned")
    while value > 0x7F:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    out.append(value)


def _read_varint(data: bytes, offset: int) -> tuple[int, int]:
    result = 0
    shift = 0
    while True:
        byte = data[offset]
        offset += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, offset
        shift += 7


def save_index(index: SentenceIndex, directory: str | Path) -> None:
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format_version": FORMAT_VERSION,
        "config": {
            "moral_confidence_threshold": index.config.moral_confidence_threshold,
            "claim_threshold": index.config.claim_threshold,
            "evidence_threshold": index.config.evidence_threshold,
            "window_size": index.config.window_size,
            "min_len": index.config.min_len,
            "max_len": index.config.max_len,
            "per_query_limit": index.config.per_query_limit,
            "max_themes": index.config.max_themes,
            "dedupe_threshold": index.config.dedupe_threshold,
        },
        "stats": {
            "sentence_count": index.stats.sentence_count,
            "token_count": index.stats.token_count,
            "document_count": index.stats.document_count,
        },
    }
    (path / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    with open(path / "sentences.jsonl", "w", encoding="utf-8") as fh:
        for sid in sorted(index.sentences):
            s = index.sentences[sid]
            fh.write(
                json.dumps(
                    {
                        "id": s.id,
                        "doc_id": s.doc_id,
                        "text": s.text,
                        "tokens": list(s.tokens),
                        "markers": {
                            "sentiment": list(s.markers.sentiment_positions),
                            "causality": list(s.markers.causality_positions),
                            "evidence": list(s.markers.evidence_cue_positions),
                        },
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    blob = bytearray(_MAGIC)
    _write_varint(blob, FORMAT_VERSION)
    _write_varint(blob, len(index.postings))
    for token in sorted(index.postings):
        ids = index.postings[token]
        raw = token.encode("utf-8")
        _write_varint(blob, len(raw))
        blob.extend(raw)
        _write_varint(blob, len(ids))
        previous = 0
        for sid in ids:
            _write_varint(blob, sid - previous)
            previous = sid
    (path / "postings.bin").write_bytes(bytes(blob))


def load_index(directory: str | Path) -> SentenceIndex:
    path = Path(directory)
    manifest = json.loads((path / "manifest.json").read_text(encoding="utf-8"))
    if manifest.get("format_version") != FORMAT_VERSION:
        raise IngestError(
            f"unsupported index format version {manifest.get('format_version')!r}"
        )
    config = PipelineConfig(**manifest["config"])
    sentences: dict[int, Sentence] = {}
    with open(path / "sentences.jsonl", encoding="utf-8") as fh:
        for line in fh:
            record = json.loads(line)
            tokens, spans = tokenize(record["text"])
            if list(tokens) != record["tokens"]:
                raise IngestError(
                    f"sentence {record['id']}: stored tokens disagree with tokenizer"
                )
            markers = record["markers"]
            from .corpus import MarkerAnnotation

            sentences[record["id"]] = Sentence(
                id=record["id"],
                doc_id=record["doc_id"],
                text=record["text"],
                tokens=tokens,
                token_spans=spans,
                markers=MarkerAnnotation(
                    sentiment_positions=tuple(markers["sentiment"]),
                    causality_positions=tuple(markers["causality"]),
                    evidence_cue_positions=tuple(markers["evidence"]),
                ),
            )
    data = (path / "postings.bin").read_bytes()
    if data[:4] != _MAGIC:
        raise IngestError("postings.bin: bad magic")
    offset = 4
    version, offset = _read_varint(data, offset)
    if version != FORMAT_VERSION:
        raise IngestError(f"postings.bin: unsupported version {version}")
    term_count, offset = _read_varint(data, offset)
    postings: dict[str, tuple[int, ...]] = {}
    for _ in range(term_count):
        raw_len, offset = _read_varint(data, offset)
        token = data[offset : offset + raw_len].decode("utf-8")
        offset += raw_len
        n, offset = _read_varint(data, offset)
        ids = []
        previous = 0
        for _ in range(n):
            delta, offset = _read_varint(data, offset)
            previous += delta
            ids.append(previous)
        postings[token] = tuple(ids)
    stats = IndexStats(**manifest["stats"])
    return SentenceIndex(sentences=sentences, postings=postings, stats=stats, config=config)
