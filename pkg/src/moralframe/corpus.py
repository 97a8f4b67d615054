"""Document ingestion, sentence segmentation, tokenization, and marker annotation.

The corpus input format is JSON-lines: one object per line with fields
``id``, ``text``, and optionally ``title`` and ``topic``.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Iterator

# Maximal runs of letters/digits, with internal hyphens or apostrophes.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*", re.UNICODE)

# Sentence boundary: terminal punctuation followed by whitespace.
_BOUNDARY_RE = re.compile(r"[.!?](?=\s)")

# Abbreviations whose trailing period does not end a sentence.
ABBREVIATIONS = frozenset(
    {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc",
        "inc", "ltd", "co", "fig", "al", "e.g", "i.e", "u.s", "u.k", "approx",
    }
)

# Evidence cue tokens used when no explicit cue lexicon is supplied.
DEFAULT_EVIDENCE_CUES = ("surveys", "analyses", "researches", "reports", "research", "survey")


class IngestError(ValueError):
    """A corpus stream failed to parse or violated ingest preconditions."""


@dataclass(frozen=True)
class Document:
    """One corpus document."""

    id: str
    body: str
    title: str = ""
    topic: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be nonempty")


@dataclass(frozen=True)
class MarkerAnnotation:
    """Token positions of sentiment, causality, and evidence-cue markers."""

    sentiment_positions: tuple[int, ...] = ()
    causality_positions: tuple[int, ...] = ()
    evidence_cue_positions: tuple[int, ...] = ()

    def total(self) -> int:
        return (
            len(self.sentiment_positions)
            + len(self.causality_positions)
            + len(self.evidence_cue_positions)
        )


@dataclass(frozen=True)
class Sentence:
    """An indexed sentence: original text plus its lowercase token stream.

    ``token_spans`` holds each token's character range in ``text`` so spans of
    tokens can be rendered back as exact substrings of the original sentence.
    Ids are document-local ordinals after segmentation; index construction
    reassigns them to global ingest ordinals.
    """

    id: int
    doc_id: str
    text: str
    tokens: tuple[str, ...]
    token_spans: tuple[tuple[int, int], ...]
    markers: MarkerAnnotation = field(default_factory=MarkerAnnotation)

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("sentence token list must be nonempty")
        for positions in (
            self.markers.sentiment_positions,
            self.markers.causality_positions,
            self.markers.evidence_cue_positions,
        ):
            if any(not 0 <= p < len(self.tokens) for p in positions):
                raise ValueError("marker position out of token range")

    def span_text(self, start: int, end: int) -> str:
        """Original-text substring covering tokens [start, end)."""
        if not 0 <= start < end <= len(self.tokens):
            raise ValueError(f"span ({start}, {end}) outside token range")
        return self.text[self.token_spans[start][0] : self.token_spans[end - 1][1]]


def tokenize(text: str) -> tuple[tuple[str, ...], tuple[tuple[int, int], ...]]:
    """Lowercase tokens of ``text`` along with their character spans."""
    tokens: list[str] = []
    spans: list[tuple[int, int]] = []
    for m in _TOKEN_RE.finditer(text):
        tokens.append(m.group(0).lower())
        spans.append((m.start(), m.end()))
    return tuple(tokens), tuple(spans)


def _is_abbreviation(text: str, dot_index: int) -> bool:
    """True when the period at ``dot_index`` trails a guarded abbreviation."""
    if text[dot_index] != ".":
        return False
    start = dot_index
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:dot_index].lower().lstrip("\"'([{")
    return word in ABBREVIATIONS


def split_sentences(body: str) -> list[tuple[str, int]]:
    """Split a document body into (sentence text, char offset) pairs.

    Boundaries are terminal punctuation (., !, ?) followed by whitespace,
    except periods that trail a guarded abbreviation. Deterministic.
    """
    pieces: list[tuple[str, int]] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(body):
        if _is_abbreviation(body, m.start()):
            continue
        end = m.end()
        chunk = body[start:end].strip()
        if chunk:
            pieces.append((chunk, start + body[start:end].index(chunk[0])))
        start = end
    tail = body[start:].strip()
    if tail:
        pieces.append((tail, start + body[start:].index(tail[0])))
    return pieces


def segment_and_tokenize(document: Document) -> list[Sentence]:
    """Segment a document into tokenized sentences with document-local ids.

    Fragments without any token (e.g. bare punctuation) are dropped; an empty
    body yields an empty list.
    """
    sentences: list[Sentence] = []
    for text, _offset in split_sentences(document.body):
        tokens, spans = tokenize(text)
        if not tokens:
            continue
        sentences.append(
            Sentence(
                id=len(sentences),
                doc_id=document.id,
                text=text,
                tokens=tokens,
                token_spans=spans,
            )
        )
    return sentences


@dataclass(frozen=True)
class MarkerLexicon:
    """A set of lowercase marker tokens or multi-token phrases."""

    phrases: frozenset[tuple[str, ...]] = frozenset()

    @classmethod
    def from_terms(cls, terms: Iterable[str]) -> "MarkerLexicon":
        phrases = set()
        for term in terms:
            tokens, _ = tokenize(term.lower())
            if tokens:
                phrases.add(tokens)
        return cls(phrases=frozenset(phrases))

    def __len__(self) -> int:
        return len(self.phrases)

    def __contains__(self, term: str) -> bool:
        tokens, _ = tokenize(term.lower())
        return tokens in self.phrases

    def match_positions(self, tokens: tuple[str, ...]) -> tuple[int, ...]:
        """Token indices where a lexicon token (or phrase starting there) occurs."""
        if not self.phrases:
            return ()
        max_len = max(len(p) for p in self.phrases)
        positions = []
        for i in range(len(tokens)):
            for length in range(1, min(max_len, len(tokens) - i) + 1):
                if tokens[i : i + length] in self.phrases:
                    positions.append(i)
                    break
        return tuple(positions)


def load_marker_lexicon(source: str | IO[str]) -> MarkerLexicon:
    """Load a marker lexicon: plain UTF-8, one lowercase token or phrase per line."""
    stream = io.StringIO(source) if isinstance(source, str) else source
    terms = [line.strip() for line in stream]
    return MarkerLexicon.from_terms(t for t in terms if t and not t.startswith("#"))


def annotate_markers(
    sentence: Sentence,
    sentiment: MarkerLexicon,
    causality: MarkerLexicon,
    evidence_cues: MarkerLexicon | None = None,
) -> MarkerAnnotation:
    """Record the token positions of all sentiment/causality/evidence markers.

    When no evidence-cue lexicon is given, the default cue token list is used.
    """
    if evidence_cues is None:
        evidence_cues = MarkerLexicon.from_terms(DEFAULT_EVIDENCE_CUES)
    return MarkerAnnotation(
        sentiment_positions=sentiment.match_positions(sentence.tokens),
        causality_positions=causality.match_positions(sentence.tokens),
        evidence_cue_positions=evidence_cues.match_positions(sentence.tokens),
    )


def with_markers(
    sentence: Sentence,
    sentiment: MarkerLexicon,
    causality: MarkerLexicon,
    evidence_cues: MarkerLexicon | None = None,
) -> Sentence:
    """Copy of ``sentence`` with its marker annotation filled in."""
    return replace(sentence, markers=annotate_markers(sentence, sentiment, causality, evidence_cues))


def read_corpus_jsonl(source: str | IO[str]) -> Iterator[Document]:
    """Parse a JSON-lines corpus stream into Documents.

    Each line is an object with ``id`` and ``text`` (required), ``title`` and
    ``topic`` (optional). Malformed lines raise IngestError with the line number.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(record, dict) or "id" not in record or "text" not in record:
            raise IngestError(f"line {lineno}: corpus records need 'id' and 'text' fields")
        yield Document(
            id=str(record["id"]),
            body=str(record["text"]),
            title=str(record.get("title", "")),
            topic=record.get("topic"),
        )
