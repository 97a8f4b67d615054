"""Independent reference implementations used to check the production code.

Everything here recomputes results from first principles (plain loops over
raw data) and deliberately avoids the package's marker annotations, postings,
and metric code.
"""

from __future__ import annotations

import math

from moralframe.corpus import MarkerLexicon
from moralframe.foundations import FOUNDATIONS
from moralframe.index import MarkerLexicons, QueryKind, QuerySpec, SentenceIndex


def logistic(z: float) -> float:
    return 1.0 / (1.0 + math.exp(-z))


def marker_positions(tokens: tuple[str, ...], lexicon: MarkerLexicon) -> list[int]:
    """Phrase-aware marker scan, reimplemented with plain loops."""
    found = set()
    for i in range(len(tokens)):
        for phrase in lexicon.phrases:
            if tuple(tokens[i : i + len(phrase)]) == phrase:
                found.add(i)
                break
    return sorted(found)


def scan_retrieve(
    index: SentenceIndex, query: QuerySpec, lexicons: MarkerLexicons
) -> list[int]:
    """Linear scan over every indexed sentence, applying the query predicates
    directly; returns sentence ids in the contractual order."""
    topic_terms = set(query.topic)
    scored: list[tuple[int, int]] = []
    for sid in sorted(index.sentences):
        tokens = index.sentences[sid].tokens
        if not all(term in tokens for term in query.topic):
            continue
        topic_positions = [i for i, tok in enumerate(tokens) if tok in topic_terms]

        def near(positions: list[int]) -> list[int]:
            return [
                p
                for p in positions
                if any(abs(p - q) < query.window_size for q in topic_positions)
            ]

        if query.kind == QueryKind.TOPIC_ONLY:
            scored.append((sid, 0))
            continue
        if query.kind == QueryKind.EVIDENCE_CUE:
            cues = marker_positions(tokens, lexicons.evidence_cues)
            if cues:
                scored.append((sid, len(cues)))
            continue
        causality_near = near(marker_positions(tokens, lexicons.causality))
        if query.kind == QueryKind.TOPIC_CAUSALITY:
            if causality_near:
                scored.append((sid, len(causality_near)))
            continue
        sentiment_near = near(marker_positions(tokens, lexicons.sentiment))
        if causality_near and sentiment_near:
            scored.append((sid, len(causality_near) + len(sentiment_near)))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [sid for sid, _ in scored[: query.limit]]


def confusion_counts(gold: list[set], pred: list[set]) -> dict:
    """Brute-force per-foundation confusion counts and metrics."""
    out = {}
    for foundation in FOUNDATIONS:
        tp = sum(1 for g, p in zip(gold, pred) if foundation in g and foundation in p)
        fp = sum(1 for g, p in zip(gold, pred) if foundation not in g and foundation in p)
        fn = sum(1 for g, p in zip(gold, pred) if foundation in g and foundation not in p)
        tn = len(gold) - tp - fp - fn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (2 * precision * recall / (precision + recall)) if precision + recall else 0.0
        out[foundation] = {
            "tp": tp, "fp": fp, "fn": fn, "tn": tn,
            "precision": precision, "recall": recall, "f1": f1,
        }
    return out
