"""Redundancy filtering, thematic clustering, and rendering of the final
morally framed argument.

The composition is strictly extractive: theme paragraphs contain retrieved
sentences verbatim (plus a position-dependent connective), and the provenance
map ties every rendered unit back to its indexed sentence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .foundations import Framing, MoralFoundation
from .mining import DISCOURSE_CONNECTIVES, ArgumentUnit, Stance

STOPWORDS = frozenset(
    """a an the is are was were be been being am of in on at to for with by
    from as that this these those it its they their them we our us you your
    he she his her him i me my and or but nor not no too very can will would
    could should may might must just than then when while where because since
    about into through over under again further once here there all any both
    each few more most other some such only own same s t do does did doing
    have has had having what which who whom why how if out up down off above
    below between among during before after""".split()
) | DISCOURSE_CONNECTIVES

_NUMBER_WORDS = {
    1: "one", 2: "two", 3: "three", 4: "four", 5: "five",
    6: "six", 7: "seven", 8: "eight", 9: "nine", 10: "ten",
}


class CompositionError(RuntimeError):
    """The selected material cannot be composed into an argument."""


# --- redundancy -------------------------------------------------------------


def token_trigrams(tokens: Sequence[str]) -> frozenset[tuple[str, ...]]:
    if len(tokens) < 3:
        return frozenset({tuple(tokens)})
    return frozenset(tuple(tokens[i : i + 3]) for i in range(len(tokens) - 2))


def trigram_jaccard(a: Sequence[str], b: Sequence[str]) -> float:
    ta, tb = token_trigrams(a), token_trigrams(b)
    union = ta | tb
    if not union:
        return 0.0
    return len(ta & tb) / len(union)


def dedupe(units: Sequence[ArgumentUnit], threshold: float = 0.8) -> list[ArgumentUnit]:
    """Greedy scan in input order; drop a unit whose token-trigram Jaccard
    similarity with any already-kept unit exceeds ``threshold``."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"dedupe threshold {threshold} outside [0, 1]")
    kept: list[ArgumentUnit] = []
    for unit in units:
        if any(
            trigram_jaccard(unit.sentence.tokens, other.sentence.tokens) > threshold
            for other in kept
        ):
            continue
        kept.append(unit)
    return kept


# --- tf-idf and clustering ---------------------------------------------------


def tfidf_vectors(token_lists: Sequence[Sequence[str]]) -> list[dict[str, float]]:
    """L2-normalized tf-idf vectors; idf = ln((1 + N) / (1 + df)) + 1."""
    n = len(token_lists)
    df: dict[str, int] = {}
    for tokens in token_lists:
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1
    vectors: list[dict[str, float]] = []
    for tokens in token_lists:
        counts: dict[str, int] = {}
        for term in tokens:
            counts[term] = counts.get(term, 0) + 1
        vec = {
            term: count * (math.log((1 + n) / (1 + df[term])) + 1.0)
            for term, count in counts.items()
        }
        norm = math.sqrt(sum(w * w for w in vec.values()))
        if norm > 0:
            vec = {t: w / norm for t, w in vec.items()}
        vectors.append(vec)
    return vectors


def cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if len(b) < len(a):
        a, b = b, a
    return sum(w * b.get(t, 0.0) for t, w in a.items())


@dataclass(frozen=True)
class ThemeCluster:
    label: str
    representative_claim: ArgumentUnit
    members: tuple[ArgumentUnit, ...]
    cohesion: float

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("theme cluster must have members")
        if self.representative_claim not in self.members:
            raise ValueError("representative claim must be a cluster member")


def _average_linkage(sim: list[list[float]], groups: list[list[int]], a: int, b: int) -> float:
    total = 0.0
    for i in groups[a]:
        for j in groups[b]:
            total += sim[i][j]
    return total / (len(groups[a]) * len(groups[b]))


def _pick_representative(members: Sequence[ArgumentUnit]) -> ArgumentUnit | None:
    claims = [u for u in members if u.kind == "claim"]
    if not claims:
        return None
    return min(
        claims,
        key=lambda u: (-u.claim_likelihood, len(u.sentence.tokens), u.sentence.id),
    )


def _cluster_label(
    member_indices: Sequence[int],
    vectors: Sequence[Mapping[str, float]],
    topic: Sequence[str],
) -> str:
    excluded = set(topic) | STOPWORDS
    mass: dict[str, float] = {}
    for i in member_indices:
        for term, weight in vectors[i].items():
            mass[term] = mass.get(term, 0.0) + weight
    candidates = {t: w for t, w in mass.items() if t not in excluded} or mass
    return min(candidates, key=lambda t: (-candidates[t], t))


def cluster_themes(
    units: Sequence[ArgumentUnit],
    max_themes: int = 4,
    topic: Sequence[str] = (),
) -> list[ThemeCluster]:
    """Group units into at most ``max_themes`` themes.

    Average-linkage agglomerative clustering over tf-idf cosine similarity;
    zero-distance groups keep merging even below the cut. Claim-less clusters
    are folded into the most similar claim-bearing cluster. Output clusters
    are ordered by descending size, then representative claim likelihood.
    """
    if not units:
        raise CompositionError("no units to cluster")
    if max_themes < 1:
        raise ValueError("max_themes must be positive")
    vectors = tfidf_vectors([u.sentence.tokens for u in units])
    n = len(units)
    sim = [[cosine(vectors[i], vectors[j]) for j in range(n)] for i in range(n)]
    groups: list[list[int]] = [[i] for i in range(n)]
    while len(groups) > 1:
        best: tuple[float, int, int] | None = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                linkage = _average_linkage(sim, groups, a, b)
                if best is None or linkage > best[0] + 1e-12:
                    best = (linkage, a, b)
        assert best is not None
        linkage, a, b = best
        if len(groups) <= max_themes and linkage < 1.0 - 1e-9:
            break
        groups[a] = groups[a] + groups[b]
        del groups[b]

    # Fold clusters without any claim into the most similar claim-bearing one.
    has_claim = [any(units[i].kind == "claim" for i in g) for g in groups]
    if not any(has_claim):
        raise CompositionError("insufficient claims: no cluster contains a claim unit")
    while not all(has_claim):
        b = has_claim.index(False)
        candidates = [a for a in range(len(groups)) if has_claim[a]]
        target = max(candidates, key=lambda a: (_average_linkage(sim, groups, a, b), -a))
        groups[target] = groups[target] + groups[b]
        del groups[b]
        del has_claim[b]

    clusters: list[ThemeCluster] = []
    for g in groups:
        members = tuple(units[i] for i in sorted(g))
        representative = _pick_representative(members)
        assert representative is not None
        if len(g) == 1:
            cohesion = 1.0
        else:
            pair_sum = sum(
                sim[i][j] for i in g for j in g if i < j
            )
            cohesion = pair_sum / (len(g) * (len(g) - 1) / 2)
        clusters.append(
            ThemeCluster(
                label=_cluster_label(sorted(g), vectors, topic),
                representative_claim=representative,
                members=members,
                cohesion=cohesion,
            )
        )
    clusters.sort(
        key=lambda c: (
            -len(c.members),
            -c.representative_claim.claim_likelihood,
            c.representative_claim.sentence.id,
        )
    )
    return clusters


# --- assembly ----------------------------------------------------------------


@dataclass(frozen=True)
class ThemeParagraph:
    label: str
    text: str
    unit_ids: tuple[str, ...]
    representative_id: str


@dataclass(frozen=True)
class MoralArgument:
    """Assembled output: intro plus ordered theme paragraphs."""

    topic: str
    stance: Stance
    framing: Framing | None
    target_morals: frozenset[MoralFoundation] | None
    intro: str
    intro_theme_labels: tuple[str, ...]
    theme_paragraphs: tuple[ThemeParagraph, ...]
    provenance: Mapping[str, int]
    units: Mapping[str, ArgumentUnit] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.intro_theme_labels != tuple(p.label for p in self.theme_paragraphs):
            raise ValueError("intro theme enumeration disagrees with paragraphs")


def _join_list(items: Sequence[str]) -> str:
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


def _number_word(n: int) -> str:
    return _NUMBER_WORDS.get(n, str(n))


def _intro_text(clusters: Sequence[ThemeCluster]) -> str:
    n = len(clusters)
    if n == 1:
        return (
            f"The crowd raised one issue, explaining its views. "
            f"The main claim is that {clusters[0].representative_claim.claim_text()}."
        )
    parts = [
        f"The crowd raised {_number_word(n)} issues, explaining its views.",
        f"The first claim is that {clusters[0].representative_claim.claim_text()}.",
        f"The next issue will show how {clusters[1].representative_claim.claim_text()}.",
    ]
    if n > 2:
        labels = [c.label for c in clusters[2:]]
        parts.append(f"In addition, we will hear about {_join_list(labels)}.")
    return " ".join(parts)


def paragraph_connective(position: int, total: int, label: str) -> str:
    """Position-dependent paragraph opener for a theme."""
    if position == 0:
        return f"Starting with {label}."
    if position == total - 1:
        return f"Lastly, {label}."
    if position % 2 == 1:
        return f"Turning to {label}."
    return f"{label.capitalize()} was also mentioned."


def _ordered_members(cluster: ThemeCluster) -> list[ArgumentUnit]:
    rep = cluster.representative_claim
    rest = [u for u in cluster.members if u is not rep]
    claims = sorted(
        (u for u in rest if u.kind == "claim"),
        key=lambda u: (-u.claim_likelihood, len(u.sentence.tokens), u.sentence.id),
    )
    evidence = sorted(
        (u for u in rest if u.kind == "evidence"),
        key=lambda u: (-u.evidence_likelihood, len(u.sentence.tokens), u.sentence.id),
    )
    return [rep] + claims + evidence


def assemble_argument(
    clusters: Sequence[ThemeCluster],
    topic: str,
    stance: Stance,
    framing: Framing | None = None,
    target_morals: frozenset[MoralFoundation] | None = None,
) -> MoralArgument:
    """Compose the intro and one paragraph per theme, in cluster order.

    Inside a paragraph the representative claim comes first, then the other
    claims and then evidence, each by descending likelihood.
    """
    if not clusters:
        raise CompositionError("cannot assemble an argument from zero themes")
    paragraphs: list[ThemeParagraph] = []
    provenance: dict[str, int] = {}
    units: dict[str, ArgumentUnit] = {}
    for position, cluster in enumerate(clusters):
        ordered = _ordered_members(cluster)
        connective = paragraph_connective(position, len(clusters), cluster.label)
        body = " ".join(u.sentence.text for u in ordered)
        paragraphs.append(
            ThemeParagraph(
                label=cluster.label,
                text=f"{connective} {body}",
                unit_ids=tuple(u.uid for u in ordered),
                representative_id=cluster.representative_claim.uid,
            )
        )
        for unit in ordered:
            provenance[unit.uid] = unit.sentence.id
            units[unit.uid] = unit
    return MoralArgument(
        topic=topic,
        stance=stance,
        framing=framing,
        target_morals=target_morals,
        intro=_intro_text(clusters),
        intro_theme_labels=tuple(p.label for p in paragraphs),
        theme_paragraphs=tuple(paragraphs),
        provenance=provenance,
        units=units,
    )


def render_text(argument: MoralArgument) -> str:
    """Deterministic plain-text rendering: intro, blank line, paragraphs in order."""
    blocks = [argument.intro] + [p.text for p in argument.theme_paragraphs]
    return "\n\n".join(blocks) + "\n"


def argument_to_document(argument: MoralArgument) -> dict:
    """Structured output document for files and API responses."""
    themes = []
    for paragraph in argument.theme_paragraphs:
        sentences = []
        for uid in paragraph.unit_ids:
            unit = argument.units[uid]
            sentences.append(
                {
                    "id": uid,
                    "text": unit.sentence.text,
                    "kind": unit.kind,
                    "morals": sorted(f.value for f in unit.morals),
                    "claim_likelihood": unit.claim_likelihood,
                    "evidence_likelihood": unit.evidence_likelihood,
                    "stance_score": unit.stance_score,
                }
            )
        themes.append(
            {
                "label": paragraph.label,
                "representative_claim_id": paragraph.representative_id,
                "sentences": sentences,
            }
        )
    document = {
        "topic": argument.topic,
        "stance": argument.stance.value,
        "framing": argument.framing.value if argument.framing else None,
        "intro": argument.intro,
        "themes": themes,
        "provenance": dict(argument.provenance),
    }
    if argument.target_morals is not None and argument.framing is None:
        document["target_morals"] = sorted(f.value for f in argument.target_morals)
    return document
