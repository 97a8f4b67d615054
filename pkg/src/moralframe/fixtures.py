"""Deterministic fixture corpus generator.

The bundled fixture corpus is synthetic but engineered to exercise every
pipeline stage: each main topic carries claim- and evidence-shaped sentences
for both stances and all five foundations (dense enough in foundation
vocabulary to clear the 0.5 confidence threshold under the bundled lexicon),
plus moral-free "plain" claims, neutral mentions, and window/length boundary
sentences. Regeneration with the same seed is byte-identical; the committed
files under ``resources/fixture/`` are the output of ``write_fixture_files``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import Document

MAIN_TOPICS = [
    "globalization",
    "immigration",
    "vaccination",
    "homeschooling",
    "censorship",
    "surveillance",
    "automation",
    "recycling",
    "curfews",
    "school uniforms",
]

AUX_TOPICS = [
    "taxes", "zoos", "gambling", "smoking", "hunting",
    "tourism", "advertising", "homework", "cycling", "farming",
]


@dataclass(frozen=True)
class FoundationBank:
    """Template vocabulary for one foundation; every word is in the bundled
    moral lexicon for exactly this foundation."""

    verbs_con: tuple[str, ...]
    verbs_pro: tuple[str, ...]
    adjs_con: tuple[str, ...]
    adjs_pro: tuple[str, ...]
    nouns_a: tuple[str, ...]
    nouns_b: tuple[str, ...]

    def all_words(self) -> frozenset[str]:
        return frozenset(
            self.verbs_con + self.verbs_pro + self.adjs_con + self.adjs_pro
            + self.nouns_a + self.nouns_b
        )


FOUNDATION_BANKS: dict[str, FoundationBank] = {
    "care": FoundationBank(
        verbs_con=("harms", "hurts"),
        verbs_pro=("protects", "heals"),
        adjs_con=("cruel", "harmful"),
        adjs_pro=("caring", "compassionate"),
        nouns_a=("harm", "suffering", "cruelty", "abuse", "anguish"),
        nouns_b=("safety", "wellbeing", "kindness", "compassion", "comfort"),
    ),
    "fairness": FoundationBank(
        verbs_con=("cheats", "exploits"),
        verbs_pro=("equalizes", "compensates"),
        adjs_con=("unfair", "unjust"),
        adjs_pro=("fair", "impartial"),
        nouns_a=("justice", "injustice", "rights", "equality", "inequality"),
        nouns_b=("honesty", "fraud", "discrimination", "favoritism", "privilege"),
    ),
    "loyalty": FoundationBank(
        verbs_con=("betrays", "divides"),
        verbs_pro=("unites", "unifies"),
        adjs_con=("disloyal", "divisive"),
        adjs_pro=("loyal", "patriotic"),
        nouns_a=("community", "solidarity", "unity", "belonging", "togetherness"),
        nouns_b=("patriotism", "allegiance", "homeland", "kinship", "loyalty"),
    ),
    "authority": FoundationBank(
        verbs_con=("defies", "subverts"),
        verbs_pro=("upholds", "obeys"),
        adjs_con=("lawless", "rebellious"),
        adjs_pro=("lawful", "orderly"),
        nouns_a=("tradition", "traditions", "customs", "heritage", "hierarchy"),
        nouns_b=("obedience", "discipline", "duty", "order", "authority"),
    ),
    "purity": FoundationBank(
        verbs_con=("defiles", "contaminates"),
        verbs_pro=("purifies", "sanctifies"),
        adjs_con=("filthy", "disgusting"),
        adjs_pro=("pure", "wholesome"),
        nouns_a=("sanctity", "holiness", "purity", "virtue", "innocence"),
        nouns_b=("filth", "contamination", "decay", "degradation", "taint"),
    ),
}

# Filler vocabulary: disjoint from every lexicon, marker list, and topic.
FILLERS = (
    "citizens", "councils", "panels", "residents", "observers", "officials",
    "writers", "readers", "neighbors", "villages", "towns", "regions",
    "records", "notes", "files", "plans", "drafts", "letters", "memos",
    "agendas", "sessions", "meetings", "briefings", "gatherings",
)

PLAIN_NOUNS = ("markets", "budgets", "schedules", "routines", "paperwork")
PLAIN_NEG = (("ruins", "terrible"), ("weakens", "awful"), ("strains", "grim"))
PLAIN_POS = (("boosts", "great"), ("improves", "wonderful"), ("strengthens", "impressive"))

EVIDENCE_OPENERS = (("surveys", "show"), ("research", "confirms"), ("analyses", "find"))


def _sentence(tokens: list[str]) -> str:
    text = " ".join(tokens)
    return text[0].upper() + text[1:] + "."


def _pick(rng: random.Random, pool: tuple[str, ...], n: int) -> list[str]:
    return rng.sample(list(pool), n)


def _claim_tokens(topic: str, verb: str, adj: str, nouns: list[str], shape: int) -> list[str]:
    t = topic.split()
    if shape == 0:
        return t + [verb, nouns[0], "because", adj, nouns[1], "breeds", nouns[2]]
    if shape == 1:
        return ["because", adj, nouns[0], "spreads"] + t + [verb, nouns[1], nouns[2]]
    return t + [verb, nouns[0], nouns[1], "since", adj, nouns[2], "persists"]


def _evidence_tokens(topic: str, verb: str, adj: str, nouns: list[str], shape: int) -> list[str]:
    opener = EVIDENCE_OPENERS[shape % len(EVIDENCE_OPENERS)]
    t = topic.split()
    tokens = list(opener) + [adj] + t + [verb, nouns[0], nouns[1], "and", nouns[2]]
    if len(t) > 1:
        # Multi-token topics dilute the foundation vocabulary; restore density.
        tokens.insert(-2, nouns[3])
    return tokens


def _moral_density(tokens: list[str], bank: FoundationBank) -> float:
    words = bank.all_words()
    return sum(1 for tok in tokens if tok in words) / len(tokens)


def generate_fixture_sentences(topic: str, rich: bool = True) -> list[str]:
    """All fixture sentences for one topic, in deterministic order.

    ``rich`` topics get the full grid (stances x foundations x templates);
    auxiliary topics get a reduced slice plus the same boundary sentences.
    """
    rng = random.Random(f"moralframe-fixture::{topic}")
    sentences: list[str] = []
    t = topic.split()
    all_banks = list(FOUNDATION_BANKS.items())
    banks = all_banks if rich else [all_banks[len(topic) % len(all_banks)]]
    stances = ("con", "pro")
    for stance in stances:
        for name, bank in banks:
            verbs = bank.verbs_con if stance == "con" else bank.verbs_pro
            adjs = bank.adjs_con if stance == "con" else bank.adjs_pro
            n_claims = 4 if rich else 2
            n_evidence = 3 if rich else 1
            for k in range(n_claims):
                sub = bank.nouns_a if k < n_claims / 2 else bank.nouns_b
                tokens = _claim_tokens(
                    topic, verbs[k % len(verbs)], adjs[k % len(adjs)],
                    _pick(rng, sub, 3), shape=k % 3,
                )
                assert _moral_density(tokens, bank) > 0.5, (topic, stance, name, tokens)
                sentences.append(_sentence(tokens))
            for k in range(n_evidence):
                sub = bank.nouns_a if k % 2 == 0 else bank.nouns_b
                tokens = _evidence_tokens(
                    topic, verbs[k % len(verbs)], adjs[k % len(adjs)],
                    _pick(rng, sub, 4), shape=k,
                )
                assert _moral_density(tokens, bank) > 0.5, (topic, stance, name, tokens)
                sentences.append(_sentence(tokens))
        if rich and stance == "con":
            # One verbatim near-duplicate so redundancy filtering has work.
            sentences.append(sentences[-n_evidence - n_claims])
        # Moral-free claims: kept only by uncontrolled framing.
        plain = PLAIN_NEG if stance == "con" else PLAIN_POS
        n_plain = 3 if rich else 1
        for k in range(n_plain):
            verb, adj = plain[k % len(plain)]
            noun = PLAIN_NOUNS[k % len(PLAIN_NOUNS)]
            sentences.append(
                _sentence(t + ["clearly", verb, "local", noun, "because", adj, "pressure", "grows"])
            )
    # Neutral topical mentions: retrievable but not argumentative.
    n_neutral = 6 if rich else 2
    for k in range(n_neutral):
        f1, f2 = FILLERS[k % len(FILLERS)], FILLERS[(k + 7) % len(FILLERS)]
        sentences.append(_sentence(["the", f1, "discussed"] + t + ["during", "recent", f2]))
    # Window boundary: causality marker exactly 11 vs 12 tokens from the topic.
    last = len(t) - 1
    for distance, tag in ((11, "near"), (12, "far")):
        fillers = [FILLERS[(i + distance) % len(FILLERS)] for i in range(distance - 1)]
        tokens = t + fillers + ["because", FILLERS[distance % 7], "remain"]
        assert tokens.index("because") - last == distance
        sentences.append(_sentence(tokens))
    # Sentiment beyond the window while causality stays inside it.
    tokens = t + [FILLERS[1], FILLERS[2], "because"] + [
        FILLERS[(i + 3) % len(FILLERS)] for i in range(9)
    ] + ["terrible", FILLERS[5], "linger"]
    assert tokens.index("because") - last == 3
    assert tokens.index("terrible") - last == 13
    sentences.append(_sentence(tokens))
    # Length bounds: 5/6/60/61 tokens (5 and 61 fall outside the index).
    for target in (5, 6, 60, 61):
        fillers = [FILLERS[(i + target) % len(FILLERS)] for i in range(target - len(t))]
        tokens = t + fillers
        assert len(tokens) == target
        sentences.append(_sentence(tokens))
    return sentences


def generate_fixture_corpus() -> list[Document]:
    """The full bundled corpus: rich grids for main topics, slices for aux topics."""
    documents: list[Document] = []
    for topic in MAIN_TOPICS + AUX_TOPICS:
        rich = topic in MAIN_TOPICS
        slug = topic.replace(" ", "-")
        sentences = generate_fixture_sentences(topic, rich=rich)
        per_doc = 8
        for d in range(0, len(sentences), per_doc):
            chunk = sentences[d : d + per_doc]
            documents.append(
                Document(
                    id=f"fx-{slug}-{d // per_doc:02d}",
                    body=" ".join(chunk),
                    title=f"Fixture notes on {topic} ({d // per_doc + 1})",
                    topic=topic,
                )
            )
    return documents


# --- distant-supervision fixture ----------------------------------------------

DISTANT_TRAIN_TOPICS = [
    "globalization", "immigration", "vaccination",
    "homeschooling", "censorship", "surveillance",
]
DISTANT_VALIDATION_TOPICS = ["cloning", "school uniforms"]

# Aspect pools per foundation mirror the bundled aspect map; weights skew the
# draw so the raw dataset is unbalanced and the balancing step has work to do.
_ASPECT_POOLS = {
    "care": ("harm", "safety", "compassion", "welfare", "suffering"),
    "fairness": ("justice", "equality", "rights", "honesty", "wages"),
    "loyalty": ("solidarity", "patriotism", "community", "unity", "belonging"),
    "authority": ("respect", "obedience", "tradition", "discipline", "hierarchy"),
    "purity": ("sanctity", "contamination", "decency", "holiness", "degradation"),
}
_MULTI_ASPECTS = ("duty", "dignity")
_NOISE_ASPECTS = ("economy", "technology", "policy", "traffic", "weather", "sports")
_FOUNDATION_DRAW = (
    ["care"] * 30 + ["fairness"] * 24 + ["loyalty"] * 16
    + ["authority"] * 14 + ["purity"] * 10
)


def generate_distant_corpus(size: int = 500) -> list[dict]:
    """(text, topic, aspects) records with known aspect-derived labels."""
    rng = random.Random("moralframe-distant-fixture")
    topics = DISTANT_TRAIN_TOPICS + DISTANT_VALIDATION_TOPICS
    records: list[dict] = []
    for i in range(size):
        topic = topics[i % len(topics)]
        roll = rng.random()
        if roll < 0.06:
            aspects = list(rng.sample(_NOISE_ASPECTS, 2))
        elif roll < 0.16:
            aspects = [rng.choice(_MULTI_ASPECTS), rng.choice(_NOISE_ASPECTS)]
        elif roll < 0.40:
            f1, f2 = rng.sample(_FOUNDATION_DRAW, 2)
            aspects = [rng.choice(_ASPECT_POOLS[f1]), rng.choice(_ASPECT_POOLS[f2])]
        else:
            f1 = rng.choice(_FOUNDATION_DRAW)
            aspects = [rng.choice(_ASPECT_POOLS[f1]), rng.choice(_NOISE_ASPECTS)]
        rng.shuffle(aspects)
        mention = " and ".join(aspects)
        records.append(
            {
                "text": f"People debating {topic} often bring up {mention}.",
                "topic": topic,
                "aspects": aspects,
            }
        )
    return records


def write_fixture_files(directory: str | Path) -> dict[str, int]:
    """Write corpus.jsonl and distant_corpus.jsonl; returns record counts."""
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    documents = generate_fixture_corpus()
    with open(path / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for doc in documents:
            fh.write(
                json.dumps(
                    {"id": doc.id, "title": doc.title, "text": doc.body, "topic": doc.topic},
                    ensure_ascii=False,
                )
                + "\n"
            )
    distant = generate_distant_corpus()
    with open(path / "distant_corpus.jsonl", "w", encoding="utf-8") as fh:
        for record in distant:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
    return {"documents": len(documents), "distant_records": len(distant)}
