from __future__ import annotations

import pytest

from moralframe import resources
from moralframe.corpus import Document, MarkerLexicon, segment_and_tokenize, with_markers
from moralframe.index import MarkerLexicons, build_index
from moralframe.mining import MiningConfig
from moralframe.morals import LexiconMoralScorer
from moralframe.pipeline import ArgumentEngine


def make_sentence(text: str, sentiment=(), causality=(), cues=None, doc_id="t"):
    """One annotated sentence from raw text, for unit-level tests."""
    sentences = segment_and_tokenize(Document(id=doc_id, body=text))
    assert len(sentences) == 1, f"expected one sentence, got {len(sentences)}"
    return with_markers(
        sentences[0],
        MarkerLexicon.from_terms(sentiment),
        MarkerLexicon.from_terms(causality),
        MarkerLexicon.from_terms(cues) if cues is not None else None,
    )


@pytest.fixture(scope="session")
def default_config():
    return resources.default_pipeline_config()


@pytest.fixture(scope="session")
def marker_lexicons() -> MarkerLexicons:
    return resources.default_marker_lexicons()


@pytest.fixture(scope="session")
def moral_lexicon():
    return resources.default_moral_lexicon()


@pytest.fixture(scope="session")
def scorer(moral_lexicon):
    return LexiconMoralScorer(moral_lexicon)


@pytest.fixture(scope="session")
def mining_config() -> MiningConfig:
    return resources.default_mining_config()


@pytest.fixture(scope="session")
def fixture_corpus():
    return resources.fixture_corpus()


@pytest.fixture(scope="session")
def fixture_index(fixture_corpus, default_config, marker_lexicons):
    return build_index(fixture_corpus, default_config, marker_lexicons)


@pytest.fixture(scope="session")
def engine(fixture_index, scorer, mining_config) -> ArgumentEngine:
    return ArgumentEngine(index=fixture_index, scorer=scorer, mining_config=mining_config)
