"""Access to the bundled default lexicons, configs, and fixture data."""

from __future__ import annotations

import configparser
import json
from importlib import resources as importlib_resources
from pathlib import Path

from .corpus import Document, MarkerLexicon, load_marker_lexicon, read_corpus_jsonl
from .foundations import (
    AspectMoralMap,
    MoralLexicon,
    PipelineConfig,
    load_aspect_map,
    load_moral_lexicon,
)
from .index import MarkerLexicons
from .mining import MiningConfig, mining_config_from_parser


def _resource_text(name: str) -> str:
    return (importlib_resources.files("moralframe") / "resources" / name).read_text(
        encoding="utf-8"
    )


def default_moral_lexicon() -> MoralLexicon:
    return load_moral_lexicon(_resource_text("moral_lexicon.csv"))


def default_aspect_map() -> AspectMoralMap:
    return load_aspect_map(_resource_text("aspect_map.tsv"))


def default_marker_lexicons() -> MarkerLexicons:
    return MarkerLexicons(
        sentiment=load_marker_lexicon(_resource_text("sentiment_markers.txt")),
        causality=load_marker_lexicon(_resource_text("causality_markers.txt")),
        evidence_cues=load_marker_lexicon(_resource_text("evidence_cues.txt")),
    )


def _merged_parser(config_path: str | Path | None = None) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    parser.read_string(_resource_text("default_config.ini"))
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        parser.read(path, encoding="utf-8")
    return parser


def load_configs(config_path: str | Path | None = None) -> tuple[PipelineConfig, MiningConfig]:
    """Bundled defaults, optionally overlaid with a user INI file."""
    parser = _merged_parser(config_path)
    pipeline = PipelineConfig.from_mapping(dict(parser["pipeline"])) if "pipeline" in parser else PipelineConfig()
    return pipeline, mining_config_from_parser(parser)


def default_pipeline_config() -> PipelineConfig:
    return load_configs()[0]


def default_mining_config() -> MiningConfig:
    return load_configs()[1]


def fixture_corpus() -> list[Document]:
    return list(read_corpus_jsonl(_resource_text("fixture/corpus.jsonl")))


def fixture_topics() -> list[str]:
    lines = _resource_text("fixture_topics.txt").splitlines()
    return [line.strip() for line in lines if line.strip()]


def fixture_distant_corpus() -> list[tuple[str, str, list[str]]]:
    records = []
    for line in _resource_text("fixture/distant_corpus.jsonl").splitlines():
        if line.strip():
            obj = json.loads(line)
            records.append((obj["text"], obj["topic"], list(obj["aspects"])))
    return records


def fixture_eval_labeled() -> list[dict]:
    """Hand-labeled texts for the end-to-end scorer evaluation report."""
    return [
        json.loads(line)
        for line in _resource_text("fixture/eval_labeled.jsonl").splitlines()
        if line.strip()
    ]
