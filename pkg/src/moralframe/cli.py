"""Command-line interface.

Subcommands: ingest, build-dataset, generate, batch-generate, evaluate,
analyze-study, serve, export-fixtures. Unknown flags exit with status 2;
pipeline failures exit with status 1 and a diagnostic.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import resources
from .corpus import Document, read_corpus_jsonl, segment_and_tokenize
from .evaluation import multilabel_prf, rank_stats
from .foundations import FOUNDATIONS, Framing, MoralFoundation, parse_foundation
from .index import build_index, load_index, save_index
from .mining import Stance
from .morals import (
    ExternalMoralScorer,
    LexiconMoralScorer,
    aggregate_text_morals,
    build_distant_dataset,
    topic_moral_report,
    write_dataset_jsonl,
)
from .narrative import argument_to_document, render_text
from .pipeline import ArgumentEngine, GenerationRequest
from .study import StudyStore, load_study_bundle, records_from_jsonl


def _make_scorer(scorer_endpoint: str | None):
    if scorer_endpoint:
        return ExternalMoralScorer(endpoint=scorer_endpoint)
    return LexiconMoralScorer(resources.default_moral_lexicon())


def _load_engine(index_dir: str, config: str | None, scorer_endpoint: str | None) -> ArgumentEngine:
    try:
        index = load_index(index_dir)
    except (OSError, ValueError) as exc:
        raise click.ClickException(f"cannot load index from {index_dir}: {exc}")
    _, mining_config = resources.load_configs(config)
    return ArgumentEngine(index=index, scorer=_make_scorer(scorer_endpoint), mining_config=mining_config)


def _slug(text: str) -> str:
    return "-".join(text.lower().split())


scorer_endpoint_option = click.option(
    "--scorer-endpoint",
    envvar="MD_SCORER_ENDPOINT",
    default=None,
    help="External moral scorer URL (defaults to the bundled lexicon scorer).",
)
config_option = click.option(
    "--config", type=click.Path(exists=True, dir_okay=False), default=None,
    help="INI config overriding the bundled pipeline/weight defaults.",
)


@click.group()
def main() -> None:
    """Morally framed argument generation and study tooling."""


@main.command()
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--index", "index_dir", type=click.Path(file_okay=False), required=True)
@config_option
def ingest(corpus: str, index_dir: str, config: str | None) -> None:
    """Index a JSON-lines corpus into an on-disk index directory."""
    pipeline_config, _ = resources.load_configs(config)
    lexicons = resources.default_marker_lexicons()
    try:
        with open(corpus, encoding="utf-8") as fh:
            index = build_index(read_corpus_jsonl(fh), pipeline_config, lexicons)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    save_index(index, index_dir)
    click.echo(
        f"indexed {index.stats.sentence_count} sentences "
        f"from {index.stats.document_count} documents into {index_dir}"
    )


@main.command("build-dataset")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True,
              help="JSON-lines of {text, topic, aspects[]}.")
@click.option("--aspect-map", "aspect_map_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Aspect TSV (defaults to the bundled map).")
@click.option("--validation-topics", required=True,
              help="Comma-separated topics reserved for the validation split.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def build_dataset(corpus: str, aspect_map_path: str | None, validation_topics: str, out_dir: str) -> None:
    """Build a distantly supervised moral dataset from an aspect-annotated corpus."""
    if aspect_map_path:
        from .foundations import load_aspect_map

        with open(aspect_map_path, encoding="utf-8") as fh:
            aspect_map = load_aspect_map(fh)
    else:
        aspect_map = resources.default_aspect_map()
    stream = []
    with open(corpus, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            stream.append((obj["text"], obj["topic"], list(obj.get("aspects", []))))
    topics = {t.strip() for t in validation_topics.split(",") if t.strip()}
    try:
        dataset = build_distant_dataset(stream, aspect_map, topics)
    except (ValueError, RuntimeError) as exc:
        raise click.ClickException(str(exc))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "train.jsonl", "w", encoding="utf-8") as fh:
        n_train = write_dataset_jsonl(dataset.train, fh)
    with open(out / "validation.jsonl", "w", encoding="utf-8") as fh:
        n_val = write_dataset_jsonl(dataset.validation, fh)
    report = {
        "train_topics": sorted(dataset.topic_split[0]),
        "validation_topics": sorted(dataset.topic_split[1]),
        "train_examples": n_train,
        "validation_examples": n_val,
        "topic_moral_percentages": topic_moral_report(dataset.train + dataset.validation),
    }
    (out / "report.json").write_text(json.dumps(report, indent=2), encoding="utf-8")
    click.echo(f"wrote {n_train} train / {n_val} validation examples to {out_dir}")


def _parse_morals(morals: str | None) -> frozenset[MoralFoundation] | None:
    if morals is None:
        return None
    try:
        parsed = frozenset(parse_foundation(m) for m in morals.split(",") if m.strip())
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if not parsed:
        raise click.UsageError("--morals must name at least one foundation")
    return parsed


@main.command()
@click.option("--index", "index_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--topic", required=True)
@click.option("--stance", type=click.Choice(["pro", "con"]), required=True)
@click.option("--framing", type=click.Choice([f.value for f in Framing]), default=None)
@click.option("--morals", default=None, help="Comma-separated explicit target foundations.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@click.option("--text", "as_text", is_flag=True, help="Print the rendered argument text.")
@config_option
@scorer_endpoint_option
def generate(
    index_dir: str,
    topic: str,
    stance: str,
    framing: str | None,
    morals: str | None,
    out_path: str | None,
    as_text: bool,
    config: str | None,
    scorer_endpoint: str | None,
) -> None:
    """Generate one morally framed argument."""
    if (framing is None) == (morals is None):
        raise click.UsageError("give exactly one of --framing or --morals")
    engine = _load_engine(index_dir, config, scorer_endpoint)
    request = GenerationRequest(
        topic=topic,
        stance=Stance(stance),
        framing=Framing(framing) if framing else None,
        morals=_parse_morals(morals),
    )
    outcome = engine.generate(request)
    if not outcome.ok:
        raise click.ClickException(f"insufficient material: {outcome.reason}")
    document = argument_to_document(outcome.argument)
    payload = json.dumps(document, indent=2, ensure_ascii=False)
    if out_path:
        Path(out_path).write_text(payload + "\n", encoding="utf-8")
        click.echo(f"wrote {out_path}")
    if as_text or not out_path:
        click.echo(render_text(outcome.argument) if as_text else payload)


@main.command("batch-generate")
@click.option("--index", "index_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--topics", "topics_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Topic list, one per line (defaults to the bundled fixture topics).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@config_option
@scorer_endpoint_option
def batch_generate(
    index_dir: str,
    topics_path: str | None,
    out_dir: str,
    config: str | None,
    scorer_endpoint: str | None,
) -> None:
    """Generate the full topic x stance x framing grid into a directory."""
    if topics_path:
        lines = Path(topics_path).read_text(encoding="utf-8").splitlines()
        topics = [t.strip() for t in lines if t.strip()]
    else:
        topics = resources.fixture_topics()
    if not topics:
        raise click.UsageError("topic list is empty")
    engine = _load_engine(index_dir, config, scorer_endpoint)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written, failed = 0, []
    for request, outcome in engine.batch_generate(topics):
        name = f"{_slug(request.topic)}__{request.stance.value}__{request.framing.value}.json"
        if outcome.ok:
            document = argument_to_document(outcome.argument)
            (out / name).write_text(
                json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
            )
            written += 1
        else:
            failed.append((name, outcome.reason))
    click.echo(f"wrote {written} arguments to {out_dir}")
    for name, reason in failed:
        click.echo(f"insufficient material for {name}: {reason}", err=True)
    if failed:
        sys.exit(1)


@main.command()
@click.option("--gold", "gold_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON-lines of {text, morals[]} (defaults to the bundled labeled fixture).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@config_option
@scorer_endpoint_option
def evaluate(gold_path: str | None, out_dir: str, config: str | None, scorer_endpoint: str | None) -> None:
    """Score labeled texts with the configured scorer and report P/R/F1."""
    if gold_path:
        records = [
            json.loads(line)
            for line in Path(gold_path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    else:
        records = resources.fixture_eval_labeled()
    pipeline_config, _ = resources.load_configs(config)
    scorer = _make_scorer(scorer_endpoint)
    gold, pred = [], []
    for i, record in enumerate(records):
        gold.append({parse_foundation(m) for m in record["morals"]})
        sentences = segment_and_tokenize(Document(id=f"gold-{i}", body=record["text"]))
        profiles = [scorer.score(s) for s in sentences]
        pred.append(aggregate_text_morals(profiles, pipeline_config.moral_confidence_threshold))
    report = multilabel_prf(gold, pred)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    as_json = {
        "per_foundation": {
            f.value: vars(report.per_foundation[f]) for f in FOUNDATIONS
        },
        "macro": vars(report.macro),
        "examples": len(records),
    }
    (out / "metrics.json").write_text(json.dumps(as_json, indent=2), encoding="utf-8")
    with open(out / "metrics.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["foundation", "precision", "recall", "f1"])
        for f in FOUNDATIONS:
            m = report.per_foundation[f]
            writer.writerow([f.value, f"{m.precision:.4f}", f"{m.recall:.4f}", f"{m.f1:.4f}"])
        writer.writerow(["macro", f"{report.macro.precision:.4f}",
                        f"{report.macro.recall:.4f}", f"{report.macro.f1:.4f}"])
    click.echo(f"{'foundation':<12} {'pre':>6} {'rec':>6} {'f1':>6}")
    for f in FOUNDATIONS:
        m = report.per_foundation[f]
        click.echo(f"{f.value:<12} {m.precision:>6.2f} {m.recall:>6.2f} {m.f1:>6.2f}")
    click.echo(f"{'macro':<12} {report.macro.precision:>6.2f} "
               f"{report.macro.recall:>6.2f} {report.macro.f1:>6.2f}")


@main.command("analyze-study")
@click.option("--store", "store_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--export", "export_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--by", "group_by", default="ideology,relation",
              help="Comma-set of grouping axes: ideology, relation.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def analyze_study(store_dir: str | None, export_path: str | None, group_by: str, out_dir: str) -> None:
    """Compute rank distributions and significance tests from study records."""
    if (store_dir is None) == (export_path is None):
        raise click.UsageError("give exactly one of --store or --export")
    if store_dir:
        store = StudyStore(store_dir)
        records = store.ranking_records()
    else:
        records = records_from_jsonl(Path(export_path).read_text(encoding="utf-8"))
    if not records:
        raise click.ClickException("no ranking records found")
    axes = {a.strip() for a in group_by.split(",") if a.strip()}
    unknown = axes - {"ideology", "relation"}
    if unknown:
        raise click.UsageError(f"unknown grouping axes: {sorted(unknown)}")
    stats = rank_stats(records, by_ideology="ideology" in axes, by_relation="relation" in axes)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    as_json = {
        group: {
            "per_framing": {
                f.value: {
                    "distribution": list(s.per_framing[f].distribution),
                    "mean_rank": s.per_framing[f].mean_rank,
                    "count": s.per_framing[f].count,
                }
                for f in Framing
            },
            "comparisons": [
                {
                    "framing_a": c.framing_a.value,
                    "framing_b": c.framing_b.value,
                    "mean_difference": c.mean_difference,
                    "t_statistic": c.t_statistic,
                    "p_value": c.p_value,
                    "ci95": [c.ci_low, c.ci_high],
                    "note": c.note,
                }
                for c in s.comparisons
            ],
        }
        for group, s in stats.items()
    }
    (out / "rank_report.json").write_text(json.dumps(as_json, indent=2), encoding="utf-8")
    with open(out / "rank_distributions.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "framing", "rank1", "rank2", "rank3", "mean_rank", "n"])
        for group, s in stats.items():
            for f in Framing:
                summary = s.per_framing[f]
                writer.writerow(
                    [group, f.value]
                    + [f"{p:.4f}" for p in summary.distribution]
                    + [f"{summary.mean_rank:.4f}", summary.count]
                )
    with open(out / "rank_comparisons.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "framing_a", "framing_b", "mean_diff", "t", "p", "ci_low", "ci_high", "note"])
        for group, s in stats.items():
            for c in s.comparisons:
                writer.writerow([
                    group, c.framing_a.value, c.framing_b.value,
                    f"{c.mean_difference:.4f}", f"{c.t_statistic:.4f}", f"{c.p_value:.6f}",
                    f"{c.ci_low:.4f}", f"{c.ci_high:.4f}", c.note,
                ])
    for group, s in stats.items():
        means = ", ".join(f"{f.value}={s.per_framing[f].mean_rank:.2f}" for f in Framing)
        click.echo(f"{group}: {means}")
    click.echo(f"reports written to {out_dir}")


@main.command()
@click.option("--index", "index_dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--study-bundle", "bundle_dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Directory of batch-generate output to run the study over.")
@click.option("--store", "store_dir", type=click.Path(file_okay=False), default="study-store")
@click.option("--static", "static_dir", type=click.Path(file_okay=False), default=None,
              help="Built UI assets to serve at /.")
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@config_option
@scorer_endpoint_option
def serve(
    index_dir: str | None,
    bundle_dir: str | None,
    store_dir: str,
    static_dir: str | None,
    port: int,
    host: str,
    config: str | None,
    scorer_endpoint: str | None,
) -> None:
    """Start the generation + study service."""
    import uvicorn

    from .service import create_app

    engine = _load_engine(index_dir, config, scorer_endpoint) if index_dir else None
    store = None
    if bundle_dir:
        try:
            store = StudyStore(store_dir, items=load_study_bundle(bundle_dir))
        except ValueError as exc:
            raise click.ClickException(str(exc))
    app = create_app(engine=engine, store=store, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


@main.command("export-fixtures")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def export_fixtures(out_dir: str) -> None:
    """Copy the bundled fixture corpus files out for experimentation."""
    from .fixtures import write_fixture_files

    counts = write_fixture_files(out_dir)
    topics = resources.fixture_topics()
    (Path(out_dir) / "topics.txt").write_text("\n".join(topics) + "\n", encoding="utf-8")
    click.echo(
        f"wrote {counts['documents']} documents and "
        f"{counts['distant_records']} distant-supervision records to {out_dir}"
    )


if __name__ == "__main__":
    main()
