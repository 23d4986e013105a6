"""Command line interface: data generation, index building, eval, serving."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import click

from .corpus import CorpusError, load_corpus
from .ranker import Query, ScreenRanker
from .recognizer import DoodleClassifier, train_reference_classifier
from .sketchindex import DoodlePlacement, default_doodle_classes
from .storage import StorageError
from .synonyms import EmbeddingModel, SynonymTable, Thesaurus, build_synonym_table
from .textindex import TextIndexer, parse_query_texts
from .textpipe import TextPipeline, load_wordlist
from . import synth


@click.group()
def main() -> None:
    """Search mobile app screens with doodles and positioned text."""


def _fail(exc: Exception) -> click.ClickException:
    return click.ClickException(str(exc))


@main.command("gen-corpus")
@click.argument("n_screens", type=click.IntRange(min=1))
@click.argument("out_dir", type=click.Path(file_okay=False, path_type=Path))
@click.option("--seed", default=17, show_default=True, help="Generator seed.")
def gen_corpus(n_screens: int, out_dir: Path, seed: int) -> None:
    """Write N_SCREENS synthetic screens into OUT_DIR."""
    screens = synth.generate_screens(n_screens, seed)
    synth.write_corpus(screens, out_dir)
    click.echo(f"wrote {len(screens)} screens to {out_dir}")


@main.command("gen-doodles")
@click.argument("out_file", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--per-class", default=40, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=23, show_default=True)
@click.option(
    "--classes",
    multiple=True,
    help="Restrict to these classes; repeatable. Defaults to all.",
)
def gen_doodles(out_file: Path, per_class: int, seed: int, classes: tuple[str, ...]) -> None:
    """Write labeled synthetic doodles as JSON lines to OUT_FILE."""
    available = synth.doodle_classes()
    picked = classes or available
    unknown = sorted(set(picked) - set(available))
    if unknown:
        raise click.ClickException(f"unknown classes: {', '.join(unknown)}")
    labeled = synth.generate_doodles(tuple(picked), per_class, seed)
    synth.write_doodles(labeled, out_file)
    click.echo(f"wrote {len(labeled)} doodles ({len(picked)} classes) to {out_file}")


@main.command("build-synonyms")
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option(
    "--model",
    "models",
    multiple=True,
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Embedding file (word followed by numbers per line); repeatable.",
)
@click.option(
    "--thesaurus",
    "thesauri",
    multiple=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Thesaurus file (word: syn1, syn2 per line); at most two, ordered.",
)
@click.option(
    "--ne-lexicon",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Named-entity list overriding the packaged one.",
)
def build_synonyms(
    corpus_dir: Path,
    out: Path,
    models: tuple[Path, ...],
    thesauri: tuple[Path, ...],
    ne_lexicon: Path | None,
) -> None:
    """Derive the synonym table for every term indexed from CORPUS_DIR."""
    if len(thesauri) > 2:
        raise click.ClickException("at most two thesauri are supported")
    try:
        corpus = load_corpus(corpus_dir)
        vocabulary = TextIndexer().fit(corpus).vocabulary_
        loaded_models = [EmbeddingModel.load(p) for p in models]
        loaded_thesauri = tuple(Thesaurus.load(p) for p in thesauri)
        lexicon = load_wordlist(ne_lexicon) if ne_lexicon else TextPipeline().ne_lexicon
        table = build_synonym_table(list(vocabulary), loaded_models, loaded_thesauri, lexicon)
        table.save(out)
    except (CorpusError, ValueError, OSError) as exc:
        raise _fail(exc) from exc
    non_empty = sum(1 for syns in table.entries.values() if syns)
    click.echo(f"wrote {len(table)} entries ({non_empty} with synonyms) to {out}")


@main.command("build-index")
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option(
    "--synonyms",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Synonym table produced by build-synonyms.",
)
def build_index(corpus_dir: Path, out: Path, synonyms: Path | None) -> None:
    """Index CORPUS_DIR for search and save the artifact to OUT."""
    try:
        corpus = load_corpus(corpus_dir)
        table = SynonymTable.load(synonyms) if synonyms else None
        ranker = ScreenRanker(synonyms=table).fit(corpus)
        ranker.save(out)
    except (CorpusError, StorageError, ValueError, OSError) as exc:
        raise _fail(exc) from exc
    dropped = sum(s.dropped_element_count for s in corpus.screens)
    click.echo(
        f"indexed {len(corpus)} screens, {len(ranker.text_index_.vocabulary_)} terms, "
        f"{ranker.sketch_index_.skipped_label_count_} unmapped labels skipped"
    )
    if dropped:
        click.echo(f"warning: {dropped} degenerate elements dropped during parsing")
    click.echo(f"wrote {out}")


@main.command("train-recognizer")
@click.argument("doodles_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--neighbors", default=3, show_default=True, type=click.IntRange(min=1))
def train_recognizer(doodles_file: Path, out: Path, neighbors: int) -> None:
    """Train the doodle classifier from a JSONL file of labeled sketches."""
    try:
        labeled = synth.read_doodles(doodles_file)
        classifier = train_reference_classifier(labeled, n_neighbors=neighbors)
        classifier.save(out)
    except (ValueError, OSError) as exc:
        raise _fail(exc) from exc
    click.echo(
        f"trained on {len(labeled)} doodles, {len(classifier.classes_)} classes; wrote {out}"
    )


@dataclass
class EvalRow:
    target_id: str
    rank: int | None
    latency_ms: float


@dataclass
class EvalReport:
    """Per-query outcomes plus the usual retrieval summary numbers."""

    rows: list[EvalRow]

    def accuracy_at(self, k: int) -> float:
        if not self.rows:
            return 0.0
        hits = sum(1 for row in self.rows if row.rank is not None and row.rank <= k)
        return hits / len(self.rows)

    def mean_latency_ms(self) -> float:
        if not self.rows:
            return 0.0
        return sum(row.latency_ms for row in self.rows) / len(self.rows)

    def p95_latency_ms(self) -> float:
        if not self.rows:
            return 0.0
        ordered = sorted(row.latency_ms for row in self.rows)
        return ordered[max(0, math.ceil(0.95 * len(ordered)) - 1)]

    def to_dict(self) -> dict:
        return {
            "queries": [
                {"target_id": r.target_id, "rank": r.rank, "latency_ms": round(r.latency_ms, 3)}
                for r in self.rows
            ],
            "accuracy": {str(k): self.accuracy_at(k) for k in (1, 10, 50)},
            "mean_latency_ms": round(self.mean_latency_ms(), 3),
            "p95_latency_ms": round(self.p95_latency_ms(), 3),
        }


def parse_icon_spec(spec: str) -> DoodlePlacement:
    """Parse ``Class@l,t,r,b`` with normalized coordinates."""
    name, sep, coords = spec.partition("@")
    if not sep or not name:
        raise ValueError(f"icon spec {spec!r}: expected Class@l,t,r,b")
    parts = coords.split(",")
    if len(parts) != 4:
        raise ValueError(f"icon spec {spec!r}: expected four coordinates")
    try:
        bbox = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"icon spec {spec!r}: bad coordinate") from exc
    return DoodlePlacement(icon_class=name, bbox=bbox)


def parse_query_file(raw: str, ranker: ScreenRanker) -> list[tuple[str, Query]]:
    """Parse eval queries: ``target<TAB>icon:Class@l,t,r,b;...<TAB>text terms``."""
    pipeline = ranker.text_index_.pipeline_
    queries = []
    for n, line in enumerate(raw.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if not fields[0]:
            raise ValueError(f"queries line {n}: missing target id")
        target = fields[0]
        doodles = []
        if len(fields) > 1 and fields[1]:
            for chunk in fields[1].split(";"):
                if not chunk.startswith("icon:"):
                    raise ValueError(f"queries line {n}: expected icon: prefix in {chunk!r}")
                doodles.append(parse_icon_spec(chunk[len("icon:") :]))
        texts = []
        if len(fields) > 2 and fields[2]:
            texts = parse_query_texts(fields[2], pipeline)
        if not doodles and not texts:
            raise ValueError(f"queries line {n}: empty query")
        queries.append((target, Query(doodles=doodles, texts=texts)))
    return queries


@main.command("eval")
@click.argument("index_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("queries_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--limit", default=50, show_default=True, type=click.IntRange(min=1))
@click.option("--json-out", type=click.Path(dir_okay=False, path_type=Path))
def eval_queries(index_file: Path, queries_file: Path, limit: int, json_out: Path | None) -> None:
    """Replay a query file against a saved index and report rank metrics."""
    try:
        ranker = ScreenRanker.load(index_file)
        ranker.warm()
        queries = parse_query_file(queries_file.read_text("utf-8"), ranker)
    except (StorageError, ValueError, OSError) as exc:
        raise _fail(exc) from exc

    rows = []
    for target, query in queries:
        started = time.perf_counter()
        try:
            result = ranker.rank(query, limit=limit)
        except ValueError as exc:
            raise _fail(exc) from exc
        elapsed = (time.perf_counter() - started) * 1000
        rows.append(EvalRow(target_id=target, rank=result.rank_of(target), latency_ms=elapsed))

    report = EvalReport(rows=rows)
    click.echo(f"{'target':<16} {'rank':>5} {'ms':>8}")
    for row in rows:
        rank = str(row.rank) if row.rank is not None else "-"
        click.echo(f"{row.target_id:<16} {rank:>5} {row.latency_ms:>8.2f}")
    click.echo(
        f"top-1 {report.accuracy_at(1):.3f}  top-10 {report.accuracy_at(10):.3f}  "
        f"top-50 {report.accuracy_at(50):.3f}  mean {report.mean_latency_ms():.2f}ms  "
        f"p95 {report.p95_latency_ms():.2f}ms"
    )
    if json_out is not None:
        json_out.write_text(json.dumps(report.to_dict(), indent=2) + "\n", "utf-8")
        click.echo(f"wrote {json_out}")


@main.command("search")
@click.argument("index_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--icon", "icons", multiple=True, help="Placement as Class@l,t,r,b; repeatable.")
@click.option("--text", "texts", multiple=True, help="Query text, may carry zone prefixes.")
@click.option("--limit", default=10, show_default=True, type=click.IntRange(min=1))
@click.option("--as-json", is_flag=True, help="Print machine-readable results.")
def search(
    index_file: Path,
    icons: tuple[str, ...],
    texts: tuple[str, ...],
    limit: int,
    as_json: bool,
) -> None:
    """Run one query against a saved index."""
    try:
        ranker = ScreenRanker.load(index_file)
        pipeline = ranker.text_index_.pipeline_
        doodles = [parse_icon_spec(spec) for spec in icons]
        parsed_texts = []
        for raw in texts:
            parsed_texts.extend(parse_query_texts(raw, pipeline))
        result = ranker.rank(Query(doodles=doodles, texts=parsed_texts), limit=limit)
    except (StorageError, ValueError, OSError) as exc:
        raise _fail(exc) from exc

    if as_json:
        click.echo(
            json.dumps(
                [
                    {"rank": item.rank, "score": item.score, "screen_id": item.screen_id}
                    for item in result
                ]
            )
        )
        return
    if not result.items:
        click.echo("no matches")
        return
    for item in result:
        click.echo(f"{item.rank:>3}  {item.score:>8.4f}  {item.screen_id}")


@main.command("serve")
@click.argument("corpus_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--index", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--model", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--doodles", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--synonyms", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8400, show_default=True, type=int)
@click.option("--ui", type=click.Path(exists=True, file_okay=False, path_type=Path))
def serve(
    corpus_dir: Path,
    index: Path | None,
    model: Path | None,
    doodles: Path | None,
    synonyms: Path | None,
    host: str,
    port: int,
    ui: Path | None,
) -> None:
    """Serve the search API (and optionally a UI) over HTTP.

    Without --index the corpus is indexed at startup; without --model a
    recognizer is trained from --doodles or from generated ones.
    """
    from .service import create_app

    try:
        corpus = load_corpus(corpus_dir)
        if index is not None:
            ranker = ScreenRanker.load(index)
        else:
            table = SynonymTable.load(synonyms) if synonyms else None
            ranker = ScreenRanker(synonyms=table).fit(corpus)
        if model is not None:
            classifier = DoodleClassifier.load(model)
        else:
            labeled = (
                synth.read_doodles(doodles)
                if doodles is not None
                else synth.generate_doodles(per_class=25, seed=7)
            )
            classifier = train_reference_classifier(labeled, classes=default_doodle_classes())
        app = create_app(ranker, classifier, corpus, ui_dir=str(ui) if ui else None)
    except (CorpusError, StorageError, ValueError, OSError) as exc:
        raise _fail(exc) from exc

    click.echo(f"serving {len(corpus)} screens on http://{host}:{port}")
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
