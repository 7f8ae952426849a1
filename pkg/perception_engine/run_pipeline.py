"""
Command-line entry point of the perception engine.

Usage (from project root):
  uop make-sample --out data/sample
  uop build-dict --config data/sample/sample.env
  uop extract    --config data/sample/sample.env
  uop analyze    --config data/sample/sample.env
  uop compare    --config data/sample/sample.env

Every command takes the same config file, accepts --seed / --out / --set KEY=VALUE overrides,
and leaves a manifest_<command>.json next to its outputs. A failing command removes the
outputs it already wrote and exits with code 1.
"""
import json
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, Callable, Iterator, Optional

import typer
from rich.console import Console

from perception_engine.analysis.comparison import COMPARISON_COLUMNS, cluster_points, nearest_distance_comparison
from perception_engine.analysis.strength import (
    SUMMARY_COLUMNS,
    ZSCORE_COLUMNS,
    count_points,
    external_strength,
    report_frame,
    strength_summary,
    z_scores,
)
from perception_engine.analysis.term_frequency import TERM_COLUMNS, term_frequencies
from perception_engine.config import PipelineConfig, load_config
from perception_engine.corpus.file_loader import (
    BUNDLED_LEXICON_DIR,
    load_clusters,
    load_corpus,
    load_external_points,
    load_lexicons,
    load_neighborhoods,
)
from perception_engine.corpus.sample_data import make_sample
from perception_engine.corpus.writers import (
    CLUSTER_SUMMARY_COLUMNS,
    cluster_summary_rows,
    save_clusters,
    write_csv,
    write_geojson,
)
from perception_engine.dictionary.builder import build_dictionary
from perception_engine.dictionary.communities import load_dictionary, save_dictionary
from perception_engine.embedding_model.embeddings import load_model, save_model
from perception_engine.exceptions import ConfigError, PerceptionEngineError, StageError
from perception_engine.extract.filters import score_histogram
from perception_engine.extract.pipeline import extract_perceptions
from perception_engine.logging_config import configure_logging, get_logger
from perception_engine.schemas import RunManifest
from perception_engine.text.preprocess import preprocess_corpus
from perception_engine.utils.artifacts import file_digest, remove_outputs

logger = get_logger(__name__)
err_console = Console(stderr=True)

app = typer.Typer(
    name="uop",
    help="Urban perception extraction: dictionary build, extraction, analysis and comparison.",
    no_args_is_help=True,
    add_completion=False,
)

ConfigOption = Annotated[Optional[Path], typer.Option("--config", "-c", help="Flat KEY=value config file.")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Overrides SEED.")]
OutOption = Annotated[Optional[Path], typer.Option("--out", help="Overrides OUT_DIR.")]
SetOption = Annotated[Optional[list[str]], typer.Option("--set", help="KEY=VALUE override, repeatable.")]
LogDirOption = Annotated[Optional[Path], typer.Option("--log-dir", help="Directory for pipeline.log / error.log.")]
LogLevelOption = Annotated[Optional[str], typer.Option("--log-level", help="Console log level.")]


def _overrides(seed: Optional[int], out: Optional[Path], settings: Optional[list[str]]) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for item in settings or []:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got '{item}'")
        key, value = item.split("=", 1)
        values[key.strip()] = value.strip()
    if seed is not None:
        values["seed"] = seed
    if out is not None:
        values["out_dir"] = out
    return values


def _required(config: PipelineConfig, name: str) -> Path:
    value = getattr(config, name)
    if value is None:
        raise ConfigError(f"{name.upper()} is not set")
    return value


class _Run:
    """Bookkeeping of one command: timed stages, input digests, written outputs, manifest."""

    def __init__(self, command: str, config: PipelineConfig):
        self.command = command
        self.config = config
        self.out_dir = Path(config.out_dir)
        self.outputs: list[Path] = []
        self.digests: dict[str, str] = {}
        self.counts: dict[str, Any] = {}
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        logger.info(f"[{self.command}] stage '{name}' started")
        start = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except Exception as e:
            raise StageError(name, e) from e
        finally:
            self.timings[name] = round(time.perf_counter() - start, 3)
        logger.info(f"[{self.command}] stage '{name}' finished in {self.timings[name]}s")

    def input(self, path: Path) -> Path:
        self.digests[str(path)] = file_digest(path)
        return path

    def output(self, name: str | Path) -> Path:
        path = Path(name) if Path(name).is_absolute() else self.out_dir / name
        self.outputs.append(path)
        return path

    def lexicons(self):
        directory = self.config.lexicon_dir or BUNDLED_LEXICON_DIR
        lex = load_lexicons(directory)
        self.input(directory)
        return lex

    def write_manifest(self) -> Path:
        manifest = RunManifest(
            command=self.command,
            config=self.config.echo(),
            input_digests=self.digests,
            stage_counts=self.counts,
            timings=self.timings,
            outputs=[str(p) for p in self.outputs],
        )
        path = self.output(f"manifest_{self.command}.json")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n", encoding="utf-8")
        return path


def _execute(command: str, config_path: Optional[Path], overrides: dict[str, Any] | Callable[[], dict[str, Any]],
             body: Callable[[_Run], None]) -> None:
    run: Optional[_Run] = None
    try:
        config = load_config(config_path, overrides() if callable(overrides) else overrides)
        run = _Run(command, config)
        logger.info(f"Running '{command}' into {run.out_dir}")
        body(run)
        try:
            run.write_manifest()
        except OSError as e:
            raise StageError("manifest", e) from e
    except PerceptionEngineError as e:
        if run is not None:
            remove_outputs(run.outputs)
        logger.error(f"'{command}' failed: {str(e)}", exc_info=True)
        err_console.print(f"error: {e}", style="bold red", markup=False, soft_wrap=True)
        raise typer.Exit(code=1)
    err_console.print(f"{command}: done, outputs in {run.out_dir}", markup=False, soft_wrap=True)


def _dictionary_path(config: PipelineConfig) -> Path:
    return config.dictionary_path or Path(config.out_dir) / "dictionary.json"


def _model_path(config: PipelineConfig) -> Path:
    return config.model_path or Path(config.out_dir) / "model.txt"


@app.callback()
def main(log_dir: LogDirOption = None, log_level: LogLevelOption = None) -> None:
    configure_logging(log_dir=log_dir, level=log_level)


@app.command("build-dict")
def cmd_build_dict(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None,
                   settings: SetOption = None) -> None:
    """Train embeddings on the review corpus and build the UOP-dictionary."""

    def body(run: _Run) -> None:
        cfg = run.config
        with run.stage("load"):
            lex = run.lexicons()
            reviews = run.input(_required(cfg, "reviews_path"))
            corpus = load_corpus(reviews)
            run.counts["rejected_records"] = corpus.reject_count
        with run.stage("preprocess"):
            documents = preprocess_corpus(corpus.records, lex)
        with run.stage("build"):
            build = build_dictionary(documents, lex, cfg)
            run.counts.update(build.report)
        with run.stage("write"):
            save_dictionary(build.dictionary, run.output(_dictionary_path(cfg)))
            save_model(build.model, run.output(_model_path(cfg)))

    _execute("build-dict", config, lambda: _overrides(seed, out, settings), body)


@app.command("extract")
def cmd_extract(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None,
                settings: SetOption = None) -> None:
    """Filter, label and cluster the geolocated corpus into perception clusters."""

    def body(run: _Run) -> None:
        cfg = run.config
        with run.stage("load"):
            lex = run.lexicons()
            dictionary = load_dictionary(run.input(_dictionary_path(cfg)))
            model = load_model(run.input(_model_path(cfg)))
            corpus = load_corpus(run.input(_required(cfg, "geo_path")), require_geo=True)
            run.counts["rejected_records"] = corpus.reject_count
        with run.stage("preprocess"):
            documents = preprocess_corpus(corpus.records, lex)
        with run.stage("extract"):
            result = extract_perceptions(documents, dictionary, model, cfg)
            run.counts.update(result.report.as_dict())
        with run.stage("write"):
            write_geojson(result.clusters, run.output("perceptions.geojson"))
            save_clusters(result.clusters, run.output("clusters.json"))
            write_csv(result.report.rows(cfg.run_label), ("stage", "count", "run"), run.output("stage_counts.csv"))
            write_csv(score_histogram(d.semantic_score for d in result.scored),
                      ("bin_low", "bin_high", "count"), run.output("semantic_scores.csv"))
            write_csv(cluster_summary_rows(result.clusters), CLUSTER_SUMMARY_COLUMNS, run.output("cluster_summary.csv"))
            write_csv([{"stem": s, "count": c} for s, c in term_frequencies(result.matched)],
                      TERM_COLUMNS, run.output("term_frequencies_matched.csv"))

    _execute("extract", config, lambda: _overrides(seed, out, settings), body)


@app.command("analyze")
def cmd_analyze(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None,
                settings: SetOption = None) -> None:
    """Per-neighborhood perception strength (z-scores) and term frequencies of the clustered documents."""

    def body(run: _Run) -> None:
        cfg = run.config
        with run.stage("load"):
            dictionary = load_dictionary(run.input(_dictionary_path(cfg)))
            clusters = load_clusters(run.input(run.out_dir / "clusters.json"))
            neighborhoods = load_neighborhoods(run.input(_required(cfg, "neighborhoods_path")))
        with run.stage("analyze"):
            tensor = count_points(clusters, neighborhoods, dictionary.labels)
            report = z_scores(tensor, ddof=cfg.zscore_ddof)
            frame = report_frame(report)
            summary = strength_summary(report)
            terms = term_frequencies(m for c in clusters for m in c.members)
            run.counts.update({"clusters": len(clusters), "points": int(tensor.counts.sum()),
                               "neighborhoods": len(neighborhoods), "months": len(tensor.months)})
        with run.stage("write"):
            write_csv(frame, ZSCORE_COLUMNS, run.output("zscores.csv"))
            write_csv(summary, SUMMARY_COLUMNS, run.output("strength_summary.csv"))
            write_csv([{"stem": s, "count": c} for s, c in terms], TERM_COLUMNS, run.output("term_frequencies.csv"))

    _execute("analyze", config, lambda: _overrides(seed, out, settings), body)


@app.command("compare")
def cmd_compare(config: ConfigOption = None, seed: SeedOption = None, out: OutOption = None,
                settings: SetOption = None) -> None:
    """Nearest-distance comparison and strength of an external labelled point set."""

    def body(run: _Run) -> None:
        cfg = run.config
        with run.stage("load"):
            dictionary = load_dictionary(run.input(_dictionary_path(cfg)))
            clusters = load_clusters(run.input(run.out_dir / "clusters.json"))
            neighborhoods = load_neighborhoods(run.input(_required(cfg, "neighborhoods_path")))
            external = load_external_points(run.input(_required(cfg, "external_points_path")))
        with run.stage("compare"):
            summaries = nearest_distance_comparison(external, cluster_points(clusters), neighborhoods,
                                                    scope=cfg.comparison_scope, dictionary=dictionary)
            strength = None
            if len(neighborhoods) >= 2:
                strength = external_strength(external, neighborhoods, ddof=cfg.zscore_ddof)
            else:
                logger.warning(f"External strength needs at least 2 neighborhoods, got {len(neighborhoods)}; "
                               f"external_strength.csv is not written")
            run.counts.update({"external_points": len(external),
                               "absent": sum(1 for s in summaries if s.status == "absent")})
        with run.stage("write"):
            write_csv([s.as_row() for s in summaries], COMPARISON_COLUMNS, run.output("comparison.csv"))
            if strength is not None:
                write_csv(strength, ("category", "polarity", *ZSCORE_COLUMNS[1:]), run.output("external_strength.csv"))

    _execute("compare", config, lambda: _overrides(seed, out, settings), body)


@app.command("make-sample")
def cmd_make_sample(out: Annotated[Path, typer.Option("--out", help="Directory for the sample files.")] = Path("data/sample"),
                    seed: Annotated[int, typer.Option("--seed")] = 7) -> None:
    """Write the synthetic sample: corpora, lexicons, neighborhoods, external points and a config file."""
    try:
        config_path = make_sample(out, seed=seed)
    except OSError as e:
        logger.error(f"Error writing sample: {str(e)}", exc_info=True)
        err_console.print(f"error: {e}", style="bold red", markup=False, soft_wrap=True)
        raise typer.Exit(code=1)
    err_console.print(f"sample written, config: {config_path}", markup=False, soft_wrap=True)


if __name__ == "__main__":
    app()
