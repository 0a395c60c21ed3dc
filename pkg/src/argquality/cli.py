"""Command-line entry point: run suites, score texts, validate configs.

Exit codes are part of the interface: 0 success, 2 configuration error,
3 data error, 4 runtime failure, 5 model/pipeline fingerprint mismatch.
stderr carries diagnostics and warnings; stdout carries machine-readable
output only.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import (
    ColumnMapping,
    Corpus,
    CorpusError,
    DIMENSIONS,
    EXPERTS,
    load_corpus,
)
from .eval import (
    EvalSettings,
    all_features_approach,
    baseline_approach,
    render_report,
    run_experiments,
    train_models,
)
from .eval.report import SUITES
from .features import (
    ConfigurationError,
    ExtractorConfig,
    assemble,
    available_families,
    load_resources,
    restore_pipeline,
)
from .learner import TrainConfig, TrainingError, model_from_json, predict, round_score
from .textproc import analyze

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4
EXIT_FINGERPRINT = 5

SPELLCHECK_URL_ENV = "ARGQUALITY_SPELLCHECK_URL"
MODEL_FORMAT = "argquality-models/1"
EXPORT_CHOICES = ("all_features", "baseline", "none")

_CORPUS_KEYS = ("path", "id_column", "topic_column", "text_column",
                "score_template", "filter_column", "filter_value")
_FEATURE_FLOAT_KEYS = ("content_min_df", "style_pos_min_df",
                       "style_char_min_df")
_FEATURE_INT_KEYS = ("structure_first_min_count", "embedding_dim")
_FEATURE_STR_KEYS = ("embedding_path", "positivity_path", "negativity_path",
                     "hedging_path", "enumeration_path", "emoji_path",
                     "pronoun_path", "premise_markers_path",
                     "conclusion_markers_path", "wordlist_path",
                     "spellcheck_mode", "spellcheck_url",
                     "spellcheck_language")
_LEARNER_KEYS = ("c_grid", "epsilon", "tolerance", "max_epochs",
                 "clamp_predictions")
_EVAL_KEYS = ("q3_train_on_majority", "paired_ttest")
_CLI_KEYS = ("suites", "output_dir", "jobs", "export_models")

_KNOWN_KEYS = {
    "corpus": _CORPUS_KEYS,
    "features": _FEATURE_FLOAT_KEYS + _FEATURE_INT_KEYS + _FEATURE_STR_KEYS,
    "learner": _LEARNER_KEYS,
    "eval": _EVAL_KEYS,
    "cli": _CLI_KEYS,
}


class CliError(Exception):
    """A classified failure carrying its process exit code."""

    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass(frozen=True)
class RunConfig:
    """Everything a `run` or `validate` invocation needs."""

    corpus_path: str = ""
    mapping: ColumnMapping = field(default_factory=ColumnMapping.from_template)
    suites: tuple[str, ...] = SUITES
    extractor: ExtractorConfig = field(default_factory=ExtractorConfig)
    training: TrainConfig = field(default_factory=TrainConfig)
    output_dir: str = ""
    jobs: int = 1
    q3_train_on_majority: bool = False
    paired_ttest: bool = False
    export_models: str = "all_features"

    def settings(self) -> EvalSettings:
        return EvalSettings(extractor=self.extractor, training=self.training,
                            jobs=self.jobs,
                            q3_train_on_majority=self.q3_train_on_majority,
                            paired_ttest=self.paired_ttest)


def _config_error(path: Path, message: str) -> CliError:
    return CliError(EXIT_CONFIG, f"{path}: {message}")


def _parse_typed(parser: configparser.ConfigParser, path: Path, section: str,
                 key: str, kind: str):
    raw = parser.get(section, key)
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            return int(raw)
        if kind == "bool":
            return parser.getboolean(section, key)
        return raw
    except ValueError:
        raise _config_error(
            path, f"[{section}] {key} must be a {kind}, got {raw!r}")


def parse_run_config(config_path: str | Path) -> RunConfig:
    """Parse and validate the INI run configuration."""
    path = Path(config_path)
    if not path.is_file():
        raise CliError(EXIT_CONFIG, f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as err:
        raise _config_error(path, f"not a valid INI file ({err})")

    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise _config_error(path, f"unknown section [{section}]")
        for key in parser.options(section):
            if key not in _KNOWN_KEYS[section]:
                raise _config_error(path, f"unknown key [{section}] {key}")

    def get(section: str, key: str, default, kind: str = "str"):
        if not parser.has_option(section, key):
            return default
        return _parse_typed(parser, path, section, key, kind)

    mapping_kwargs = {}
    for key, target in (("id_column", "id_column"),
                        ("topic_column", "topic_column"),
                        ("text_column", "text_column"),
                        ("score_template", "score_template"),
                        ("filter_column", "filter_column"),
                        ("filter_value", "filter_value")):
        value = get("corpus", key, None)
        if value is not None:
            mapping_kwargs[target] = value
    try:
        mapping = ColumnMapping.from_template(**mapping_kwargs)
    except (KeyError, ValueError) as err:
        raise _config_error(path, f"[corpus] score_template invalid: {err}")

    extractor_defaults = ExtractorConfig()
    extractor_kwargs = {}
    for key in _FEATURE_FLOAT_KEYS:
        extractor_kwargs[key] = get("features", key,
                                    getattr(extractor_defaults, key), "float")
    for key in _FEATURE_INT_KEYS:
        extractor_kwargs[key] = get("features", key,
                                    getattr(extractor_defaults, key), "int")
    for key in _FEATURE_STR_KEYS:
        extractor_kwargs[key] = get("features", key,
                                    getattr(extractor_defaults, key))
    url_override = os.environ.get(SPELLCHECK_URL_ENV)
    if url_override:
        extractor_kwargs["spellcheck_url"] = url_override
    try:
        extractor = ExtractorConfig(**extractor_kwargs)
    except ConfigurationError as err:
        raise _config_error(path, f"[features] {err}")

    training_defaults = TrainConfig()
    grid = training_defaults.c_grid
    if parser.has_option("learner", "c_grid"):
        raw = parser.get("learner", "c_grid")
        try:
            grid = tuple(float(part) for part in raw.split(",") if part.strip())
        except ValueError:
            raise _config_error(
                path, f"[learner] c_grid must be comma-separated floats, got {raw!r}")
    try:
        training = TrainConfig(
            c_grid=grid,
            epsilon=get("learner", "epsilon", training_defaults.epsilon, "float"),
            tolerance=get("learner", "tolerance", training_defaults.tolerance,
                          "float"),
            max_epochs=get("learner", "max_epochs",
                           training_defaults.max_epochs, "int"),
            clamp_predictions=get("learner", "clamp_predictions",
                                  training_defaults.clamp_predictions, "bool"),
        )
    except ValueError as err:
        raise _config_error(path, f"[learner] {err}")

    suites = _parse_suites(get("cli", "suites", ",".join(SUITES)), path)
    jobs = get("cli", "jobs", 1, "int")
    if jobs < 1:
        raise _config_error(path, f"[cli] jobs must be >= 1, got {jobs}")
    export_models = get("cli", "export_models", "all_features")
    if export_models not in EXPORT_CHOICES:
        raise _config_error(
            path, f"[cli] export_models must be one of {EXPORT_CHOICES}, "
            f"got {export_models!r}")

    return RunConfig(
        corpus_path=get("corpus", "path", ""),
        mapping=mapping,
        suites=suites,
        extractor=extractor,
        training=training,
        output_dir=get("cli", "output_dir", ""),
        jobs=jobs,
        q3_train_on_majority=get("eval", "q3_train_on_majority", False, "bool"),
        paired_ttest=get("eval", "paired_ttest", False, "bool"),
        export_models=export_models,
    )


def _parse_suites(raw: str, source) -> tuple[str, ...]:
    names = [part.strip() for part in raw.split(",") if part.strip()]
    unknown = set(names) - set(SUITES)
    if unknown:
        raise CliError(EXIT_CONFIG,
                       f"{source}: unknown suites {sorted(unknown)} "
                       f"(choose from {', '.join(SUITES)})")
    if not names:
        raise CliError(EXIT_CONFIG, f"{source}: no suites selected")
    return tuple(s for s in SUITES if s in set(names))


def _load_corpus(config: RunConfig) -> Corpus:
    if not config.corpus_path:
        raise CliError(EXIT_CONFIG, "config has no [corpus] path")
    return load_corpus(config.corpus_path, config.mapping)


def _warn_disabled_families(extractor: ExtractorConfig, resources) -> None:
    if "embedding" not in available_families(resources):
        print("warning: embedding family disabled "
              "(no embedding file configured); dependent result rows are "
              "marked disabled", file=sys.stderr)


def _config_record(extractor: ExtractorConfig) -> dict:
    record = dataclasses.asdict(extractor)
    record["readability_ids"] = list(record["readability_ids"])
    return record


def _config_from_record(record: dict) -> ExtractorConfig:
    kwargs = dict(record)
    if "readability_ids" in kwargs:
        kwargs["readability_ids"] = tuple(kwargs["readability_ids"])
    return ExtractorConfig(**kwargs)


def _write_models(models_dir: Path, pipeline, models: dict) -> None:
    models_dir.mkdir(parents=True, exist_ok=True)
    record = {
        "format": MODEL_FORMAT,
        "config": _config_record(pipeline.config),
        "pipeline": json.loads(pipeline.serialize()),
        "fingerprint": pipeline.fingerprint,
    }
    (models_dir / "pipeline.json").write_text(
        json.dumps(record, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    for code, model in models.items():
        (models_dir / f"model_{code}.json").write_text(model.to_json() + "\n",
                                                       encoding="utf-8")


def cmd_run(args) -> int:
    config = parse_run_config(args.config)
    if args.suites:
        config = dataclasses.replace(config,
                                     suites=_parse_suites(args.suites,
                                                          "--suites"))
    if args.jobs is not None:
        if args.jobs < 1:
            raise CliError(EXIT_CONFIG, f"--jobs must be >= 1, got {args.jobs}")
        config = dataclasses.replace(config, jobs=args.jobs)
    if not config.output_dir:
        raise CliError(EXIT_CONFIG, "config has no [cli] output_dir")

    output_dir = Path(config.output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise CliError(EXIT_CONFIG,
                       f"output directory not writable: {err}")

    corpus = _load_corpus(config)
    resources = load_resources(config.extractor)
    _warn_disabled_families(config.extractor, resources)

    settings = config.settings()
    print(f"running suites {', '.join(config.suites)} on "
          f"{len(corpus.arguments)} arguments over {len(corpus.topics)} "
          f"topics (jobs={config.jobs})", file=sys.stderr)
    reports = run_experiments(corpus, settings, config.suites)

    written: dict[str, dict[str, str]] = {}
    for suite in config.suites:
        written[suite] = {}
        for fmt in ("md", "csv", "json"):
            target = output_dir / f"report_{suite}.{fmt}"
            target.write_text(render_report(reports[suite], fmt),
                              encoding="utf-8")
            written[suite][fmt] = str(target)

    models_path = None
    if config.export_models != "none":
        approach = (all_features_approach()
                    if config.export_models == "all_features"
                    else baseline_approach())
        pipeline, models = train_models(corpus, approach, settings)
        models_dir = output_dir / "models"
        _write_models(models_dir, pipeline, models)
        models_path = str(models_dir)

    print(json.dumps({"output_dir": str(output_dir), "reports": written,
                      "models": models_path}, sort_keys=True))
    return EXIT_OK


def cmd_score(args) -> int:
    models_dir = Path(args.models)
    pipeline_file = models_dir / "pipeline.json"
    if not pipeline_file.is_file():
        raise CliError(EXIT_DATA, f"model directory has no pipeline.json: "
                                  f"{models_dir}")
    try:
        record = json.loads(pipeline_file.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise CliError(EXIT_DATA, f"cannot read {pipeline_file}: {err}")
    if record.get("format") != MODEL_FORMAT:
        raise CliError(EXIT_DATA,
                       f"{pipeline_file}: unsupported format "
                       f"{record.get('format')!r} (expected {MODEL_FORMAT})")

    try:
        extractor = _config_from_record(record["config"])
    except (TypeError, KeyError, ConfigurationError) as err:
        raise CliError(EXIT_DATA, f"{pipeline_file}: bad stored config: {err}")
    resources = load_resources(extractor)
    pipeline = restore_pipeline(record["pipeline"], extractor, resources)
    stored = record.get("fingerprint", "")
    if pipeline.fingerprint != stored:
        print(f"pipeline fingerprint mismatch: stored {stored[:12]}..., "
              f"recomputed {pipeline.fingerprint[:12]}... "
              "(settings, lexicons, or vocabulary changed since export)",
              file=sys.stderr)
        return EXIT_FINGERPRINT

    models = {}
    for dimension in DIMENSIONS:
        model_file = models_dir / f"model_{dimension.value}.json"
        if not model_file.is_file():
            raise CliError(EXIT_DATA, f"missing model file: {model_file}")
        text = model_file.read_text(encoding="utf-8")
        kind = json.loads(text).get("kind")
        names = None if kind == "mean_baseline" else pipeline.feature_names
        model = model_from_json(text, names)
        if model.feature_space != pipeline.fingerprint:
            print(f"model {model_file.name} was trained in feature space "
                  f"{model.feature_space[:12]}..., pipeline is "
                  f"{pipeline.fingerprint[:12]}...", file=sys.stderr)
            return EXIT_FINGERPRINT
        models[dimension.value] = model

    if args.text and args.text != "-":
        source = Path(args.text)
        if not source.is_file():
            raise CliError(EXIT_DATA, f"text file not found: {source}")
        text = source.read_text(encoding="utf-8")
    else:
        text = sys.stdin.read()

    analysis = analyze(text)
    values = assemble(analysis, pipeline)
    vector = np.array([values[name] for name in pipeline.feature_names])

    scores = {code: float(predict(models[code], vector, clamp=True))
              for code in (d.value for d in DIMENSIONS)}
    diagnostics = {}
    for family in pipeline.enabled_families:
        columns = pipeline.family_slices[family]
        block = vector[columns]
        diagnostics[family] = {
            "features": int(block.shape[0]),
            "norm": float(np.sqrt(np.sum(block * block))),
        }
    payload = {
        "scores": scores,
        "families": diagnostics,
        "fingerprint": pipeline.fingerprint,
    }
    if args.rounded:
        payload["rounded"] = {code: round_score(value)
                              for code, value in scores.items()}
    print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_validate(args) -> int:
    config = parse_run_config(args.config)
    corpus = _load_corpus(config)
    resources = load_resources(config.extractor)
    _warn_disabled_families(config.extractor, resources)
    print(f"{len(corpus.arguments)} arguments, {len(corpus.topics)} topics")
    histogram = {1: 0, 2: 0, 3: 0}
    for argument in corpus.arguments:
        for dimension in DIMENSIONS:
            for expert in EXPERTS:
                histogram[argument.score(dimension, expert)] += 1
    for value in (1, 2, 3):
        print(f"score {value}: {histogram[value]}")
    return EXIT_OK


def _ini_reference() -> str:
    extractor = ExtractorConfig()
    training = TrainConfig()
    lines = [
        "INI config reference (key = default):",
        "",
        "[corpus]",
        "path = (required for run/validate)",
        "id_column = id",
        "topic_column = topic",
        "text_column = text",
        "score_template = {dim}:{expert}",
        "filter_column = (unset)",
        "filter_value = (unset)",
        "",
        "[features]",
    ]
    for key in _FEATURE_FLOAT_KEYS + _FEATURE_INT_KEYS:
        lines.append(f"{key} = {getattr(extractor, key)}")
    for key in _FEATURE_STR_KEYS:
        value = getattr(extractor, key)
        lines.append(f"{key} = {value if value else '(unset)'}")
    lines += [
        "",
        "[learner]",
        "c_grid = " + ",".join(f"{c:g}" for c in training.c_grid),
        f"epsilon = {training.epsilon}",
        f"tolerance = {training.tolerance}",
        f"max_epochs = {training.max_epochs}",
        f"clamp_predictions = {training.clamp_predictions}",
        "",
        "[eval]",
        "q3_train_on_majority = False",
        "paired_ttest = False",
        "",
        "[cli]",
        "suites = q1,q2,q3",
        "output_dir = (required for run)",
        "jobs = 1",
        "export_models = all_features",
        "",
        f"The {SPELLCHECK_URL_ENV} environment variable overrides "
        "[features] spellcheck_url.",
    ]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argquality",
        description="Assess argument quality from text: run benchmark "
                    "suites, score new texts, validate configurations.",
        epilog=_ini_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser(
        "run", help="run the evaluation suites and write report files",
        epilog=_ini_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    run.add_argument("--config", required=True, help="INI config file path")
    run.add_argument("--suites",
                     help="comma-separated subset of q1,q2,q3 "
                          "(default: from config)")
    run.add_argument("--jobs", type=int, default=None,
                     help="parallel fold workers (default: from config)")
    run.set_defaults(handler=cmd_run)

    score = sub.add_parser(
        "score", help="score a text with exported models (JSON on stdout)")
    score.add_argument("--models", required=True,
                       help="directory with pipeline.json and model files")
    score.add_argument("--rounded", action="store_true",
                       help="also print integer scores in {1, 2, 3}")
    score.add_argument("text", nargs="?", default=None,
                       help="text file to score ('-' or absent: stdin)")
    score.set_defaults(handler=cmd_score)

    validate = sub.add_parser(
        "validate", help="check config, corpus, and resource files",
        epilog=_ini_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    validate.add_argument("--config", required=True,
                          help="INI config file path")
    validate.set_defaults(handler=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except CorpusError as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except TrainingError as err:
        print(f"training failure: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as err:  # pragma: no cover - last-resort classification
        print(f"runtime failure: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
