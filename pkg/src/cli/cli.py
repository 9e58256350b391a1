#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
foundercast command line.

Subcommands::

    generate     synthetic dataset CSV + ground-truth sidecar
    enrich       fill LLM-derived columns of a CSV (cache-aware)
    train        CSV -> pipeline artifact (plus the split it used)
    evaluate     artifact + CSV -> evaluation report
    sweep        threshold sweep
    sensitivity  feature sensitivity (and its stability with --stability)
    ablate       one ablation suite
    predict      artifact + CSV -> predictions CSV

Configuration resolves defaults < ``--config`` JSON file < flags. Every
command writes ``run_config.json`` and ``fingerprints.json`` into its output
directory. Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from constants import AblationSuite, BucketBy, MetaMode, ProviderKind, RunConfig, SplitSpec
from core import fit_pipeline, load_pipeline, predict_dataset, save_pipeline, save_predictions
from enrich import EnrichmentCache, enrich_dataset, make_enrichment_provider
from evalkit import (
    DEFAULT_GRID,
    evaluate_pipeline,
    run_ablation,
    sensitivity,
    sensitivity_stability,
    sweep_frame,
    sweep_threshold,
)
from evalkit.report import ablation_lines
from schema import Dataset, Split, default_schema, load_dataset, load_schema, save_dataset, split_dataset
from synth import generate_with_truth, write_truth
from utils import configure_logging, ensure_dir, file_fingerprint, load_json, save_json, write_text
from utils.errors import DataError, FitError, FoundercastError, SchemaMismatchError, SplitError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

ARTIFACT_NAME = "pipeline.json"
SPLIT_NAME = "split.json"

# flag dest -> path inside RunConfig.to_dict()
FLAG_PATHS: Dict[str, Tuple[str, ...]] = {
    "data": ("data",),
    "schema": ("schema",),
    "out_dir": ("out_dir",),
    "provider": ("enrichment_provider",),
    "cache": ("cache",),
    "n_records": ("generator", "n_records"),
    "positive_rate": ("generator", "positive_rate"),
    "noise_sigma": ("generator", "noise_sigma"),
    "emit_llm_values": ("generator", "emit_llm_values"),
    "threshold": ("pipeline", "threshold"),
    "folds": ("pipeline", "oof_folds"),
    "embedding_provider": ("pipeline", "embedding_provider"),
    "embedding_dim": ("pipeline", "embedding_dim"),
    "meta_mode": ("pipeline", "meta_mode"),
    "gbt_trees": ("pipeline", "gbt", "n_trees"),
    "rf_trees": ("pipeline", "rf", "n_trees"),
    "n_jobs": ("pipeline", "n_jobs"),
    "train_size": ("split", "train_size"),
    "eval_subsets": ("split", "eval_subset_count"),
    "eval_subset_size": ("split", "eval_subset_size"),
    "stratified": ("split", "stratified"),
}

SEED_PATHS = (("seed",), ("generator", "seed"), ("pipeline", "seed"), ("split", "seed"))


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _set(tree: Dict[str, Any], path: Tuple[str, ...], value: Any):
    for key in path[:-1]:
        tree = tree.setdefault(key, {})
    tree[path[-1]] = value


def _spread_seed(tree: Dict[str, Any]) -> Dict[str, Any]:
    """Copy a top-level ``seed`` into every sub-config that does not set its own."""
    if tree.get("seed") is None:
        return tree
    for path in SEED_PATHS[1:]:
        section = tree.get(path[0])
        if not isinstance(section, dict) or path[-1] not in section:
            _set(tree, path, tree["seed"])
    return tree


def _split_sizes_given(tree: Dict[str, Any]) -> bool:
    return any(key != "seed" for key in tree.get("split", {}))


def flag_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested RunConfig overrides for every flag given on the command line."""
    overrides: Dict[str, Any] = {}
    for dest, path in FLAG_PATHS.items():
        value = getattr(args, dest, None)
        if value is not None:
            _set(overrides, path, value)
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    return _spread_seed(overrides)


def resolve_config(args: argparse.Namespace) -> Tuple[RunConfig, bool]:
    """RunConfig from defaults, ``--config`` and flags; second item tells whether split sizes were given."""
    config = RunConfig()
    split_given = False
    if args.config:
        from_file = _spread_seed(load_json(args.config))
        split_given = _split_sizes_given(from_file)
        config = config.merged(from_file)
    overrides = flag_overrides(args)
    split_given = split_given or _split_sizes_given(overrides)
    return config.merged(overrides), split_given


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON run configuration (flags override it)")
    parser.add_argument("--seed", type=int, help="seed for generator, split and pipeline")
    parser.add_argument("--schema", help="feature schema JSON (default: built-in 63-feature schema)")
    parser.add_argument("--out-dir", dest="out_dir", help="output directory")


def _add_pipeline(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("pipeline")
    group.add_argument("--threshold", type=float, help="decision threshold on success probability")
    group.add_argument("--folds", type=int, help="out-of-fold stacking folds")
    group.add_argument("--embedding-provider", dest="embedding_provider", help="mock, mock-<dim>, none or external")
    group.add_argument("--embedding-dim", dest="embedding_dim", type=int)
    group.add_argument("--meta-mode", dest="meta_mode", choices=[m.value for m in MetaMode])
    group.add_argument("--gbt-trees", dest="gbt_trees", type=int)
    group.add_argument("--rf-trees", dest="rf_trees", type=int)
    group.add_argument("--n-jobs", dest="n_jobs", type=int)


def _add_split(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("split")
    group.add_argument("--train-size", dest="train_size", type=int)
    group.add_argument("--eval-subsets", dest="eval_subsets", type=int)
    group.add_argument("--eval-subset-size", dest="eval_subset_size", type=int)
    group.add_argument("--no-stratify", dest="stratified", action="store_const", const=False)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="foundercast", description="Stacked rare-event prediction of startup success")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = commands.add_parser("generate", help="generate a synthetic dataset")
    _add_common(p)
    p.add_argument("--out", help="CSV path (default: <out-dir>/dataset.csv)")
    p.add_argument("--n-records", dest="n_records", type=int)
    p.add_argument("--positive-rate", dest="positive_rate", type=float)
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float)
    p.add_argument("--raw", dest="emit_llm_values", action="store_const", const=False,
                   help="leave LLM-derived columns empty and write profile_text")

    p = commands.add_parser("enrich", help="fill LLM-derived features of a CSV")
    _add_common(p)
    p.add_argument("--data", help="input CSV")
    p.add_argument("--out", help="enriched CSV path (default: <out-dir>/enriched.csv)")
    p.add_argument("--provider", choices=[k.value for k in ProviderKind])
    p.add_argument("--cache", help="JSONL enrichment cache")
    p.add_argument("--features", help="comma-separated subset of LLM-derived features")
    p.add_argument("--n-jobs", dest="enrich_jobs", type=int, default=1)

    p = commands.add_parser("train", help="train a pipeline artifact")
    _add_common(p)
    p.add_argument("--data", help="training CSV")
    _add_pipeline(p)
    _add_split(p)

    for name, text in (("evaluate", "evaluate an artifact"), ("sweep", "threshold sweep")):
        p = commands.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("--artifact", required=True)
        p.add_argument("--data", help="labeled CSV")
        p.add_argument("--split", help=f"split file (default: {SPLIT_NAME} next to the artifact)")
        p.add_argument("--threshold", type=float)
        if name == "evaluate":
            p.add_argument("--by", choices=[b.value for b in BucketBy], default=BucketBy.PREDICTED.value,
                           help="bucket the funding-class table on predicted or actual funding")
            p.add_argument("--with-sweep", dest="with_sweep", action="store_true")
            p.add_argument("--with-sensitivity", dest="with_sensitivity", action="store_true")
        else:
            p.add_argument("--grid", help="comma-separated thresholds (default 0.50..0.95 step 0.05)")

    p = commands.add_parser("sensitivity", help="feature sensitivity of an artifact")
    _add_common(p)
    p.add_argument("--artifact", required=True)
    p.add_argument("--stability", action="store_true", help="retrain on outlier resamples and compare rankings")
    p.add_argument("--data", help="labeled CSV (for --stability)")
    p.add_argument("--fractions", default="0,0.05,0.1")
    p.add_argument("--repeats", type=int, default=1)

    p = commands.add_parser("ablate", help="run an ablation suite")
    _add_common(p)
    p.add_argument("--data", help="labeled CSV")
    p.add_argument("--suite", required=True, choices=[s.value for s in AblationSuite])
    p.add_argument("--providers", help="embedding providers for the embeddings suite (default mock,none)")
    _add_pipeline(p)
    _add_split(p)

    p = commands.add_parser("predict", help="predict with an artifact")
    _add_common(p)
    p.add_argument("--artifact", required=True)
    p.add_argument("--data", help="CSV to score")
    p.add_argument("--out", help="predictions CSV (default: <out-dir>/predictions.csv)")
    p.add_argument("--threshold", type=float)
    return parser


# helpers


def _floats(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"not a comma-separated list of numbers: {text!r}") from None


def _schema(config: RunConfig):
    return load_schema(config.schema) if config.schema else default_schema()


def _require(value: Optional[str], flag: str) -> str:
    if not value:
        raise UsageError(f"{flag} is required")
    return value


def _record_run(out_dir: Path, config: RunConfig, inputs: Dict[str, Optional[str]]):
    save_json(out_dir / "run_config.json", config.to_dict())
    save_json(
        out_dir / "fingerprints.json",
        {name: file_fingerprint(path) for name, path in sorted(inputs.items()) if path},
    )


def _split_spec(dataset: Dataset, config: RunConfig, split_given: bool) -> SplitSpec:
    """Configured split, or the scaled default when the dataset is too small for it and none was given."""
    spec = config.split
    if spec.total > len(dataset) and not split_given:
        spec = SplitSpec.scaled(len(dataset), seed=spec.seed, stratified=spec.stratified)
        logger.warning("dataset has %d records; using the scaled split %d + %dx%d",
                       len(dataset), spec.train_size, spec.eval_subset_count, spec.eval_subset_size)
    return spec


def _save_split(split: Split, path: Path):
    save_json(path, {
        "fingerprint": split.fingerprint,
        "train": split.train.ids,
        "eval_subsets": [subset.ids for subset in split.eval_subsets],
    })


def _eval_subsets(dataset: Dataset, split_path: Optional[Path]) -> List[Tuple[str, Dataset]]:
    if split_path is None or not split_path.exists():
        return [("all", dataset)]
    data = load_json(split_path)
    try:
        return [(f"subset_{i + 1}", dataset.subset(ids)) for i, ids in enumerate(data["eval_subsets"])]
    except KeyError as e:
        raise SplitError(f"{split_path} names record {e} which is not in the dataset") from None


def _artifact_inputs(args, config: RunConfig):
    """Load the artifact and the dataset under the artifact's schema (or a checked --schema)."""
    pipeline = load_pipeline(args.artifact)
    schema = load_schema(config.schema) if config.schema else pipeline.schema
    if schema.hash != pipeline.schema.hash:
        raise SchemaMismatchError(pipeline.schema.hash, schema.hash)
    return pipeline, schema


def _default_split_path(args) -> Optional[Path]:
    if getattr(args, "split", None):
        return Path(args.split)
    candidate = Path(args.artifact).parent / SPLIT_NAME
    return candidate if candidate.exists() else None


# commands


def cmd_generate(args, config: RunConfig, split_given: bool) -> int:
    out = Path(args.out) if args.out else Path(config.out_dir) / "dataset.csv"
    dataset, truth = generate_with_truth(config.generator, _schema(config), n_jobs=config.pipeline.n_jobs)
    save_dataset(dataset, out)
    truth_path = out.with_name(out.stem + ".truth.json")
    write_truth(truth, truth_path)
    _record_run(out.parent, config, {"schema": config.schema})
    print(f"wrote {len(dataset)} records to {out} (success rate {dataset.success_rate:.4f})")
    return EXIT_OK


def cmd_enrich(args, config: RunConfig, split_given: bool) -> int:
    data = _require(config.data, "--data")
    out_dir = Path(config.out_dir)
    out = Path(args.out) if args.out else out_dir / "enriched.csv"
    dataset = load_dataset(data, _schema(config), require_labels=False)
    provider = make_enrichment_provider(config.enrichment_provider)
    cache = EnrichmentCache(config.cache)
    features = [f.strip() for f in args.features.split(",")] if args.features else None
    try:
        enriched, summary = enrich_dataset(dataset, provider, cache, features, n_jobs=args.enrich_jobs)
    finally:
        provider.close()
    save_dataset(enriched, out)
    save_json(out.with_name(out.stem + ".enrichment.json"), summary.to_dict())
    _record_run(out.parent, config, {"data": data, "schema": config.schema})
    print(f"enriched {len(enriched)} records -> {out} "
          f"({summary.provider_calls} provider calls, {summary.cache_hits} cache hits)")
    return EXIT_OK


def cmd_train(args, config: RunConfig, split_given: bool) -> int:
    data = _require(config.data, "--data")
    out_dir = Path(config.out_dir)
    dataset = load_dataset(data, _schema(config))
    split = split_dataset(dataset, _split_spec(dataset, config, split_given))
    pipeline = fit_pipeline(split.train, config.pipeline)
    digest = save_pipeline(pipeline, out_dir / ARTIFACT_NAME)
    _save_split(split, out_dir / SPLIT_NAME)
    _record_run(out_dir, config, {"data": data, "schema": config.schema})
    print(f"trained on {len(split.train)} records; artifact {out_dir / ARTIFACT_NAME} ({digest[:12]})")
    return EXIT_OK


def cmd_evaluate(args, config: RunConfig, split_given: bool) -> int:
    data = _require(config.data, "--data")
    pipeline, schema = _artifact_inputs(args, config)
    dataset = load_dataset(data, schema)
    subsets = _eval_subsets(dataset, _default_split_path(args))
    report = evaluate_pipeline(pipeline, subsets, threshold=args.threshold, by=args.by)
    if args.with_sweep:
        pooled = dataset.subset([i for _, subset in subsets for i in subset.ids])
        report.sweep = sweep_threshold(pipeline, pooled)
    if args.with_sensitivity:
        report.sensitivity = sensitivity(pipeline)
    split_path = _default_split_path(args)
    if split_path is not None and split_path.exists():
        report.split_fingerprint = load_json(split_path).get("fingerprint")
    out_dir = Path(config.out_dir)
    report.save(out_dir)
    _record_run(out_dir, config, {"artifact": args.artifact, "data": data, "split": split_path and str(split_path)})
    sys.stdout.write(report.to_text())
    return EXIT_OK


def cmd_sweep(args, config: RunConfig, split_given: bool) -> int:
    data = _require(config.data, "--data")
    pipeline, schema = _artifact_inputs(args, config)
    dataset = load_dataset(data, schema)
    subsets = _eval_subsets(dataset, _default_split_path(args))
    pooled = dataset.subset([i for _, subset in subsets for i in subset.ids])
    grid = _floats(args.grid) if args.grid else DEFAULT_GRID
    curve = sweep_threshold(pipeline, pooled, grid)
    out_dir = Path(config.out_dir)
    frame = sweep_frame(curve)
    save_json(out_dir / "sweep.json", [row.to_dict() for row in curve])
    frame.to_csv(out_dir / "sweep.csv", index=False, lineterminator="\n", float_format="%r")
    _record_run(out_dir, config, {"artifact": args.artifact, "data": data})
    sys.stdout.write(frame.to_string(index=False) + "\n")
    return EXIT_OK


def cmd_sensitivity(args, config: RunConfig, split_given: bool) -> int:
    pipeline, schema = _artifact_inputs(args, config)
    out_dir = Path(config.out_dir)
    table = sensitivity(pipeline)
    ensure_dir(out_dir)
    table.to_frame().to_csv(out_dir / "sensitivity.csv", index=False, lineterminator="\n", float_format="%r")
    save_json(out_dir / "sensitivity.json", table.to_dict())
    inputs = {"artifact": args.artifact}
    lines = [f"{name:<32} {100 * share:6.2f}%" for name, share in table.top(10)]
    if args.stability:
        data = _require(config.data, "--data")
        dataset = load_dataset(data, schema)
        result = sensitivity_stability(
            pipeline.config, dataset, _floats(args.fractions), args.repeats, seed=config.seed,
        )
        save_json(out_dir / "stability.json", result.to_dict())
        inputs["data"] = data
        lines.append(f"mean Kendall tau over top-10 features: {result.mean_tau:.3f}")
    _record_run(out_dir, config, inputs)
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ablate(args, config: RunConfig, split_given: bool) -> int:
    data = _require(config.data, "--data")
    out_dir = Path(config.out_dir)
    dataset = load_dataset(data, _schema(config))
    providers = [p.strip() for p in args.providers.split(",")] if args.providers else ("mock", "none")
    split_spec = _split_spec(dataset, config, split_given)
    result = run_ablation(args.suite, dataset, config.pipeline, split_spec, providers,
                          n_jobs=config.pipeline.n_jobs)
    save_json(out_dir / f"ablation_{result.suite}.json", result.to_dict())
    text = "\n".join(ablation_lines(result.to_dict())) + "\n"
    write_text(out_dir / f"ablation_{result.suite}.txt", text)
    _record_run(out_dir, config, {"data": data, "schema": config.schema})
    sys.stdout.write(text)
    return EXIT_OK


def cmd_predict(args, config: RunConfig, split_given: bool) -> int:
    data = _require(config.data, "--data")
    pipeline, schema = _artifact_inputs(args, config)
    dataset = load_dataset(data, schema, require_labels=False)
    rows = predict_dataset(pipeline, dataset, threshold=args.threshold)
    out = Path(args.out) if args.out else Path(config.out_dir) / "predictions.csv"
    save_predictions(rows, out)
    _record_run(out.parent, config, {"artifact": args.artifact, "data": data})
    failed = sum(not row.ok for row in rows)
    print(f"wrote {len(rows)} predictions to {out}" + (f" ({failed} failed)" if failed else ""))
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "enrich": cmd_enrich,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "sensitivity": cmd_sensitivity,
    "ablate": cmd_ablate,
    "predict": cmd_predict,
}


def run_command(argv: Sequence[str]) -> int:
    """Run one command line; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose)

    try:
        config, split_given = resolve_config(args)
        return COMMANDS[args.command](args, config, split_given)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"foundercast: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        missing = f"file not found: {e.filename}" if e.filename else str(e)
        print(f"foundercast: error: {missing}", file=sys.stderr)
        return EXIT_DATA
    except (DataError, FitError) as e:
        print(f"foundercast: error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (FoundercastError, ValueError) as e:
        print(f"foundercast: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
