"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .errors import ConfigError, GlcmEnsembleError, ManifestError
from .pipeline import (
    DISPLAY_NAMES,
    ENSEMBLE_IDS,
    PipelineConfig,
    benchmark_config,
    extract_features,
    load_config,
    read_manifest,
    run_experiment,
)
from .persistence import save_model
from .report import render_class_bars_svg, render_confusion_svg, summary_table

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

log = logging.getLogger("glcm_ensemble")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def _tau(text):
    name, sep, value = text.partition("=")
    try:
        tau = float(value)
    except ValueError:
        tau = None
    if not sep or tau is None or not 0.0 <= tau <= 1.0:
        raise argparse.ArgumentTypeError(f"expected CLASSIFIER=VALUE with VALUE in [0, 1], got {text!r}")
    return name.strip().lower(), tau


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glcm-ensemble", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--manifest", required=True, help="CSV with header path,label")
        p.add_argument("--config", help="JSON pipeline config (defaults when omitted)")
        p.add_argument("--threads", type=_positive_int, default=1, help="worker threads; never changes results")
        p.add_argument("--skip-bad", action="store_true", help="skip unreadable images instead of failing")

    ex = sub.add_parser("extract", help="compute the feature table")
    ex.set_defaults(parser=ex)
    common(ex)
    ex.add_argument("--out", required=True, help="feature cache CSV to write")

    run = sub.add_parser("run", help="train all models, run both ensembles, write results")
    run.set_defaults(parser=run)
    common(run)
    run.add_argument("--seed", type=int, help="master seed (overrides the config)")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--tau", type=_tau, action="append", default=[], metavar="CLASSIFIER=VALUE",
                     help="abstention threshold for one classifier (repeatable)")
    run.add_argument("--only", help="comma-separated ids to show in the summary (rf,svm,knn,nb,dt,ve,cc)")
    run.add_argument("--format", choices=("text", "csv"), default="text", help="summary format")
    run.add_argument("--cache", help="feature cache CSV to reuse or create")

    syn = sub.add_parser("synthesize", help="write the synthetic 4-class texture benchmark")
    syn.set_defaults(parser=syn)
    syn.add_argument("--out", required=True, help="output directory")
    syn.add_argument("--per-class", type=_positive_int, default=100)
    syn.add_argument("--size", type=_positive_int, default=64)
    syn.add_argument("--seed", type=int, default=42)
    return parser


def _load_inputs(args):
    if not os.path.isfile(args.manifest):
        raise UsageError(f"manifest not found: {args.manifest}")
    if args.config and not os.path.isfile(args.config):
        raise UsageError(f"config not found: {args.config}")
    try:
        cfg = load_config(args.config) if args.config else PipelineConfig()
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    manifest = read_manifest(args.manifest)
    return manifest, cfg


def cmd_extract(args) -> int:
    manifest, cfg = _load_inputs(args)
    table = extract_features(manifest, cfg, args.out, args.threads, args.skip_bad)
    for path, err in table.skipped:
        print(f"skipped {path}: {err}", file=sys.stderr)
    print(f"wrote {len(table)} rows x {len(table.names)} features to {args.out}", file=sys.stderr)
    return EXIT_OK


def _select(only: str | None, available) -> list[str]:
    if not only:
        return list(available)
    wanted = [s.strip().lower() for s in only.split(",") if s.strip()]
    bad = [w for w in wanted if w not in available]
    if bad:
        raise UsageError(f"unknown ids in --only: {', '.join(bad)}")
    return wanted


def cmd_run(args) -> int:
    manifest, cfg = _load_inputs(args)
    updates = {}
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.tau:
        tau = dict(cfg.tau)
        for name, value in args.tau:
            if name not in tau:
                raise UsageError(f"--tau names unknown classifier {name!r}")
            tau[name] = value
        updates["tau"] = tau
    if updates:
        try:
            cfg = PipelineConfig.from_dict({**_config_kwargs(cfg), **updates})
        except ConfigError as exc:
            raise UsageError(str(exc)) from exc
    ids = (*cfg.model_order, *ENSEMBLE_IDS)
    shown = _select(args.only, ids)

    result = run_experiment(manifest, cfg, args.threads, cache_path=args.cache, skip_bad=args.skip_bad)

    out = args.out
    os.makedirs(os.path.join(out, "models"), exist_ok=True)
    result.write(os.path.join(out, "result.json"))
    for mid in ids:
        o = result.outcomes[mid]
        render_confusion_svg(o.confusion, os.path.join(out, f"confusion_{mid}.svg"), DISPLAY_NAMES[mid])
    render_class_bars_svg(
        [(mid.upper(), result.outcomes[mid].report) for mid in ids],
        os.path.join(out, "class_recall.svg"),
        result.class_names,
    )
    for mid, model in result.models.items():
        save_model(model, os.path.join(out, "models", f"{mid}.json"))
    table = summary_table([(DISPLAY_NAMES[m], result.outcomes[m].report) for m in shown], args.format)
    with open(os.path.join(out, f"summary.{'csv' if args.format == 'csv' else 'txt'}"), "w",
              encoding="utf-8", newline="\n") as fh:
        fh.write(table)
    for path, err in result.skipped:
        print(f"skipped {path}: {err}", file=sys.stderr)
    sys.stdout.write(table)
    return EXIT_OK


def _config_kwargs(cfg: PipelineConfig) -> dict:
    d = cfg.to_dict()
    d["hyperparameters"] = cfg.hyperparameters
    return d


def cmd_synthesize(args) -> int:
    from .synthetic import generate_benchmark

    manifest = generate_benchmark(args.out, args.per_class, args.size, args.seed)
    cfg = benchmark_config(args.seed)
    with open(os.path.join(args.out, "config.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(cfg.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {manifest} and {os.path.join(args.out, 'config.json')}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"extract": cmd_extract, "run": cmd_run, "synthesize": cmd_synthesize}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        args.parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GlcmEnsembleError, OSError) as exc:
        kind = "manifest" if isinstance(exc, ManifestError) else "data"
        print(f"{kind} error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
