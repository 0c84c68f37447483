"""Command-line front end.

Subcommands wrap the library one-to-one and stay deliberately thin:
``profile`` measures a corpus, ``train``/``eval`` drive the labelers,
``meta ...`` fits and cross-validates the performance model, ``data
export`` dumps the bundled tables, and ``reproduce`` reruns the whole
embedded-data analysis and writes report.json plus scatter.svg.

Exit codes: 0 on success, 1 on any validation problem (bad flags, bad
file contents, bad values), 2 on I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from pathlib import Path

from .corpus import Corpus, bio_decode, read_corpus
from .evaluation import EvalCounts, F1Report, count_matches, f1_report
from .meta import (
    DEFAULT_ALPHA,
    PREDICTOR_SETS,
    ArchitectureFeatures,
    Observation,
    ablate,
    alpha_mae_curve,
    fit_meta_model,
    loso_cv,
    meta_model_from_dict,
    meta_model_to_dict,
    observations_from_csv,
)
from .meta import predict as meta_predict
from .metrics import SpanTypeProfile, dataset_profile, profile_span_type
from .reference import export_table, load_embedded, to_observations
from .report import build_reproduction_report
from .seqlab import TrainConfig, model_to_dict, train
from .svgplot import scatter_svg

__all__ = ["main", "entry_point"]


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract here is exit 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read(path: str, fmt: str, **kwargs) -> Corpus:
    return read_corpus(path, format=fmt, **kwargs)


# ---------------------------------------------------------------------------
# profile


def _cmd_profile(args) -> None:
    corpus = _read(args.corpus, args.input_format)
    types = [args.type] if args.type else list(corpus.span_type_inventory)
    present = {s.type_id for d in corpus for s in d.spans}
    if args.type and args.type not in present:
        raise ValueError(f"span type {args.type!r} has no spans in this corpus")
    profiles = [profile_span_type(corpus, t) for t in types if t in present]
    if not profiles:
        raise ValueError("corpus contains no spans to profile")
    aggregate = dataset_profile(profiles) if len(profiles) > 1 else None

    if args.format == "json":
        obj = {
            "span_types": [
                {
                    "span_type": p.type_id,
                    "frequency": p.frequency,
                    "span_length": p.span_length,
                    "span_distinctiveness": p.span_distinctiveness,
                    "boundary_distinctiveness": p.boundary_distinctiveness,
                }
                for p in profiles
            ],
            "dataset": None
            if aggregate is None
            else {
                "frequency": aggregate.frequency,
                "span_length": aggregate.span_length,
                "span_distinctiveness": aggregate.span_distinctiveness,
                "boundary_distinctiveness": aggregate.boundary_distinctiveness,
            },
        }
        _write_or_print(_json_text(obj), args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "span_type",
                "frequency",
                "span_length",
                "span_distinctiveness",
                "boundary_distinctiveness",
            ]
        )
        for p in profiles:
            writer.writerow(
                [
                    p.type_id,
                    p.frequency,
                    f"{p.span_length:.6f}",
                    f"{p.span_distinctiveness:.6f}",
                    f"{p.boundary_distinctiveness:.6f}",
                ]
            )
        if aggregate is not None:
            writer.writerow(
                [
                    "ALL",
                    f"{aggregate.frequency:.6f}",
                    f"{aggregate.span_length:.6f}",
                    f"{aggregate.span_distinctiveness:.6f}",
                    f"{aggregate.boundary_distinctiveness:.6f}",
                ]
            )
        _write_or_print(buf.getvalue(), args.out)


# ---------------------------------------------------------------------------
# train


def _coerce_option(name: str, value: str, default):
    if isinstance(default, bool):
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"option {name}: expected a boolean, got {value!r}")
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    if isinstance(default, tuple):
        return tuple(float(part) for part in value.split(","))
    raise ValueError(f"option {name} cannot be set from the config file")


def _train_config(args) -> TrainConfig:
    overrides: dict[str, object] = {}
    if args.config:
        defaults = {f.name: f.default for f in dataclasses.fields(TrainConfig)}
        text = Path(args.config).read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ValueError(f"{args.config}:{lineno}: expected key=value")
            if key not in defaults:
                raise ValueError(
                    f"{args.config}:{lineno}: unknown training option {key!r}"
                )
            overrides[key] = _coerce_option(key, value.strip(), defaults[key])
    if args.seed is not None:  # flag beats config file
        overrides["seed"] = args.seed
    if args.max_epochs is not None:
        overrides["max_epochs"] = args.max_epochs
    return TrainConfig(**overrides)


def _cmd_train(args) -> None:
    config = _train_config(args)
    train_corpus = _read(args.train, args.input_format)
    dev_corpus = (
        _read(args.dev, args.input_format, partition="dev") if args.dev else None
    )
    result = train(args.arch, train_corpus, dev_corpus, config)
    obj = model_to_dict(result.model)
    obj["training_log"] = [dataclasses.asdict(r) for r in result.log]
    obj["stopped_early"] = result.stopped_early
    _write_or_print(_json_text(obj), args.out)


# ---------------------------------------------------------------------------
# eval


def _pair_documents(gold: Corpus, pred: Corpus):
    def by_id(corpus: Corpus, label: str):
        out = {}
        for doc in corpus:
            if doc.id in out:
                raise ValueError(f"duplicate document id {doc.id!r} in {label} corpus")
            out[doc.id] = doc
        return out

    gold_docs = by_id(gold, "gold")
    pred_docs = by_id(pred, "pred")
    if gold_docs.keys() != pred_docs.keys():
        missing = sorted(gold_docs.keys() ^ pred_docs.keys())[:5]
        raise ValueError(
            f"gold and pred corpora do not cover the same documents; "
            f"first differences: {missing}"
        )
    for doc_id, g in gold_docs.items():
        p = pred_docs[doc_id]
        if len(g) != len(p):
            raise ValueError(
                f"document {doc_id!r}: {len(g)} gold tokens vs {len(p)} predicted"
            )
        yield g, p


def _report_to_json(report: F1Report) -> dict:
    def cell(prf):
        return {"precision": prf.precision, "recall": prf.recall, "f1": prf.f1}

    return {
        "per_type": {t: cell(prf) for t, prf in sorted(report.per_type.items())},
        "micro": cell(report.micro),
    }


def _cmd_eval(args) -> None:
    gold = _read(args.gold, args.input_format)
    # model output may contain stray continuation labels
    pred = _read(args.pred, args.input_format, decode_mode="lenient")
    counts = EvalCounts()
    for g, p in _pair_documents(gold, pred):
        counts = counts + count_matches(g.spans, p.spans)
    types = args.types if args.types else list(gold.span_type_inventory)
    report = f1_report(counts, types=types)
    if args.format == "json":
        _write_or_print(_json_text(_report_to_json(report)), args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["span_type", "precision", "recall", "f1"])
        for t in types:
            prf = report.per_type[t]
            writer.writerow([t, f"{prf.precision:.4f}", f"{prf.recall:.4f}", f"{prf.f1:.4f}"])
        m = report.micro
        writer.writerow(["micro", f"{m.precision:.4f}", f"{m.recall:.4f}", f"{m.f1:.4f}"])
        _write_or_print(buf.getvalue(), args.out)


# ---------------------------------------------------------------------------
# meta


def _observations(args) -> list[Observation]:
    if args.obs:
        return observations_from_csv(args.obs)
    return to_observations(load_embedded())


def _cv_to_dict(result) -> dict:
    return {
        "predictor_set": result.predictor_set,
        "alpha": result.alpha,
        "mae": result.mae,
        "r2": result.r2,
        "n": int(len(result.actual)),
    }


def _cmd_meta_fit(args) -> None:
    model = fit_meta_model(_observations(args), args.alpha, args.set)
    _write_or_print(_json_text(meta_model_to_dict(model)), args.out)


def _cmd_meta_cv(args) -> None:
    result = loso_cv(_observations(args), args.alpha, args.set)
    _write_or_print(_json_text(_cv_to_dict(result)), args.out)


def _cmd_meta_ablate(args) -> None:
    results = ablate(_observations(args), args.alpha)
    obj = {
        "alpha": args.alpha,
        "results": [_cv_to_dict(r) for r in results.values()],
    }
    _write_or_print(_json_text(obj), args.out)


def _cmd_meta_predict(args) -> None:
    if args.model:
        model = meta_model_from_dict(json.loads(Path(args.model).read_text("utf-8")))
    else:
        model = fit_meta_model(_observations(args), args.alpha)
    arch = ArchitectureFeatures(args.feat, args.crf, args.lstm, args.bert)
    profile = SpanTypeProfile(
        type_id="query",
        frequency=args.freq,
        span_length=args.length,
        span_distinctiveness=args.sd,
        boundary_distinctiveness=args.bd,
    )
    f1 = meta_predict(model, arch, profile)
    _write_or_print(_json_text({"f1": f1}), args.out)


def _cmd_meta_select_alpha(args) -> None:
    grid = None
    if args.grid:
        grid = tuple(float(part) for part in args.grid.split(","))
    observations = _observations(args)
    curve = alpha_mae_curve(observations, grid)
    best_alpha, best_mae = curve[0]
    for a, mae in curve[1:]:
        if mae < best_mae:
            best_alpha, best_mae = a, mae
    obj = {
        "selected_alpha": best_alpha,
        "curve": [[a, m] for a, m in curve],
    }
    _write_or_print(_json_text(obj), args.out)


# ---------------------------------------------------------------------------
# data export / reproduce


def _cmd_data_export(args) -> None:
    _write_or_print(export_table(args.table), args.out)


def _cmd_reproduce(args) -> None:
    run = build_reproduction_report(args.alpha)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(run.report.to_json(), encoding="utf-8")
    svg = scatter_svg(
        run.full_cv.actual,
        run.full_cv.predictions,
        title="Held-out prediction of span F1",
        x_label="actual F1",
        y_label="predicted F1",
    )
    (out_dir / "scatter.svg").write_text(svg, encoding="utf-8")
    sys.stdout.write(run.report.to_text())


# ---------------------------------------------------------------------------
# parser


def _add_input_format(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--input-format",
        choices=("jsonl", "conll_tsv"),
        default="jsonl",
        help="corpus file format (default jsonl)",
    )


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output here instead of stdout")


def _add_obs_alpha(p: argparse.ArgumentParser) -> None:
    p.add_argument("--obs", help="observations CSV (default: bundled study data)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="logit padding")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="spanmeta",
        description="Span identification metrics, labelers, and the F1 meta-model.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("profile", help="measure span types in a corpus")
    p.add_argument("corpus", help="corpus file")
    _add_input_format(p)
    p.add_argument("--type", help="profile a single span type")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_out(p)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("train", help="fit a labeler on a corpus")
    p.add_argument("--arch", choices=("baseline", "crf"), required=True)
    p.add_argument("--train", required=True, help="training corpus file")
    p.add_argument("--dev", help="dev corpus file (default: held-out split)")
    _add_input_format(p)
    p.add_argument("--seed", type=int, help="rng seed (overrides config file)")
    p.add_argument("--max-epochs", type=int, help="epoch cap (overrides config file)")
    p.add_argument("--config", help="key=value training options, one per line")
    _add_out(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="score predicted spans against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--types", nargs="+", help="restrict scoring to these types")
    _add_input_format(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _add_out(p)
    p.set_defaults(func=_cmd_eval)

    meta = sub.add_parser("meta", help="fit and evaluate the F1 meta-model")
    meta_sub = meta.add_subparsers(
        dest="meta_command", required=True, parser_class=_ArgumentParser
    )

    p = meta_sub.add_parser("fit", help="fit on all observations")
    _add_obs_alpha(p)
    p.add_argument("--set", choices=PREDICTOR_SETS, default="full")
    _add_out(p)
    p.set_defaults(func=_cmd_meta_fit)

    p = meta_sub.add_parser("cv", help="leave-one-span-type-out cross-validation")
    _add_obs_alpha(p)
    p.add_argument("--set", choices=PREDICTOR_SETS, default="full")
    _add_out(p)
    p.set_defaults(func=_cmd_meta_cv)

    p = meta_sub.add_parser("ablate", help="cross-validate every predictor set")
    _add_obs_alpha(p)
    _add_out(p)
    p.set_defaults(func=_cmd_meta_ablate)

    p = meta_sub.add_parser("predict", help="predict F1 for one configuration")
    _add_obs_alpha(p)
    p.add_argument("--model", help="fitted model JSON (default: fit on observations)")
    for flag in ("feat", "crf", "lstm", "bert"):
        p.add_argument(f"--{flag}", action="store_true")
    p.add_argument("--freq", type=int, required=True, help="span count")
    p.add_argument("--length", type=float, required=True, help="geometric mean length")
    p.add_argument("--sd", type=float, required=True, help="span distinctiveness")
    p.add_argument("--bd", type=float, required=True, help="boundary distinctiveness")
    _add_out(p)
    p.set_defaults(func=_cmd_meta_predict)

    p = meta_sub.add_parser("select-alpha", help="pick padding by cross-validated MAE")
    _add_obs_alpha(p)
    p.add_argument("--grid", help="comma-separated padding values to sweep")
    _add_out(p)
    p.set_defaults(func=_cmd_meta_select_alpha)

    data = sub.add_parser("data", help="bundled study tables")
    data_sub = data.add_subparsers(
        dest="data_command", required=True, parser_class=_ArgumentParser
    )
    p = data_sub.add_parser("export", help="dump a bundled table as CSV")
    p.add_argument("--table", choices=("profiles", "f1"), required=True)
    _add_out(p)
    p.set_defaults(func=_cmd_data_export)

    p = sub.add_parser("reproduce", help="rerun the embedded-data analysis")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--out-dir", default=".", help="where report.json and scatter.svg go")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except OSError as exc:
        print(f"spanmeta: i/o error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"spanmeta: error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry_point() -> None:
    sys.exit(main())
