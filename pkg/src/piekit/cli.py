"""Command-line frontend: score, importance, explain, pick, plot-data.

stdout carries a short human-readable summary; all machine output goes to
files (JSON for reports and explanations, CSV for plot data).  Exit codes
are stable: 0 success, 1 internal failure, 2 input/validation error,
3 degenerate math.  Runs with fixed inputs and seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import traceback
from pathlib import Path

from .core import pie_raw, pie_standardized
from .errors import DegenerateError, PiekitError, ValidationError
from .importance import correlation_importance, extract_target, ols_importance
from .lime import (
    LimeParams,
    LinearModel,
    NearestRowModel,
    explain_table,
    scatter_explanations,
    submodular_pick,
)
from .standardize import standardize_columns, standardize_importance
from .tabular import align, load_importance, load_table, write_importance

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3

MODES = ("standardized", "raw")
METHODS = ("ols", "corr")


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# keys accepted in a --config file; values are the parsers
_CONFIG_KEYS = {
    "data": str,
    "importance": str,
    "target": str,
    "report": str,
    "output": str,
    "rows": str,
    "mode": str,
    "method": str,
    "top_k": int,
    "samples": int,
    "k_features": int,
    "seed": int,
    "budget": int,
    "kernel_width": float,
    "row_ids": _parse_bool,
    "emit_plot_data": _parse_bool,
}


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config '{path}': {exc.strerror}") from None
    entries: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        key, _, value = stripped.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValidationError(f"{path}:{lineno}: unknown config key '{key}'")
        try:
            entries[key] = _CONFIG_KEYS[key](value.strip())
        except ValueError:
            raise ValidationError(
                f"{path}:{lineno}: bad value for '{key}': {value.strip()!r}"
            ) from None
    return entries


def _merge_config(args: argparse.Namespace) -> None:
    """Fill unset flags from the config file; explicit flags win.

    Config keys that do not apply to the subcommand are ignored, so one
    config can drive a whole pipeline of commands.
    """
    if getattr(args, "config", None) is None:
        return
    for key, value in _load_config(args.config).items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _require(args, name: str, flag: str):
    value = getattr(args, name)
    if value is None:
        raise ValidationError(f"{args.command} requires {flag}")
    return value


def _round6(value: float) -> float:
    """Round to 6 significant digits for serialization; core math stays full
    precision, and rounding is monotone so driver order never changes."""
    return float(f"{value:.6g}")


def _write_json(path: str, doc: dict) -> None:
    target = Path(path)
    if target.parent != Path(""):
        target.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(target, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise ValidationError(f"cannot write '{path}': {exc.strerror}") from None


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read '{path}': {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"'{path}' is not valid JSON: {exc}") from None


def _row_label(row: int, row_id: str | None) -> str:
    """Row ids double as plot-data selectors; unnamed rows get 1-based numbers."""
    return row_id if row_id is not None else str(row + 1)


def _score_doc(args) -> dict:
    mode = args.mode
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {', '.join(MODES)}, not '{mode}'")
    if args.top_k < 1:
        raise ValidationError("top_k must be at least 1")
    table = load_table(_require(args, "data", "--data"), has_row_ids=bool(args.row_ids))
    imp = align(load_importance(_require(args, "importance", "--importance")), table)
    if mode == "standardized":
        report, _, stats = pie_standardized(imp, table, args.top_k)
        beta_out, _, _ = standardize_importance(imp)
        stats_doc = stats.to_json_dict()
    else:
        report, _ = pie_raw(imp, table, args.top_k)
        beta_out = imp.beta
        stats_doc = None
    return {
        "mode": mode,
        "top_k": args.top_k,
        "stats": stats_doc,
        "importance": [
            {"feature": name, "weight": _round6(float(b))}
            for name, b in zip(table.column_names, beta_out)
        ],
        "rows": [
            {
                "row": entry.row,
                "row_id": _row_label(entry.row, entry.row_id),
                "degenerate": entry.degenerate,
                "top_driver": entry.top_driver,
                "drivers": [
                    {"feature": name, "weight": _round6(weight)}
                    for name, weight in entry.ranked
                ],
            }
            for entry in report
        ],
    }


def cmd_score(args) -> None:
    doc = _score_doc(args)
    output = _require(args, "output", "--output")
    _write_json(output, doc)
    degenerate = sum(1 for r in doc["rows"] if r["degenerate"])
    print(
        f"scored {len(doc['rows'])} rows in {doc['mode']} mode "
        f"({degenerate} degenerate) -> {output}"
    )
    if args.emit_plot_data:
        plot_dir = Path(output).with_suffix("").as_posix() + "_plots"
        written = _emit_plot_data(doc, None, plot_dir)
        print(f"plot data for {written} rows -> {plot_dir}")


def cmd_importance(args) -> None:
    method = args.method
    if method not in METHODS:
        raise ValidationError(f"method must be one of {', '.join(METHODS)}, not '{method}'")
    table = load_table(_require(args, "data", "--data"), has_row_ids=bool(args.row_ids))
    labeled = extract_target(table, _require(args, "target", "--target"))
    imp = ols_importance(labeled) if method == "ols" else correlation_importance(labeled)
    output = _require(args, "output", "--output")
    Path(output).parent.mkdir(parents=True, exist_ok=True)
    write_importance(imp, output)
    print(f"{method} importance for {len(imp.column_names)} features -> {output}")


def _surrogate_run(args):
    """Shared setup for explain and pick: table, black box, explanations."""
    table = load_table(_require(args, "data", "--data"), has_row_ids=bool(args.row_ids))
    if (args.importance is None) == (args.target is None):
        raise ValidationError(
            "exactly one black box is required: --importance WEIGHTS.csv "
            "(linear model) or --target COLUMN (table lookup)"
        )
    if args.target is not None:
        labeled = extract_target(table, args.target)
        features = labeled.features
        _, stats = standardize_columns(features)
        model = NearestRowModel(features, labeled.target, stats)
        black_box = "table-lookup"
    else:
        imp = align(load_importance(args.importance), table)
        features = table
        _, stats = standardize_columns(features)
        model = LinearModel(imp.beta)
        black_box = "linear"
    params = LimeParams(
        n_samples=args.samples,
        k_features=args.k_features,
        kernel_width=args.kernel_width,
        seed=args.seed,
    )
    explanations = explain_table(model, features, stats, params)
    matrix = scatter_explanations(explanations, features.column_names)
    params_doc = {
        "samples": params.n_samples,
        "k_features": params.k_features,
        "kernel_width": _round6(params.resolved_width(features.n_cols)),
        "seed": params.seed,
        "black_box": black_box,
        "target": args.target,
    }
    return features, explanations, matrix, params_doc


def cmd_explain(args) -> None:
    features, explanations, matrix, params_doc = _surrogate_run(args)
    ids = features.row_ids
    doc = {
        "params": params_doc,
        "columns": list(features.column_names),
        "rows": [
            {
                "row": expl.row,
                "row_id": _row_label(expl.row, ids[expl.row] if ids else None),
                "selected": list(expl.selected),
                "weights": [_round6(w) for w in expl.weights],
                "intercept": _round6(expl.intercept),
            }
            for expl in explanations
        ],
        "matrix": [[_round6(v) for v in row] for row in matrix.tolist()],
    }
    output = _require(args, "output", "--output")
    _write_json(output, doc)
    print(f"explained {len(explanations)} rows -> {output}")


def cmd_pick(args) -> None:
    budget = _require(args, "budget", "--budget")
    features, _, matrix, params_doc = _surrogate_run(args)
    result = submodular_pick(matrix, budget)
    ids = features.row_ids
    doc = {
        "params": {**params_doc, "budget": budget},
        "selected": [
            {"row": row, "row_id": _row_label(row, ids[row] if ids else None)}
            for row in result.selected_rows
        ],
        "coverage": _round6(result.coverage_score),
    }
    output = _require(args, "output", "--output")
    _write_json(output, doc)
    print(
        f"picked {len(result.selected_rows)} of {features.n_rows} rows "
        f"(coverage {doc['coverage']}) -> {output}"
    )


def _safe_filename(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", label) or "_"


def _emit_plot_data(doc: dict, selectors: list[str] | None, out_dir: str) -> int:
    """Write one bar-chart CSV per requested row plus the global importance CSV."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    try:
        rows = doc["rows"]
        importance = doc["importance"]
        by_label: dict[str, list[dict]] = {}
        for row in rows:
            by_label.setdefault(row["row_id"], []).append(row)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed score report: missing {exc}") from None

    if selectors is None:
        selectors = [row["row_id"] for row in rows]
    used_names: dict[str, str] = {}
    written = 0
    for label in selectors:
        matches = by_label.get(label)
        if not matches:
            raise ValidationError(f"unknown row id '{label}'")
        if len(matches) > 1:
            raise ValidationError(f"row id '{label}' is ambiguous ({len(matches)} rows)")
        name = _safe_filename(label)
        if used_names.setdefault(name, label) != label:
            raise ValidationError(
                f"row ids '{used_names[name]}' and '{label}' collide as file name '{name}.csv'"
            )
        row = matches[0]
        lines = ["feature,weight"]
        if row["degenerate"]:
            lines.append("# degenerate")
        else:
            lines.extend(f"{d['feature']},{d['weight']!r}" for d in row["drivers"])
        (directory / f"{name}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        written += 1
    lines = ["feature,weight"]
    lines.extend(f"{e['feature']},{e['weight']!r}" for e in importance)
    (directory / "normalized_importance.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return written


def cmd_plot_data(args) -> None:
    if args.report is not None:
        doc = _read_json(args.report)
    else:
        doc = _score_doc(args)
    selectors = None
    if args.rows is not None:
        selectors = [part.strip() for part in args.rows.split(",") if part.strip()]
    out_dir = _require(args, "output", "--output")
    written = _emit_plot_data(doc, selectors, out_dir)
    print(f"plot data for {written} rows -> {out_dir}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="key=value config file; flags override it")
    parser.add_argument(
        "--row-ids",
        action="store_true",
        default=None,
        help="treat the first data column as row identifiers",
    )


def _add_surrogate_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", default=None, help="feature CSV")
    parser.add_argument("--importance", default=None, help="linear-weights CSV black box")
    parser.add_argument("--target", default=None, help="score column for the table-lookup black box")
    parser.add_argument("--samples", type=int, default=None, help="perturbations per row (default 500)")
    parser.add_argument("--k-features", type=int, default=None, help="features per explanation (default 3)")
    parser.add_argument("--kernel-width", type=float, default=None, help="similarity kernel width (default 0.75*sqrt(m))")
    parser.add_argument("--seed", type=int, default=None, help="random seed (default 42)")
    parser.add_argument("--output", default=None, help="output JSON path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="piekit",
        description="Per-observation key-driver attribution for tabular data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="attribute each row to its key drivers")
    p.add_argument("--data", default=None, help="feature CSV")
    p.add_argument("--importance", default=None, help="feature,importance CSV")
    p.add_argument("--mode", default=None, help="standardized (default) or raw")
    p.add_argument("--top-k", type=int, default=None, help="drivers per row (default 1)")
    p.add_argument("--output", default=None, help="report JSON path")
    p.add_argument(
        "--emit-plot-data",
        action="store_true",
        default=None,
        help="also write per-row bar-chart CSVs next to the report",
    )
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("importance", help="estimate importances from labeled data")
    p.add_argument("--data", default=None, help="feature CSV including the target column")
    p.add_argument("--target", default=None, help="name of the target column")
    p.add_argument("--method", default=None, help="ols (default) or corr")
    p.add_argument("--output", default=None, help="importance CSV path")
    _add_common(p)
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("explain", help="local surrogate explanation per row")
    _add_surrogate_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("pick", help="greedy coverage pick of representative rows")
    _add_surrogate_flags(p)
    p.add_argument("--budget", type=int, default=None, help="maximum rows to pick")
    _add_common(p)
    p.set_defaults(func=cmd_pick)

    p = sub.add_parser("plot-data", help="emit plottable CSVs from a score report")
    p.add_argument("--report", default=None, help="existing score report JSON")
    p.add_argument("--data", default=None, help="feature CSV (to score in-run instead)")
    p.add_argument("--importance", default=None, help="feature,importance CSV (in-run scoring)")
    p.add_argument("--mode", default=None, help="standardized (default) or raw")
    p.add_argument("--top-k", type=int, default=None, help="drivers per row (default 1)")
    p.add_argument("--rows", default=None, help="comma-separated row ids (default: all rows)")
    p.add_argument("--output", default=None, help="output directory")
    _add_common(p)
    p.set_defaults(func=cmd_plot_data)

    return parser


_DEFAULTS = {
    "mode": "standardized",
    "top_k": 1,
    "method": "ols",
    "samples": 500,
    "k_features": 3,
    "seed": 42,
    "row_ids": False,
    "emit_plot_data": False,
}


def _fill_defaults(args: argparse.Namespace) -> None:
    for name, value in _DEFAULTS.items():
        if hasattr(args, name) and getattr(args, name) is None:
            setattr(args, name, value)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return EXIT_OK
        return code if isinstance(code, int) else EXIT_VALIDATION
    try:
        _merge_config(args)
        _fill_defaults(args)
        args.func(args)
        return EXIT_OK
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DegenerateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PiekitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


def entry() -> None:
    raise SystemExit(main())
