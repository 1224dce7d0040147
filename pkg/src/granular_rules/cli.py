"""Command-line front end: ``discretize``, ``mine``, ``sweep`` and ``stats``.

Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.  Failures
print one JSON record on stderr, e.g.
``{"error": "type_error", "message": "...", "exit": 2}``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .dataio import (
    MovieLensOptions,
    SchemaConfig,
    load_mmer,
    load_movielens,
    movielens_manual_spec,
    write_mmer,
)
from .discretize import DiscretizerSpec
from .errors import GranularError, ParameterError
from .experiment import (
    Preprocessed,
    SweepConfig,
    mine_prepared,
    parse_method,
    prepare,
    run_manual_row,
    run_sweep,
)
from .measures import Thresholds
from .miner import count_summary
from .model import MMER, AttributeKind, Interval, Numeric
from .serialize import grid_csv, sha256_file, write_json, write_rules

log = logging.getLogger("granular_rules")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULT_THRESHOLDS = {"ms": "0.06", "mt": "0.06", "mc": "0.15", "tc": "0.17"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# argument handling


def _add_dataset(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--schema", type=Path, help="JSON schema of a generic two-table dataset")
    g.add_argument("--movielens-dir", type=Path, help="directory holding ml-100k u.user/u.item/u.data")


def _add_discretizer(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--method",
        default="equal_frequency",
        help="equal_width | equal_frequency | manual | none (default: equal_frequency)",
    )
    p.add_argument("--k", type=int, help="interval count for numeric columns on both sides")
    p.add_argument("--k1", type=int, help="interval count for the source side (overrides --k)")
    p.add_argument("--k2", type=int, help="interval count for the target side (overrides --k)")
    p.add_argument("--spec", type=Path, help='per-attribute JSON spec {"source": {...}, "target": {...}}')


def _add_thresholds(p: argparse.ArgumentParser) -> None:
    for name, text in (
        ("ms", "minimal source coverage"),
        ("mt", "minimal target coverage"),
        ("mc", "minimal source confidence"),
        ("tc", "minimal target confidence"),
    ):
        p.add_argument(f"--{name}", default=None, help=f"{text} (default {DEFAULT_THRESHOLDS[name]})")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=1, help="worker count (output does not depend on it)")
    p.add_argument("--seed", type=int, default=None, help="reserved; every code path is deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="granular-rules", description="Granular association rule mining.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("discretize", help="discretize numeric columns and write the tables")
    _add_dataset(p)
    _add_discretizer(p)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    _add_common(p)

    p = sub.add_parser("mine", help="mine granular association rules")
    _add_dataset(p, required=False)
    _add_discretizer(p)
    _add_thresholds(p)
    p.add_argument("--out", type=Path, required=True, help="output directory (rules.jsonl, report.json)")
    p.add_argument("--replay", type=Path, help="re-run the experiment recorded in a report.json")
    _add_common(p)

    p = sub.add_parser("sweep", help="rule counts over a grid of interval counts")
    _add_dataset(p)
    p.add_argument("--method", default="equal_frequency")
    p.add_argument("--k1", default=None, help="k1 or k1_lo:k1_hi (inclusive)")
    p.add_argument("--k2", default=None, help="k2 or k2_lo:k2_hi (inclusive)")
    p.add_argument("--k", default=None, help="shorthand for --k1 and --k2")
    _add_thresholds(p)
    p.add_argument("--out", type=Path, required=True, help="output directory (grid.csv, report.json)")
    _add_common(p)

    p = sub.add_parser("stats", help="summarize a dataset")
    _add_dataset(p)
    p.add_argument("--out", type=Path, help="write the summary here instead of stdout")
    return parser


def _range(text: str | None, name: str) -> tuple[int, int]:
    if text is None:
        raise UsageError(f"--{name} is required")
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise UsageError(f"--{name} must be an integer or lo:hi, got {text!r}") from None


def _thresholds(args) -> Thresholds:
    vals = {n: getattr(args, n) if getattr(args, n) is not None else DEFAULT_THRESHOLDS[n]
            for n in ("ms", "mt", "mc", "tc")}
    return Thresholds(**vals)


# --------------------------------------------------------------------------
# datasets


def _load(args, method: str) -> tuple[MMER, dict, list[dict]]:
    """Returns the MMER, a JSON-able dataset descriptor and the input file hashes."""
    if args.schema is not None:
        config = SchemaConfig.from_file(args.schema)
        mmer = load_mmer(config)
        files = [args.schema, *config.paths()]
        desc = {"kind": "schema", "path": str(args.schema)}
    else:
        year_mode = "decade" if method == "manual" else "raw_year"
        age_mode = "manual_grouplens" if method == "manual" else "automatic"
        opts = MovieLensOptions(args.movielens_dir, age_mode, year_mode)
        mmer = load_movielens(opts)
        files = list(opts.files().values())
        desc = {"kind": "movielens", "data_dir": str(args.movielens_dir),
                "age_mode": age_mode, "year_mode": year_mode}
    inputs = [{"path": str(p), "sha256": sha256_file(p)} for p in files]
    return mmer, desc, inputs


def _read_spec(path: Path | None) -> tuple[DiscretizerSpec | None, DiscretizerSpec | None, dict | None]:
    if path is None:
        return None, None, None
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParameterError(f"cannot read spec {path}: {e}") from None
    unknown = set(d) - {"source", "target"}
    if unknown:
        raise ParameterError(f"spec keys must be 'source' and/or 'target', got {sorted(unknown)}")
    return (
        DiscretizerSpec.from_dict(d.get("source", {})),
        DiscretizerSpec.from_dict(d.get("target", {})),
        d,
    )


def _preprocess(args, mmer: MMER, method: str, spec_dict: dict | None = None) -> Preprocessed:
    if spec_dict is not None:
        s = DiscretizerSpec.from_dict(spec_dict.get("source", {}))
        t = DiscretizerSpec.from_dict(spec_dict.get("target", {}))
        return prepare(mmer, "manual", source_spec=s, target_spec=t)
    if method == "manual":
        if args.movielens_dir is None:
            raise ParameterError("method manual on a generic dataset needs --spec")
        return prepare(mmer, "manual", source_spec=movielens_manual_spec(mmer),
                       target_spec=DiscretizerSpec())
    k1 = args.k1 if args.k1 is not None else args.k
    k2 = args.k2 if args.k2 is not None else args.k
    return prepare(mmer, method, k1, k2)


def _dataset_summary(mmer: MMER) -> dict:
    keep = ("excluded_movies", "rating_lines", "loaded_rating_lines", "excluded_rating_lines",
            "duplicate_pairs")
    out = {
        "source_objects": mmer.source.n_objects,
        "target_objects": mmer.target.n_objects,
        "relation_pairs": len(mmer.relation),
    }
    out.update({k: mmer.metadata[k] for k in keep if k in mmer.metadata})
    return out


def _dataset_notes(mmer: MMER, desc: dict) -> list[str]:
    notes = []
    excluded = mmer.metadata.get("excluded_movies")
    if excluded:
        notes.append(
            f"excluded {len(excluded)} movie(s) without a release year and "
            f"{mmer.metadata.get('excluded_rating_lines', 0)} rating line(s) referencing them"
        )
    if desc.get("age_mode") == "manual_grouplens":
        top = max(v.value for v in mmer.source.column("age"))
        notes.append(f"age bin [56, inf) realized as [56, {top}] using the observed maximum age")
    return notes


# --------------------------------------------------------------------------
# commands


def cmd_discretize(args) -> int:
    method = parse_method(args.method)
    _, _, spec_dict = _read_spec(args.spec)
    mmer, desc, inputs = _load(args, "spec" if spec_dict is not None else method)
    pre = _preprocess(args, mmer, method, spec_dict)
    out = Path(args.out)
    schema_path = write_mmer(pre.mmer, out)
    report = {
        "tool": "granular-rules",
        "version": __version__,
        "command": "discretize",
        "parameters": {"dataset": desc, "method": "manual" if spec_dict is not None else method,
                       "k1": args.k1 if args.k1 is not None else args.k,
                       "k2": args.k2 if args.k2 is not None else args.k, "spec": spec_dict},
        "inputs": inputs,
        "chains": pre.chains_dict(),
        "warnings": _dataset_notes(mmer, desc) + pre.warnings,
        "schema": str(schema_path.name),
    }
    write_json(report, out / "report.json")
    print(f"wrote {schema_path}")
    return EXIT_OK


def _mine_parameters(args) -> dict:
    method = parse_method(args.method)
    _, _, spec_dict = _read_spec(args.spec)
    th = _thresholds(args)
    return {
        "method": "manual" if spec_dict is not None else method,
        "k1": args.k1 if args.k1 is not None else args.k,
        "k2": args.k2 if args.k2 is not None else args.k,
        "spec": spec_dict,
        "thresholds": th.to_dict(),
    }


def _apply_replay(args) -> tuple[dict, dict]:
    report = json.loads(Path(args.replay).read_text())
    params = report["parameters"]
    ds = params["dataset"]
    args.schema = Path(ds["path"]) if ds["kind"] == "schema" else None
    args.movielens_dir = Path(ds["data_dir"]) if ds["kind"] == "movielens" else None
    args.method = params["method"]
    args.k1, args.k2, args.k = params["k1"], params["k2"], None
    for name, value in params["thresholds"].items():
        setattr(args, name, value)
    return params, report


def cmd_mine(args) -> int:
    recorded = None
    if args.replay is not None:
        params, recorded = _apply_replay(args)
        spec_dict = params["spec"]
    else:
        if args.schema is None and args.movielens_dir is None:
            raise UsageError("one of --schema or --movielens-dir is required")
        params = _mine_parameters(args)
        spec_dict = params["spec"]
    method = params["method"]
    thresholds = Thresholds.from_dict(params["thresholds"])

    t0 = time.perf_counter()
    mmer, desc, inputs = _load(args, "spec" if spec_dict is not None else method)
    if recorded is not None:
        old = {i["path"]: i["sha256"] for i in recorded["inputs"]}
        changed = [i["path"] for i in inputs if old.get(i["path"]) != i["sha256"]]
        if changed:
            raise GranularError(f"inputs changed since the recorded run: {changed}")
    pre = _preprocess(args, mmer, method, spec_dict)
    if recorded is not None and pre.chains_dict() != recorded["chains"]:
        raise GranularError("re-fitted boundary chains differ from the recorded ones")
    result = mine_prepared(pre, thresholds, workers=max(1, args.threads))
    elapsed = time.perf_counter() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_rules(result, out / "rules.jsonl")
    summary = count_summary(result)
    warnings = _dataset_notes(mmer, desc) + pre.warnings
    if result.k_clamps:
        warnings.append(f"rank floor(mc*|LH|) was 0 and raised to 1 for {result.k_clamps} evaluated pairs")
    report = {
        "tool": "granular-rules",
        "version": __version__,
        "command": "mine",
        "parameters": dict(params, dataset=desc),
        "inputs": inputs,
        "dataset": _dataset_summary(mmer),
        "chains": pre.chains_dict(),
        "thresholds": thresholds.to_dict(),
        "candidate_counts": list(summary.candidates),
        "evaluated_pairs": summary.evaluated_pairs,
        "rule_count": summary.rules,
        "k_floor_clamps": result.k_clamps,
        "warnings": warnings,
        "wall_time_s": round(elapsed, 3),
    }
    write_json(report, out / "report.json")
    print(
        f"candidates {summary.candidates[0]} x {summary.candidates[1]}, "
        f"{summary.rules} rules -> {out / 'rules.jsonl'}"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    method = parse_method(args.method)
    thresholds = _thresholds(args)
    t0 = time.perf_counter()
    mmer, desc, inputs = _load(args, method)
    notes: list[str] = []
    if method == "manual":
        if args.movielens_dir is None:
            raise ParameterError("a manual sweep row needs --movielens-dir")
        rows = [run_manual_row(mmer, thresholds, movielens_manual_spec(mmer))]
        k1r = k2r = None
    elif method == "none":
        rows = run_sweep(mmer, SweepConfig((1, 1), (1, 1), method, thresholds))
        k1r = k2r = None
    else:
        k1r = _range(args.k1 if args.k1 is not None else args.k, "k1")
        k2r = _range(args.k2 if args.k2 is not None else args.k, "k2")
        rows = run_sweep(mmer, SweepConfig(k1r, k2r, method, thresholds), max(1, args.threads), notes)
    elapsed = time.perf_counter() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "grid.csv").write_text(grid_csv(rows))
    report = {
        "tool": "granular-rules",
        "version": __version__,
        "command": "sweep",
        "parameters": {"dataset": desc, "method": method, "k1_range": k1r, "k2_range": k2r,
                       "thresholds": thresholds.to_dict()},
        "inputs": inputs,
        "dataset": _dataset_summary(mmer),
        "rows": len(rows),
        "warnings": _dataset_notes(mmer, desc) + notes,
        "wall_time_s": round(elapsed, 3),
    }
    write_json(report, out / "report.json")
    print(f"{len(rows)} rows -> {out / 'grid.csv'}")
    return EXIT_OK


def dataset_stats(mmer: MMER) -> dict:
    def side(is_):
        attrs = []
        for a, col in zip(is_.attributes, is_.columns):
            entry = {"name": a.name, "kind": a.kind.value, "distinct": len(set(col))}
            if a.kind is AttributeKind.NUMERIC and col:
                if isinstance(col[0], Numeric):
                    vals = [v.value for v in col]
                    entry.update(min=min(vals), max=max(vals))
                elif isinstance(col[0], Interval):
                    entry["intervals"] = sorted({v.label() for v in col})
            attrs.append(entry)
        return {"objects": is_.n_objects, "attributes": attrs}

    pairs = len(mmer.relation)
    cells = mmer.source.n_objects * mmer.target.n_objects
    return {
        "source": side(mmer.source),
        "target": side(mmer.target),
        "relation": {"pairs": pairs, "density": pairs / cells if cells else 0.0},
        "dataset": _dataset_summary(mmer),
    }


def cmd_stats(args) -> int:
    mmer, desc, inputs = _load(args, "none")
    text = json.dumps(dict(dataset_stats(mmer), inputs=inputs), indent=2) + "\n"
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"discretize": cmd_discretize, "mine": cmd_mine, "sweep": cmd_sweep, "stats": cmd_stats}


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit": code}) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _fail("usage", str(e), EXIT_USAGE)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        return _fail("usage", str(e), EXIT_USAGE)
    except ParameterError as e:
        return _fail(e.kind, str(e), EXIT_USAGE)
    except GranularError as e:
        return _fail(e.kind, str(e), EXIT_DATA)
    except Exception as e:  # noqa: BLE001 - last-resort record for the caller
        log.debug("internal error", exc_info=True)
        return _fail("internal", f"{type(e).__name__}: {e}", EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
