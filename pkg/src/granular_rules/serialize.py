"""Output formats: rules as JSON Lines, sweep grids as CSV, run reports as JSON.

Rules file
    One JSON object per line.  Descriptors keep the exact interval bounds
    (``"lo": "2", "hi": "22/3"``) next to a display label, and every measure
    is written twice: as an exact fraction string and as a float.

Grid file
    CSV with header ``method,k1,k2,source_candidates,target_candidates,rules``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .measures import GranularRule
from .miner import MiningResult
from .model import Interval, Numeric


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _descriptor(names: Sequence[str], j: int, v) -> dict:
    d = {"attribute": names[j]}
    if isinstance(v, Interval):
        d["value"] = v.label()
        d["interval"] = {"lo": str(v.lo), "hi": str(v.hi), "hi_closed": v.hi_closed}
    elif isinstance(v, Numeric):
        d["value"] = str(v)
    else:
        d["value"] = v.label
    return d


def _measure(x: Fraction) -> dict:
    return {"exact": str(x), "float": float(x)}


def rule_record(rule: GranularRule, source_names: Sequence[str], target_names: Sequence[str]) -> dict:
    m = rule.measures
    return {
        "lhs": [_descriptor(source_names, j, v) for j, v in rule.lhs.intension],
        "rhs": [_descriptor(target_names, j, v) for j, v in rule.rhs.intension],
        "lhs_size": rule.lhs.size,
        "rhs_size": rule.rhs.size,
        "scoverage": _measure(m.scoverage),
        "tcoverage": _measure(m.tcoverage),
        "sconfidence": _measure(m.sconfidence),
        "tconfidence": _measure(m.tconfidence),
        "K": m.K,
    }


def rules_jsonl(result: MiningResult) -> str:
    lines = [
        json.dumps(rule_record(r, result.source_names, result.target_names), ensure_ascii=False)
        for r in result.rules
    ]
    return "".join(line + "\n" for line in lines)


def write_rules(result: MiningResult, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(rules_jsonl(result), encoding="utf-8")
    return path


def read_rules(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def rule_text(rule: GranularRule, source_names, target_names, digits: int | None = 1) -> str:
    """One-line human reading, e.g. ``<Gender: Male> => <Category: Alcohol>``."""

    def side(g, names):
        parts = []
        for j, v in g.intension:
            text = v.label(digits) if isinstance(v, Interval) else str(v)
            parts.append(f"<{names[j]}: {text}>")
        return " ∧ ".join(parts)

    return f"{side(rule.lhs, source_names)} => {side(rule.rhs, target_names)}"


def grid_csv(rows: Iterable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("method", "k1", "k2", "source_candidates", "target_candidates", "rules"))
    for r in rows:
        w.writerow(r.as_tuple())
    return buf.getvalue()


def read_grid(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write_json(obj, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path
