"""Preprocessing choices and the (k1, k2) sweep harness.

A *method* names how numeric attributes are turned into mineable values:

``equal_width`` / ``equal_frequency``
    one k per side (``k1`` for the source table, ``k2`` for the target)
    applied to every numeric attribute of that side;
``manual``
    explicit chains from a :class:`DiscretizerSpec` (for MovieLens: GroupLens
    age bins and release decades);
``none``
    no discretization: each distinct raw number becomes its own category.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .discretize import DiscretizationReport, DiscretizerSpec, Method, discretize_system
from .errors import ParameterError
from .measures import Thresholds
from .miner import CandidateSet, MiningResult, count_summary, enumerate_granules, mine
from .model import MMER, Attribute, AttributeKind, InformationSystem, Nominal, Numeric, Side

METHODS = ("equal_width", "equal_frequency", "manual", "none")


def parse_method(name: str) -> str:
    key = str(name).strip().lower().replace("-", "_")
    key = {"width": "equal_width", "ew": "equal_width", "frequency": "equal_frequency",
           "ef": "equal_frequency", "nominal": "none", "raw": "none"}.get(key, key)
    if key not in METHODS:
        raise ParameterError(f"unknown method {name!r}; expected one of {METHODS}")
    return key


def nominalize(is_: InformationSystem) -> InformationSystem:
    """Treat every raw numeric value as a category of its own."""
    attrs, cols = [], []
    for a, col in zip(is_.attributes, is_.columns):
        if a.kind is AttributeKind.NUMERIC and col and isinstance(col[0], Numeric):
            attrs.append(Attribute(a.name, AttributeKind.NOMINAL))
            cols.append([Nominal(str(v)) for v in col])
        else:
            attrs.append(a)
            cols.append(col)
    return InformationSystem(is_.object_ids, attrs, cols)


@dataclass
class Preprocessed:
    mmer: MMER
    source_report: DiscretizationReport = field(default_factory=DiscretizationReport)
    target_report: DiscretizationReport = field(default_factory=DiscretizationReport)

    @property
    def warnings(self) -> list[str]:
        return [f"source.{w}" for w in self.source_report.warnings] + [
            f"target.{w}" for w in self.target_report.warnings
        ]

    def chains_dict(self) -> dict:
        return {
            "source": {n: c.to_dict() for n, c in self.source_report.chains.items()},
            "target": {n: c.to_dict() for n, c in self.target_report.chains.items()},
        }


def _side_spec(is_: InformationSystem, method: str, k: int | None) -> DiscretizerSpec:
    if k is None:
        raise ParameterError(f"method {method} needs an interval count for every side with numeric columns")
    return DiscretizerSpec.for_numeric(is_, Method.parse(method), k)


def discretize_side(
    is_: InformationSystem, method: str, k: int | None = None, spec: DiscretizerSpec | None = None
) -> tuple[InformationSystem, DiscretizationReport]:
    method = parse_method(method)
    if method == "none":
        return nominalize(is_), DiscretizationReport()
    if spec is None:
        if method == "manual":
            raise ParameterError("method manual needs an explicit discretizer spec")
        if not any(a.kind is AttributeKind.NUMERIC for a in is_.attributes):
            return is_, DiscretizationReport()
        spec = _side_spec(is_, method, k)
    return discretize_system(is_, spec)


def prepare(
    mmer: MMER,
    method: str,
    k1: int | None = None,
    k2: int | None = None,
    source_spec: DiscretizerSpec | None = None,
    target_spec: DiscretizerSpec | None = None,
) -> Preprocessed:
    """Discretize both sides of ``mmer`` according to ``method``."""
    s, rs = discretize_side(mmer.source, method, k1, source_spec)
    t, rt = discretize_side(mmer.target, method, k2, target_spec)
    return Preprocessed(mmer.replace(s, t), rs, rt)


# --------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepConfig:
    k1_range: tuple[int, int]
    k2_range: tuple[int, int]
    method: str
    thresholds: Thresholds

    def __post_init__(self):
        object.__setattr__(self, "method", parse_method(self.method))
        for name in ("k1_range", "k2_range"):
            lo, hi = getattr(self, name)
            if lo < 1 or hi < lo:
                raise ParameterError(f"{name} must satisfy 1 <= low <= high, got {(lo, hi)}")

    def cells(self) -> list[tuple[int, int]]:
        return [
            (k1, k2)
            for k1 in range(self.k1_range[0], self.k1_range[1] + 1)
            for k2 in range(self.k2_range[0], self.k2_range[1] + 1)
        ]


@dataclass(frozen=True)
class SweepRow:
    method: str
    k1: int | str
    k2: int | str
    source_candidates: int
    target_candidates: int
    rules: int

    FIELDS = ("method", "k1", "k2", "source_candidates", "target_candidates", "rules")

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in self.FIELDS)


_WORKER_MMER: MMER | None = None


def _init_worker(mmer: MMER) -> None:
    global _WORKER_MMER
    _WORKER_MMER = mmer


def _sweep_k1(args) -> tuple[list[SweepRow], list[str]]:
    method, k1, k2s, th = args
    return _sweep_rows(_WORKER_MMER, method, k1, k2s, th)


def _sweep_rows(
    mmer: MMER, method: str, k1: int, k2s: Sequence[int], th: Thresholds
) -> tuple[list[SweepRow], list[str]]:
    notes = []
    src, rep = discretize_side(mmer.source, method, k1)
    notes += [f"k1={k1}: source.{w}" for w in rep.warnings]
    src_c = enumerate_granules(src, Side.SOURCE, th.ms)
    rows = []
    for k2 in k2s:
        tgt, rep = discretize_side(mmer.target, method, k2)
        notes += [f"k2={k2}: target.{w}" for w in rep.warnings]
        cands = CandidateSet(src_c, enumerate_granules(tgt, Side.TARGET, th.mt))
        s = count_summary(mine(mmer.replace(src, tgt), th, cands=cands))
        rows.append(SweepRow(method, k1, k2, s.candidates[0], s.candidates[1], s.rules))
    return rows, notes


def run_sweep(
    mmer: MMER, config: SweepConfig, workers: int = 1, warnings_out: list | None = None
) -> list[SweepRow]:
    """Mine once per ``(k1, k2)`` cell; rows come back in lexicographic order.

    ``workers > 1`` spreads k1 values over processes.  Output does not depend
    on ``workers``.  Discretization warnings (clamped k) are appended to
    ``warnings_out`` when given, de-duplicated.
    """
    if config.method == "manual":
        raise ParameterError("a manual setting has no k grid; use run_manual_row")
    if config.method == "none":
        pre = prepare(mmer, "none")
        s = count_summary(mine(pre.mmer, config.thresholds))
        return [SweepRow("none", "-", "-", s.candidates[0], s.candidates[1], s.rules)]
    k1s = range(config.k1_range[0], config.k1_range[1] + 1)
    k2s = list(range(config.k2_range[0], config.k2_range[1] + 1))
    jobs = [(config.method, k1, k2s, config.thresholds) for k1 in k1s]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(mmer,)) as pool:
            parts = list(pool.map(_sweep_k1, jobs))
    else:
        parts = [_sweep_rows(mmer, *job) for job in jobs]
    rows = [r for part, _ in parts for r in part]
    rows.sort(key=lambda r: (r.k1, r.k2))
    if warnings_out is not None:
        for _, notes in parts:
            for n in notes:
                if n not in warnings_out:
                    warnings_out.append(n)
    return rows


def run_manual_row(
    mmer: MMER,
    thresholds: Thresholds,
    source_spec: DiscretizerSpec | None,
    target_spec: DiscretizerSpec | None = None,
) -> SweepRow:
    pre = prepare(mmer, "manual", source_spec=source_spec or DiscretizerSpec(),
                  target_spec=target_spec or DiscretizerSpec())
    s = count_summary(mine(pre.mmer, thresholds))
    return SweepRow("manual", "manual", "manual", s.candidates[0], s.candidates[1], s.rules)


def mine_prepared(pre: Preprocessed, thresholds: Thresholds, workers: int = 1) -> MiningResult:
    result = mine(pre.mmer, thresholds, workers=workers)
    result.provenance = dict(result.provenance, chains=pre.chains_dict(), warnings=pre.warnings)
    return result


def monotone_violations(values: Iterable[float], slack: float = 0.10) -> list[int]:
    """Positions ``i`` where ``values[i] - values[i-1]`` exceeds ``slack`` times the running max."""
    out = []
    prev = running = None
    for i, v in enumerate(values):
        if prev is not None and v - prev > slack * running:
            out.append(i)
        prev = v
        running = v if running is None else max(running, v)
    return out
