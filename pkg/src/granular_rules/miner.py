"""Candidate enumeration and rule mining.

A candidate is a granule whose coverage passes its side's threshold.  Every
(source candidate, target candidate) pair is then scored and kept when both
confidences pass too.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import KindError
from .measures import GranularRule, Thresholds, measures_from_counts
from .model import (
    MMER,
    AttributeKind,
    Granule,
    InformationSystem,
    Numeric,
    Side,
    iter_bits,
    value_sort_key,
)


def _coverage_floor(min_coverage, n: int) -> int:
    """Smallest extension size ``s`` with ``s / n >= min_coverage`` (at least 1)."""
    if isinstance(min_coverage, float):
        min_coverage = Fraction(repr(min_coverage))
    c = Fraction(min_coverage)
    need = -(-c.numerator * n // c.denominator)
    return max(need, 1)


def enumerate_granules(is_: InformationSystem, side, min_coverage) -> list[Granule]:
    """All granules with a non-empty intension and support ``>= min_coverage``.

    Depth-first over attributes in column order; a branch is cut as soon as
    its extension falls below the coverage floor, since adding descriptors
    can only shrink it.  Only value combinations realised by some object are
    produced, so every extension is non-empty.  Granules with equal
    extensions but different intensions are all kept.
    """
    side = Side(side)
    for attr, col in zip(is_.attributes, is_.columns):
        if attr.kind is AttributeKind.NUMERIC and col and isinstance(col[0], Numeric):
            raise KindError(
                f"attribute {attr.name!r} is numeric; run discretize first "
                "(or declare it nominal)"
            )
    n = is_.n_objects
    if n == 0:
        return []
    need = _coverage_floor(min_coverage, n)
    if need > n:
        return []

    value_masks = [sorted(vm.items(), key=lambda kv: value_sort_key(kv[0])) for vm in is_.value_masks]
    m = len(value_masks)
    out: list[Granule] = []

    def dfs(start: int, intension: tuple, ext: int) -> None:
        for j in range(start, m):
            for value, vmask in value_masks[j]:
                e = ext & vmask
                if e.bit_count() >= need:
                    it = intension + ((j, value),)
                    out.append(Granule(it, e, side))
                    dfs(j + 1, it, e)

    dfs(0, (), is_.universe_mask)
    out.sort(key=Granule.sort_key)
    return out


@dataclass
class CandidateSet:
    source_candidates: list[Granule]
    target_candidates: list[Granule]

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.source_candidates), len(self.target_candidates)


@dataclass
class MiningResult:
    rules: list[GranularRule]
    candidate_counts: tuple[int, int]
    thresholds: Thresholds
    source_names: tuple[str, ...] = ()
    target_names: tuple[str, ...] = ()
    provenance: dict = field(default_factory=dict)
    k_clamps: int = 0  # evaluated pairs whose rank floor(mc*|LH|) was raised to 1


class CountSummary(NamedTuple):
    candidates: tuple[int, int]
    rules: int

    @property
    def evaluated_pairs(self) -> int:
        return self.candidates[0] * self.candidates[1]


def count_summary(result: MiningResult | None) -> CountSummary:
    if result is None:
        return CountSummary((0, 0), 0)
    return CountSummary(tuple(result.candidate_counts), len(result.rules))


def candidates(mmer: MMER, thresholds: Thresholds) -> CandidateSet:
    return CandidateSet(
        enumerate_granules(mmer.source, Side.SOURCE, thresholds.ms),
        enumerate_granules(mmer.target, Side.TARGET, thresholds.mt),
    )


def _pair_block(
    lhs_list: Sequence[Granule],
    rhs_list: Sequence[Granule],
    row_masks: Sequence[int],
    n_u: int,
    n_v: int,
    th: Thresholds,
) -> tuple[list[GranularRule], int]:
    rules = []
    clamps = 0
    for lhs in lhs_list:
        rows = [row_masks[i] for i in iter_bits(lhs.mask)]
        n_lh = len(rows)
        for rhs in rhs_list:
            rh = rhs.mask
            counts = [(r & rh).bit_count() for r in rows]
            meas = measures_from_counts(counts, n_lh, rhs.size, n_u, n_v, th)
            clamps += meas.k_clamped
            if meas.passes(th):
                rules.append(GranularRule(lhs, rhs, meas))
    return rules, clamps


def mine(mmer: MMER, thresholds: Thresholds, workers: int = 1, cands: CandidateSet | None = None) -> MiningResult:
    """All rules meeting the four thresholds, in canonical order.

    ``workers > 1`` splits the source candidates over a thread pool; the
    merged output is sorted, so it does not depend on the worker count.
    ``cands`` lets a caller reuse candidate lists computed for the same
    systems and coverage thresholds.
    """
    if cands is None:
        cands = candidates(mmer, thresholds)
    src, tgt = cands.source_candidates, cands.target_candidates
    rel = mmer.relation
    args = (rel.row_masks, rel.source_size, rel.target_size, thresholds)

    if workers > 1 and len(src) > 1:
        step = math.ceil(len(src) / workers)
        chunks = [src[i : i + step] for i in range(0, len(src), step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _pair_block(c, tgt, *args), chunks))
    else:
        parts = [_pair_block(src, tgt, *args)]

    rules = [r for part, _ in parts for r in part]
    rules.sort(key=GranularRule.sort_key)
    return MiningResult(
        rules=rules,
        candidate_counts=cands.counts,
        thresholds=thresholds,
        source_names=mmer.source.attribute_names,
        target_names=mmer.target.attribute_names,
        provenance=dict(mmer.metadata),
        k_clamps=sum(c for _, c in parts),
    )
