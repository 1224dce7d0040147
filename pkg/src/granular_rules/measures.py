"""The four measures of a granular association rule.

For a rule ``LH => RH`` over ``(U, V, R)``:

* source coverage ``|LH| / |U|`` and target coverage ``|RH| / |V|``;
* source confidence at a target threshold ``tc``: the share of ``x`` in LH
  with ``|R(x) ∩ RH| / |RH| >= tc``;
* target confidence at a source threshold ``mc``: ``K / |RH|`` where ``K`` is
  the largest count reached by at least ``floor(mc * |LH|)`` members of LH.

Every value is an exact :class:`~fractions.Fraction` and every threshold
test is done on cross-multiplied integers, so ties such as ``2/3 >= 0.667``
cannot flip on rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, KindError, ParameterError
from .model import BinaryRelation, Granule, Side, iter_bits


def as_threshold(x, name: str = "threshold") -> Fraction:
    """Exact fraction for a user-supplied threshold.

    Floats are read through their shortest decimal text, so ``0.17`` becomes
    ``17/100`` and not the binary approximation.
    """
    if isinstance(x, Fraction):
        value = x
    elif isinstance(x, bool):
        raise ParameterError(f"{name} must be a number, got {x!r}")
    elif isinstance(x, (int, float, str)):
        try:
            value = Fraction(repr(x) if isinstance(x, float) else str(x).strip())
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"{name} must be a number, got {x!r}") from None
    else:
        raise ParameterError(f"{name} must be a number, got {x!r}")
    if not 0 < value <= 1:
        raise ParameterError(f"{name} must lie in (0, 1], got {x!r}")
    return value


@dataclass(frozen=True)
class Thresholds:
    """Minimal source/target coverage (``ms``, ``mt``) and confidence (``mc``, ``tc``)."""

    ms: Fraction
    mt: Fraction
    mc: Fraction
    tc: Fraction

    def __post_init__(self):
        for name in ("ms", "mt", "mc", "tc"):
            object.__setattr__(self, name, as_threshold(getattr(self, name), name))

    def to_dict(self) -> dict:
        return {name: str(getattr(self, name)) for name in ("ms", "mt", "mc", "tc")}

    @classmethod
    def from_dict(cls, d) -> "Thresholds":
        return cls(d["ms"], d["mt"], d["mc"], d["tc"])


@dataclass(frozen=True)
class RuleMeasures:
    scoverage: Fraction
    tcoverage: Fraction
    sconfidence: Fraction
    tconfidence: Fraction
    K: int
    k_clamped: bool = False  # floor(mc*|LH|) was 0 and got raised to 1

    def as_tuple(self) -> tuple:
        return (self.scoverage, self.tcoverage, self.sconfidence, self.tconfidence)

    def passes(self, th: Thresholds) -> bool:
        return (
            self.scoverage >= th.ms
            and self.tcoverage >= th.mt
            and self.sconfidence >= th.mc
            and self.tconfidence >= th.tc
        )


@dataclass(frozen=True)
class GranularRule:
    lhs: Granule
    rhs: Granule
    measures: RuleMeasures

    def __post_init__(self):
        if self.lhs.side is not Side.SOURCE or self.rhs.side is not Side.TARGET:
            raise KindError("a rule needs a source-side LHS and a target-side RHS")

    def sort_key(self) -> tuple:
        return self.lhs.sort_key() + self.rhs.sort_key()


# --------------------------------------------------------------------------


def _require_side(g: Granule, side: Side, role: str):
    if g.side is not side:
        raise KindError(f"{role} must be a {side.value}-side granule, got {g.side.value}")


def _require_nonempty(g: Granule, role: str):
    if g.mask == 0:
        raise DomainError(f"{role} extension is empty")


def source_coverage(lhs: Granule, n: int) -> Fraction:
    """``|LH| / |U|``."""
    _require_side(lhs, Side.SOURCE, "lhs")
    if n < 1:
        raise DomainError("empty source universe")
    return Fraction(lhs.size, n)


def target_coverage(rhs: Granule, k: int) -> Fraction:
    """``|RH| / |V|``."""
    _require_side(rhs, Side.TARGET, "rhs")
    if k < 1:
        raise DomainError("empty target universe")
    return Fraction(rhs.size, k)


def connection_counts(lhs: Granule, rhs: Granule, rel: BinaryRelation) -> list[int]:
    """``|R(x) ∩ RH|`` for every ``x`` in LH, in object order."""
    rows = rel.row_masks
    rh = rhs.mask
    return [(rows[i] & rh).bit_count() for i in iter_bits(lhs.mask)]


def rank_for(mc: Fraction, n_lh: int) -> tuple[int, bool]:
    """``k = floor(mc * |LH|)`` raised to 1 when it would be 0; returns ``(k, clamped)``."""
    k = mc.numerator * n_lh // mc.denominator
    return (k, False) if k >= 1 else (1, True)


def select_k(counts: Sequence[int], mc: Fraction) -> int:
    """``K``: the k-th largest connection count, ``k = max(1, floor(mc * |LH|))``."""
    if not counts:
        raise DomainError("K is undefined for an empty LH")
    k, _ = rank_for(mc, len(counts))
    return sorted(counts, reverse=True)[k - 1]


def sandwich_holds(counts: Sequence[int], K: int, mc) -> bool:
    """Check the bracketing condition that defines ``K``.

    At least ``floor(mc*|LH|)`` members reach ``K`` connections and fewer
    than ``mc*|LH|`` members reach ``K + 1``.
    """
    mc = as_threshold(mc, "mc")
    n = len(counts)
    floor_k = mc.numerator * n // mc.denominator
    at_least_k = sum(c >= K for c in counts)
    above = sum(c >= K + 1 for c in counts)
    return at_least_k >= floor_k and above * mc.denominator < mc.numerator * n


def _sconf_from_counts(counts: Sequence[int], n_rh: int, tc: Fraction) -> Fraction:
    p, q = tc.numerator, tc.denominator
    need = p * n_rh
    hits = sum(1 for c in counts if c * q >= need)
    return Fraction(hits, len(counts))


def source_confidence(lhs: Granule, rhs: Granule, rel: BinaryRelation, tc) -> Fraction:
    """Share of LH related to at least a ``tc`` fraction of RH."""
    tc = as_threshold(tc, "tc")
    _require_side(lhs, Side.SOURCE, "lhs")
    _require_side(rhs, Side.TARGET, "rhs")
    _require_nonempty(rhs, "rhs")
    _require_nonempty(lhs, "lhs")
    return _sconf_from_counts(connection_counts(lhs, rhs, rel), rhs.size, tc)


def target_confidence(lhs: Granule, rhs: Granule, rel: BinaryRelation, mc) -> tuple[Fraction, int]:
    """``(K / |RH|, K)`` for source threshold ``mc``."""
    mc = as_threshold(mc, "mc")
    _require_side(lhs, Side.SOURCE, "lhs")
    _require_side(rhs, Side.TARGET, "rhs")
    _require_nonempty(rhs, "rhs")
    _require_nonempty(lhs, "lhs")
    K = select_k(connection_counts(lhs, rhs, rel), mc)
    return Fraction(K, rhs.size), K


def measures_from_counts(
    counts: Sequence[int], n_lh: int, n_rh: int, n_u: int, n_v: int, th: Thresholds
) -> RuleMeasures:
    """All four measures from precomputed connection counts."""
    K = select_k(counts, th.mc)
    return RuleMeasures(
        Fraction(n_lh, n_u),
        Fraction(n_rh, n_v),
        _sconf_from_counts(counts, n_rh, th.tc),
        Fraction(K, n_rh),
        K,
        rank_for(th.mc, n_lh)[1],
    )


def evaluate_rule(lhs: Granule, rhs: Granule, rel: BinaryRelation, thresholds: Thresholds) -> RuleMeasures:
    """Source confidence at ``thresholds.tc`` and target confidence at ``thresholds.mc``."""
    _require_side(lhs, Side.SOURCE, "lhs")
    _require_side(rhs, Side.TARGET, "rhs")
    _require_nonempty(lhs, "lhs")
    _require_nonempty(rhs, "rhs")
    counts = connection_counts(lhs, rhs, rel)
    return measures_from_counts(
        counts, lhs.size, rhs.size, rel.source_size, rel.target_size, thresholds
    )
