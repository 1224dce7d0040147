"""Equal-width, equal-frequency and manual discretization of numeric columns.

A fitted discretization is a :class:`BoundaryChain` ``b0 < b1 < ... < bk``
defining the intervals ``[b0, b1), ..., [b(k-2), b(k-1)), [b(k-1), bk]``.
Boundaries are exact fractions: floats from the data convert without
rounding, and ``(max - min) / k`` is kept as a rational, so a value is never
assigned to the wrong interval through rounding drift.
"""

from __future__ import annotations

import bisect
import enum
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, KindError, OutOfRangeError, ParameterError
from .model import AttributeKind, InformationSystem, Interval, Numeric, to_fraction


class DiscretizationWarning(UserWarning):
    """Raised (as a warning) when a chain ends up with fewer intervals than asked."""


class Method(str, enum.Enum):
    EQUAL_WIDTH = "equal_width"
    EQUAL_FREQUENCY = "equal_frequency"
    MANUAL = "manual"

    @classmethod
    def parse(cls, name: "str | Method") -> "Method":
        if isinstance(name, Method):
            return name
        key = str(name).strip().lower().replace("-", "_")
        aliases = {"width": "equal_width", "ew": "equal_width",
                   "frequency": "equal_frequency", "ef": "equal_frequency"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ParameterError(f"unknown discretization method {name!r}") from None


@dataclass(frozen=True)
class BoundaryChain:
    boundaries: tuple[Fraction, ...]
    method: Method = Method.MANUAL
    k_requested: int | None = None

    def __post_init__(self):
        b = tuple(to_fraction(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "method", Method.parse(self.method))
        if len(b) < 2:
            raise ParameterError("a boundary chain needs at least two boundaries")
        degenerate = len(b) == 2 and b[0] == b[1]
        if not degenerate and any(x >= y for x, y in zip(b, b[1:])):
            raise ParameterError(f"boundaries must be strictly increasing: {[str(x) for x in b]}")

    @property
    def k(self) -> int:
        """Number of intervals."""
        return len(self.boundaries) - 1

    @property
    def intervals(self) -> tuple[Interval, ...]:
        b = self.boundaries
        return tuple(Interval(b[i], b[i + 1], i == len(b) - 2) for i in range(len(b) - 1))

    def index_of(self, v) -> int:
        v = to_fraction(v)
        b = self.boundaries
        if v < b[0] or v > b[-1]:
            raise OutOfRangeError(
                f"value {v} outside the chain range [{b[0]}, {b[-1]}]"
            )
        return min(bisect.bisect_right(b, v) - 1, len(b) - 2)

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "k_requested": self.k_requested,
            "k": self.k,
            "boundaries": [str(x) for x in self.boundaries],
            "boundaries_float": [float(x) for x in self.boundaries],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "BoundaryChain":
        return cls(
            tuple(Fraction(x) for x in d["boundaries"]),
            d.get("method", "manual"),
            d.get("k_requested"),
        )


def _check_values(values: Iterable) -> list[Fraction]:
    out = []
    for v in values:
        if isinstance(v, Numeric):
            v = v.value
        if isinstance(v, float) and not math.isfinite(v):
            raise DomainError(f"non-finite value {v!r}")
        out.append(to_fraction(v))
    if not out:
        raise DomainError("cannot discretize an empty list of values")
    return out


def _check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ParameterError(f"interval count k must be an integer >= 1, got {k!r}")
    return k


def equal_width_boundaries(values: Iterable, k: int) -> BoundaryChain:
    """Cut ``[min, max]`` into ``k`` intervals of width ``(max - min) / k``.

    A constant column gives the single closed interval ``[v, v]``.
    """
    k = _check_k(k)
    vals = _check_values(values)
    lo, hi = min(vals), max(vals)
    if lo == hi:
        return BoundaryChain((lo, hi), Method.EQUAL_WIDTH, k)
    width = (hi - lo) / k
    return BoundaryChain(tuple(lo + i * width for i in range(k)) + (hi,), Method.EQUAL_WIDTH, k)


def equal_frequency_boundaries(values: Iterable, k: int) -> BoundaryChain:
    """Cut the sorted values into ``k`` runs of (nearly) equal size.

    With ``n`` sorted values the i-th cut falls after position
    ``ceil(i * n / k)`` (1-based).  A cut that would separate equal values is
    pushed past the run of duplicates.  Interior boundaries are midpoints of
    the two distinct values around a cut; the outer ones are min and max.
    Cuts that merge or run off the end are dropped, and a
    :class:`DiscretizationWarning` reports the shortfall.
    """
    k = _check_k(k)
    vals = sorted(_check_values(values))
    n = len(vals)
    lo, hi = vals[0], vals[-1]
    if lo == hi:
        warnings.warn(
            f"constant column: equal-frequency k={k} collapsed to one interval",
            DiscretizationWarning,
            stacklevel=2,
        )
        return BoundaryChain((lo, hi), Method.EQUAL_FREQUENCY, k)

    cuts: list[int] = []
    for i in range(1, k):
        c = -(-i * n // k)  # ceil(i*n/k): number of values left of the cut
        while c < n and vals[c - 1] == vals[c]:
            c += 1
        if c >= n or (cuts and c <= cuts[-1]):
            continue
        cuts.append(c)
    bounds = [lo] + [(vals[c - 1] + vals[c]) / 2 for c in cuts] + [hi]
    if len(bounds) - 1 < k:
        n_distinct = len(set(vals))
        warnings.warn(
            f"equal-frequency k={k} produced {len(bounds) - 1} intervals "
            f"({n_distinct} distinct values among {n})",
            DiscretizationWarning,
            stacklevel=2,
        )
    return BoundaryChain(tuple(bounds), Method.EQUAL_FREQUENCY, k)


def assign_interval(chain: BoundaryChain, v) -> Interval:
    """The interval of ``chain`` containing ``v`` (left-closed, last one closed)."""
    return chain.intervals[chain.index_of(v)]


# --------------------------------------------------------------------------
# per-system specification


@dataclass(frozen=True)
class DiscretizerEntry:
    method: Method
    k: int | None = None
    boundaries: tuple | None = None

    def __post_init__(self):
        m = Method.parse(self.method)
        object.__setattr__(self, "method", m)
        if m is Method.MANUAL:
            if self.boundaries is None:
                raise ParameterError("manual discretization needs a boundary list")
            # validates monotonicity
            chain = BoundaryChain(tuple(self.boundaries), Method.MANUAL)
            object.__setattr__(self, "boundaries", chain.boundaries)
        else:
            _check_k(self.k)

    def fit(self, values: Sequence) -> BoundaryChain:
        if self.method is Method.EQUAL_WIDTH:
            return equal_width_boundaries(values, self.k)
        if self.method is Method.EQUAL_FREQUENCY:
            return equal_frequency_boundaries(values, self.k)
        return BoundaryChain(self.boundaries, Method.MANUAL)

    def to_dict(self) -> dict:
        if self.method is Method.MANUAL:
            return {"method": "manual", "boundaries": [str(b) for b in self.boundaries]}
        return {"method": self.method.value, "k": self.k}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DiscretizerEntry":
        if not isinstance(d, Mapping):
            raise ParameterError(f"discretizer entry must be an object, got {d!r}")
        b = d.get("boundaries")
        if b is not None:
            try:
                b = tuple(Fraction(str(x)) for x in b)
            except (TypeError, ValueError):
                raise ParameterError(f"bad boundary list {b!r}") from None
        # a bare boundary list means manual
        method = d.get("method", "manual" if b is not None else None)
        if method is None:
            raise ParameterError(f"discretizer entry needs 'method' or 'boundaries': {dict(d)}")
        return cls(method, d.get("k"), b)


@dataclass(frozen=True)
class DiscretizerSpec:
    """Which numeric attributes to discretize and how, keyed by attribute name."""

    entries: Mapping[str, DiscretizerEntry] = field(default_factory=dict)

    @classmethod
    def uniform(cls, names: Iterable[str], method, k: int | None = None) -> "DiscretizerSpec":
        return cls({name: DiscretizerEntry(method, k) for name in names})

    @classmethod
    def for_numeric(cls, is_: InformationSystem, method, k: int) -> "DiscretizerSpec":
        """Same method and k for every numeric attribute of ``is_``."""
        names = [a.name for a in is_.attributes if a.kind is AttributeKind.NUMERIC]
        return cls.uniform(names, method, k)

    def to_dict(self) -> dict:
        return {name: e.to_dict() for name, e in self.entries.items()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DiscretizerSpec":
        return cls({name: DiscretizerEntry.from_dict(e) for name, e in d.items()})

    def __bool__(self) -> bool:
        return bool(self.entries)


@dataclass
class DiscretizationReport:
    chains: dict[str, BoundaryChain] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "chains": {name: c.to_dict() for name, c in self.chains.items()},
            "warnings": list(self.warnings),
        }


def discretize_system(
    is_: InformationSystem, spec: DiscretizerSpec
) -> tuple[InformationSystem, DiscretizationReport]:
    """Replace each listed numeric column by interval values.

    Columns not named in ``spec`` pass through untouched.  Each attribute
    gets its own chain, fitted on that column alone.
    """
    report = DiscretizationReport()
    replacements = {}
    for name, entry in spec.entries.items():
        j = is_.attribute_index(name)
        attr = is_.attributes[j]
        col = is_.columns[j]
        if attr.kind is not AttributeKind.NUMERIC:
            raise KindError(f"attribute {name!r} is nominal; only numeric columns can be discretized")
        if col and not isinstance(col[0], Numeric):
            raise KindError(f"attribute {name!r} is already discretized")
        raw = [v.value for v in col]
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DiscretizationWarning)
            chain = entry.fit(raw) if raw else None
        for w in caught:
            if issubclass(w.category, DiscretizationWarning):
                report.warnings.append(f"{name}: {w.message}")
            else:  # pragma: no cover - foreign warnings pass through
                warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
        if chain is None:
            continue
        report.chains[name] = chain
        intervals = chain.intervals
        replacements[j] = tuple(intervals[chain.index_of(v)] for v in raw)
    if not replacements:
        return is_, report
    return is_.with_columns(replacements), report
