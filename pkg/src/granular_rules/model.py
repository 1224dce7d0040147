"""Information systems, binary relations and many-to-many entity-relationship systems.

Objects and attributes are addressed by dense integer indices internally; the
external ids and names only matter when loading or writing data.  Object sets
(block extensions, neighborhoods) are kept as Python ``int`` bitsets so that
intersection is ``&`` and cardinality is ``int.bit_count()``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Sequence, Union

from .errors import DomainError, KindError, OutOfRangeError, SchemaError


# --------------------------------------------------------------------------
# attribute values


@dataclass(frozen=True)
class Nominal:
    label: str

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Numeric:
    value: float

    def __post_init__(self):
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float, Fraction)):
            raise KindError(f"numeric value must be a real number, got {self.value!r}")
        if not math.isfinite(self.value):
            raise DomainError(f"numeric value must be finite, got {self.value!r}")

    def __str__(self) -> str:
        return format_number(self.value)


@dataclass(frozen=True)
class Interval:
    """A half-open ``[lo, hi)`` or closed ``[lo, hi]`` interval.

    Bounds are stored as exact :class:`~fractions.Fraction` values; equality
    is structural on ``(lo, hi, hi_closed)``.  The degenerate ``[v, v]`` is
    admitted only as a closed interval (a constant column).
    """

    lo: Fraction
    hi: Fraction
    hi_closed: bool = False

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo > hi or (lo == hi and not self.hi_closed):
            raise DomainError(f"empty interval lo={lo}, hi={hi}, hi_closed={self.hi_closed}")

    def __contains__(self, v) -> bool:
        v = to_fraction(v)
        if v < self.lo:
            return False
        return v <= self.hi if self.hi_closed else v < self.hi

    def label(self, digits: int | None = None) -> str:
        """Human-readable label; ``digits`` rounds the bounds for display only."""
        close = "]" if self.hi_closed else ")"
        if digits is None:
            return f"[{format_number(self.lo)}, {format_number(self.hi)}{close}"
        return f"[{float(self.lo):.{digits}f}, {float(self.hi):.{digits}f}{close}"

    def exact_label(self) -> str:
        """Lossless label such as ``[2, 22/3)``; parsed back by :func:`parse_interval`."""
        close = "]" if self.hi_closed else ")"
        return f"[{self.lo}, {self.hi}{close}"

    def __str__(self) -> str:
        return self.label()


AttributeValue = Union[Nominal, Numeric, Interval]


def to_fraction(v) -> Fraction:
    """Exact rational for a number.  Floats convert exactly (no decimal rounding)."""
    if isinstance(v, Numeric):
        v = v.value
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise KindError(f"not a number: {v!r}")
    if isinstance(v, (int, float)):
        return Fraction(v)
    raise KindError(f"not a number: {v!r}")


def format_number(v) -> str:
    """Shortest faithful text for a number: ``2``, ``5.5``, ``22/3``."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        f = float(v)
        if Fraction(f) == v:
            return repr(f)
        return str(v)
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return repr(v) if isinstance(v, float) else str(v)


def parse_interval(text: str) -> Interval:
    """Inverse of :meth:`Interval.exact_label` (also accepts decimal bounds)."""
    s = text.strip()
    if len(s) < 5 or s[0] != "[" or s[-1] not in ")]":
        raise KindError(f"not an interval label: {text!r}")
    parts = s[1:-1].split(",")
    if len(parts) != 2:
        raise KindError(f"not an interval label: {text!r}")
    try:
        lo, hi = (Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise KindError(f"not an interval label: {text!r}") from None
    return Interval(lo, hi, s[-1] == "]")


def value_sort_key(v: AttributeValue) -> tuple:
    """Total order over mixed attribute values, used for canonical output."""
    if isinstance(v, Nominal):
        return (0, v.label)
    if isinstance(v, Numeric):
        return (1, to_fraction(v.value))
    return (2, v.lo, v.hi, v.hi_closed)


# --------------------------------------------------------------------------
# bitset helpers


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --------------------------------------------------------------------------
# information system


class AttributeKind(str, enum.Enum):
    NOMINAL = "nominal"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: AttributeKind = AttributeKind.NOMINAL

    def __post_init__(self):
        object.__setattr__(self, "kind", AttributeKind(self.kind))


class Side(str, enum.Enum):
    SOURCE = "source"
    TARGET = "target"


def coerce_value(raw: Any, kind: AttributeKind) -> AttributeValue:
    """Wrap a raw Python value as the attribute value its column expects."""
    if kind is AttributeKind.NOMINAL:
        if isinstance(raw, Nominal):
            return raw
        if isinstance(raw, str):
            return Nominal(raw)
        raise KindError(f"nominal column needs a label, got {raw!r}")
    if isinstance(raw, (Numeric, Interval)):
        return raw
    if isinstance(raw, str) and raw.lstrip().startswith("["):
        return parse_interval(raw)
    if isinstance(raw, Nominal) or isinstance(raw, str):
        raise KindError(f"numeric column needs a number or interval, got {raw!r}")
    return Numeric(raw)


class InformationSystem:
    """An object-attribute table ``S = (U, A)`` with single-valued cells.

    Parameters
    ----------
    object_ids
        Unique identifiers of the objects, in row order.
    attributes
        Attribute descriptors, in column order.
    columns
        One sequence of values per attribute.  Raw ``str`` / numbers are
        wrapped according to the attribute kind.
    """

    def __init__(
        self,
        object_ids: Sequence[Any],
        attributes: Sequence[Attribute],
        columns: Sequence[Sequence[Any]],
    ):
        self.object_ids = tuple(object_ids)
        self.attributes = tuple(attributes)
        if len(set(self.object_ids)) != len(self.object_ids):
            seen = set()
            dup = next(x for x in self.object_ids if x in seen or seen.add(x))
            raise SchemaError(f"duplicate object id {dup!r}")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate attribute names in {names}")
        if len(columns) != len(self.attributes):
            raise SchemaError(f"{len(self.attributes)} attributes but {len(columns)} columns")
        cols = []
        for attr, col in zip(self.attributes, columns):
            if len(col) != len(self.object_ids):
                raise SchemaError(
                    f"column {attr.name!r} has {len(col)} cells, expected {len(self.object_ids)}"
                )
            values = tuple(coerce_value(v, attr.kind) for v in col)
            if attr.kind is AttributeKind.NUMERIC:
                n_int = sum(isinstance(v, Interval) for v in values)
                if 0 < n_int < len(values):
                    raise KindError(f"column {attr.name!r} mixes numbers and intervals")
            cols.append(values)
        self.columns = tuple(cols)
        self._index = {name: j for j, name in enumerate(names)}

    @classmethod
    def from_rows(cls, object_ids, attributes, rows) -> "InformationSystem":
        rows = [tuple(r) for r in rows]
        columns = [[r[j] for r in rows] for j in range(len(attributes))]
        return cls(object_ids, attributes, columns)

    # -- shape

    @property
    def n_objects(self) -> int:
        return len(self.object_ids)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def __len__(self) -> int:
        return self.n_objects

    def __repr__(self) -> str:
        return f"InformationSystem(n={self.n_objects}, attributes={list(self.attribute_names)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, InformationSystem):
            return NotImplemented
        return (
            self.object_ids == other.object_ids
            and self.attributes == other.attributes
            and self.columns == other.columns
        )

    __hash__ = None

    # -- lookup

    def attribute_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SchemaError(f"unknown attribute {name!r}; have {list(self.attribute_names)}") from None

    def object_index(self, object_id) -> int:
        try:
            return self._object_index[object_id]
        except KeyError:
            raise SchemaError(f"unknown object id {object_id!r}") from None

    @cached_property
    def _object_index(self) -> dict:
        return {x: i for i, x in enumerate(self.object_ids)}

    def column(self, attribute: int | str) -> tuple[AttributeValue, ...]:
        j = attribute if isinstance(attribute, int) else self.attribute_index(attribute)
        return self.columns[j]

    def value(self, obj: int, attribute: int | str) -> AttributeValue:
        return self.column(attribute)[obj]

    def row(self, obj: int) -> tuple[AttributeValue, ...]:
        return tuple(col[obj] for col in self.columns)

    @property
    def universe_mask(self) -> int:
        return (1 << self.n_objects) - 1

    def is_discrete(self) -> bool:
        """True when no cell holds a raw number (every column nominal or interval)."""
        return not any(
            a.kind is AttributeKind.NUMERIC and c and isinstance(c[0], Numeric)
            for a, c in zip(self.attributes, self.columns)
        )

    @cached_property
    def value_masks(self) -> tuple[dict, ...]:
        """Per attribute: ``{value: bitset of objects holding it}``."""
        out = []
        for col in self.columns:
            masks: dict = {}
            for i, v in enumerate(col):
                masks[v] = masks.get(v, 0) | (1 << i)
            out.append(masks)
        return tuple(out)

    def with_columns(self, replacements: Mapping[int, Sequence[AttributeValue]]) -> "InformationSystem":
        """New system with some columns swapped out; other columns are shared."""
        cols = [replacements.get(j, c) for j, c in enumerate(self.columns)]
        return InformationSystem(self.object_ids, self.attributes, cols)

    def select_attributes(self, names: Sequence[str]) -> "InformationSystem":
        idx = [self.attribute_index(n) for n in names]
        return InformationSystem(
            self.object_ids, [self.attributes[j] for j in idx], [self.columns[j] for j in idx]
        )


def _descriptor_pairs(descriptors) -> list:
    if isinstance(descriptors, Mapping):
        return list(descriptors.items())
    return list(descriptors)


def resolve_descriptors(is_: InformationSystem, descriptors) -> list[tuple[int, AttributeValue]]:
    """Turn ``{name: value}`` (or index keys / pairs) into checked ``(index, value)`` pairs."""
    out = []
    for key, raw in _descriptor_pairs(descriptors):
        if isinstance(key, int) and not isinstance(key, bool):
            if not 0 <= key < is_.n_attributes:
                raise SchemaError(f"attribute index {key} out of range")
            j = key
        else:
            j = is_.attribute_index(key)
        attr = is_.attributes[j]
        value = coerce_value(raw, attr.kind)
        if attr.kind is AttributeKind.NUMERIC and is_.columns[j]:
            want_interval = isinstance(is_.columns[j][0], Interval)
            if want_interval != isinstance(value, Interval):
                raise KindError(
                    f"attribute {attr.name!r} holds "
                    f"{'intervals' if want_interval else 'numbers'}, got {value!r}"
                )
        out.append((j, value))
    return out


def block_mask(is_: InformationSystem, descriptors) -> int:
    """Bitset version of :func:`block`."""
    mask = is_.universe_mask
    for j, value in resolve_descriptors(is_, descriptors):
        mask &= is_.value_masks[j].get(value, 0)
    return mask


def block(is_: InformationSystem, descriptors) -> frozenset[int]:
    """Objects matching every ``attribute: value`` descriptor.

    ``descriptors`` is a mapping from attribute name to value (or an iterable
    of such pairs).  The empty descriptor set yields the whole universe.

    >>> s = InformationSystem(["a", "b"], [Attribute("g")], [["M", "F"]])
    >>> sorted(block(s, {"g": "M"}))
    [0]
    """
    return frozenset(iter_bits(block_mask(is_, descriptors)))


def support(extension, universe_size: int) -> Fraction:
    """``|extension| / universe_size`` as an exact fraction.

    ``extension`` is a collection of object indices or an ``int`` bitset.
    """
    if universe_size < 1:
        raise DomainError("support is undefined on an empty universe")
    if isinstance(extension, int) and not isinstance(extension, bool):
        if extension < 0 or extension.bit_length() > universe_size:
            raise OutOfRangeError("extension bitset exceeds the universe")
        return Fraction(extension.bit_count(), universe_size)
    members = set(extension)
    if any(not 0 <= i < universe_size for i in members):
        raise OutOfRangeError(f"extension index outside [0, {universe_size})")
    return Fraction(len(members), universe_size)


# --------------------------------------------------------------------------
# binary relation


class BinaryRelation:
    """``R ⊆ U × V`` kept both row-wise (``R(x)``) and column-wise (``R⁻¹(y)``)."""

    def __init__(self, source_size: int, target_size: int, neighbors: Sequence[Iterable[int]]):
        if source_size < 0 or target_size < 0:
            raise DomainError("relation sizes must be non-negative")
        if len(neighbors) != source_size:
            raise OutOfRangeError(f"{len(neighbors)} neighbor rows for {source_size} source objects")
        self.source_size = source_size
        self.target_size = target_size
        rows = []
        inverse: list[list[int]] = [[] for _ in range(target_size)]
        for i, nb in enumerate(neighbors):
            row = tuple(sorted(set(nb)))
            if row and (row[0] < 0 or row[-1] >= target_size):
                raise OutOfRangeError(f"neighbor of source {i} outside [0, {target_size})")
            rows.append(row)
            for j in row:
                inverse[j].append(i)
        self.neighbors: tuple[tuple[int, ...], ...] = tuple(rows)
        self.inverse_neighbors: tuple[tuple[int, ...], ...] = tuple(tuple(c) for c in inverse)
        self.row_masks: tuple[int, ...] = tuple(mask_of(r) for r in self.neighbors)
        self.column_masks: tuple[int, ...] = tuple(mask_of(c) for c in self.inverse_neighbors)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], source_size: int, target_size: int):
        rows: list[set] = [set() for _ in range(source_size)]
        for i, j in pairs:
            if not 0 <= i < source_size:
                raise OutOfRangeError(f"source index {i} outside [0, {source_size})")
            rows[i].add(j)
        return cls(source_size, target_size, rows)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[Any]]) -> "BinaryRelation":
        """From an ``n × k`` 0/1 matrix (list of rows)."""
        n = len(matrix)
        k = len(matrix[0]) if n else 0
        if any(len(r) != k for r in matrix):
            raise DomainError("ragged relation matrix")
        return cls(n, k, [[j for j, b in enumerate(r) if b] for r in matrix])

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.neighbors):
            for j in row:
                yield i, j

    def __len__(self) -> int:
        return sum(len(r) for r in self.neighbors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryRelation):
            return NotImplemented
        return (self.source_size, self.target_size, self.neighbors) == (
            other.source_size,
            other.target_size,
            other.neighbors,
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"BinaryRelation({self.source_size}x{self.target_size}, pairs={len(self)})"


def neighborhood(rel: BinaryRelation, source_index: int) -> tuple[int, ...]:
    """``R(x)``: sorted target indices related to source object ``x``."""
    if not 0 <= source_index < rel.source_size:
        raise OutOfRangeError(f"source index {source_index} outside [0, {rel.source_size})")
    return rel.neighbors[source_index]


def inverse_neighborhood(rel: BinaryRelation, target_index: int) -> tuple[int, ...]:
    """``R⁻¹(y)``: sorted source indices related to target object ``y``."""
    if not 0 <= target_index < rel.target_size:
        raise OutOfRangeError(f"target index {target_index} outside [0, {rel.target_size})")
    return rel.inverse_neighbors[target_index]


# --------------------------------------------------------------------------
# MMER and granules


@dataclass(frozen=True, eq=False)
class MMER:
    """Two information systems joined by a binary relation ``(U, A, V, B, R)``.

    ``metadata`` carries loader provenance (paths, exclusion counts); it takes
    no part in equality.
    """

    source: InformationSystem
    target: InformationSystem
    relation: BinaryRelation
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.relation.source_size != self.source.n_objects:
            raise DomainError(
                f"relation has {self.relation.source_size} rows, source has {self.source.n_objects} objects"
            )
        if self.relation.target_size != self.target.n_objects:
            raise DomainError(
                f"relation has {self.relation.target_size} columns, target has {self.target.n_objects} objects"
            )

    def system(self, side: Side) -> InformationSystem:
        return self.source if Side(side) is Side.SOURCE else self.target

    def replace(self, source=None, target=None, metadata=None) -> "MMER":
        return MMER(
            source if source is not None else self.source,
            target if target is not None else self.target,
            self.relation,
            dict(self.metadata if metadata is None else metadata),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, MMER):
            return NotImplemented
        return (self.source, self.target, self.relation) == (other.source, other.target, other.relation)

    __hash__ = None


Intension = tuple  # tuple[tuple[int, AttributeValue], ...], sorted by attribute index


@dataclass(frozen=True)
class Granule:
    """A concept: a conjunction of descriptors and the objects matching it.

    ``intension`` is a tuple of ``(attribute index, value)`` sorted by index,
    ``mask`` the extension as a bitset over the side's universe.
    """

    intension: Intension
    mask: int
    side: Side

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        object.__setattr__(self, "intension", tuple(sorted(self.intension, key=lambda d: d[0])))

    @property
    def extension(self) -> frozenset[int]:
        return frozenset(iter_bits(self.mask))

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def sort_key(self) -> tuple:
        return (len(self.intension), tuple((j, value_sort_key(v)) for j, v in self.intension))

    def describe(self, is_: InformationSystem, digits: int | None = None) -> str:
        parts = []
        for j, v in self.intension:
            text = v.label(digits) if isinstance(v, Interval) else str(v)
            parts.append(f"<{is_.attributes[j].name}: {text}>")
        return " ∧ ".join(parts)


def granule(is_: InformationSystem, descriptors, side: Side = Side.SOURCE) -> Granule:
    """Build the granule for ``descriptors`` on ``is_`` (extension via :func:`block`)."""
    pairs = resolve_descriptors(is_, descriptors)
    if len({j for j, _ in pairs}) != len(pairs):
        raise DomainError("at most one descriptor per attribute")
    return Granule(tuple(pairs), block_mask(is_, pairs), side)
