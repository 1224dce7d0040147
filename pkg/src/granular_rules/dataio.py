"""Loading and writing two-table datasets.

Generic format
--------------
Three delimited text files with a header row (one per entity table plus the
relation) described by a JSON schema file::

    {
      "source": {"name": "customer", "path": "customer.csv", "delimiter": ",",
                 "columns": [{"name": "CID", "role": "id"},
                             {"name": "Age", "role": "numeric"},
                             {"name": "Gender", "role": "nominal"}]},
      "target": {...same shape...},
      "relation": {"path": "buys.csv", "delimiter": ",",
                   "source_id": "CID", "target_id": "PID"}
    }

Column roles are ``id``, ``nominal``, ``numeric``, ``interval`` (exact
interval labels such as ``[2, 22/3)``, written by :func:`write_mmer` after
discretization) and ``ignore``.  Every header column must be declared.
Relative paths resolve against the schema file's directory.  Relation files
may carry extra columns (ratings, timestamps); they are ignored.

MovieLens 100k
--------------
:func:`load_movielens` reads ``u.user``, ``u.item`` and ``u.data`` from the
public ml-100k distribution and applies the preprocessing used for granular
rule mining: titles dropped, release date reduced to a year (or decade), one
genre per movie chosen by a fixed priority, ratings reduced to a binary
"rates" relation.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import re
import urllib.parse
import urllib.request
import zipfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .discretize import BoundaryChain, DiscretizerEntry, DiscretizerSpec, Method
from .errors import DataError, KindError, ParameterError, ReferentialError, SchemaError
from .model import (
    MMER,
    Attribute,
    AttributeKind,
    BinaryRelation,
    InformationSystem,
    Interval,
    Nominal,
    Numeric,
    format_number,
    parse_interval,
)

log = logging.getLogger(__name__)

ROLES = ("id", "nominal", "numeric", "interval", "ignore")


# --------------------------------------------------------------------------
# schema


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    role: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise SchemaError(f"column {self.name!r}: unknown role {self.role!r}, expected one of {ROLES}")


@dataclass(frozen=True)
class TableSpec:
    path: Path
    columns: tuple[ColumnSpec, ...]
    delimiter: str = ","
    name: str = ""

    def __post_init__(self):
        ids = [c.name for c in self.columns if c.role == "id"]
        if len(ids) != 1:
            raise SchemaError(f"table {self.name or self.path}: need exactly one id column, found {ids}")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise SchemaError(f"table {self.name or self.path}: duplicate column names")

    @property
    def id_column(self) -> str:
        return next(c.name for c in self.columns if c.role == "id")


@dataclass(frozen=True)
class RelationSpec:
    path: Path
    source_id: str
    target_id: str
    delimiter: str = ","


@dataclass(frozen=True)
class SchemaConfig:
    source: TableSpec
    target: TableSpec
    relation: RelationSpec
    base_dir: Path = field(default=Path("."))

    @classmethod
    def from_dict(cls, d: Mapping, base_dir: str | Path = ".") -> "SchemaConfig":
        base = Path(base_dir)
        try:
            tables = {}
            for side in ("source", "target"):
                t = d[side]
                tables[side] = TableSpec(
                    base / t["path"],
                    tuple(ColumnSpec(c["name"], c["role"]) for c in t["columns"]),
                    t.get("delimiter", ","),
                    t.get("name", side),
                )
            r = d["relation"]
            rel = RelationSpec(base / r["path"], r["source_id"], r["target_id"], r.get("delimiter", ","))
        except KeyError as e:
            raise SchemaError(f"schema is missing key {e}") from None
        for side, id_name in (("source", rel.source_id), ("target", rel.target_id)):
            if tables[side].id_column != id_name:
                raise SchemaError(
                    f"relation {side}_id {id_name!r} does not match the {side} id column "
                    f"{tables[side].id_column!r}"
                )
        return cls(tables["source"], tables["target"], rel, base)

    @classmethod
    def from_file(cls, path: str | Path) -> "SchemaConfig":
        path = Path(path)
        try:
            d = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise DataError(f"invalid JSON: {e}", path) from None
        except OSError as e:
            raise DataError(str(e), path) from None
        return cls.from_dict(d, path.parent)

    def to_dict(self, relative_to: Path | None = None) -> dict:
        def rel(p: Path) -> str:
            if relative_to is not None:
                try:
                    return str(p.relative_to(relative_to))
                except ValueError:
                    pass
            return str(p)

        def table(t: TableSpec) -> dict:
            return {
                "name": t.name,
                "path": rel(t.path),
                "delimiter": t.delimiter,
                "columns": [{"name": c.name, "role": c.role} for c in t.columns],
            }

        return {
            "source": table(self.source),
            "target": table(self.target),
            "relation": {
                "path": rel(self.relation.path),
                "delimiter": self.relation.delimiter,
                "source_id": self.relation.source_id,
                "target_id": self.relation.target_id,
            },
        }

    def paths(self) -> list[Path]:
        return [self.source.path, self.target.path, self.relation.path]


# --------------------------------------------------------------------------
# generic loading


def _read_rows(path: Path, delimiter: str) -> tuple[list[str], list[tuple[int, list[str]]]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DataError(str(e), path) from None
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [(reader.line_num, r) for r in reader if r]
    if not rows:
        return [], []
    header = [h.strip() for h in rows[0][1]]
    return header, rows[1:]


def _parse_number(token: str, path: Path, line: int, column: str):
    t = token.strip()
    try:
        v = int(t)
    except ValueError:
        try:
            v = float(t)
        except ValueError:
            raise DataError(f"column {column!r}: not a number: {token!r}", path, line) from None
        if v != v or v in (float("inf"), float("-inf")):
            raise DataError(f"column {column!r}: non-finite number {token!r}", path, line)
    return v


def load_table(spec: TableSpec) -> InformationSystem:
    header, rows = _read_rows(spec.path, spec.delimiter)
    if not header:
        raise DataError("missing header row", spec.path)
    declared = {c.name for c in spec.columns}
    undeclared = [h for h in header if h not in declared]
    if undeclared:
        raise SchemaError(f"{spec.path}: header columns not declared in schema: {undeclared}")
    pos = {h: i for i, h in enumerate(header)}
    missing = [c.name for c in spec.columns if c.name not in pos]
    if missing:
        raise SchemaError(f"{spec.path}: declared columns missing from header: {missing}")

    used = [c for c in spec.columns if c.role not in ("id", "ignore")]
    id_pos = pos[spec.id_column]
    ids: list[str] = []
    seen: dict[str, int] = {}
    columns: list[list] = [[] for _ in used]
    for line, row in rows:
        if len(row) != len(header):
            raise DataError(f"expected {len(header)} fields, got {len(row)}", spec.path, line)
        oid = row[id_pos].strip()
        if oid in seen:
            raise DataError(f"duplicate id {oid!r} (first seen on line {seen[oid]})", spec.path, line)
        seen[oid] = line
        ids.append(oid)
        for k, c in enumerate(used):
            token = row[pos[c.name]]
            if c.role == "nominal":
                columns[k].append(Nominal(token.strip()))
            elif c.role == "numeric":
                columns[k].append(Numeric(_parse_number(token, spec.path, line, c.name)))
            else:
                try:
                    columns[k].append(parse_interval(token))
                except KindError as e:
                    raise DataError(f"column {c.name!r}: {e}", spec.path, line) from None
    attrs = [
        Attribute(c.name, AttributeKind.NOMINAL if c.role == "nominal" else AttributeKind.NUMERIC)
        for c in used
    ]
    return InformationSystem(ids, attrs, columns)


def load_relation(spec: RelationSpec, source: InformationSystem, target: InformationSystem) -> BinaryRelation:
    header, rows = _read_rows(spec.path, spec.delimiter)
    rows_out: list[set[int]] = [set() for _ in range(source.n_objects)]
    if not header:
        return BinaryRelation(source.n_objects, target.n_objects, rows_out)
    try:
        si, ti = header.index(spec.source_id), header.index(spec.target_id)
    except ValueError:
        raise SchemaError(
            f"{spec.path}: header must contain {spec.source_id!r} and {spec.target_id!r}, got {header}"
        ) from None
    src_index = {x: i for i, x in enumerate(source.object_ids)}
    tgt_index = {x: i for i, x in enumerate(target.object_ids)}
    for line, row in rows:
        if len(row) <= max(si, ti):
            raise DataError(f"expected {len(header)} fields, got {len(row)}", spec.path, line)
        s, t = row[si].strip(), row[ti].strip()
        if s not in src_index:
            raise ReferentialError(f"unknown {spec.source_id} {s!r}", spec.path, line)
        if t not in tgt_index:
            raise ReferentialError(f"unknown {spec.target_id} {t!r}", spec.path, line)
        rows_out[src_index[s]].add(tgt_index[t])
    return BinaryRelation(source.n_objects, target.n_objects, rows_out)


def load_mmer(config: SchemaConfig | str | Path) -> MMER:
    """Load an MMER described by a schema (object or path to the JSON file).

    Numeric columns stay numeric; discretization is a separate step.
    """
    if not isinstance(config, SchemaConfig):
        config = SchemaConfig.from_file(config)
    source = load_table(config.source)
    target = load_table(config.target)
    relation = load_relation(config.relation, source, target)
    meta = {
        "source_name": config.source.name,
        "target_name": config.target.name,
        "source_id": config.relation.source_id,
        "target_id": config.relation.target_id,
    }
    return MMER(source, target, relation, meta)


# --------------------------------------------------------------------------
# generic writing


def _cell_text(v) -> str:
    if isinstance(v, Interval):
        return v.exact_label()
    if isinstance(v, Numeric):
        return format_number(v.value)
    return v.label


def _role_of(is_: InformationSystem, j: int) -> str:
    attr = is_.attributes[j]
    if attr.kind is AttributeKind.NOMINAL:
        return "nominal"
    col = is_.columns[j]
    return "interval" if col and isinstance(col[0], Interval) else "numeric"


def _write_table(path: Path, is_: InformationSystem, id_name: str, delimiter: str) -> TableSpec:
    if id_name in is_.attribute_names:
        raise SchemaError(f"id column name {id_name!r} clashes with an attribute")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow([id_name, *is_.attribute_names])
        for i, oid in enumerate(is_.object_ids):
            w.writerow([oid, *(_cell_text(col[i]) for col in is_.columns)])
    cols = [ColumnSpec(id_name, "id")] + [
        ColumnSpec(a.name, _role_of(is_, j)) for j, a in enumerate(is_.attributes)
    ]
    return TableSpec(path, tuple(cols), delimiter)


def write_mmer(
    mmer: MMER,
    out_dir: str | Path,
    names: tuple[str, str, str] = ("source", "target", "relation"),
    delimiter: str = ",",
) -> Path:
    """Write ``mmer`` in the generic format; returns the path of ``schema.json``.

    Output is deterministic: rows in object order, relation pairs sorted.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sid = mmer.metadata.get("source_id", "source_id")
    tid = mmer.metadata.get("target_id", "target_id")
    if sid == tid:
        tid = tid + "_target"
    s_spec = _write_table(out / f"{names[0]}.csv", mmer.source, sid, delimiter)
    t_spec = _write_table(out / f"{names[1]}.csv", mmer.target, tid, delimiter)
    rel_path = out / f"{names[2]}.csv"
    with open(rel_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow([sid, tid])
        for i, j in mmer.relation.pairs():
            w.writerow([mmer.source.object_ids[i], mmer.target.object_ids[j]])
    schema = SchemaConfig(
        TableSpec(s_spec.path, s_spec.columns, delimiter, mmer.metadata.get("source_name", "source")),
        TableSpec(t_spec.path, t_spec.columns, delimiter, mmer.metadata.get("target_name", "target")),
        RelationSpec(rel_path, sid, tid, delimiter),
        out,
    )
    schema_path = out / "schema.json"
    schema_path.write_text(json.dumps(schema.to_dict(relative_to=out), indent=2) + "\n")
    return schema_path


# --------------------------------------------------------------------------
# MovieLens 100k

# column order of the 19 genre flags in u.item
ML_GENRE_COLUMNS = (
    "unknown", "Action", "Adventure", "Animation", "Children's", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "Musical", "Mystery",
    "Romance", "Sci-Fi", "Thriller", "War", "Western",
)

# high to low; Drama is absent from the published order and is ranked just
# above Unknown so that drama-only movies keep a genre
GENRE_PRIORITY = (
    "Comedy", "Action", "Thriller", "Romance", "Adventure", "Children", "Crime",
    "Sci-Fi", "Horror", "War", "Mystery", "Musical", "Documentary", "Animation",
    "Western", "FilmNoir", "Fantasy", "Drama", "Unknown",
)

_FLAG_TO_GENRE = dict(zip(ML_GENRE_COLUMNS, (
    "Unknown", "Action", "Adventure", "Animation", "Children", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "FilmNoir", "Horror", "Musical", "Mystery",
    "Romance", "Sci-Fi", "Thriller", "War", "Western",
)))

GROUPLENS_AGE_CUTS = (0, 18, 25, 30, 35, 45, 56)


def collapse_genre(flags) -> str:
    """Reduce the 19 ml-100k genre flags to the single highest-priority genre.

    ``flags`` is either a sequence of 19 truthy values in u.item column order
    or a mapping from genre name (u.item spelling or the collapsed spelling)
    to a truthy value.  No flag set gives ``"Unknown"``.

    >>> collapse_genre({"Animation": 1, "Children's": 1})
    'Children'
    """
    if isinstance(flags, Mapping):
        on = set()
        for name, bit in flags.items():
            if bit:
                on.add(_FLAG_TO_GENRE.get(name, name))
    else:
        flags = list(flags)
        if len(flags) != len(ML_GENRE_COLUMNS):
            raise DataError(f"expected {len(ML_GENRE_COLUMNS)} genre flags, got {len(flags)}")
        on = {_FLAG_TO_GENRE[c] for c, b in zip(ML_GENRE_COLUMNS, flags) if b}
    unknown = on - set(GENRE_PRIORITY)
    if unknown:
        raise DataError(f"unknown genre names {sorted(unknown)}")
    for g in GENRE_PRIORITY:
        if g in on:
            return g
    return "Unknown"


def grouplens_age_chain(max_age=56) -> BoundaryChain:
    """The GroupLens age bins 0/18/25/30/35/45/56, with ``max_age`` standing in for infinity."""
    cuts = [c for c in GROUPLENS_AGE_CUTS if c < max_age]
    if not cuts:
        raise ParameterError(f"max_age {max_age} is below every GroupLens cut")
    return BoundaryChain(tuple(cuts) + (max_age,), Method.MANUAL)


def decade_label(year: int) -> str:
    return f"{year // 10 * 10}s"


@dataclass(frozen=True)
class MovieLensOptions:
    data_dir: Path
    age_mode: str = "automatic"  # or "manual_grouplens"
    year_mode: str = "raw_year"  # or "decade"

    def __post_init__(self):
        object.__setattr__(self, "data_dir", Path(self.data_dir))
        if self.age_mode not in ("automatic", "manual_grouplens"):
            raise ParameterError(f"age_mode must be 'automatic' or 'manual_grouplens', got {self.age_mode!r}")
        if self.year_mode not in ("raw_year", "decade"):
            raise ParameterError(f"year_mode must be 'raw_year' or 'decade', got {self.year_mode!r}")

    def files(self) -> dict[str, Path]:
        return {name: self.data_dir / name for name in ("u.user", "u.item", "u.data")}


_YEAR = re.compile(r"(\d{4})\s*$")


def _read_lines(path: Path) -> list[str]:
    try:
        return path.read_text(encoding="latin-1").splitlines()
    except OSError as e:
        raise DataError(str(e), path) from None


def load_movielens(opts: MovieLensOptions) -> MMER:
    """Load ml-100k as a User / Movie / Rates MMER.

    Users: ``age`` (numeric), ``gender``, ``occupation``.  Movies:
    ``releaseYear`` (numeric year, or a decade label in ``decade`` mode) and
    ``genre``.  Movies without a parsable release date are dropped together
    with their ratings; counts land in ``mmer.metadata``.  ``age_mode`` does
    not change the loaded table; see :func:`movielens_manual_spec`.
    """
    files = opts.files()
    for p in files.values():
        if not p.exists():
            raise DataError("missing ml-100k file", p)

    user_ids, ages, genders, occs = [], [], [], []
    seen = set()
    for line_no, line in enumerate(_read_lines(files["u.user"]), 1):
        if not line.strip():
            continue
        f = line.split("|")
        if len(f) != 5:
            raise DataError(f"expected 5 fields, got {len(f)}", files["u.user"], line_no)
        if f[0] in seen:
            raise DataError(f"duplicate user id {f[0]!r}", files["u.user"], line_no)
        seen.add(f[0])
        user_ids.append(f[0])
        ages.append(Numeric(_parse_number(f[1], files["u.user"], line_no, "age")))
        genders.append(Nominal(f[2]))
        occs.append(Nominal(f[3]))

    movie_ids, years, genres, excluded = [], [], [], []
    seen = set()
    for line_no, line in enumerate(_read_lines(files["u.item"]), 1):
        if not line.strip():
            continue
        f = line.split("|")
        if len(f) != 5 + len(ML_GENRE_COLUMNS):
            raise DataError(f"expected {5 + len(ML_GENRE_COLUMNS)} fields, got {len(f)}", files["u.item"], line_no)
        if f[0] in seen:
            raise DataError(f"duplicate movie id {f[0]!r}", files["u.item"], line_no)
        seen.add(f[0])
        flags = f[5:]
        if any(b not in ("0", "1") for b in flags):
            raise DataError(f"malformed genre flags {flags}", files["u.item"], line_no)
        m = _YEAR.search(f[2])
        if not m:
            excluded.append(f[0])
            continue
        year = int(m.group(1))
        movie_ids.append(f[0])
        years.append(Nominal(decade_label(year)) if opts.year_mode == "decade" else Numeric(year))
        genres.append(Nominal(collapse_genre([b == "1" for b in flags])))

    users = InformationSystem(
        user_ids,
        [Attribute("age", "numeric"), Attribute("gender"), Attribute("occupation")],
        [ages, genders, occs],
    )
    year_kind = "nominal" if opts.year_mode == "decade" else "numeric"
    movies = InformationSystem(
        movie_ids, [Attribute("releaseYear", year_kind), Attribute("genre")], [years, genres]
    )

    u_index = {x: i for i, x in enumerate(user_ids)}
    m_index = {x: i for i, x in enumerate(movie_ids)}
    excluded_set = set(excluded)
    rows: list[set[int]] = [set() for _ in user_ids]
    n_lines = n_excluded_pairs = n_loaded = 0
    for line_no, line in enumerate(_read_lines(files["u.data"]), 1):
        if not line.strip():
            continue
        n_lines += 1
        f = line.split("\t")
        if len(f) != 4:
            raise DataError(f"expected 4 fields, got {len(f)}", files["u.data"], line_no)
        u, mv = f[0], f[1]
        if u not in u_index:
            raise ReferentialError(f"unknown user id {u!r}", files["u.data"], line_no)
        if mv in excluded_set:
            n_excluded_pairs += 1
            continue
        if mv not in m_index:
            raise ReferentialError(f"unknown movie id {mv!r}", files["u.data"], line_no)
        n_loaded += 1
        rows[u_index[u]].add(m_index[mv])
    relation = BinaryRelation(len(user_ids), len(movie_ids), rows)
    if excluded:
        log.info("excluded %d movies without a release date (%d ratings)", len(excluded), n_excluded_pairs)
    meta = {
        "source_name": "User",
        "target_name": "Movie",
        "source_id": "userID",
        "target_id": "movieID",
        "dataset": "ml-100k",
        "data_dir": str(opts.data_dir),
        "year_mode": opts.year_mode,
        "age_mode": opts.age_mode,
        "excluded_movies": excluded,
        "rating_lines": n_lines,
        "loaded_rating_lines": n_loaded,
        "excluded_rating_lines": n_excluded_pairs,
        "duplicate_pairs": n_loaded - len(relation),
    }
    return MMER(users, movies, relation, meta)


def movielens_manual_spec(mmer: MMER) -> DiscretizerSpec:
    """GroupLens age bins for the User table, the observed max age closing the last bin."""
    max_age = max(v.value for v in mmer.source.column("age"))
    chain = grouplens_age_chain(max_age)
    return DiscretizerSpec({"age": DiscretizerEntry(Method.MANUAL, boundaries=chain.boundaries)})


# --------------------------------------------------------------------------
# fetching ml-100k

ML100K_URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
# pytorch-widedeep ships the three ml-100k tables as parquet; used when the
# GroupLens host is unreachable but a PyPI index is not
_WIDEDEEP_INDEX = "https://pypi.org/simple/pytorch-widedeep/"
_WIDEDEEP_FILE = "pytorch_widedeep-1.7.0-py3-none-any.whl"
_WIDEDEEP_SHA256 = "b3dd4f344680fed047a7ffe3b78b3b65d171521ccdec99eee45513070e6d7187"


def _download(url: str, timeout: float) -> bytes:
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def _from_grouplens(dest: Path, timeout: float) -> str:
    blob = _download(ML100K_URL, timeout)
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        for name in ("u.user", "u.item", "u.data"):
            (dest / name).write_bytes(z.read(f"ml-100k/{name}"))
    return ML100K_URL


def _from_pypi(dest: Path, timeout: float) -> str:
    import pandas as pd  # optional dependency, only for this fallback

    index = _download(_WIDEDEEP_INDEX, timeout).decode("utf-8", "replace")
    m = re.search(r'href="([^"#]*/%s)[#"]' % re.escape(_WIDEDEEP_FILE), index)
    if not m:
        raise DataError(f"{_WIDEDEEP_FILE} not listed", _WIDEDEEP_INDEX)
    url = urllib.parse.urljoin(_WIDEDEEP_INDEX, m.group(1))
    blob = _download(url, timeout)
    if hashlib.sha256(blob).hexdigest() != _WIDEDEEP_SHA256:
        raise DataError("sha256 mismatch", url)
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        def frame(part):
            raw = z.read(f"pytorch_widedeep/datasets/data/MovieLens100k_{part}.parquet.brotli")
            return pd.read_parquet(io.BytesIO(raw))

        users, items, data = frame("users"), frame("items"), frame("data")

    def text(v) -> str:
        return "" if pd.isna(v) else str(v)

    with open(dest / "u.user", "w", encoding="latin-1", newline="\n") as fh:
        for r in users.itertuples(index=False):
            fh.write(f"{r.user_id}|{r.age}|{r.gender}|{r.occupation}|{r.zip_code}\n")
    with open(dest / "u.item", "w", encoding="latin-1", newline="\n") as fh:
        for r in items.itertuples(index=False, name=None):
            head = [text(x) for x in r[:5]]
            flags = [str(int(x)) for x in r[5:]]
            fh.write("|".join(head + flags) + "\n")
    with open(dest / "u.data", "w", encoding="latin-1", newline="\n") as fh:
        for r in data.itertuples(index=False):
            fh.write(f"{r.user_id}\t{r.movie_id}\t{r.rating}\t{r.timestamp}\n")
    return url


def fetch_movielens(dest: str | Path, timeout: float = 60.0) -> Path:
    """Make sure ``dest`` holds ``u.user``, ``u.item`` and ``u.data``; returns ``dest``.

    Tries the GroupLens archive first, then rebuilds the three files from
    the copy bundled in a PyPI wheel (needs pandas + pyarrow).
    """
    dest = Path(dest)
    names = ("u.user", "u.item", "u.data")
    if all((dest / n).exists() for n in names):
        return dest
    dest.mkdir(parents=True, exist_ok=True)
    errors = []
    for fetch in (_from_grouplens, _from_pypi):
        try:
            origin = fetch(dest, timeout)
        except Exception as e:  # network errors come in many types
            errors.append(f"{fetch.__name__}: {e}")
            continue
        (dest / "SOURCE").write_text(origin + "\n")
        log.info("fetched ml-100k from %s", origin)
        return dest
    raise DataError("could not fetch ml-100k: " + "; ".join(errors), dest)
