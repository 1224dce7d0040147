import itertools
import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import TOY_DIR, build_toy, discretize_toy
from granular_rules.dataio import (
    GENRE_PRIORITY,
    ML_GENRE_COLUMNS,
    MovieLensOptions,
    SchemaConfig,
    collapse_genre,
    decade_label,
    grouplens_age_chain,
    load_mmer,
    load_movielens,
    movielens_manual_spec,
    write_mmer,
)
from granular_rules.discretize import assign_interval, discretize_system
from granular_rules.errors import DataError, ReferentialError, SchemaError
from granular_rules.model import Interval, Numeric


def write_toy_variant(tmp_path: Path, customer=None, buys=None, schema_edit=None) -> Path:
    for name in ("customer.csv", "product.csv", "buys.csv"):
        (tmp_path / name).write_text((TOY_DIR / name).read_text())
    if customer is not None:
        (tmp_path / "customer.csv").write_text(customer)
    if buys is not None:
        (tmp_path / "buys.csv").write_text(buys)
    schema = json.loads((TOY_DIR / "schema.json").read_text())
    if schema_edit:
        schema_edit(schema)
    path = tmp_path / "schema.json"
    path.write_text(json.dumps(schema))
    return path


class TestGeneric:
    def test_toy_files(self):
        m = load_mmer(TOY_DIR / "schema.json")
        assert (m.source.n_objects, m.target.n_objects, len(m.relation)) == (10, 8, 43)
        assert m == build_toy()

    def test_empty_relation(self, tmp_path):
        m = load_mmer(write_toy_variant(tmp_path, buys="CID,PID\n"))
        assert len(m.relation) == 0
        assert all(r == () for r in m.relation.neighbors)

    def test_unknown_id_in_relation(self, tmp_path):
        path = write_toy_variant(tmp_path, buys="CID,PID\nc1,p1\nc99,p1\n")
        with pytest.raises(ReferentialError, match="c99"):
            load_mmer(path)

    def test_duplicate_id_reports_line(self, tmp_path):
        text = (TOY_DIR / "customer.csv").read_text() + "c3,30,Male,No,1000\n"
        with pytest.raises(DataError, match=":12:"):
            load_mmer(write_toy_variant(tmp_path, customer=text))

    def test_bad_number_reports_location(self, tmp_path):
        text = (TOY_DIR / "customer.csv").read_text().replace("c4,26,", "c4,twenty-six,")
        with pytest.raises(DataError) as err:
            load_mmer(write_toy_variant(tmp_path, customer=text))
        assert err.value.line == 5 and "Age" in str(err.value)

    def test_undeclared_column(self, tmp_path):
        def drop_salary(schema):
            schema["source"]["columns"] = schema["source"]["columns"][:-1]

        with pytest.raises(SchemaError):
            load_mmer(write_toy_variant(tmp_path, schema_edit=drop_salary))

    def test_ignored_column(self, tmp_path):
        def ignore_salary(schema):
            schema["source"]["columns"][-1]["role"] = "ignore"

        m = load_mmer(write_toy_variant(tmp_path, schema_edit=ignore_salary))
        assert m.source.attribute_names == ("Age", "Gender", "Married")

    @pytest.mark.parametrize("discretized", [False, True])
    def test_round_trip(self, tmp_path, discretized):
        m = build_toy()
        if discretized:
            m = discretize_toy(m)
        schema = write_mmer(m, tmp_path / "out")
        assert load_mmer(schema) == m
        # a second write is byte-identical
        again = write_mmer(load_mmer(schema), tmp_path / "again")
        for name in ("source.csv", "target.csv", "relation.csv", "schema.json"):
            assert (tmp_path / "out" / name).read_bytes() == (again.parent / name).read_bytes()

    def test_schema_paths_relative(self, tmp_path):
        cfg = SchemaConfig.from_file(TOY_DIR / "schema.json")
        d = cfg.to_dict(relative_to=TOY_DIR)
        assert d["source"]["path"] == "customer.csv"
        assert SchemaConfig.from_dict(d, TOY_DIR).paths() == cfg.paths()


class TestGenre:
    def test_examples(self):
        assert collapse_genre({"Action": 1, "Thriller": 1}) == "Action"
        assert collapse_genre([0] * 19) == "Unknown"
        assert collapse_genre({"Animation": 1, "Children's": 1}) == "Children"
        assert collapse_genre({"Drama": 1}) == "Drama"

    def test_wrong_length(self):
        with pytest.raises(DataError):
            collapse_genre([0] * 18)

    def test_priority_covers_every_flag(self):
        assert len(GENRE_PRIORITY) == len(ML_GENRE_COLUMNS) == 19

    def test_pairwise_priority(self):
        """For any two flags the earlier name in the priority list wins."""
        for a, b in itertools.combinations(range(19), 2):
            flags = [0] * 19
            flags[a] = flags[b] = 1
            got = collapse_genre(flags)
            names = {collapse_genre([int(i == a) for i in range(19)]), collapse_genre([int(i == b) for i in range(19)])}
            assert got == min(names, key=GENRE_PRIORITY.index)


@given(st.lists(st.booleans(), min_size=19, max_size=19))
def test_genre_is_one_of_the_set_flags(flags):
    got = collapse_genre(flags)
    singles = {collapse_genre([i == j for i in range(19)]) for j, b in enumerate(flags) if b}
    if singles:
        assert got in singles
    else:
        assert got == "Unknown"


class TestAgeAndYear:
    chain = grouplens_age_chain(73)

    def test_bins(self):
        assert assign_interval(self.chain, 24) == Interval(18, 25)
        assert assign_interval(self.chain, 0) == Interval(0, 18)
        assert assign_interval(self.chain, 73) == Interval(56, 73, True)

    def test_decades(self):
        assert decade_label(1922) == "1920s"
        assert decade_label(1990) == "1990s"


def write_ml(tmp_path: Path, items: list[str], ratings: list[str]) -> Path:
    (tmp_path / "u.user").write_text("1|24|M|technician|85711\n2|53|F|other|94043\n")
    (tmp_path / "u.item").write_text("\n".join(items) + "\n", encoding="latin-1")
    (tmp_path / "u.data").write_text("\n".join(ratings) + "\n")
    return tmp_path


def item(mid, date, flags):
    return f"{mid}|Title {mid}|{date}||http://x|" + "|".join(map(str, flags))


class TestMovieLensLoader:
    def make(self, tmp_path):
        anim_child = [0] * 19
        anim_child[3] = anim_child[4] = 1
        drama = [0] * 19
        drama[8] = 1
        items = [item(1, "01-Jan-1995", anim_child), item(2, "", drama), item(3, "12-Mar-1977", drama)]
        ratings = ["1\t1\t5\t1", "1\t2\t3\t1", "2\t3\t4\t2", "2\t3\t1\t3", "1\t3\t2\t1"]
        return write_ml(tmp_path, items, ratings)

    def test_small_dataset(self, tmp_path):
        m = load_movielens(MovieLensOptions(self.make(tmp_path)))
        assert m.target.object_ids == ("1", "3")
        assert [str(v) for v in m.target.column("genre")] == ["Children", "Drama"]
        assert m.target.column("releaseYear") == (Numeric(1995), Numeric(1977))
        md = m.metadata
        assert md["excluded_movies"] == ["2"]
        assert md["rating_lines"] == md["loaded_rating_lines"] + md["excluded_rating_lines"] == 5
        # user 2 rated movie 3 twice: one pair
        assert md["duplicate_pairs"] == 1 and len(m.relation) == 3

    def test_decade_mode(self, tmp_path):
        m = load_movielens(MovieLensOptions(self.make(tmp_path), year_mode="decade"))
        assert [str(v) for v in m.target.column("releaseYear")] == ["1990s", "1970s"]

    def test_malformed_flags(self, tmp_path):
        write_ml(tmp_path, [item(1, "01-Jan-1995", [2] + [0] * 18)], [])
        with pytest.raises(DataError):
            load_movielens(MovieLensOptions(tmp_path))

    def test_unknown_movie(self, tmp_path):
        write_ml(tmp_path, [item(1, "01-Jan-1995", [0] * 19)], ["1\t7\t5\t1"])
        with pytest.raises(ReferentialError):
            load_movielens(MovieLensOptions(tmp_path))

    def test_missing_files(self, tmp_path):
        with pytest.raises(DataError):
            load_movielens(MovieLensOptions(tmp_path))


@pytest.mark.movielens
class TestMovieLensFull:
    def test_counts(self, movielens_dir):
        m = load_movielens(MovieLensOptions(movielens_dir))
        md = m.metadata
        assert m.source.n_objects == 943
        assert m.target.n_objects <= 1682
        assert m.target.n_objects + len(md["excluded_movies"]) == 1682
        assert md["rating_lines"] == 100_000
        assert md["loaded_rating_lines"] + md["excluded_rating_lines"] == 100_000
        assert len(m.relation) == md["loaded_rating_lines"] - md["duplicate_pairs"]

    def test_manual_setting(self, movielens_dir):
        m = load_movielens(MovieLensOptions(movielens_dir, "manual_grouplens", "decade"))
        out, report = discretize_system(m.source, movielens_manual_spec(m))
        chain = report.chains["age"]
        assert chain.boundaries[:-1] == (0, 18, 25, 30, 35, 45, 56)
        assert chain.boundaries[-1] == max(v.value for v in m.source.column("age"))
        decades = {str(v) for v in m.target.column("releaseYear")}
        assert decades <= {f"{d}s" for d in range(1920, 2000, 10)}

    def test_round_trip(self, movielens_dir, tmp_path):
        m = load_movielens(MovieLensOptions(movielens_dir))
        assert load_mmer(write_mmer(m, tmp_path)) == m
