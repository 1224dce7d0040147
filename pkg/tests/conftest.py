"""Shared fixtures: the customer/product toy MMER, MovieLens data, and the K-selection guard."""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path

import pytest

import granular_rules.measures as measures_mod
from granular_rules.dataio import fetch_movielens
from granular_rules.discretize import DiscretizerSpec, discretize_system
from granular_rules.model import MMER, Attribute, AttributeKind, BinaryRelation, InformationSystem

ROOT = Path(__file__).resolve().parents[1]
TOY_DIR = ROOT / "demos" / "data" / "toy"

NOM, NUM = AttributeKind.NOMINAL, AttributeKind.NUMERIC

CUSTOMERS = [
    # CID, Age, Gender, Married, Salary
    ("c1", 20, "Male", "No", 2000),
    ("c2", 25, "Female", "Yes", 2800),
    ("c3", 23, "Male", "No", 3500),
    ("c4", 26, "Female", "Yes", 2400),
    ("c5", 32, "Male", "Yes", 5600),
    ("c6", 36, "Male", "Yes", 4200),
    ("c7", 39, "Male", "Yes", 5000),
    ("c8", 40, "Female", "Yes", 5000),
    ("c9", 35, "Female", "Yes", 3400),
    ("c10", 34, "Male", "Yes", 3600),
]

PRODUCTS = [
    # PID, Country, Category, Color, Price
    ("p1", "China", "Staple", "Yellow", 2.0),
    ("p2", "Australia", "Staple", "Black", 4.0),
    ("p3", "China", "Daily", "White", 5.5),
    ("p4", "China", "Meat", "Red", 8.0),
    ("p5", "Australia", "Meat", "Red", 18.0),
    ("p6", "China", "Alcohol", "Yellow", 3.0),
    ("p7", "France", "Alcohol", "Yellow", 5.0),
    ("p8", "France", "Alcohol", "White", 16.5),
]

BUYS = [
    [1, 0, 0, 1, 1, 1, 0, 0],
    [1, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0, 1, 1],
    [0, 1, 0, 1, 1, 1, 0, 0],
    [0, 1, 1, 1, 0, 0, 1, 1],
    [0, 1, 0, 1, 0, 0, 1, 0],
    [1, 1, 1, 1, 0, 0, 1, 1],
    [0, 1, 1, 0, 1, 1, 1, 0],
    [1, 0, 1, 0, 1, 0, 1, 0],
    [1, 0, 1, 0, 1, 0, 1, 1],
]

TOY_SPEC = {
    "source": {"Age": {"method": "equal_width", "k": 4}, "Salary": {"method": "equal_width", "k": 4}},
    "target": {"Price": {"method": "equal_width", "k": 3}},
}


def build_toy() -> MMER:
    customers = InformationSystem.from_rows(
        [r[0] for r in CUSTOMERS],
        [Attribute("Age", NUM), Attribute("Gender", NOM), Attribute("Married", NOM), Attribute("Salary", NUM)],
        [r[1:] for r in CUSTOMERS],
    )
    products = InformationSystem.from_rows(
        [r[0] for r in PRODUCTS],
        [Attribute("Country", NOM), Attribute("Category", NOM), Attribute("Color", NOM), Attribute("Price", NUM)],
        [r[1:] for r in PRODUCTS],
    )
    return MMER(customers, products, BinaryRelation.from_matrix(BUYS))


def discretize_toy(mmer: MMER) -> MMER:
    s, _ = discretize_system(mmer.source, DiscretizerSpec.from_dict(TOY_SPEC["source"]))
    t, _ = discretize_system(mmer.target, DiscretizerSpec.from_dict(TOY_SPEC["target"]))
    return mmer.replace(s, t)


@pytest.fixture
def toy() -> MMER:
    return build_toy()


@pytest.fixture
def toy_disc(toy) -> MMER:
    return discretize_toy(toy)


# --------------------------------------------------------------------------
# K-selection guard: every K computed anywhere in the library is checked
# against its bracketing condition while the tests run.

K_GUARD = {"calls": 0, "violations": 0}


@pytest.fixture(autouse=True)
def k_selection_guard(monkeypatch):
    original = measures_mod.select_k

    def checked(counts, mc):
        K = original(counts, mc)
        K_GUARD["calls"] += 1
        if not measures_mod.sandwich_holds(counts, K, mc):
            K_GUARD["violations"] += 1
            raise AssertionError(f"K={K} breaks the bracketing condition for counts={list(counts)}, mc={mc}")
        return K

    monkeypatch.setattr(measures_mod, "select_k", checked)
    yield


# --------------------------------------------------------------------------
# MovieLens


@pytest.fixture(scope="session")
def movielens_dir() -> Path:
    """ml-100k location; downloaded into ``data/ml-100k`` on first use.

    Set ``ML100K_DIR`` to point at an existing copy, or
    ``GRANULAR_RULES_OFFLINE=1`` to skip the MovieLens tests when the data is
    absent and cannot be fetched.
    """
    env = os.environ.get("ML100K_DIR")
    d = Path(env) if env else ROOT / "data" / "ml-100k"
    if all((d / f).exists() for f in ("u.user", "u.item", "u.data")):
        return d
    if os.environ.get("GRANULAR_RULES_OFFLINE") == "1":
        pytest.skip("MovieLens data unavailable (offline mode)")
    return fetch_movielens(d)


# --------------------------------------------------------------------------
# acceptance summary

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (bool(ok), detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE and not K_GUARD["calls"]:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    calls, bad = K_GUARD["calls"], K_GUARD["violations"]
    rows = dict(ACCEPTANCE)
    rows["4"] = (calls > 0 and bad == 0, f"{calls} K selections checked across the session, {bad} violations")
    for key in sorted(rows, key=lambda c: (int(c[0]), c)):
        ok, detail = rows[key]
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {key:<3} {detail}")


def frac(x) -> Fraction:
    return Fraction(str(x))
