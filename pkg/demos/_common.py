"""Shared helpers for the demo scripts (not part of the library)."""

import os
from pathlib import Path

from granular_rules.dataio import MovieLensOptions, fetch_movielens, load_movielens

HERE = Path(__file__).resolve().parent
TOY = HERE / "data" / "toy"
ML_DIR = Path(os.environ.get("ML100K_DIR", HERE.parent / "data" / "ml-100k"))


def movielens(**kw):
    """Load ml-100k, downloading it into ``data/ml-100k`` the first time."""
    return load_movielens(MovieLensOptions(fetch_movielens(ML_DIR), **kw))
