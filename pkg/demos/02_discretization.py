"""Equal width versus equal frequency on a skewed column.

Movie release years bunch up in the 1990s.  Equal-width bins spend most of
their range on sparse decades; equal-frequency bins follow the data.

    python demos/02_discretization.py
"""

import warnings
from collections import Counter

from _common import movielens

from granular_rules.discretize import assign_interval, equal_frequency_boundaries, equal_width_boundaries

mmer = movielens()
years = [v.value for v in mmer.target.column("releaseYear")]
ages = [v.value for v in mmer.source.column("age")]

for name, values in (("release year", years), ("user age", ages)):
    print(f"== {name}: {len(values)} values, range {min(values)}..{max(values)}")
    for k in (4, 8):
        for label, fit in (("width", equal_width_boundaries), ("frequency", equal_frequency_boundaries)):
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                chain = fit(values, k)
            sizes = Counter(assign_interval(chain, v) for v in values)
            cells = "  ".join(f"{iv.label(1)}:{sizes[iv]}" for iv in chain.intervals)
            print(f"  k={k} {label:<9} {cells}")
            for w in caught:
                print(f"    ({w.message})")
    print()

# Duplicates never straddle a cut, so asking for many bins on a column with
# few distinct values gives fewer bins and a warning.
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    chain = equal_frequency_boundaries([1, 1, 1, 1, 2, 2, 3], 5)
print("7 values with 3 distinct, k=5 ->", [iv.label() for iv in chain.intervals])
print("warning:", caught[0].message)
