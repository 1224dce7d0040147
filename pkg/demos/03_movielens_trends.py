"""Rule counts on MovieLens 100k as the coverage threshold moves.

Users (age, gender, occupation) are linked to movies (release year, genre)
by "rated".  For k = 4 and k = 8 intervals per numeric attribute the table
compares equal width (EW), equal frequency (EF) and two undiscretized
baselines: raw values used as categories, and nominal attributes only.

    python demos/03_movielens_trends.py
"""

from _common import movielens

from granular_rules import DiscretizerSpec, Thresholds, mine
from granular_rules.dataio import movielens_manual_spec
from granular_rules.experiment import prepare

mmer = movielens()
md = mmer.metadata
print(f"{mmer.source.n_objects} users, {mmer.target.n_objects} movies, {len(mmer.relation)} user-movie pairs")
print(f"excluded movies without a year: {md['excluded_movies']}\n")

raw = prepare(mmer, "none").mmer
nominal = mmer.replace(
    mmer.source.select_attributes(["gender", "occupation"]), mmer.target.select_attributes(["genre"])
)
prepared = {(m, k): prepare(mmer, m, k, k).mmer for m in ("ew", "ef") for k in (4, 8)}

print(f"{'ms=mt':>6} | {'EW k=4':>6} {'EF k=4':>6} | {'EW k=8':>6} {'EF k=8':>6} | {'raw':>4} {'nominal':>7}")
for ms in ("0.04", "0.06", "0.08", "0.10", "0.12"):
    th = Thresholds(ms, ms, "0.15", "0.17")
    n = {key: len(mine(m, th).rules) for key, m in prepared.items()}
    print(
        f"{ms:>6} | {n['ew', 4]:>6} {n['ef', 4]:>6} | {n['ew', 8]:>6} {n['ef', 8]:>6} | "
        f"{len(mine(raw, th).rules):>4} {len(mine(nominal, th).rules):>7}"
    )

# The manual setting: GroupLens age bands and release decades.
decades = movielens(age_mode="manual_grouplens", year_mode="decade")
pre = prepare(decades, "manual", source_spec=movielens_manual_spec(decades),
              target_spec=DiscretizerSpec())
th = Thresholds("0.06", "0.06", "0.15", "0.17")
age = pre.source_report.chains["age"]
print(f"\nmanual age bands {[iv.label() for iv in age.intervals]} and release decades")
print(f"at ms=0.06: {len(mine(pre.mmer, th).rules)} rules (the open top band ends at the oldest user)")
