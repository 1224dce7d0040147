"""Acceptance gate.

Each test prints one ``[PASS]``/``[FAIL]`` line for its criterion and the
session ends with a table of all of them (criterion 4 is filled in from the
K-selection guard in ``conftest.py``).  Tolerances are the pinned ones:
exact rational equality for criteria 1-3, zero violations for 4, orderings
for 5-6, a 10%-of-running-max slack for the trend in 7, and byte equality
for 8.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

import oracle
from conftest import TOY_DIR, record
from granular_rules.cli import main as cli_main
from granular_rules.dataio import MovieLensOptions, load_movielens
from granular_rules.discretize import equal_width_boundaries
from granular_rules.experiment import SweepConfig, monotone_violations, prepare, run_sweep
from granular_rules.measures import Thresholds, evaluate_rule
from granular_rules.miner import count_summary, mine
from granular_rules.model import Side, granule

F = Fraction
SEED = 20_130_901
N_MMERS = 200


def random_mmers(n=N_MMERS):
    rng = random.Random(SEED)
    return [oracle.random_raw_mmer(rng) for _ in range(n)]


def random_intension(rng, side: oracle.RawSide) -> dict:
    """Descriptors copied from one random row, so the extension is never empty."""
    row = rng.choice(side.rows)
    attrs = rng.sample(range(len(side.names)), rng.randint(1, len(side.names)))
    return {j: row[j] for j in attrs}


def random_threshold(rng, lo=F(1, 20)):
    # alternate exact fractions and two-decimal strings as a user would type them
    if rng.random() < 0.5:
        d = rng.randint(1, 20)
        return max(lo, F(rng.randint(1, d), d))
    return max(lo, F(f"{rng.randint(1, 100) / 100:.2f}"))


# --------------------------------------------------------------------------
# 1. measures equal the exhaustive-scan oracle


def test_criterion_1_measure_oracle():
    rng = random.Random(SEED + 1)
    t0 = time.perf_counter()
    checked = mismatches = 0
    for raw in random_mmers():
        m = raw.to_mmer()
        for _ in range(40):
            li = random_intension(rng, raw.source)
            ri = random_intension(rng, raw.target)
            mc, tc = random_threshold(rng), random_threshold(rng)
            lhs = granule(m.source, {raw.source.names[j]: v for j, v in li.items()}, Side.SOURCE)
            rhs = granule(m.target, {raw.target.names[j]: v for j, v in ri.items()}, Side.TARGET)
            got = evaluate_rule(lhs, rhs, m.relation, Thresholds(1, 1, mc, tc))
            want = oracle.measures(raw, oracle.extension(raw.source, li), oracle.extension(raw.target, ri), mc, tc)
            checked += 1
            mismatches += got.as_tuple() + (got.K,) != want
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 10
    record("1", ok, f"{checked} rules on {N_MMERS} random MMERs, {mismatches} mismatches, {elapsed:.1f}s (limit 10s)")
    assert ok


# --------------------------------------------------------------------------
# 2. miner output equals the unpruned brute force


def test_criterion_2_miner_completeness():
    rng = random.Random(SEED + 2)
    t0 = time.perf_counter()
    runs = bad = total_rules = 0
    for raw in random_mmers()[:50]:
        m = raw.to_mmer()
        for _ in range(5):
            th = [random_threshold(rng, F(1, 10)) for _ in range(4)]
            got = oracle.library_rules(mine(m, Thresholds(*th)))
            want = oracle.brute_force_rules(raw, *th)
            runs += 1
            total_rules += len(want)
            bad += got != want
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 60
    record("2", ok, f"{runs} mining runs, {total_rules} oracle rules, {bad} set mismatches, {elapsed:.1f}s (limit 60s)")
    assert ok


# --------------------------------------------------------------------------
# 3. toy example

TOY_TH = Thresholds("0.3", "0.3", "0.6", "0.6")


@pytest.fixture(scope="module")
def toy_run():
    from conftest import build_toy, discretize_toy

    mmer = discretize_toy(build_toy())
    result = mine(mmer, TOY_TH)
    names = lambda is_: list(is_.attribute_names)  # noqa: E731
    raw = oracle.RawMMER(
        oracle.RawSide(names(mmer.source), [tuple(str(v) for v in mmer.source.row(i)) for i in range(10)]),
        oracle.RawSide(names(mmer.target), [tuple(str(v) for v in mmer.target.row(i)) for i in range(8)]),
        [[int(j in mmer.relation.neighbors[i]) for j in range(8)] for i in range(10)],
    )
    return mmer, result, raw


def shape_check(toy_run, lhs: dict, rhs: dict):
    """Whether the rule is emitted, plus its oracle measures for the report."""
    mmer, result, raw = toy_run
    key = (tuple(sorted(lhs.items())), tuple(sorted(rhs.items())))
    emitted = oracle.library_rules(result)
    ix = lambda side, d: {side.names.index(k): v for k, v in d.items()}  # noqa: E731
    le = oracle.extension(raw.source, ix(raw.source, lhs))
    re_ = oracle.extension(raw.target, ix(raw.target, rhs))
    m = oracle.measures(raw, le, re_, TOY_TH.mc, TOY_TH.tc)
    agrees = key not in emitted or emitted[key] == m
    text = "scov={} tcov={} sconf={} tconf={}".format(*m[:4])
    return key in emitted and agrees, text


def test_criterion_3a_price_boundaries():
    chain = equal_width_boundaries([2.0, 4.0, 5.5, 8.0, 18.0, 3.0, 5.0, 16.5], 3)
    labels = [iv.label(1) for iv in chain.intervals]
    ok = chain.boundaries == (2, F(22, 3), F(38, 3), 18) and labels == ["[2.0, 7.3)", "[7.3, 12.7)", "[12.7, 18.0]"]
    record("3a", ok, f"Price width k=3 boundaries {[str(b) for b in chain.boundaries]}, displayed {labels}")
    assert ok


def test_criterion_3b_rule1(toy_run):
    ok, text = shape_check(toy_run, {"Gender": "Male"}, {"Category": "Alcohol"})
    record("3b", ok, f"Rule 1 <Gender: Male> => <Category: Alcohol> emitted={ok}; {text}")
    assert ok


def test_criterion_3c_rule2(toy_run):
    ok, text = shape_check(toy_run, {"Age": "[30, 35)", "Gender": "Male"}, {"Category": "Alcohol"})
    why = "" if ok else "; LHS covers c5,c10 only, 1/5 < ms=3/10"
    record("3c", ok, f"Rule 2 <Age: [30, 35)> & <Gender: Male> => <Category: Alcohol> emitted={ok}; {text}{why}")
    assert ok


def test_criterion_3d_rule3(toy_run):
    ok, text = shape_check(toy_run, {"Married": "Yes"}, {"Country": "China"})
    why = "" if ok else "; only c4,c5 buy >= 60% of the Chinese products, sconf 1/4 < mc=3/5"
    record("3d", ok, f"Rule 3 <Married: Yes> => <Country: China> emitted={ok}; {text}{why}")
    assert ok


def test_criterion_3e_toy_oracle(toy_run):
    mmer, result, raw = toy_run
    got = oracle.library_rules(result)
    want = oracle.brute_force_rules(raw, TOY_TH.ms, TOY_TH.mt, TOY_TH.mc, TOY_TH.tc)
    rule4, text4 = shape_check(
        toy_run, {"Married": "Yes", "Salary": "[4700, 5600]"}, {"Country": "China", "Price": "[2, 22/3)"}
    )
    ok = got == want
    record(
        "3e",
        ok,
        f"{len(got)} toy rules from {count_summary(result).candidates} candidates equal the oracle set={ok}; "
        f"Rule 4 shape emitted={rule4} ({text4}, reported only)",
    )
    assert ok


# --------------------------------------------------------------------------
# 5-7. MovieLens

MS_GRID = ("0.04", "0.06", "0.08", "0.10", "0.12")


@pytest.fixture(scope="module")
def ml(movielens_dir):
    return load_movielens(MovieLensOptions(movielens_dir))


def nominal_only(mmer):
    """Drop the numeric attributes: what can be mined without discretization."""
    def keep(is_):
        return is_.select_attributes([a.name for a in is_.attributes if a.kind.value == "nominal"])

    return mmer.replace(keep(mmer.source), keep(mmer.target))


@pytest.fixture(scope="module")
def trend_table(ml):
    pre = {
        (k, method): prepare(ml, method, k, k).mmer
        for k in (4, 8)
        for method in ("equal_width", "equal_frequency")
    }
    raw_categories = prepare(ml, "none").mmer
    only_nominal = nominal_only(ml)
    table = {}
    for ms in MS_GRID:
        th = Thresholds(ms, ms, "0.15", "0.17")
        base = len(mine(raw_categories, th).rules), len(mine(only_nominal, th).rules)
        for k in (4, 8):
            ew = len(mine(pre[k, "equal_width"], th).rules)
            ef = len(mine(pre[k, "equal_frequency"], th).rules)
            table[k, ms] = (ew, ef) + base
    return table


def fmt_table(table, k):
    return " ".join(f"ms={ms}:{table[k, ms][0]}/{table[k, ms][1]}" for ms in MS_GRID)


@pytest.mark.movielens
def test_criterion_5a_monotone_in_coverage(trend_table):
    bad = []
    for k in (4, 8):
        for col, name in ((0, "EW"), (1, "EF")):
            seq = [trend_table[k, ms][col] for ms in MS_GRID]
            if any(b > a for a, b in zip(seq, seq[1:])):
                bad.append(f"{name} k={k} {seq}")
    ok = not bad
    record("5a", ok, "rule counts (EW/EF) k=4: " + fmt_table(trend_table, 4) + "; k=8: " + fmt_table(trend_table, 8)
           + ("" if ok else f"; increases in {bad}"))
    assert ok


@pytest.mark.movielens
def test_criterion_5b_frequency_beats_width(trend_table):
    bad = [f"k={k} ms={ms}: EF {trend_table[k, ms][1]} < EW {trend_table[k, ms][0]}"
           for k in (4, 8) for ms in MS_GRID if trend_table[k, ms][1] < trend_table[k, ms][0]]
    ok = not bad
    record("5b", ok, "EF >= EW in every cell" if ok else f"EF >= EW fails in {len(bad)} of 10 cells: {bad}")
    assert ok


@pytest.mark.movielens
def test_criterion_5c_discretized_beats_undiscretized(trend_table):
    bad = []
    for (k, ms), (ew, ef, raw_cat, nom) in sorted(trend_table.items()):
        if min(ew, ef) < max(raw_cat, nom):
            bad.append(f"k={k} ms={ms}")
    ok = not bad
    base = " ".join(f"ms={ms}:{trend_table[4, ms][2]}/{trend_table[4, ms][3]}" for ms in MS_GRID)
    record("5c", ok, f"undiscretized baselines (raw values as categories / nominal attributes only): {base}"
           + ("" if ok else f"; violated at {bad}"))
    assert ok


@pytest.mark.movielens
def test_criterion_6_point_values(ml):
    th = Thresholds("0.06", "0.06", "0.15", "0.17")
    ew = count_summary(mine(prepare(ml, "equal_width", 4, 4).mmer, th))
    ef = count_summary(mine(prepare(ml, "equal_frequency", 4, 4).mmer, th))
    ok = ef.rules > ew.rules > 0
    record("6", ok, f"k=4 ms=mt=0.06: EW {ew.rules} rules (reference 43), EF {ef.rules} rules (reference 68); "
           f"candidates EW {ew.candidates}, EF {ef.candidates}")
    assert ok


@pytest.fixture(scope="module")
def k2_sweep(ml):
    th = Thresholds("0.08", "0.08", "0.15", "0.17")
    out = {}
    for method in ("equal_width", "equal_frequency"):
        rows = run_sweep(ml, SweepConfig((10, 10), (2, 30), method, th))
        out[method] = [(r.k2, r.rules) for r in rows]
    return out


@pytest.mark.movielens
def test_criterion_7a_trend(k2_sweep):
    parts, ok = [], True
    for method, short in (("equal_width", "EW"), ("equal_frequency", "EF")):
        ks, counts = zip(*k2_sweep[method])
        bad = monotone_violations(counts, 0.10)
        ok &= not bad
        drops = [(counts[i - 1] - counts[i], ks[i - 1], ks[i]) for i in range(1, len(counts))]
        big = max(drops)
        parts.append(
            f"{short} {list(counts)}; largest drop k2={big[1]}->{big[2]} (-{big[0]})"
            + (f"; rises over 10% of running max at k2={[ks[i] for i in bad]}" if bad else "")
        )
    record("7a", ok, " | ".join(parts))
    assert ok


@pytest.mark.movielens
def test_criterion_7b_dominance(k2_sweep):
    ew = dict(k2_sweep["equal_width"])
    ef = dict(k2_sweep["equal_frequency"])
    small = range(2, 12)  # lower third of k2 in [2, 30]
    region = [k for k in small if ef[k] > ew[k]]
    ok = bool(region)
    record("7b", ok, f"EF > EW at k2 in {region} among k2 <= 11; over the full range at {[k for k in ew if ef[k] > ew[k]]}")
    assert ok


# --------------------------------------------------------------------------
# 8. determinism


def _same_files(a: Path, b: Path, names) -> list[str]:
    return [n for n in names if (a / n).read_bytes() != (b / n).read_bytes()]


@pytest.mark.movielens
def test_criterion_8_determinism(tmp_path, movielens_dir):
    schema, spec = str(TOY_DIR / "schema.json"), str(TOY_DIR / "spec.json")
    toy_th = ["--ms", "0.3", "--mt", "0.3", "--mc", "0.6", "--tc", "0.6"]
    ml = ["--movielens-dir", str(movielens_dir)]
    jobs = {
        "toy mine": (["mine", "--schema", schema, "--spec", spec, *toy_th], ["rules.jsonl"]),
        "toy discretize": (["discretize", "--schema", schema, "--method", "ef", "--k", "3"],
                           ["source.csv", "target.csv", "relation.csv", "schema.json", "report.json"]),
        "toy sweep": (["sweep", "--schema", schema, "--method", "ew", "--k1", "1:5", "--k2", "1:4", *toy_th], ["grid.csv"]),
        "ml mine ef": (["mine", *ml, "--method", "ef", "--k", "4"], ["rules.jsonl"]),
        "ml mine manual": (["mine", *ml, "--method", "manual"], ["rules.jsonl"]),
        "ml sweep": (["sweep", *ml, "--method", "ew", "--k1", "3:4", "--k2", "2:4", "--ms", "0.08", "--mt", "0.08"],
                     ["grid.csv"]),
    }
    diffs = []
    for name, (args, files) in jobs.items():
        outs = []
        for i, threads in enumerate(("1", "1", "3")):
            out = tmp_path / f"{name.replace(' ', '_')}_{i}"
            assert cli_main(args + ["--threads", threads, "--out", str(out)]) == 0, name
            outs.append(out)
        for other in outs[1:]:
            diffs += [f"{name}:{f}" for f in _same_files(outs[0], other, files)]
        if args[0] == "mine":
            replay = tmp_path / f"{name.replace(' ', '_')}_replay"
            assert cli_main(["mine", "--replay", str(outs[0] / "report.json"), "--out", str(replay)]) == 0
            diffs += [f"{name} replay" for _ in _same_files(outs[0], replay, files)]
    ok = not diffs
    record("8", ok, f"{len(jobs)} commands x (rerun, --threads 3, replay) byte-identical" if ok else f"differences: {diffs}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
