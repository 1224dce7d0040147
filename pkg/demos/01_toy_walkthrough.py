"""Walk through the ten-customer / eight-product example by hand.

Loads the toy tables, discretizes Age, Salary and Price with equal-width
intervals, evaluates one rule in detail and then mines everything at
ms = mt = 0.3, mc = tc = 0.6.

    python demos/01_toy_walkthrough.py
"""

import json

from _common import TOY

from granular_rules import DiscretizerSpec, Side, Thresholds, evaluate_rule, granule, load_mmer, mine
from granular_rules.measures import connection_counts
from granular_rules.experiment import prepare
from granular_rules.serialize import rule_text

mmer = load_mmer(TOY / "schema.json")
print(f"{mmer.source.n_objects} customers, {mmer.target.n_objects} products, {len(mmer.relation)} purchases\n")

# The spec file says which numeric columns get which method and k.
spec = json.loads((TOY / "spec.json").read_text())
pre = prepare(
    mmer,
    "manual",
    source_spec=DiscretizerSpec.from_dict(spec["source"]),
    target_spec=DiscretizerSpec.from_dict(spec["target"]),
)
for side, report in (("customer", pre.source_report), ("product", pre.target_report)):
    for name, chain in report.chains.items():
        labels = ", ".join(iv.label(1) for iv in chain.intervals)
        print(f"{side}.{name}: {labels}")
print()

# One rule, step by step.  Boundaries are exact rationals, so 22/3 stays 22/3.
disc = pre.mmer
th = Thresholds("0.3", "0.3", "0.6", "0.6")
lhs = granule(disc.source, {"Gender": "Male"}, Side.SOURCE)
rhs = granule(disc.target, {"Category": "Alcohol"}, Side.TARGET)
print("men:", [disc.source.object_ids[i] for i in lhs.extension])
print("alcohol:", [disc.target.object_ids[j] for j in rhs.extension])
print("alcohol bought by each man:", connection_counts(lhs, rhs, disc.relation))
m = evaluate_rule(lhs, rhs, disc.relation, th)
print(
    f"scoverage {m.scoverage}  tcoverage {m.tcoverage}  "
    f"sconfidence {m.sconfidence}  tconfidence {m.tconfidence} (K={m.K})  passes={m.passes(th)}\n"
)

# Everything at once.
result = mine(disc, th)
print(f"{len(result.rules)} rules from {result.candidate_counts[0]} x {result.candidate_counts[1]} candidate granules")
for r in result.rules[:10]:
    x = r.measures
    print(f"  {rule_text(r, result.source_names, result.target_names)}"
          f"   [{x.scoverage}, {x.tcoverage}, {x.sconfidence}, {x.tconfidence}]")
print("  ...")
