"""
Small instances where good rules cannot exist
=============================================

With every reviewer ranking every paper, enumerate all aggregation rules and
count those that respect unanimous pairs and resist manipulation. Then a
3-reviewer chain where group unanimity and weak strategyproofness clash.
"""
import json

from strategyproof_review import count_total_ranking_rules, verify_chain_gu_wsp
from strategyproof_review.model import ReviewGraph
from strategyproof_review.properties import pu_cycle_witness, pu_necessary_conditions

for n, m in [(2, 2), (2, 3)]:
    rep = count_total_ranking_rules(n, m)
    print(n, m, rep["num_rules"], "rules,", rep["num_pu_rules"], "PU,", rep["num_pu_and_wsp_rules"], "PU and WSP")

chain = verify_chain_gu_wsp()
print("chain instance unsatisfiable:", chain["unsat"])
print("minimal conflicting profiles:")
for prof in chain["minimal_conflict"]:
    print("  ", prof)
print(json.dumps(chain["without_wsp"], default=str)[:200])

# reviewers whose sets form a 4-cycle on papers: no output can honour every unanimous pair
rg = ReviewGraph(4, ((0, 2, 3), (1, 2, 3)))
cond = pu_necessary_conditions(rg)
print("pairwise unanimity possible:", cond["pu_possible"])
prof, arcs = pu_cycle_witness(rg, cond["intersections"]["witness"]["cycle"])
print("witness profile", prof.rankings, "forces", arcs)
