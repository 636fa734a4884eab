"""
Conflict components of an authorship table
==========================================

How fragmented is the conflict graph, and what happens when the most
prolific authors stop reviewing?
"""
from pathlib import Path

from strategyproof_review import connected_components, prune_top_degree
from strategyproof_review.pipeline import format_rows, read_conflicts, stats_rows

data = Path(__file__).resolve().parent.parent / "tests" / "data" / "authorship_small.csv"
g = read_conflicts(data)
print(g.num_reviewers, "authors,", g.num_papers, "papers,", len(g.conflicts), "authorship pairs")

# summary table: degrees and the two largest components
print(format_rows(stats_rows(g)))

comps = connected_components(g)
for k, (rs, ps) in enumerate(comps.members):
    print(f"component {k}:", [g.reviewer_ids[r] for r in rs], [g.paper_ids[p] for p in ps])

# remove top-degree authors one at a time and watch the components split
trace = prune_top_degree(g, 4, checkpoints=range(5))
for k in trace.checkpoints:
    st = trace.at(k)
    print(f"after {k} removals: K={st.num_components}, largest={st.largest}, second={st.second_largest}")
print("removed:", [g.reviewer_ids[r] for r in trace.removed])
