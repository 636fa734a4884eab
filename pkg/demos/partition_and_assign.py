"""
Splitting reviewers and papers into two conflict-free sides
===========================================================

Three disjoint (author, author, paper, paper) blocks. Each block must stay on
one side; every paper is then reviewed only from the other side.
"""
from strategyproof_review import (
    AssignmentParams,
    ConflictGraph,
    divide_and_rank_assign,
    partition,
    validate_assignment,
    verify_partition,
)
from strategyproof_review.errors import InfeasiblePartition

edges = set()
for b in (0, 2, 4):
    edges |= {(b, b), (b, b + 1), (b + 1, b + 1)}
g = ConflictGraph(6, 6, frozenset(edges),
                  reviewer_ids=[f"r{i}" for i in range(1, 7)], paper_ids=[f"p{i}" for i in range(1, 7)])

params = AssignmentParams(mu=2, lam=1)
parts = partition(g, params)
print("C:   ", [g.reviewer_ids[i] for i in parts.reviewers_C], [g.paper_ids[j] for j in parts.papers_C])
print("Cbar:", [g.reviewer_ids[i] for i in parts.reviewers_Cbar], [g.paper_ids[j] for j in parts.papers_Cbar])
print("load ratio", parts.ratio, "| checks:", verify_partition(parts, g, params).ok)

rg, _ = divide_and_rank_assign(g, params)
for i, s in enumerate(rg.review_sets):
    print(g.reviewer_ids[i], "reviews", [g.paper_ids[j] for j in s])
print("assignment valid:", validate_assignment(rg, g, params).ok)

# asking for two reviews per paper with load 2 is too much for two reviewers per side
try:
    partition(g, AssignmentParams(mu=2, lam=2))
except InfeasiblePartition as e:
    print("infeasible:", e)
