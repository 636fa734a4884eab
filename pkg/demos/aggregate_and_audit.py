"""
Aggregating reviews and auditing the result
===========================================

Each side's papers are ranked by contracting cycles in the reviewers'
preference graph and sorting the result; the two side rankings are then
interleaved. The audits confirm group unanimity and that no reviewer can move
a paper on their own side.
"""
import random

from strategyproof_review import (
    AssignmentParams,
    ConflictGraph,
    Profile,
    check_gu,
    check_sp_exhaustive,
    contract_and_sort,
    divide_and_rank_aggregate,
    divide_and_rank_assign,
    interleave,
    slot_positions,
)
from strategyproof_review.properties import random_profile

edges = set()
for b in (0, 2, 4):
    edges |= {(b, b), (b, b + 1), (b + 1, b + 1)}
g = ConflictGraph(6, 6, frozenset(edges))
rg, parts = divide_and_rank_assign(g, AssignmentParams(2, 1))

# the slot sets: the 4-paper side takes floor(k*6/4), the other ceil(k*6/2) - 1
print(slot_positions(6, 4))
print(interleave(["a", "b", "c", "d"], ["X", "Y"]))

# a cycle a > b > c > a collapses into one block, ordered by Borda inside
print(contract_and_sort(Profile(((0, 1), (1, 2), (2, 0))), range(3)))

prof = Profile(((4, 2), (3, 5), (0,), (1,), (), ()))
out = divide_and_rank_aggregate(prof, parts)
print("ranking:", out, "| GU:", check_gu(rg, prof, out).verdict)

rng = random.Random(0)
bad = 0
for _ in range(2000):
    p = random_profile(rg, rng)
    bad += not check_gu(rg, p, divide_and_rank_aggregate(p, parts)).verdict
print("GU failures on 2000 random profiles:", bad)

rep = check_sp_exhaustive(rg, g, lambda p: divide_and_rank_aggregate(p, parts))
print("strategyproof over every profile and deviation:", rep.verdict, rep.notes)
