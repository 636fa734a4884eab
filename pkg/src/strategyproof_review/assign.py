"""Cross-partition reviewer assignment.

Reviewers on one side of the partition only ever review papers from the
other side, so nobody reviews a paper they are in conflict with.
"""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .errors import ContractViolation
from .model import AssignmentParams, Check, ConflictGraph, ReviewGraph
from .partition import PartitionResult, partition

AssignStrategy = Callable[[Sequence[int], Sequence[int], AssignmentParams], Mapping[int, Sequence[int]]]


def round_robin(reviewers: Sequence[int], papers: Sequence[int], params: AssignmentParams) -> dict:
    """Deal ``lam`` copies of each paper to the reviewers in cyclic order.

    Papers and reviewers are taken in index order and the copies of one
    paper are dealt consecutively, so they land on ``lam`` distinct
    reviewers whenever ``lam <= len(reviewers)``. Loads differ by at most one.
    Reviewers already at ``mu`` are skipped.
    """
    reviewers, papers = sorted(reviewers), sorted(papers)
    out = {i: [] for i in reviewers}
    if not papers:
        return out
    if len(reviewers) < params.lam:
        raise ContractViolation(
            f"round-robin: {len(papers)} papers need {params.lam} reviews but only {len(reviewers)} reviewers"
        )
    cursor = 0
    for p in papers:
        for _ in range(params.lam):
            for _attempt in range(len(reviewers)):
                i = reviewers[cursor % len(reviewers)]
                cursor += 1
                if len(out[i]) < params.mu and p not in out[i]:
                    out[i].append(p)
                    break
            else:
                raise ContractViolation(f"round-robin: no reviewer has capacity left for paper {p}")
    return out


STRATEGIES = {"rr": round_robin, "round-robin": round_robin}


def _resolve(strategy):
    if callable(strategy):
        return strategy, getattr(strategy, "__name__", repr(strategy))
    try:
        return STRATEGIES[strategy], strategy
    except KeyError:
        raise ContractViolation(f"unknown assignment strategy {strategy!r}") from None


def assign_sides(
    graph: ConflictGraph, params: AssignmentParams, parts: PartitionResult, strategy="rr"
) -> ReviewGraph:
    """Assign P_Cbar to R_C and P_C to R_Cbar with ``strategy``, then audit the union."""
    fn, name = _resolve(strategy)
    sets = [[] for _ in range(graph.num_reviewers)]
    for revs, paps in ((parts.reviewers_C, parts.papers_Cbar), (parts.reviewers_Cbar, parts.papers_C)):
        block = fn(revs, paps, params)
        for i, ps in block.items():
            if i not in revs:
                raise ContractViolation(f"strategy {name!r} assigned reviewer {i} outside its side")
            bad = set(ps) - set(paps)
            if bad:
                raise ContractViolation(f"strategy {name!r} gave reviewer {i} paper {min(bad)} from its own side")
            sets[i].extend(ps)
    rg = ReviewGraph(graph.num_papers, tuple(tuple(s) for s in sets), params)
    check = validate_assignment(rg, graph, params)
    if not check:
        raise ContractViolation(f"strategy {name!r} violated {check.clause}: {check.witness}")
    return rg


def divide_and_rank_assign(graph: ConflictGraph, params: AssignmentParams, strategy="rr"):
    """Partition the conflict graph and assign each side's papers to the other side.

    Returns ``(review_graph, partition_result)``.
    """
    params.check_against(graph.num_papers)
    parts = partition(graph, params)
    return assign_sides(graph, params, parts, strategy), parts


def validate_assignment(rg: ReviewGraph, graph: ConflictGraph, params: AssignmentParams) -> Check:
    """Check the load cap, the review floor and conflict avoidance, in that order."""
    for i, s in enumerate(rg.review_sets):
        if len(s) > params.mu:
            return Check(False, "load-cap", {"reviewer": i, "load": len(s), "mu": params.mu})
    for p, revs in enumerate(rg.reviewers_of):
        if len(revs) < params.lam:
            return Check(False, "review-floor", {"paper": p, "reviews": len(revs), "lambda": params.lam})
    if graph is not None:
        for i, s in enumerate(rg.review_sets):
            for p in s:
                if (i, p) in graph.conflicts:
                    return Check(False, "conflict", {"reviewer": i, "paper": p})
    return Check(True)
