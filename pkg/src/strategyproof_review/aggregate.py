"""Rank aggregation: Contract-and-Sort within each side, then interleaving.

Contract-and-Sort builds a digraph with an edge ``a -> b`` whenever some
reviewer ranks ``a`` immediately above ``b``, contracts its strongly
connected components, emits the components in topological order and orders
papers inside each component with a pluggable rule (Borda by default).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import ContractViolation
from .model import Profile, as_aggregate
from .partition import PartitionResult

WithinRule = Callable[[tuple, Sequence[tuple]], Sequence[int]]


@dataclass(frozen=True)
class ProfileGraph:
    vertices: tuple
    edges: frozenset  # deduplicated ordered pairs

    @property
    def successors(self) -> dict:
        succ = {v: [] for v in self.vertices}
        for a, b in sorted(self.edges):
            succ[a].append(b)
        return succ


def profile_graph(profile: Profile, papers: Iterable[int] | None = None) -> ProfileGraph:
    """Consecutive-pair digraph of a profile, with parallel edges merged."""
    if papers is None:
        papers = {p for r in profile.rankings for p in r}
    edges = set()
    for r in profile.rankings:
        edges.update(zip(r, r[1:]))
    return ProfileGraph(tuple(sorted(papers)), frozenset(edges))


def strongly_connected_components(vertices: Sequence[int], successors: dict) -> list:
    """Tarjan's algorithm, iterative. Returns a list of SCCs (each a sorted tuple)."""
    index, low, on_stack = {}, {}, set()
    stack, out = [], []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(successors[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(tuple(sorted(comp)))
    return out


def condensation_order(graph: ProfileGraph) -> list:
    """SCCs in topological order; among ready components the lowest paper index goes first."""
    succ = graph.successors
    sccs = strongly_connected_components(graph.vertices, succ)
    comp_of = {v: c for c, members in enumerate(sccs) for v in members}
    dag = [set() for _ in sccs]
    indeg = [0] * len(sccs)
    for a, b in graph.edges:
        ca, cb = comp_of[a], comp_of[b]
        if ca != cb and cb not in dag[ca]:
            dag[ca].add(cb)
            indeg[cb] += 1
    heap = [(sccs[c][0], c) for c in range(len(sccs)) if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, c = heapq.heappop(heap)
        order.append(sccs[c])
        for d in dag[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (sccs[d][0], d))
    return order


def borda_within(members: tuple, rankings: Sequence[tuple]) -> list:
    """Borda count on rankings restricted to ``members``; ties by paper index.

    A restricted ranking of length s awards ``s - rank`` points to the paper
    at 1-based ``rank``.
    """
    score = dict.fromkeys(members, 0)
    for r in rankings:
        s = len(r)
        for rank, p in enumerate(r, start=1):
            score[p] += s - rank
    return sorted(members, key=lambda p: (-score[p], p))


WITHIN_RULES = {"borda": borda_within}


def _resolve_rule(strategy):
    if callable(strategy):
        return strategy
    try:
        return WITHIN_RULES[strategy]
    except KeyError:
        raise ContractViolation(f"unknown aggregation strategy {strategy!r}") from None


def contract_and_sort(profile: Profile, papers: Iterable[int] | None = None, strategy="borda") -> tuple:
    """Aggregate a (restricted) profile into a ranking of ``papers``.

    Papers of ``papers`` that appear in no ranking go last, by index.
    """
    rule = _resolve_rule(strategy)
    ranked = {p for r in profile.rankings for p in r}
    papers = ranked if papers is None else set(papers)
    if not ranked <= papers:
        raise ContractViolation(f"profile ranks paper {min(ranked - papers)} outside the given paper set")
    graph = profile_graph(profile, ranked)
    out = []
    for members in condensation_order(graph):
        if len(members) == 1:
            out.append(members[0])
            continue
        keep = set(members)
        restricted = [t for t in (tuple(p for p in r if p in keep) for r in profile.rankings) if t]
        ordered = list(rule(members, restricted))
        if sorted(ordered) != list(members):
            raise ContractViolation(f"within-component rule returned {ordered} for component {members}")
        out.extend(ordered)
    out.extend(sorted(papers - ranked))
    return tuple(out)


def slot_positions(n: int, n_C: int):
    """1-based positions ``(I1, I2)`` for a side of ``n_C`` papers and the other ``n - n_C``.

    ``I1 = {floor(k n / n_C)}`` and ``I2 = {ceil(k n / n_Cbar) - 1}``, computed
    in integer arithmetic.
    """
    n_Cbar = n - n_C
    if n_C < n_Cbar or n_C < 0:
        raise ContractViolation(f"side C must be the larger side, got {n_C} of {n}")
    if n_C == 0:
        return [], []
    I1 = [k * n // n_C for k in range(1, n_C + 1)]
    I2 = [-(-k * n // n_Cbar) - 1 for k in range(1, n_Cbar + 1)]
    return I1, I2


def interleave(ranking_C: Sequence[int], ranking_Cbar: Sequence[int], n: int | None = None) -> tuple:
    """Merge two side rankings: the larger side fills I1, the other fills I2."""
    ranking_C, ranking_Cbar = tuple(ranking_C), tuple(ranking_Cbar)
    if n is None:
        n = len(ranking_C) + len(ranking_Cbar)
    if len(ranking_C) + len(ranking_Cbar) != n:
        raise ContractViolation(f"side sizes {len(ranking_C)} + {len(ranking_Cbar)} do not add up to n={n}")
    if len(ranking_C) < len(ranking_Cbar):
        ranking_C, ranking_Cbar = ranking_Cbar, ranking_C
    I1, I2 = slot_positions(n, len(ranking_C))
    out = [None] * n
    for pos, p in zip(I1, ranking_C):
        out[pos - 1] = p
    for pos, p in zip(I2, ranking_Cbar):
        out[pos - 1] = p
    return tuple(out)


def divide_and_rank_aggregate(profile: Profile, parts: PartitionResult, strategy="borda") -> tuple:
    """Aggregate each side with Contract-and-Sort and interleave the results.

    Every reviewer must rank only papers from the side opposite to their own.
    """
    side_papers = {"C": set(parts.papers_C), "Cbar": set(parts.papers_Cbar)}
    reviewer_side = {i: "C" for i in parts.reviewers_C}
    reviewer_side.update({i: "Cbar" for i in parts.reviewers_Cbar})
    for i, r in enumerate(profile.rankings):
        if not r:
            continue
        if i not in reviewer_side:
            raise ContractViolation(f"reviewer {i} is not in the partition")
        other = "Cbar" if reviewer_side[i] == "C" else "C"
        if not set(r) <= side_papers[other]:
            raise ContractViolation(f"reviewer {i} ranks papers outside the opposite side")
    n = len(parts.papers_C) + len(parts.papers_Cbar)
    pi_C = contract_and_sort(profile.restrict(parts.papers_C), parts.papers_C, strategy)
    pi_Cbar = contract_and_sort(profile.restrict(parts.papers_Cbar), parts.papers_Cbar, strategy)
    return as_aggregate(interleave(pi_C, pi_Cbar, n), n)


def borda_aggregate(profile: Profile, num_papers: int) -> tuple:
    """Plain Borda over all papers (not strategyproof); used as a baseline rule."""
    return tuple(borda_within(tuple(range(num_papers)), [r for r in profile.rankings if r]))
