"""Exhaustive sweep of the partition -> assign -> aggregate pipeline on small instances.

An instance is a conflict graph plus (mu, lambda). The pipeline output only
depends on the chosen split and the parameters, so instances are grouped by
(m, n, mu, lambda, reviewers of C, papers of C) and each group is checked
once. Every profile of a group is enumerated.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from strategyproof_review import (
    AssignmentParams,
    ConflictGraph,
    InfeasiblePartition,
    Profile,
    check_gu,
    divide_and_rank_aggregate,
    divide_and_rank_assign,
)
from strategyproof_review.components import connected_components
from strategyproof_review.model import positions
from strategyproof_review.properties import profile_space_size

from oracles import component_structures, partition_oracle


@dataclass
class Instance:
    m: int
    n: int
    mu: int
    lam: int
    graph: ConflictGraph
    rg: object
    parts: object
    graphs: int = 1

    @property
    def key(self):
        return (self.m, self.n, self.mu, self.lam, self.parts.reviewers_C, self.parts.papers_C)

    @property
    def profiles(self):
        return profile_space_size(self.rg)

    def own_side(self, i):
        return self.parts.papers_C if i in self.parts.reviewers_C else self.parts.papers_Cbar

    @property
    def sp_relevant(self):
        """Reviewers who can reorder something and have papers on their own side."""
        return [i for i in range(self.m) if len(self.rg.review_sets[i]) >= 2 and self.own_side(i)]


def feasible_instances(max_m=4, max_n=6, check_oracle=True):
    """All distinct feasible pipeline instances, with counts of graphs behind each.

    Partition results are reused for graphs whose component size sequence
    coincides (the split only depends on it); ``check_oracle`` compares each
    fresh partition against the brute-force oracle.
    """
    found = {}
    stats = {"graphs": 0, "calls": 0, "oracle_checks": 0, "infeasible": 0}
    for m in range(2, max_m + 1):
        for n in range(1, max_n + 1):
            cache = {}
            for conflicts in component_structures(m, n):
                graph = ConflictGraph(m, n, conflicts)
                stats["graphs"] += 1
                comps = connected_components(graph)
                for mu in range(1, n + 1):
                    for lam in range(1, m + 1):
                        ck = (comps.sizes, mu, lam)
                        if ck not in cache:
                            params = AssignmentParams(mu, lam)
                            try:
                                rg, parts = divide_and_rank_assign(graph, params)
                                inC = set(parts.reviewers_C), set(parts.papers_C)
                                chosen = frozenset(
                                    k for k, (rs, ps) in enumerate(comps.members)
                                    if (rs[0] in inC[0] if rs else ps[0] in inC[1])
                                )
                            except InfeasiblePartition:
                                chosen = None
                            stats["calls"] += 1
                            if check_oracle:
                                stats["oracle_checks"] += 1
                                want = partition_oracle(m, n, conflicts, mu, lam)
                                got = None if chosen is None else (parts.ratio, len(parts.reviewers_C), len(parts.papers_C))
                                assert (want is None) == (got is None), (m, n, conflicts, mu, lam)
                                if want is not None:
                                    assert want == got, (m, n, conflicts, mu, lam, want, got)
                            cache[ck] = chosen
                        chosen = cache[ck]
                        if chosen is None:
                            stats["infeasible"] += 1
                            continue
                        rc = tuple(sorted(r for k in chosen for r in comps.members[k][0]))
                        pc = tuple(sorted(p for k in chosen for p in comps.members[k][1]))
                        key = (m, n, mu, lam, rc, pc)
                        if key in found:
                            found[key].graphs += 1
                            continue
                        rg, parts = divide_and_rank_assign(graph, AssignmentParams(mu, lam))
                        assert (parts.reviewers_C, parts.papers_C) == (rc, pc)
                        found[key] = Instance(m, n, mu, lam, graph, rg, parts)
    return list(found.values()), stats


@dataclass
class SweepResult:
    instances: int = 0
    gu_profiles: int = 0
    gu_failures: list = field(default_factory=list)
    gu_skipped: list = field(default_factory=list)
    sp_profiles: int = 0
    sp_deviations: int = 0
    sp_vacuous: int = 0
    sp_failures: list = field(default_factory=list)
    sp_skipped: list = field(default_factory=list)
    seconds: float = 0.0


def sweep(instances, cap=None):
    """Run GU on every profile and SP on every unilateral deviation.

    SP is checked against the strongest conflict relation compatible with the
    split: each reviewer is conflicted with every paper on her own side.
    Instances with more than ``cap`` profiles are skipped and listed.
    """
    res = SweepResult()
    t0 = time.perf_counter()
    for inst in sorted(instances, key=lambda i: i.profiles):
        res.instances += 1
        size = inst.profiles
        relevant = inst.sp_relevant
        if not relevant:
            res.sp_vacuous += 1
        if cap is not None and size > cap:
            res.gu_skipped.append((inst.key, size))
            if relevant:
                res.sp_skipped.append((inst.key, size))
            continue
        choices = [list(itertools.permutations(s)) for s in inst.rg.review_sets]
        outs = {}
        for rankings in itertools.product(*choices):
            profile = Profile(rankings)
            out = divide_and_rank_aggregate(profile, inst.parts)
            rep = check_gu(inst.rg, profile, out)
            res.gu_profiles += 1
            if not rep.verdict and len(res.gu_failures) < 10:
                res.gu_failures.append((inst.key, rep.witness))
            if relevant:
                outs[rankings] = positions(out)
        for i in relevant:
            own = inst.own_side(i)
            others = choices[:i] + [[None]] + choices[i + 1:]
            for base in itertools.product(*others):
                base = list(base)
                ref = None
                for mine in choices[i]:
                    base[i] = mine
                    pos = outs[tuple(base)]
                    if ref is None:
                        ref = pos
                        continue
                    res.sp_deviations += 1
                    moved = [j for j in own if pos[j] != ref[j]]
                    if moved and len(res.sp_failures) < 10:
                        res.sp_failures.append((inst.key, i, moved, tuple(base)))
        res.sp_profiles += len(outs)
    res.seconds = time.perf_counter() - t0
    return res
