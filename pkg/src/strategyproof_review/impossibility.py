"""Finite certificates for the negative results.

Everything here enumerates aggregation rules explicitly, so it only works on
tiny instances: two papers under total rankings, and the three-reviewer
chain of four papers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .aggregate import contract_and_sort
from .errors import BudgetExceeded
from .model import Profile, ReviewGraph, positions
from .properties import check_gu, check_pu

# reviewer 0 reviews papers {0, 1}, reviewer 1 {1, 2}, reviewer 2 {2, 3}
CHAIN_REVIEW_SETS = ((0, 1), (1, 2), (2, 3))


@dataclass(frozen=True)
class RuleTable:
    """An aggregation rule given as an explicit profile -> output table."""

    review_sets: tuple
    num_papers: int
    table: dict = field(hash=False)

    @staticmethod
    def profiles(review_sets):
        return list(itertools.product(*(list(itertools.permutations(s)) for s in review_sets)))

    @classmethod
    def from_function(cls, review_sets, num_papers, rule, budget=100_000):
        review_sets = tuple(tuple(s) for s in review_sets)
        size = math.prod(math.factorial(len(s)) for s in review_sets)
        if size > budget:
            raise BudgetExceeded(f"{size} profiles exceed the budget of {budget}")
        table = {p: tuple(rule(Profile(p))) for p in cls.profiles(review_sets)}
        return cls(review_sets, num_papers, table)

    def __call__(self, profile: Profile):
        return self.table[profile.rankings]


@dataclass(frozen=True)
class InfluenceGraph:
    """Reviewer i -- paper j iff some unilateral change by i moves j."""

    num_reviewers: int
    num_papers: int
    edges: frozenset

    def papers_moved_by(self, i):
        return sorted(j for r, j in self.edges if r == i)

    def immune_papers(self, i):
        moved = set(self.papers_moved_by(i))
        return [j for j in range(self.num_papers) if j not in moved]

    @property
    def weakly_strategyproof(self) -> bool:
        return all(self.immune_papers(i) for i in range(self.num_reviewers))


def influence_graph(rule: RuleTable, budget: int = 100_000) -> InfluenceGraph:
    if len(rule.table) > budget:
        raise BudgetExceeded(f"{len(rule.table)} profiles exceed the budget of {budget}")
    m, n = len(rule.review_sets), rule.num_papers
    pos = {p: positions(out) for p, out in rule.table.items()}
    edges = set()
    for i in range(m):
        groups = {}
        for prof in rule.table:
            key = prof[:i] + prof[i + 1:]
            groups.setdefault(key, []).append(pos[prof])
        for outs in groups.values():
            first = outs[0]
            for other in outs[1:]:
                for j in range(n):
                    if other[j] != first[j]:
                        edges.add((i, j))
    return InfluenceGraph(m, n, frozenset(edges))


# -- pairwise unanimity under total rankings ---------------------------------

def count_total_ranking_rules(n: int, m: int, budget: int = 100_000) -> dict:
    """Enumerate every rule where all ``m`` reviewers rank all ``n`` papers.

    Counts the rules that are pairwise unanimous, and those that are also
    weakly strategyproof (each reviewer has a paper she can never move).
    """
    report = {"n": n, "m": m}
    if n < 2:
        report.update(in_scope=False, note="needs at least two papers; every rule is trivially constant")
        return report
    outputs = list(itertools.permutations(range(n)))
    review_sets = tuple(tuple(range(n)) for _ in range(m))
    profiles = RuleTable.profiles(review_sets)
    num_rules = len(outputs) ** len(profiles)
    if num_rules > budget:
        raise BudgetExceeded(f"{num_rules} rules exceed the budget of {budget}")
    rg = ReviewGraph(n, review_sets)
    allowed = [[o for o in outputs if check_pu(rg, Profile(p), o)] for p in profiles]
    num_pu = num_pu_wsp = 0
    example = None
    for choice in itertools.product(outputs, repeat=len(profiles)):
        if not all(o in ok for o, ok in zip(choice, allowed)):
            continue
        num_pu += 1
        rule = RuleTable(review_sets, n, dict(zip(profiles, choice)))
        if influence_graph(rule).weakly_strategyproof:
            num_pu_wsp += 1
            example = example or rule
    report.update(
        in_scope=True,
        num_profiles=len(profiles),
        num_rules=num_rules,
        num_pu_rules=num_pu,
        num_pu_and_wsp_rules=num_pu_wsp,
        unanimous_profiles=sum(1 for p in profiles if len(set(p)) == 1),
    )
    return report


# -- group unanimity vs weak strategyproofness on the chain ------------------

@dataclass
class SearchResult:
    sat: bool
    rule: dict | None
    nodes: int
    backtracks: int
    profiles: list

    def to_dict(self):
        return {
            "sat": self.sat,
            "nodes": self.nodes,
            "backtracks": self.backtracks,
            "profiles": [[list(r) for r in p] for p in self.profiles],
            "rule": None
            if self.rule is None
            else [[[list(r) for r in p], list(o)] for p, o in self.rule.items()],
        }


def search_rules(review_sets=CHAIN_REVIEW_SETS, num_papers=4, require_gu=True, require_wsp=True, profiles=None):
    """Backtracking search for a rule table that is GU and/or WSP.

    Profiles are fixed in lexicographic order and outputs tried in
    lexicographic order. GU prunes each profile's candidate outputs up
    front. For WSP each reviewer keeps the set of papers that every
    deviation pair seen so far leaves in place; an empty set prunes.
    ``profiles`` restricts the search to a subset (WSP is then only
    enforced between profiles of that subset).
    """
    review_sets = tuple(tuple(s) for s in review_sets)
    rg = ReviewGraph(num_papers, review_sets)
    profiles = RuleTable.profiles(review_sets) if profiles is None else [tuple(map(tuple, p)) for p in profiles]
    outputs = list(itertools.permutations(range(num_papers)))
    candidates = [
        [o for o in outputs if check_gu(rg, Profile(p), o)] if require_gu else outputs for p in profiles
    ]
    m = len(review_sets)
    # neighbours[k]: (earlier profile index, reviewer) pairs differing from profile k only in that reviewer
    neighbours = []
    for k, p in enumerate(profiles):
        near = []
        for e in range(k):
            diff = [i for i in range(m) if profiles[e][i] != p[i]]
            if len(diff) == 1:
                near.append((e, diff[0]))
        neighbours.append(near)

    chosen = [None] * len(profiles)
    chosen_pos = [None] * len(profiles)
    stats = {"nodes": 0, "backtracks": 0}

    def solve(k, immune):
        if k == len(profiles):
            return True
        for out in candidates[k]:
            stats["nodes"] += 1
            pos = positions(out)
            new = list(immune)
            ok = True
            if require_wsp:
                for e, i in neighbours[k]:
                    other = chosen_pos[e]
                    new[i] = {j for j in new[i] if other[j] == pos[j]}
                    if not new[i]:
                        ok = False
                        break
            if not ok:
                continue
            chosen[k], chosen_pos[k] = out, pos
            if solve(k + 1, new):
                return True
            stats["backtracks"] += 1
        chosen[k] = chosen_pos[k] = None
        return False

    sat = solve(0, [set(range(num_papers)) for _ in range(m)])
    rule = dict(zip(profiles, chosen)) if sat else None
    return SearchResult(sat, rule, stats["nodes"], stats["backtracks"], profiles)


def minimal_conflict(review_sets=CHAIN_REVIEW_SETS, num_papers=4):
    """Deletion-minimal set of profiles on which GU and WSP already clash."""
    core = RuleTable.profiles(review_sets)
    for p in list(core):
        trial = [q for q in core if q != p]
        if not search_rules(review_sets, num_papers, profiles=trial).sat:
            core = trial
    return core


def verify_chain_gu_wsp(review_sets=CHAIN_REVIEW_SETS, num_papers=4) -> dict:
    """Certificate that no rule on the chain instance is both GU and WSP.

    Also runs both relaxations and checks the rules they return: without
    WSP every output must pass the GU check, without GU the rule must be
    weakly strategyproof. Contract-and-Sort is included as a GU reference.
    """
    rg = ReviewGraph(num_papers, review_sets)
    full = search_rules(review_sets, num_papers)
    no_wsp = search_rules(review_sets, num_papers, require_wsp=False)
    no_gu = search_rules(review_sets, num_papers, require_gu=False)

    def all_gu(rule):
        return all(check_gu(rg, Profile(p), o) for p, o in rule.items())

    cas = RuleTable.from_function(review_sets, num_papers, lambda prof: contract_and_sort(prof, range(num_papers)))
    return {
        "unsat": not full.sat,
        "search": {"nodes": full.nodes, "backtracks": full.backtracks, "profiles": len(full.profiles)},
        "minimal_conflict": [[list(r) for r in p] for p in minimal_conflict(review_sets, num_papers)],
        "without_wsp": {
            "sat": no_wsp.sat,
            "witness_verified": bool(no_wsp.sat and all_gu(no_wsp.rule)),
            "contract_and_sort_is_gu": all_gu(cas.table),
            "contract_and_sort_is_wsp": influence_graph(cas).weakly_strategyproof,
        },
        "without_gu": {
            "sat": no_gu.sat,
            "witness_verified": bool(
                no_gu.sat and influence_graph(RuleTable(tuple(review_sets), num_papers, no_gu.rule)).weakly_strategyproof
            ),
            "constant_rule": bool(no_gu.sat and len(set(no_gu.rule.values())) == 1),
        },
    }
