"""Property checkers for review processes and impossibility witnesses.

GU  group unanimity: unanimous splits of the papers are respected for
    co-reviewed cross pairs.
PU  pairwise unanimity: co-reviewed pairs ordered the same way by all their
    common reviewers keep that order.
SP  strategyproofness w.r.t. a conflict graph: no reviewer can move a paper
    she is conflicted with by changing her own ranking.
WSP weak strategyproofness: each reviewer has some paper she cannot move.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
import random
from collections import deque
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import BudgetExceeded, ContractViolation
from .model import ConflictGraph, Profile, ReviewGraph, positions

Aggregator = Callable[[Profile], tuple]


@dataclass
class PropertyReport:
    property: str
    verdict: bool
    witness: dict | None = None
    notes: str = ""
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=list) + "\n"


# -- unanimity ---------------------------------------------------------------

def _reachability(n, rankings):
    succ = [set() for _ in range(n)]
    for r in rankings:
        for a, b in zip(r, r[1:]):
            succ[a].add(b)
    reach = []
    for s in range(n):
        seen = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        reach.append(seen)
    return reach


def check_gu(rg: ReviewGraph, profile: Profile, output) -> PropertyReport:
    """Group unanimity of one output, checked through reachability.

    A set closed under "ranked directly above by someone" is exactly a
    unanimous cut, so GU fails iff some co-reviewed pair ``(x, y)`` has a
    path ``x ~> y`` but none back, and the output puts ``y`` above ``x``.
    """
    profile.check_aligned(rg)
    n = rg.num_papers
    reach = _reachability(n, profile.rankings)
    pos = positions(output)
    for a, b in rg.co_reviewed_pairs:
        for x, y in ((a, b), (b, a)):
            if y in reach[x] and x not in reach[y] and pos[x] > pos[y]:
                cut = sorted(v for v in range(n) if x in reach[v])
                return PropertyReport(
                    "GU",
                    False,
                    {"pair": [x, y], "cut": cut, "profile": [list(r) for r in profile.rankings], "output": list(output)},
                )
    return PropertyReport("GU", True)


def unanimous_pairs(rg: ReviewGraph, profile: Profile) -> list:
    """Ordered pairs ``(x, y)`` co-reviewed and ranked x above y by every common reviewer."""
    pos = [positions(r) for r in profile.rankings]
    out = []
    for a, b in rg.co_reviewed_pairs:
        common = [i for i in rg.reviewers_of[a] if b in pos[i]]
        if all(pos[i][a] < pos[i][b] for i in common):
            out.append((a, b))
        elif all(pos[i][b] < pos[i][a] for i in common):
            out.append((b, a))
    return out


def check_pu(rg: ReviewGraph, profile: Profile, output) -> PropertyReport:
    profile.check_aligned(rg)
    pos = positions(output)
    for x, y in unanimous_pairs(rg, profile):
        if pos[x] > pos[y]:
            return PropertyReport(
                "PU", False, {"pair": [x, y], "profile": [list(r) for r in profile.rankings], "output": list(output)}
            )
    return PropertyReport("PU", True)


# -- strategyproofness -------------------------------------------------------

def profile_space_size(rg: ReviewGraph) -> int:
    return math.prod(math.factorial(len(s)) for s in rg.review_sets)


def all_profiles(rg: ReviewGraph):
    """Every profile under ``rg``, as tuples of rankings."""
    return itertools.product(*(list(itertools.permutations(s)) for s in rg.review_sets))


def check_sp_exhaustive(rg: ReviewGraph, cg: ConflictGraph, aggregator: Aggregator, budget: int = 200_000) -> PropertyReport:
    """Strategyproofness by enumerating every profile and unilateral deviation.

    Raises :class:`BudgetExceeded` when the profile space is larger than
    ``budget``; use :func:`check_sp_randomized` there.
    """
    size = profile_space_size(rg)
    if size > budget:
        raise BudgetExceeded(f"{size} profiles exceed the budget of {budget}; use the randomized check")
    choices = [list(itertools.permutations(s)) for s in rg.review_sets]
    outputs = {}
    for rankings in itertools.product(*choices):
        outputs[rankings] = positions(aggregator(Profile(rankings)))
    deviations = 0
    for i, conflicted in enumerate(cg.papers_of):
        if not conflicted or len(choices[i]) < 2:
            continue
        others = choices[:i] + [[None]] + choices[i + 1:]
        for base in itertools.product(*others):
            base = list(base)
            first = None
            for own in choices[i]:
                base[i] = own
                key = tuple(base)
                pos = outputs[key]
                if first is None:
                    first = (key, pos)
                    continue
                deviations += 1
                for j in conflicted:
                    if pos[j] != first[1][j]:
                        return PropertyReport(
                            "SP",
                            False,
                            {
                                "reviewer": i,
                                "paper": j,
                                "profile": [list(r) for r in first[0]],
                                "deviation": list(own),
                                "positions": [first[1][j], pos[j]],
                            },
                            stats={"profiles": size},
                        )
    return PropertyReport("SP", True, notes="exhaustive", stats={"profiles": size, "deviations": deviations})


def random_profile(rg: ReviewGraph, rng: random.Random) -> Profile:
    rankings = []
    for s in rg.review_sets:
        r = list(s)
        rng.shuffle(r)
        rankings.append(tuple(r))
    return Profile(tuple(rankings))


def check_sp_randomized(
    rg: ReviewGraph, cg: ConflictGraph, aggregator: Aggregator, trials: int, seed: int
) -> PropertyReport:
    """Sampled strategyproofness: ``trials`` random (profile, reviewer, deviation) triples.

    A true verdict is one-sided evidence only. Failures carry a witness
    that :func:`replay_sp_witness` reproduces.
    """
    rng = random.Random(seed)
    candidates = [i for i in range(rg.num_reviewers) if cg.papers_of[i] and len(rg.review_sets[i]) >= 2]
    if trials == 0 or not candidates:
        why = "0 trials" if trials == 0 else "no reviewer has both a conflict and two papers to reorder"
        return PropertyReport("SP", True, notes=f"vacuous: {why}", stats={"trials": 0, "seed": seed})
    for _ in range(trials):
        profile = random_profile(rg, rng)
        i = rng.choice(candidates)
        dev = list(rg.review_sets[i])
        while True:
            rng.shuffle(dev)
            if tuple(dev) != profile.rankings[i]:
                break
        before = positions(aggregator(profile))
        after = positions(aggregator(profile.replace(i, dev)))
        for j in cg.papers_of[i]:
            if before[j] != after[j]:
                return PropertyReport(
                    "SP",
                    False,
                    {
                        "reviewer": i,
                        "paper": j,
                        "profile": [list(r) for r in profile.rankings],
                        "deviation": dev,
                        "positions": [before[j], after[j]],
                    },
                    notes="randomized",
                    stats={"trials": trials, "seed": seed},
                )
    return PropertyReport("SP", True, notes=f"randomized: no violation in {trials} trials", stats={"trials": trials, "seed": seed})


def replay_sp_witness(witness: dict, aggregator: Aggregator) -> bool:
    """True if the witness still shows the paper moving under the deviation."""
    profile = Profile(tuple(tuple(r) for r in witness["profile"]))
    j = witness["paper"]
    a = positions(aggregator(profile))[j]
    b = positions(aggregator(profile.replace(witness["reviewer"], witness["deviation"])))[j]
    return a != b and [a, b] == list(witness["positions"])


# -- review structure --------------------------------------------------------

def review_relation_graph(rg: ReviewGraph) -> dict:
    """Paper adjacency: two papers are adjacent iff some reviewer reviews both."""
    adj = {p: set() for p in range(rg.num_papers)}
    for a, b in rg.co_reviewed_pairs:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def paper_relation_graph(rg: ReviewGraph):
    """Distinct review sets, and the index pairs of sets sharing at least one paper."""
    sets = sorted({tuple(sorted(s)) for s in rg.review_sets if s})
    edges = [(a, b) for a in range(len(sets)) for b in range(a + 1, len(sets)) if set(sets[a]) & set(sets[b])]
    return sets, edges


def _covering_reviewer(rg, papers):
    need = set(papers)
    for i, s in enumerate(rg.review_sets):
        if need <= set(s):
            return i
    return None


def simple_cycles(adj: dict, min_len: int, max_len: int):
    """Simple cycles of the undirected graph ``adj``, each listed once.

    A cycle is reported starting at its smallest vertex with its second
    vertex smaller than its last.
    """
    for s in sorted(adj):
        path = [s]
        on_path = {s}

        def extend(v):
            for w in sorted(adj[v]):
                if w == s and len(path) >= min_len and path[1] < path[-1]:
                    yield list(path)
                elif w > s and w not in on_path and len(path) < max_len:
                    path.append(w)
                    on_path.add(w)
                    yield from extend(w)
                    path.pop()
                    on_path.discard(w)

        yield from extend(s)


def find_uncovered_cycle(rg: ReviewGraph, max_len: int = 8):
    """First cycle of length >= 3 in the review-relation graph that no single reviewer covers."""
    adj = review_relation_graph(rg)
    for cyc in simple_cycles(adj, 3, max_len):
        if _covering_reviewer(rg, cyc) is None:
            return cyc
    return None


def _topological_extension(items, edges):
    """Kahn's algorithm with smallest-index tie-break; items sorted ascending first."""
    items = sorted(items)
    indeg = dict.fromkeys(items, 0)
    succ = {v: [] for v in items}
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    heap = [v for v in items if indeg[v] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        v = heapq.heappop(heap)
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(out) != len(items):
        raise ContractViolation("constraint fragment is cyclic")
    return tuple(out)


def pu_cycle_witness(rg: ReviewGraph, cycle):
    """Profile showing that no output can be pairwise unanimous.

    For a cycle ``c_1, ..., c_l`` (l >= 3) of co-reviewed papers that no
    single reviewer covers, every reviewer of both ``c_j`` and ``c_{j+1}``
    ranks ``c_j`` first. Each reviewer's constraints are then a proper
    subset of the cycle's arcs, hence acyclic, and are extended to a total
    order. PU would force ``c_1 > c_2 > ... > c_l > c_1``.

    Returns ``(profile, constraint_cycle)``, the latter the list of arcs.
    """
    cycle = [int(p) for p in cycle]
    if len(cycle) < 3:
        raise ContractViolation(f"cycle {cycle} is shorter than 3")
    if len(set(cycle)) != len(cycle):
        raise ContractViolation(f"cycle {cycle} repeats a paper")
    arcs = list(zip(cycle, cycle[1:] + cycle[:1]))
    adj = review_relation_graph(rg)
    for a, b in arcs:
        if b not in adj[a]:
            raise ContractViolation(f"papers {a} and {b} are not reviewed together")
    cover = _covering_reviewer(rg, cycle)
    if cover is not None:
        raise ContractViolation(f"reviewer {cover} reviews every paper of the cycle")
    rankings = []
    for s in rg.review_sets:
        mine = set(s)
        rankings.append(_topological_extension(s, [(a, b) for a, b in arcs if a in mine and b in mine]))
    return Profile(tuple(rankings)), arcs


def _shortest_cycle(num_vertices, edges):
    """Shortest cycle of a simple undirected graph as a vertex list, or None.

    For each edge (a, b) the shortest a-b path avoiding that edge closes a
    cycle; the overall minimum is returned.
    """
    adj = {v: set() for v in range(num_vertices)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    best = None
    for a, b in edges:
        parent = {a: None}
        queue = deque([a])
        while queue and b not in parent:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if (v, w) in ((a, b), (b, a)) or w in parent:
                    continue
                parent[w] = v
                queue.append(w)
        if b in parent:
            path = [b]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            if best is None or len(path) < len(best):
                best = path[::-1]
    return best


def pu_necessary_conditions(rg: ReviewGraph) -> dict:
    """Audit the conditions every PU review process with equal review loads must meet.

    Requires all review sets to have the same size ``mu >= 2``. Reports:

    ``long_cycle``      no review-relation cycle longer than ``mu`` (searched up to ``mu + 3``)
    ``intersections``   every two review sets share 0, 1 or ``mu`` papers
    ``distinct_sets``   at most ``(n - 1) / (mu - 1)`` distinct review sets
    ``set_forest``      the graph of distinct review sets sharing a paper is a forest

    A failed condition rules out pairwise unanimity for this assignment; its
    witness is attached.
    """
    sizes = {len(s) for s in rg.review_sets}
    if len(sizes) != 1:
        raise ContractViolation(f"review sets have differing sizes {sorted(sizes)}")
    mu = sizes.pop()
    if mu < 2:
        raise ContractViolation("review sets must have at least two papers")
    n = rg.num_papers
    report = {"mu": mu, "n": n}

    adj = review_relation_graph(rg)
    long_cycle = next(simple_cycles(adj, mu + 1, mu + 3), None)
    report["long_cycle"] = {"ok": long_cycle is None, "witness": long_cycle}

    bad = None
    for i1, i2 in itertools.combinations(range(rg.num_reviewers), 2):
        s1, s2 = set(rg.review_sets[i1]), set(rg.review_sets[i2])
        common = s1 & s2
        if len(common) not in (0, 1, mu):
            j1, j2 = min(s1 - s2), min(s2 - s1)
            j3, j4 = sorted(common)[:2]
            bad = {"reviewers": [i1, i2], "shared": len(common), "cycle": [j1, j3, j2, j4]}
            break
    report["intersections"] = {"ok": bad is None, "witness": bad}

    sets, edges = paper_relation_graph(rg)
    bound = Fraction(n - 1, mu - 1)
    report["distinct_sets"] = {
        "ok": len(sets) <= bound,
        "witness": None if len(sets) <= bound else {"distinct": len(sets), "bound": str(bound)},
        "distinct": len(sets),
        "bound": str(bound),
    }

    cyc = _shortest_cycle(len(sets), edges)
    forest_witness = None
    if cyc is not None:
        forest_witness = {"sets": [list(sets[k]) for k in cyc]}
        papers = [min(set(sets[a]) & set(sets[b])) for a, b in zip(cyc, cyc[1:] + cyc[:1])]
        if len(set(papers)) == len(papers) >= 3 and _covering_reviewer(rg, papers) is None:
            forest_witness["cycle"] = papers
    report["set_forest"] = {"ok": cyc is None, "witness": forest_witness}
    report["pu_possible"] = all(report[k]["ok"] for k in ("long_cycle", "intersections", "distinct_sets", "set_forest"))
    return report
