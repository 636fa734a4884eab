"""Connected components of a conflict graph and max-degree author pruning."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ContractViolation
from .model import ConflictGraph


@dataclass(frozen=True)
class ComponentStats:
    """Component count and ``(reviewers, papers)`` sizes, largest papers first."""

    num_components: int
    sizes: tuple  # ((r_k, p_k), ...) sorted by p desc, then r desc

    @classmethod
    def from_sizes(cls, sizes):
        ordered = tuple(sorted(sizes, key=lambda rp: (-rp[1], -rp[0])))
        return cls(len(ordered), ordered)

    @property
    def largest(self):
        return self.sizes[0] if self.sizes else (0, 0)

    @property
    def second_largest(self):
        return self.sizes[1] if len(self.sizes) > 1 else (0, 0)


@dataclass(frozen=True)
class Components:
    """Membership labeling of every vertex.

    Components are numbered in discovery order: a BFS is started from each
    unvisited reviewer in index order, then from each unvisited paper.
    """

    reviewer_labels: tuple
    paper_labels: tuple
    members: tuple  # ((reviewers tuple, papers tuple), ...) in label order

    @property
    def sizes(self):
        return tuple((len(r), len(p)) for r, p in self.members)

    @property
    def stats(self) -> ComponentStats:
        return ComponentStats.from_sizes(self.sizes)

    def __len__(self):
        return len(self.members)


def connected_components(graph: ConflictGraph) -> Components:
    m, n = graph.num_reviewers, graph.num_papers
    r_label = [-1] * m
    p_label = [-1] * n
    members = []

    def bfs(start_is_reviewer, start):
        label = len(members)
        rs, ps = [], []
        queue = deque([(start_is_reviewer, start)])
        if start_is_reviewer:
            r_label[start] = label
        else:
            p_label[start] = label
        while queue:
            is_rev, v = queue.popleft()
            if is_rev:
                rs.append(v)
                for p in graph.papers_of[v]:
                    if p_label[p] < 0:
                        p_label[p] = label
                        queue.append((False, p))
            else:
                ps.append(v)
                for r in graph.reviewers_of[v]:
                    if r_label[r] < 0:
                        r_label[r] = label
                        queue.append((True, r))
        members.append((tuple(sorted(rs)), tuple(sorted(ps))))

    for i in range(m):
        if r_label[i] < 0:
            bfs(True, i)
    for j in range(n):
        if p_label[j] < 0:
            bfs(False, j)
    return Components(tuple(r_label), tuple(p_label), tuple(members))


@dataclass(frozen=True)
class PruneTrace:
    """Reviewers removed (original indices, in order) and stats at checkpoints."""

    removed: tuple
    removed_degrees: tuple  # degree of each removed reviewer at the moment of removal
    checkpoints: tuple
    stats: tuple  # ComponentStats per checkpoint

    def at(self, k: int) -> ComponentStats:
        return self.stats[self.checkpoints.index(k)]


def prune_top_degree(graph: ConflictGraph, num_remove: int, checkpoints=(), adaptive: bool = True) -> PruneTrace:
    """Greedily delete the reviewer of maximum conflict degree, ``num_remove`` times.

    Ties go to the lowest reviewer index. With ``adaptive`` the degrees are
    recomputed on the residual graph after each removal; otherwise the order
    is fixed by the initial degrees. Papers are never removed, so a
    reviewer's degree cannot change when others leave and both modes yield
    the same order; the flag is kept so callers can state which one they mean.
    """
    if not 0 <= num_remove <= graph.num_reviewers:
        raise ContractViolation(f"cannot remove {num_remove} of {graph.num_reviewers} reviewers")
    checkpoints = tuple(sorted(set(int(k) for k in checkpoints)))
    if checkpoints and (checkpoints[0] < 0 or checkpoints[-1] > num_remove):
        raise ContractViolation(f"checkpoints must lie in [0, {num_remove}]")

    degree = [graph.degree(i) for i in range(graph.num_reviewers)]
    alive = [True] * graph.num_reviewers
    initial_order = sorted(range(graph.num_reviewers), key=lambda i: (-degree[i], i))
    removed, removed_deg, snapshots = [], [], {}

    def snapshot():
        residual = graph.without_reviewers(removed)
        snapshots[len(removed)] = connected_components(residual).stats

    if 0 in checkpoints:
        snapshot()
    for step in range(num_remove):
        if adaptive:
            best = max((i for i in range(graph.num_reviewers) if alive[i]), key=lambda i: (degree[i], -i))
        else:
            best = initial_order[step]
        removed.append(best)
        removed_deg.append(degree[best])
        alive[best] = False
        if step + 1 in checkpoints:
            snapshot()
    return PruneTrace(tuple(removed), tuple(removed_deg), checkpoints, tuple(snapshots[k] for k in checkpoints))
