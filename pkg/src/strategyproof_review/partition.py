"""Two-sided split of the conflict graph with no conflict crossing the split.

The connected components of the conflict graph are the indivisible units. A
subset-sum table over their ``(reviewers, papers)`` sizes enumerates every
achievable side ``C``; a side is usable when each half can review the other
within the load limits. Complexity is O(K * m * n) for K components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .components import connected_components
from .errors import ContractViolation, InfeasiblePartition
from .model import AssignmentParams, Check, ConflictGraph

INF = float("inf")


@dataclass(frozen=True)
class PartitionResult:
    reviewers_C: tuple
    papers_C: tuple
    reviewers_Cbar: tuple
    papers_Cbar: tuple

    def __post_init__(self):
        for name in ("reviewers_C", "papers_C", "reviewers_Cbar", "papers_Cbar"):
            object.__setattr__(self, name, tuple(sorted(int(x) for x in getattr(self, name))))

    @property
    def ratio(self):
        """``max(|P_C|/|R_Cbar|, |P_Cbar|/|R_C|)`` as a Fraction (inf if undefined)."""
        return max(
            _ratio(len(self.papers_C), len(self.reviewers_Cbar)),
            _ratio(len(self.papers_Cbar), len(self.reviewers_C)),
        )

    def side_of_reviewer(self, i):
        return "C" if i in self.reviewers_C else "Cbar"

    def swapped(self) -> "PartitionResult":
        return PartitionResult(self.reviewers_Cbar, self.papers_Cbar, self.reviewers_C, self.papers_C)


def _ratio(num, den):
    if den == 0:
        return Fraction(0) if num == 0 else INF
    return Fraction(num, den)


def cell_ratio(r, p, m, n):
    """Load ratio of the split whose side C holds ``r`` reviewers and ``p`` papers."""
    return max(_ratio(p, m - r), _ratio(n - p, r))


def cell_feasible(r, p, m, n, params: AssignmentParams) -> bool:
    """Each side's papers fit the opposite reviewers at ``lam`` reviews and ``mu`` load.

    Written without division: zero-reviewer sides only pass with zero
    papers. A non-empty paper side also needs at least ``lam`` distinct
    reviewers across the split.
    """
    mu, lam = params.mu, params.lam
    if p * lam > mu * (m - r) or (n - p) * lam > mu * r:
        return False
    if p > 0 and m - r < lam:
        return False
    if n - p > 0 and r < lam:
        return False
    return True


@dataclass
class ReachabilityTable:
    """``table[k, r, p]`` is True iff some subset of components ``k..K-1`` sums to (r, p).

    Row ``K`` holds only the empty sum, so ``table[0]`` covers every subset.
    """

    sizes: tuple
    table: np.ndarray
    cell_updates: int

    @classmethod
    def build(cls, sizes, m, n):
        K = len(sizes)
        T = np.zeros((K + 1, m + 1, n + 1), dtype=bool)
        T[K, 0, 0] = True
        updates = 0
        for k in range(K - 1, -1, -1):
            rk, pk = sizes[k]
            T[k] = T[k + 1]
            T[k, rk:, pk:] |= T[k + 1, : m + 1 - rk, : n + 1 - pk]
            if k < K - 1:
                updates += (m + 1) * (n + 1)
        return cls(tuple(sizes), T, updates)

    def reachable(self, r, p) -> bool:
        return bool(self.table[0, r, p])

    def backtrack(self, r, p):
        """Component indices forming side C for target cell (r, p).

        Walks components in index order and includes the current one whenever
        the remainder stays reachable from the components after it.
        """
        chosen = []
        for k, (rk, pk) in enumerate(self.sizes):
            if rk <= r and pk <= p and self.table[k + 1, r - rk, p - pk]:
                chosen.append(k)
                r, p = r - rk, p - pk
        assert (r, p) == (0, 0)
        return chosen


def partition(graph: ConflictGraph, params: AssignmentParams) -> PartitionResult:
    """Split reviewers and papers into two conflict-free sides.

    Among feasible cells the most balanced one is chosen: smallest load
    ratio, then fewest reviewers in C, then fewest papers in C.

    Raises
    ------
    InfeasiblePartition
        If no achievable split passes the load test; carries the best ratio
        reachable by any split.
    """
    m, n = graph.num_reviewers, graph.num_papers
    if m < 2:
        raise ContractViolation(f"partition needs at least two reviewers, got {m}")
    comps = connected_components(graph)
    table = ReachabilityTable.build(comps.sizes, m, n)

    best, best_any = None, INF
    for r in range(m + 1):
        for p in range(n + 1):
            if not table.reachable(r, p):
                continue
            ratio = cell_ratio(r, p, m, n)
            best_any = min(best_any, ratio)
            if cell_feasible(r, p, m, n, params):
                key = (ratio, r, p)
                if best is None or key < best:
                    best = key
    if best is None:
        raise InfeasiblePartition(
            f"no conflict-free split satisfies mu={params.mu}, lambda={params.lam}; "
            f"best achievable ratio {best_any} vs required {Fraction(params.mu, params.lam)}",
            best_ratio=best_any,
        )
    _, r, p = best
    in_C = set(table.backtrack(r, p))
    rc, pc, rb, pb = [], [], [], []
    for k, (rs, ps) in enumerate(comps.members):
        if k in in_C:
            rc.extend(rs)
            pc.extend(ps)
        else:
            rb.extend(rs)
            pb.extend(ps)
    return PartitionResult(rc, pc, rb, pb)


def verify_partition(result: PartitionResult, graph: ConflictGraph, params: AssignmentParams) -> Check:
    m, n = graph.num_reviewers, graph.num_papers
    for kind, a, b, total in (
        ("reviewer", result.reviewers_C, result.reviewers_Cbar, m),
        ("paper", result.papers_C, result.papers_Cbar, n),
    ):
        both = set(a) & set(b)
        if both:
            return Check(False, "overlap", (kind, min(both)))
        if len(a) != len(set(a)) or len(b) != len(set(b)):
            return Check(False, "overlap", (kind, "duplicate"))
        missing = set(range(total)) - set(a) - set(b)
        extra = (set(a) | set(b)) - set(range(total))
        if missing or extra:
            return Check(False, "cover", (kind, min(missing | extra)))
    rc, pc = set(result.reviewers_C), set(result.papers_C)
    for r, p in sorted(graph.conflicts):
        if (r in rc) != (p in pc):
            return Check(False, "crossing-conflict", (r, p))
    r, p = len(result.reviewers_C), len(result.papers_C)
    if cell_ratio(r, p, m, n) > Fraction(params.mu, params.lam):
        return Check(
            False,
            "ratio",
            {
                "papers_C": p,
                "reviewers_Cbar": m - r,
                "papers_Cbar": n - p,
                "reviewers_C": r,
                "ratio": str(cell_ratio(r, p, m, n)),
                "limit": str(Fraction(params.mu, params.lam)),
            },
        )
    if not cell_feasible(r, p, m, n, params):
        return Check(False, "reviewer-availability", {"reviewers_C": r, "reviewers_Cbar": m - r, "lambda": params.lam})
    return Check(True)
