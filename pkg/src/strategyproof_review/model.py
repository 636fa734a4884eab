"""Core data model: conflict graphs, assignments, rankings and profiles.

Reviewers and papers are dense 0-based integer indices. External string ids
live in the ``reviewer_ids`` / ``paper_ids`` side tables of a
:class:`ConflictGraph` and are only consulted when reading or writing files.

Rankings are plain tuples of paper indices, best first. An aggregate ranking
is a ranking covering every paper exactly once; positions are 1-based, so
``position[j] == 1`` means paper ``j`` is ranked first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import ContractViolation

Ranking = tuple  # tuple[int, ...], best first


def _default_ids(count):
    return tuple(str(i) for i in range(count))


@dataclass(frozen=True)
class ConflictGraph:
    """Bipartite reviewer/paper graph of conflicts of interest."""

    num_reviewers: int
    num_papers: int
    conflicts: frozenset = frozenset()
    reviewer_ids: tuple = None
    paper_ids: tuple = None

    def __post_init__(self):
        conflicts = frozenset((int(r), int(p)) for r, p in self.conflicts)
        for r, p in conflicts:
            if not (0 <= r < self.num_reviewers and 0 <= p < self.num_papers):
                raise ContractViolation(f"conflict ({r}, {p}) out of range")
        object.__setattr__(self, "conflicts", conflicts)
        if self.reviewer_ids is None:
            object.__setattr__(self, "reviewer_ids", _default_ids(self.num_reviewers))
        if self.paper_ids is None:
            object.__setattr__(self, "paper_ids", _default_ids(self.num_papers))
        object.__setattr__(self, "reviewer_ids", tuple(self.reviewer_ids))
        object.__setattr__(self, "paper_ids", tuple(self.paper_ids))
        if len(self.reviewer_ids) != self.num_reviewers or len(self.paper_ids) != self.num_papers:
            raise ContractViolation("id table size does not match vertex count")
        if len(set(self.reviewer_ids)) != self.num_reviewers or len(set(self.paper_ids)) != self.num_papers:
            raise ContractViolation("id tables must not contain duplicates")

    @cached_property
    def papers_of(self) -> tuple:
        """Per reviewer, the sorted tuple of conflicted papers."""
        out = [[] for _ in range(self.num_reviewers)]
        for r, p in self.conflicts:
            out[r].append(p)
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def reviewers_of(self) -> tuple:
        """Per paper, the sorted tuple of conflicted reviewers."""
        out = [[] for _ in range(self.num_papers)]
        for r, p in self.conflicts:
            out[p].append(r)
        return tuple(tuple(sorted(x)) for x in out)

    def degree(self, reviewer: int) -> int:
        return len(self.papers_of[reviewer])

    def without_reviewers(self, removed: Iterable[int]) -> "ConflictGraph":
        """Residual graph with the given reviewers deleted (papers are kept)."""
        removed = set(removed)
        keep = [i for i in range(self.num_reviewers) if i not in removed]
        new_index = {old: new for new, old in enumerate(keep)}
        conflicts = {(new_index[r], p) for r, p in self.conflicts if r in new_index}
        return ConflictGraph(
            len(keep),
            self.num_papers,
            frozenset(conflicts),
            tuple(self.reviewer_ids[i] for i in keep),
            self.paper_ids,
        )


@dataclass(frozen=True)
class AssignmentParams:
    """Reviewer load cap ``mu`` and per-paper review floor ``lam``."""

    mu: int
    lam: int

    def __post_init__(self):
        if int(self.mu) != self.mu or int(self.lam) != self.lam:
            raise ContractViolation("mu and lambda must be integers")
        if self.mu < 1 or self.lam < 1:
            raise ContractViolation(f"need mu >= 1 and lambda >= 1, got mu={self.mu}, lambda={self.lam}")

    def check_against(self, num_papers: int):
        if self.mu > num_papers and num_papers > 0:
            raise ContractViolation(f"mu={self.mu} exceeds the number of papers {num_papers}")


@dataclass(frozen=True)
class ReviewGraph:
    """Assignment of papers to reviewers: ``review_sets[i]`` is reviewer i's papers."""

    num_papers: int
    review_sets: tuple
    params: AssignmentParams = None

    def __post_init__(self):
        sets = tuple(tuple(int(p) for p in s) for s in self.review_sets)
        for i, s in enumerate(sets):
            if len(set(s)) != len(s):
                raise ContractViolation(f"reviewer {i} is assigned a paper twice")
            for p in s:
                if not 0 <= p < self.num_papers:
                    raise ContractViolation(f"reviewer {i} assigned unknown paper {p}")
        object.__setattr__(self, "review_sets", sets)

    @property
    def num_reviewers(self) -> int:
        return len(self.review_sets)

    @cached_property
    def reviewers_of(self) -> tuple:
        out = [[] for _ in range(self.num_papers)]
        for i, s in enumerate(self.review_sets):
            for p in s:
                out[p].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def co_reviewed_pairs(self) -> tuple:
        """Sorted unordered pairs ``(a, b)``, ``a < b``, reviewed together by someone."""
        pairs = set()
        for s in self.review_sets:
            ordered = sorted(s)
            for x in range(len(ordered)):
                for y in range(x + 1, len(ordered)):
                    pairs.add((ordered[x], ordered[y]))
        return tuple(sorted(pairs))


@dataclass(frozen=True)
class Profile:
    """One strict ranking (best first) per reviewer."""

    rankings: tuple

    def __post_init__(self):
        rankings = tuple(tuple(int(p) for p in r) for r in self.rankings)
        for i, r in enumerate(rankings):
            if len(set(r)) != len(r):
                raise ContractViolation(f"ranking of reviewer {i} repeats a paper (ties are not allowed)")
        object.__setattr__(self, "rankings", rankings)

    @property
    def num_reviewers(self) -> int:
        return len(self.rankings)

    def restrict(self, papers: Iterable[int]) -> "Profile":
        keep = set(papers)
        return Profile(tuple(tuple(p for p in r if p in keep) for r in self.rankings))

    def replace(self, reviewer: int, ranking: Sequence[int]) -> "Profile":
        rankings = list(self.rankings)
        rankings[reviewer] = tuple(ranking)
        return Profile(tuple(rankings))

    def check_aligned(self, rg: ReviewGraph):
        """Raise :class:`ContractViolation` unless ranking i covers exactly ``P_i``."""
        if self.num_reviewers != rg.num_reviewers:
            raise ContractViolation(
                f"profile has {self.num_reviewers} rankings but assignment has {rg.num_reviewers} reviewers"
            )
        for i, (r, s) in enumerate(zip(self.rankings, rg.review_sets)):
            if set(r) != set(s):
                raise ContractViolation(f"ranking of reviewer {i} does not match its review set")


def positions(ranking: Sequence[int]) -> dict:
    """Map paper -> 1-based position."""
    return {p: k + 1 for k, p in enumerate(ranking)}


def as_aggregate(ranking: Sequence[int], num_papers: int) -> tuple:
    """Validate that ``ranking`` is a permutation of ``range(num_papers)``."""
    ranking = tuple(int(p) for p in ranking)
    if sorted(ranking) != list(range(num_papers)):
        raise ContractViolation(f"output is not a permutation of {num_papers} papers")
    return ranking


class Check(NamedTuple):
    """Outcome of a structural audit; falsy when a clause is violated."""

    ok: bool
    clause: str = None
    witness: object = None

    def __bool__(self):
        return self.ok
