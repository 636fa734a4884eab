import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strategyproof_review.assign import (
    assign_sides,
    divide_and_rank_assign,
    round_robin,
    validate_assignment,
)
from strategyproof_review.errors import ContractViolation, InfeasiblePartition
from strategyproof_review.model import AssignmentParams, ConflictGraph, ReviewGraph
from strategyproof_review.partition import ReachabilityTable, partition, verify_partition

from oracles import is_union_of_components, partition_oracle


def three_pairs():
    # components {r0,r1,p0,p1}, {r2,r3,p2,p3}, {r4,r5,p4,p5}
    edges = set()
    for b in (0, 2, 4):
        edges |= {(b, b), (b, b + 1), (b + 1, b + 1)}
    return ConflictGraph(6, 6, frozenset(edges))


def test_two_symmetric_components():
    g = ConflictGraph(4, 4, frozenset({(0, 0), (0, 1), (1, 1), (2, 2), (2, 3), (3, 3)}))
    res = partition(g, AssignmentParams(1, 1))
    assert res.ratio == 1
    assert {res.reviewers_C, res.reviewers_Cbar} == {(0, 1), (2, 3)}


def test_three_components_picks_one():
    g = three_pairs()
    res = partition(g, AssignmentParams(2, 1))
    assert len(res.reviewers_C) == 2 and len(res.papers_C) == 2
    assert res.ratio == 2
    assert partition_oracle(6, 6, g.conflicts, 2, 1) == (Fraction(2), 2, 2)
    assert verify_partition(res, g, AssignmentParams(2, 1))


def test_complete_bipartite_is_infeasible():
    g = ConflictGraph(3, 3, frozenset((r, p) for r in range(3) for p in range(3)))
    for mu in (1, 2, 3):
        with pytest.raises(InfeasiblePartition) as exc:
            partition(g, AssignmentParams(mu, 1))
        assert exc.value.exit_code == 3
        assert "prune" in str(exc.value)


def test_single_reviewer_is_contract_error():
    with pytest.raises(ContractViolation):
        partition(ConflictGraph(1, 1), AssignmentParams(1, 1))


def test_verify_partition_crossing_conflict():
    g = three_pairs()
    params = AssignmentParams(2, 1)
    res = partition(g, params)
    moved = type(res)(res.reviewers_C, res.papers_C[1:], res.reviewers_Cbar, res.papers_Cbar + res.papers_C[:1])
    check = verify_partition(moved, g, params)
    assert not check and check.clause == "crossing-conflict"
    r, p = check.witness
    assert (r, p) in g.conflicts


def test_verify_partition_ratio():
    g = three_pairs()
    res = partition(g, AssignmentParams(2, 1))
    check = verify_partition(res, g, AssignmentParams(2, 2))
    assert not check and check.clause == "ratio"


def test_table_counts_updates():
    table = ReachabilityTable.build([(2, 2)] * 3, 6, 6)
    assert table.cell_updates == 2 * 7 * 7
    assert table.reachable(4, 4) and not table.reachable(1, 1)


@pytest.mark.parametrize("seed", range(4))
def test_partition_matches_oracle_random(seed):
    rng = random.Random(seed)
    for _ in range(150):
        m, n = rng.randint(2, 9), rng.randint(1, 9)
        edges = frozenset((rng.randrange(m), rng.randrange(n)) for _ in range(rng.randint(0, m + n)))
        g = ConflictGraph(m, n, edges)
        mu, lam = rng.randint(1, n), rng.randint(1, 3)
        want = partition_oracle(m, n, edges, mu, lam)
        params = AssignmentParams(mu, lam)
        if want is None:
            with pytest.raises(InfeasiblePartition):
                partition(g, params)
            continue
        res = partition(g, params)
        assert (res.ratio, len(res.reviewers_C), len(res.papers_C)) == want
        assert is_union_of_components(m, n, edges, res.reviewers_C, res.papers_C)
        assert verify_partition(res, g, params)


# -- assignment ---------------------------------------------------------------

def test_round_robin_hand_trace():
    sets = round_robin([0, 1], [2, 3, 4, 5], AssignmentParams(2, 1))
    assert sets == {0: [2, 4], 1: [3, 5]}


def test_six_paper_fixture_assignment():
    rg, res = divide_and_rank_assign(three_pairs(), AssignmentParams(2, 1))
    assert res.reviewers_C == (0, 1)
    assert rg.review_sets[:2] == ((2, 4), (3, 5))


def test_mu_equals_lambda_even_split():
    sets = round_robin([0, 1, 2], [0, 1, 2], AssignmentParams(2, 2))
    assert all(len(v) == 2 for v in sets.values())


def test_validate_assignment_own_paper():
    g = ConflictGraph(2, 2, frozenset({(0, 0), (1, 1)}))
    bad = ReviewGraph(2, ((0,), (0, 1)))
    check = validate_assignment(bad, g, AssignmentParams(2, 1))
    assert not check and check.clause == "conflict"
    assert check.witness == {"reviewer": 0, "paper": 0}


def test_validate_assignment_review_floor():
    g = ConflictGraph(3, 2)
    rg = ReviewGraph(2, ((0,), (0,), (1,)))
    check = validate_assignment(rg, g, AssignmentParams(2, 2))
    assert not check and check.clause == "review-floor" and check.witness["paper"] == 1


def test_assign_rejects_misbehaving_strategy():
    g = three_pairs()
    params = AssignmentParams(2, 1)
    res = partition(g, params)

    def lazy(revs, paps, params):
        return {revs[0]: list(paps)}

    with pytest.raises(ContractViolation, match="lazy"):
        assign_sides(g, params, res, lazy)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_random_feasible_instances_are_valid(seed):
    rng = random.Random(seed)
    m, n = rng.randint(2, 12), rng.randint(1, 12)
    edges = frozenset((rng.randrange(m), rng.randrange(n)) for _ in range(rng.randint(0, n)))
    g = ConflictGraph(m, n, edges)
    params = AssignmentParams(rng.randint(1, n), rng.randint(1, 3))
    try:
        rg, res = divide_and_rank_assign(g, params)
    except InfeasiblePartition:
        assert partition_oracle(m, n, edges, params.mu, params.lam) is None
        return
    assert verify_partition(res, g, params)
    assert validate_assignment(rg, g, params)
    C = set(res.papers_C)
    for i, s in enumerate(rg.review_sets):
        mine = i in res.reviewers_C
        # reviewers only see the other side, and their own papers sit on their side
        assert all((p in C) != mine for p in s)
        assert all((p in C) == mine for p in g.papers_of[i])
    for side in (res.reviewers_C, res.reviewers_Cbar):
        loads = [len(rg.review_sets[i]) for i in side]
        if loads:
            assert max(loads) - min(loads) <= 1
