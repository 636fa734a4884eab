"""Strategyproof peer review: partition, assign, aggregate, and audit."""

from .aggregate import (
    borda_aggregate,
    contract_and_sort,
    divide_and_rank_aggregate,
    interleave,
    slot_positions,
)
from .assign import divide_and_rank_assign, round_robin, validate_assignment
from .components import connected_components, prune_top_degree
from .errors import BudgetExceeded, ContractViolation, InfeasiblePartition, ParseError, ReviewError
from .impossibility import count_total_ranking_rules, verify_chain_gu_wsp
from .misplacement import displacement_bound, misplacement_monte_carlo
from .model import AssignmentParams, ConflictGraph, Profile, ReviewGraph
from .partition import PartitionResult, partition, verify_partition
from .properties import (
    check_gu,
    check_pu,
    check_sp_exhaustive,
    check_sp_randomized,
    find_uncovered_cycle,
    pu_cycle_witness,
    pu_necessary_conditions,
)

__version__ = "0.1.0"
