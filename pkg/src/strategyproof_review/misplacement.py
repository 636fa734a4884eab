"""How far interleaving displaces papers from a random ground-truth order.

Both sides are assumed to be ranked perfectly (each side sorted by the true
order), so all displacement comes from the fixed slot pattern. Papers
``0 .. n1-1`` form side C and the rest side Cbar; the ground truth is a
uniformly random permutation drawn with ``numpy.random.default_rng(seed)``
(PCG64) and ``Generator.permutation`` (a Fisher-Yates shuffle).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .aggregate import interleave, slot_positions
from .errors import ContractViolation


def size_constant(n: int, n1: int) -> float:
    """``max(n / n1, n / (n - n1))``; always >= 2 for a proper split."""
    if not 0 < n1 < n:
        raise ContractViolation(f"need 0 < n1 < n, got n={n}, n1={n1}")
    return max(n / n1, n / (n - n1))


def displacement_bound(n: int, c: float, delta: float) -> float:
    """``2 * sqrt(n * c * log(2 n / delta))`` (natural log)."""
    return 2.0 * math.sqrt(n * c * math.log(2 * n / delta))


@dataclass(frozen=True)
class MisplacementTrial:
    n: int
    n1: int
    c: float
    delta: float
    seed: int
    truth: tuple  # paper -> true 1-based position
    output: tuple  # aggregate ranking, best first
    max_displacement: int


@dataclass(frozen=True)
class MisplacementReport:
    n: int
    n1: int
    c: float
    delta: float
    trials: int
    seed: int
    bound: float
    violations: int
    violation_rate: float
    max_observed: int
    mean_max_displacement: float

    def to_dict(self):
        return asdict(self)


def _check(n, n1, delta):
    c = size_constant(n, n1)
    if not 0 < delta < 1:
        raise ContractViolation(f"delta must lie in (0, 1), got {delta}")
    if n < 4 * c / math.log(2):
        raise ContractViolation(f"n={n} is below 4c/log 2 = {4 * c / math.log(2):.3f}")
    return c


def run_trial(n: int, n1: int, delta: float, seed: int) -> MisplacementTrial:
    """One trial through the real :func:`interleave`, keeping every ranking."""
    c = _check(n, n1, delta)
    rng = np.random.default_rng(seed)
    truth = rng.permutation(n) + 1
    side_C = sorted(range(n1), key=lambda j: truth[j])
    side_Cbar = sorted(range(n1, n), key=lambda j: truth[j])
    out = interleave(side_C, side_Cbar, n)
    shown = np.empty(n, dtype=int)
    shown[list(out)] = np.arange(1, n + 1)
    return MisplacementTrial(n, n1, c, delta, seed, tuple(int(t) for t in truth), out, int(np.abs(shown - truth).max()))


def misplacement_monte_carlo(n: int, n1: int, delta: float, trials: int, seed: int) -> MisplacementReport:
    """Fraction of trials whose maximum displacement exceeds the bound.

    The k-th best paper of a side (by true position) lands in the k-th slot
    of that side, so one sort per side per trial gives every displacement.
    """
    c = _check(n, n1, delta)
    big, small = max(n1, n - n1), min(n1, n - n1)
    I1, I2 = slot_positions(n, big)
    slots_C = np.asarray(I1 if n1 == big else I2)
    slots_Cbar = np.asarray(I2 if n1 == big else I1)
    bound = displacement_bound(n, c, delta)
    rng = np.random.default_rng(seed)
    maxima = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        truth = rng.permutation(n) + 1
        d_C = np.abs(np.sort(truth[:n1]) - slots_C).max()
        d_Cbar = np.abs(np.sort(truth[n1:]) - slots_Cbar).max()
        maxima[t] = max(d_C, d_Cbar)
    violations = int((maxima > bound).sum())
    return MisplacementReport(
        n,
        n1,
        c,
        delta,
        trials,
        seed,
        bound,
        violations,
        violations / trials if trials else 0.0,
        int(maxima.max()) if trials else 0,
        float(maxima.mean()) if trials else 0.0,
    )
