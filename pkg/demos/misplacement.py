"""
How far does interleaving push papers from their true positions?
================================================================

If the true order is a uniformly random permutation and each side is ranked
perfectly, interleaving still moves papers. The displacement stays below
2*sqrt(n*c*log(2n/delta)) with probability at least 1 - delta.
"""
import numpy as np

from strategyproof_review import displacement_bound, misplacement_monte_carlo
from strategyproof_review.misplacement import run_trial

n, n1, delta = 1000, 500, 0.05
rep = misplacement_monte_carlo(n, n1, delta, trials=2000, seed=1)
print(f"c={rep.c}, bound={rep.bound:.3f}, violations={rep.violations}")
print(f"max observed {rep.max_observed}, mean of per-trial maxima {rep.mean_max_displacement:.1f}")

# the bound is loose: observed maxima sit far below it
for n1 in (500, 300, 100):
    r = misplacement_monte_carlo(n, n1, delta, trials=300, seed=2)
    print(n1, round(r.bound, 1), r.max_observed)

t = run_trial(200, 80, delta, seed=3)
shift = np.abs(np.array([t.output.index(p) + 1 for p in range(len(t.truth))]) - np.array(t.truth))
print("one trial at n=200:", shift.max(), "max shift vs bound", round(displacement_bound(200, t.c, delta), 1))
