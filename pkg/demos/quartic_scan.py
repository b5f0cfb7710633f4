"""Exploratory: <F> across quartic couplings for signature (2,0).

F = sum (Tr H_mu)^2 / (N sum Tr H_mu^2) weighs the bi-trace part of the
action against the single-trace part. Short chains, so expect noise; this
is a starting point for phase-structure studies, not a result.

    python demos/quartic_scan.py [N] [steps]
"""

import math
import sys

from fuzzyspec.mcmc import ChainConfig, estimate, run_chains

N = int(sys.argv[1]) if len(sys.argv) > 1 else 4
steps = int(sys.argv[2]) if len(sys.argv) > 2 else 20_000
g2_values = [-3.0, -2.0, -1.0, 0.0, 1.0]

configs = [
    ChainConfig(signature="2,0", N=N, action={2: g2, 4: 1.0}, step_size=0.05 / math.sqrt(N),
                n_steps=steps, burn_in=steps // 5, thinning=10, seed=100 + i)
    for i, g2 in enumerate(g2_values)
]
print(f"{'g2':>6} {'<F>':>10} {'err':>8} {'<S>':>10} {'acc':>6}")
for g2, stats in zip(g2_values, run_chains(configs)):
    F, dF = estimate(stats, "F")
    S, _ = estimate(stats, "S")
    print(f"{g2:>6} {F:>10.4f} {dF:>8.4f} {S:>10.2f} {stats.acceptance_rate:>6.2f}")
