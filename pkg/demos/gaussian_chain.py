"""Metropolis chain for d=1 with f = x^2/2, where the measure is exactly
Gaussian, compared with independent draws from that Gaussian."""

import numpy as np

from fuzzyspec.mcmc import ChainConfig, batch_means, direct_gaussian_d1, run

N = 4
stats = run(ChainConfig(signature="1,0", N=N, action="2:0.5", step_size=0.15, n_steps=100_000, burn_in=2000, seed=1))
print(f"acceptance {stats.acceptance_rate:.3f}  wall {stats.wall_time:.1f} s")

H = direct_gaussian_d1(N, 100_000, seed=2)
tr2 = np.einsum("sij,sji->s", H, H).real
print("<Tr H^2>  chain  %.4f +- %.4f" % batch_means(stats.series("TrK1^2")))
print("          direct %.4f +- %.4f" % batch_means(tr2))
print("          exact  %.4f" % (N / 2 - 1 / (4 * N)))
print("<S>       chain  %.3f +- %.3f   exact %.1f" % (*batch_means(stats.series("S")), N * N / 2))
