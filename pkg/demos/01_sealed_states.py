"""Sealed states, honest readout and the readability / p_max trade-off.

Run with ``python demos/01_sealed_states.py``.
"""
import math

import numpy as np

from qseal import (
    canonical_amplitudes,
    hamming,
    honest_readout_distribution,
    make_params,
    p_max,
    readability_check,
    sample_outcomes,
    scaling_table,
)

# %% A 4-bit canonical seal. Each bit is a basis state rotated by theta.
params = make_params(4, Theta=math.pi / 8, alpha=0.25)
amps = canonical_amplitudes(params)
print(f"theta = {params.theta:.4f}  epsilon = {params.epsilon:.4f}  N = {params.N}")

# %% Honest readout of message 0b1010: the law is the squared amplitude row.
p = honest_readout_distribution(amps, 0b1010)
print("most likely decode:", format(int(np.argmax(p)), "04b"), f"with p = {p.max():.4f}")
print("p_max (exact, asymptotic):", p_max(params))

# %% Monte Carlo: each bit flips with probability epsilon, so the mean
# Hamming distance sits at epsilon * n and most decodes are readable.
rng = np.random.default_rng(0)
draws = sample_outcomes(p, rng, 20_000)
dist = np.array([hamming(int(d), 0b1010, n=4) for d in draws])
print(f"mean distance {dist.mean():.4f} vs epsilon*n = {params.epsilon * params.n:.4f}")
print("readable fraction:", np.mean([readability_check(0b1010, int(d), params) for d in draws[:2000]]))

# %% As n grows, per-bit readability 1 - epsilon tends to 1 while the
# chance of reading the whole string exactly collapses.
print("\nn, epsilon, p_max_exact, p_max_asymptotic, log_ratio")
for row in scaling_table(math.pi / 8, 0.25, [4, 8, 16, 32, 64, 256, 1024]):
    print(f"{row.n:5d}  {row.epsilon:.5f}  {row.p_max_exact:.3e}  {row.p_max_asymptotic:.3e}  {row.log_ratio:.4f}")
