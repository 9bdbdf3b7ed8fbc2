"""Escape probabilities: the measurement attack against a simple coin toss.

Detection is modelled as a projective test onto the original sealed state.

Run with ``python demos/03_coin_toss_vs_attack.py``.
"""
import math

import numpy as np

from qseal import (
    canonical_amplitudes,
    coin_toss_escape,
    escape_probability,
    identify_probability,
    make_params,
    simulate_coin_toss,
)

print(" n   escape(nu=1/2)  identify(nu=1/2)  coin escape  coin identify")
for n in range(2, 11):
    amps = canonical_amplitudes(make_params(n, math.pi / 8, 0.25))
    print(f"{n:2d}   {escape_probability(amps, 0, 0.5):13.5f}  {identify_probability(amps, 0, 0.5):16.5f}"
          f"  {coin_toss_escape(amps, 0):11.5f}  {0.5 * identify_probability(amps, 0, 1.0):13.5f}")

# %% Monte Carlo of the coin toss followed by verification.
amps = canonical_amplitudes(make_params(5, math.pi / 8, 0.25))
T = 100_000
acted, passed = simulate_coin_toss(amps, 3, T, np.random.default_rng(1))
print(f"\nacted {acted / T:.4f} (expect 0.5), passed {passed / T:.4f} (expect {coin_toss_escape(amps, 3):.4f})")
