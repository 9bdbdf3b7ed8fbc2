"""The diagonal measurement attack: its noise floor and how little it learns.

Run with ``python demos/02_attack_noise_floor.py``.
"""
import math

import numpy as np

from qseal import (
    canonical_amplitudes,
    channel_matrix,
    guessing_probability,
    make_params,
    mutual_information,
    noise_floor_decomposition,
    per_bit_error_rate,
)

params = make_params(6, Theta=math.pi / 8, alpha=0.25)
amps = canonical_amplitudes(params)
N = amps.N

# %% At nu = 1/2 every message decodes as every outcome with probability at
# least 1/(2N); half of the output is pure noise.
ch = channel_matrix(amps, 0.5)
print(f"min entry * 2N = {ch.rows.min() * 2 * N:.6f}")
w, residual = noise_floor_decomposition(ch)
print(f"uniform weight = {w}, residual == honest channel:",
      np.allclose(residual.rows, channel_matrix(amps, 1.0).rows, atol=1e-10))

# %% Information and guessing power against nu. The attack never beats the
# nu-fraction of the honest channel's information.
honest_mi = mutual_information(channel_matrix(amps, 1.0))
print("\n  nu   I(nu) bits   nu*I(1)   guess_p   bit_error")
for nu in np.linspace(0, 1, 11):
    c = channel_matrix(amps, nu)
    print(f"{nu:4.1f}  {mutual_information(c):10.5f}  {nu * honest_mi:8.5f}"
          f"  {guessing_probability(c):8.5f}  {per_bit_error_rate(amps, 0, nu):9.5f}")
