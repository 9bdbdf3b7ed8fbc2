"""The nu-parameterized diagonal measurement attack and the coin-toss attack.

The attack measures with Kraus operators

    M_i = (a + b) |i><i| + a * sum_{j != i} |j><j|

so that message ``i'`` decodes as ``i`` with probability
``(1 - nu) / N + nu * lambda[i', i]**2``. The coefficients follow from
``a**2 = (1 - nu) / N`` and ``(a + b)**2 - a**2 = nu``.

Detection is modelled as a projective test onto the original sealed state;
the escape probability is the pass probability averaged over attack
branches. This verifier is a modelling choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seal import AmplitudeMatrix, StateVector, honest_readout_distribution, sealed_state

DEGENERATE_PROBABILITY = 1e-300


class DegenerateBranchError(ArithmeticError):
    """Raised when a measurement branch has (numerically) zero probability."""


def _check_nu(nu: float) -> float:
    nu = float(nu)
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu!r}")
    return nu


@dataclass(frozen=True)
class MeasurementCoefficients:
    nu: float
    N: int
    c_base: float
    c_boost: float

    @property
    def c_target(self) -> float:
        """Diagonal entry of ``M_i`` at the target index."""
        return self.c_base + self.c_boost


@dataclass(frozen=True)
class DiagonalKraus:
    target: int
    coeffs: MeasurementCoefficients

    def diagonal(self) -> np.ndarray:
        d = np.full(self.coeffs.N, self.coeffs.c_base)
        d[self.target] = self.coeffs.c_target
        return d

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal())


@dataclass(frozen=True)
class AttackOutcome:
    decoded: int | None
    post_state: StateVector
    branch_probability: float
    acted: bool


def chau_coefficients(nu: float, N: int) -> MeasurementCoefficients:
    """Non-negative ``(a, b)`` for strength ``nu`` on an ``N``-message space."""
    nu = _check_nu(nu)
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    base = math.sqrt((1.0 - nu) / N)
    target = math.sqrt(nu + (1.0 - nu) / N)
    return MeasurementCoefficients(nu=nu, N=int(N), c_base=base, c_boost=target - base)


def kraus_operator(target: int, nu: float, N: int) -> DiagonalKraus:
    if not 0 <= target < N:
        raise IndexError(f"target {target} out of range [0, {N})")
    return DiagonalKraus(int(target), chau_coefficients(nu, N))


def kraus_diagonals(nu: float, N: int) -> np.ndarray:
    """All ``N`` operators at once; row ``i`` is the diagonal of ``M_i``."""
    coeffs = chau_coefficients(nu, N)
    K = np.full((N, N), coeffs.c_base)
    np.fill_diagonal(K, coeffs.c_target)
    return K


def completeness_defect(coeffs: MeasurementCoefficients) -> float:
    """``|sum_i M_i^T M_i - 1|`` on the (common) diagonal."""
    return abs(coeffs.c_target**2 + (coeffs.N - 1) * coeffs.c_base**2 - 1.0)


def outcome_distribution(amps: AmplitudeMatrix, i_prime: int, nu: float) -> np.ndarray:
    """Decode law of the attack on the seal of ``i_prime``."""
    nu = _check_nu(nu)
    return (1.0 - nu) / amps.N + nu * honest_readout_distribution(amps, i_prime)


def apply_kraus(state: StateVector, kraus: DiagonalKraus) -> tuple[StateVector, float]:
    """Apply one Kraus branch; returns the normalized post-state and its probability."""
    if state.dim != kraus.coeffs.N:
        raise ValueError(f"dimension mismatch: state {state.dim}, operator {kraus.coeffs.N}")
    out = kraus.coeffs.c_base * state.amplitudes
    out[kraus.target] = kraus.coeffs.c_target * state.amplitudes[kraus.target]
    prob = float(out @ out)
    if prob < DEGENERATE_PROBABILITY:
        raise DegenerateBranchError(
            f"outcome {kraus.target} has probability {prob!r}; post-state undefined"
        )
    return StateVector(out / math.sqrt(prob)), prob


def identify_probability(amps: AmplitudeMatrix, i_prime: int, nu: float) -> float:
    """Probability that the attack decodes the sealed message exactly."""
    nu = _check_nu(nu)
    return (1.0 - nu) / amps.N + nu * amps.entry(i_prime, i_prime) ** 2


def escape_probability(amps: AmplitudeMatrix, i_prime: int, nu: float) -> float:
    """Average probability of passing the projective verifier after the attack.

    Equals ``sum_i (a + b * lambda[i', i]**2)**2``.
    """
    coeffs = chau_coefficients(nu, amps.N)
    a, b = coeffs.c_base, coeffs.c_boost
    if amps.is_product:
        amps._check_index(i_prime)
        _, mult, lam_sq = amps.weight_classes()
        total = float(mult @ (a + b * lam_sq) ** 2)
    else:
        total = float(np.sum((a + b * amps.row_sq(i_prime)) ** 2))
    return min(1.0, total)


def coin_toss_attack(amps: AmplitudeMatrix, i_prime: int, rng: np.random.Generator) -> AttackOutcome:
    """Toss a fair coin: read honestly on heads, leave the seal alone on tails."""
    sealed = sealed_state(amps, i_prime)
    if rng.random() >= 0.5:
        return AttackOutcome(None, sealed, 0.5, False)
    probs = honest_readout_distribution(amps, i_prime)
    cdf = np.cumsum(probs)
    decoded = int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"), amps.N - 1))
    post = np.zeros(amps.N)
    post[decoded] = 1.0
    return AttackOutcome(decoded, StateVector(post), 0.5 * float(probs[decoded]), True)


def coin_toss_escape(amps: AmplitudeMatrix, i_prime: int) -> float:
    return 0.5 + 0.5 * escape_probability(amps, i_prime, 1.0)


def verification_passes(sealed: StateVector, post: StateVector, rng: np.random.Generator) -> bool:
    """One projective test of ``post`` against the sealed state."""
    return bool(rng.random() < sealed.fidelity(post))
