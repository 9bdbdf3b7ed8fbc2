"""Information carried by the attack's decoded output.

Entropies are in bits with ``0 log 0 = 0``; probabilities below ``1e-15``
are treated as exact zeros inside entropy sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import outcome_distribution
from .seal import DENSE_LIMIT, AmplitudeMatrix, channel_limit

ZERO_CUTOFF = 1e-15


def check_distribution(p, N: int | None = None, tol: float = 1e-10) -> np.ndarray:
    """Validate a probability vector and return it as a float array."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError("a distribution must be one-dimensional")
    if N is not None and p.size != N:
        raise ValueError(f"dimension mismatch: expected {N}, got {p.size}")
    if np.any(p < -tol):
        raise ValueError("a distribution must be non-negative")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
    return p


def uniform(N: int) -> np.ndarray:
    return np.full(N, 1.0 / N)


def entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > ZERO_CUTOFF]
    return float(-(p * np.log2(p)).sum())


def binary_entropy(x: float) -> float:
    return entropy([x, 1.0 - x])


@dataclass(frozen=True)
class ChannelMatrix:
    """Rows ``p(i | i')``, one per sealed message.

    ``nu`` records the attack strength the channel was built with, or is
    ``None`` for channels of unknown origin.
    """

    rows: np.ndarray
    nu: float | None = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
            raise ValueError(f"channel must be square, got shape {rows.shape}")
        if np.any(rows < -1e-12):
            raise ValueError("channel entries must be non-negative")
        sums = rows.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-10):
            raise ValueError("every channel row must sum to 1")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def N(self) -> int:
        return self.rows.shape[0]


def channel_matrix(amps: AmplitudeMatrix, nu: float) -> ChannelMatrix:
    if amps.N > channel_limit():
        raise ValueError(f"N={amps.N} exceeds the channel limit {channel_limit()}")
    rows = np.vstack([outcome_distribution(amps, i, nu) for i in range(amps.N)])
    return ChannelMatrix(rows, float(nu))


def _prior(prior, N):
    return uniform(N) if prior is None else check_distribution(prior, N)


def mutual_information(channel: ChannelMatrix, prior=None) -> float:
    """``I(I'; I) = H(output) - sum_i' prior(i') H(row i')`` in bits.

    ``prior`` defaults to uniform.
    """
    prior = _prior(prior, channel.N)
    output = prior @ channel.rows
    conditional = sum(w * entropy(row) for w, row in zip(prior, channel.rows) if w > 0)
    mi = entropy(output) - conditional
    return float(min(max(mi, 0.0), math.log2(channel.N)))


def canonical_mutual_information(amps: AmplitudeMatrix, nu: float) -> float:
    """Exact uniform-prior information for a product-form scheme at any ``n``.

    XOR symmetry makes the output uniform, so ``I = n - H(row)``; the row
    entropy is a sum over Hamming-distance classes.
    """
    if not amps.is_product:
        raise ValueError("closed form needs product-form amplitudes")
    d, mult, lam_sq = amps.weight_classes()
    p = (1.0 - nu) / amps.N + nu * lam_sq
    # no cutoff here: tiny per-entry masses carry huge multiplicities
    keep = p > 0
    h = float(-(mult[keep] * p[keep] * np.log2(p[keep])).sum())
    return float(min(max(amps.n - h, 0.0), amps.n))


def largest_uniform_weight(channel: ChannelMatrix) -> float:
    """Largest ``w`` for which ``channel - w * uniform`` stays non-negative."""
    return float(min(1.0, channel.N * channel.rows.min()))


def noise_floor_decomposition(channel: ChannelMatrix) -> tuple[float, ChannelMatrix]:
    """Split a channel into ``w * uniform + (1 - w) * residual``.

    For channels built by :func:`channel_matrix` the weight is the attack's
    own noise share ``1 - nu`` and the residual is the honest channel. A
    channel of unknown origin gets the largest admissible ``w``.
    """
    N = channel.N
    if channel.nu is not None:
        w = 1.0 - channel.nu
    else:
        w = largest_uniform_weight(channel)
    if w >= 1.0:
        return 1.0, ChannelMatrix(np.full((N, N), 1.0 / N))
    residual = (channel.rows - w / N) / (1.0 - w)
    if residual.min() < -1e-10:
        raise ValueError(f"channel has no uniform component of weight {w!r}")
    # rounding can leave tiny negatives where the residual is exactly zero
    residual = np.clip(residual, 0.0, None)
    residual /= residual.sum(axis=1, keepdims=True)
    return float(w), ChannelMatrix(residual, None if channel.nu is None else 1.0)


def guessing_probability(channel: ChannelMatrix, prior=None) -> float:
    """Success probability of the optimal guess of ``i'`` from the output."""
    prior = _prior(prior, channel.N)
    return float((prior[:, None] * channel.rows).max(axis=0).sum())


def per_bit_error_rate(amps: AmplitudeMatrix, i_prime: int, nu: float) -> float:
    """Expected fraction of decoded bits that differ from the sealed message."""
    if amps.is_product and amps.n > DENSE_LIMIT:
        amps._check_index(i_prime)
        d, mult, lam_sq = amps.weight_classes()
        honest = float((mult * lam_sq * d).sum()) / amps.n
        return (1.0 - nu) / 2 + nu * honest
    p = outcome_distribution(amps, i_prime, nu)
    return float(p @ amps.distances(i_prime)) / amps.n
