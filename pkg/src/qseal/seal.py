"""String-seal scheme: parameters, sealed-state amplitudes and honest readout.

Messages are unsigned integers in ``[0, 2**n)``; bit ``k`` of the integer is
bit ``k`` of the sealed string. All amplitudes are real and non-negative.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

DENSE_LIMIT = 20
CHANNEL_LIMIT = 4096


def channel_limit() -> int:
    """Largest ``N`` for which N x N matrices are materialized.

    ``QSEAL_DENSE_LIMIT`` overrides the default of 4096.
    """
    raw = os.environ.get("QSEAL_DENSE_LIMIT")
    if raw is None:
        return CHANNEL_LIMIT
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"QSEAL_DENSE_LIMIT must be an integer, got {raw!r}") from exc
    if value < 2:
        raise ValueError("QSEAL_DENSE_LIMIT must be at least 2")
    return value


@dataclass(frozen=True)
class SealParameters:
    """Scheme constants ``n``, ``Theta``, ``alpha`` and the derived values.

    Use :func:`make_params` to construct; it validates the ranges.
    """

    n: int
    Theta: float
    alpha: float
    theta: float = field(init=False)
    epsilon: float = field(init=False)
    N: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 < self.Theta < math.pi / 4:
            raise ValueError(f"Theta must lie in (0, pi/4), got {self.Theta!r}")
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2), got {self.alpha!r}")
        theta = self.Theta / self.n**self.alpha
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "epsilon", math.sin(theta) ** 2)
        object.__setattr__(self, "N", 2 ** int(self.n))


def make_params(n: int, Theta: float, alpha: float, dense: bool = False) -> SealParameters:
    """Build validated scheme parameters.

    With ``dense=True`` the string length is additionally capped at
    :data:`DENSE_LIMIT` so that state vectors can be materialized.
    """
    params = SealParameters(n, float(Theta), float(alpha))
    if dense and params.n > DENSE_LIMIT:
        raise ValueError(f"n={params.n} exceeds the dense-mode limit {DENSE_LIMIT}")
    return params


def popcount(x):
    return np.bitwise_count(np.asarray(x, dtype=np.uint64)).astype(np.int64)


def _as_bits(x, n: int | None = None) -> tuple[int, int]:
    """Accept ``'1010'``-style strings, bit sequences or (int, n) pairs."""
    if isinstance(x, str):
        if not x or set(x) - {"0", "1"}:
            raise ValueError(f"not a bit string: {x!r}")
        # leftmost character is the highest bit
        return int(x, 2), len(x)
    if isinstance(x, (int, np.integer)):
        if n is None:
            raise ValueError("integer messages need an explicit length n")
        if not 0 <= x < 2**n:
            raise ValueError(f"message {x} does not fit in {n} bits")
        return int(x), n
    bits = [int(b) for b in x]
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a bit sequence: {x!r}")
    return sum(b << k for k, b in enumerate(bits)), len(bits)


def hamming(x, y, n: int | None = None) -> int:
    """Number of positions where two n-bit strings differ.

    ``x`` and ``y`` may be ``'0101'`` strings, 0/1 sequences (bit ``k`` at
    position ``k``) or integers together with ``n``.
    """
    xv, nx = _as_bits(x, n)
    yv, ny = _as_bits(y, n)
    if nx != ny:
        raise ValueError(f"length mismatch: {nx} vs {ny} bits")
    return (xv ^ yv).bit_count()


def readability_check(b, b_prime, params: SealParameters) -> bool:
    """True iff the decoded string is within ``epsilon * n`` bit flips of ``b``."""
    xv, nx = _as_bits(b, params.n)
    yv, ny = _as_bits(b_prime, params.n)
    if nx != params.n or ny != params.n:
        raise ValueError(f"strings must have n={params.n} bits, got {nx} and {ny}")
    return hamming(xv, yv, params.n) <= params.epsilon * params.n


def p_max(params: SealParameters) -> tuple[float, float]:
    """Probability of decoding the whole string faultlessly.

    Returns ``(exact, asymptotic)``: ``(1 - eps)**n`` and
    ``(1 - Theta**2 / n**(2 alpha))**n``, both evaluated in the log domain.
    """
    n = params.n
    exact = math.exp(n * math.log1p(-params.epsilon))
    asymptotic = math.exp(n * math.log1p(-params.Theta**2 / n ** (2 * params.alpha)))
    return exact, asymptotic


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    norm_sq: float = field(init=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=float)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("state amplitudes must be a non-empty vector")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "norm_sq", float(amps @ amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def is_normalized(self, tol: float = 1e-10) -> bool:
        return abs(self.norm_sq - 1.0) <= tol

    def fidelity(self, other: "StateVector") -> float:
        """``|<self|other>|**2`` for normalized states, clipped to [0, 1]."""
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other is self or np.array_equal(other.amplitudes, self.amplitudes):
            return 1.0
        overlap = float(self.amplitudes @ other.amplitudes)
        return min(1.0, overlap * overlap)


class AmplitudeMatrix:
    """Amplitudes ``lambda[i', j]`` of every sealed state in the readout basis.

    Two representations are supported. Product form stores only
    ``(cos theta, sin theta, n)`` and evaluates
    ``lambda[i', j] = cos(theta)**(n - d) * sin(theta)**d`` with
    ``d = hamming(i', j)``; dense form stores the full ``N x N`` array.
    """

    def __init__(self, *, dense=None, theta: float | None = None, n: int | None = None):
        if (dense is None) == (theta is None):
            raise ValueError("give either a dense array or (theta, n)")
        if dense is not None:
            arr = np.array(dense, dtype=float)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError(f"dense amplitudes must be square, got shape {arr.shape}")
            N = arr.shape[0]
            if N < 2 or N & (N - 1):
                raise ValueError(f"dimension must be a power of two >= 2, got {N}")
            if np.any(arr < 0):
                raise ValueError("amplitudes must be non-negative reals")
            norms = np.einsum("ij,ij->i", arr, arr)
            bad = np.flatnonzero(np.abs(norms - 1.0) > 1e-10)
            if bad.size:
                raise ValueError(
                    f"row {bad[0]} has square-norm {norms[bad[0]]!r}, expected 1"
                )
            arr.setflags(write=False)
            self._dense = arr
            self.N = N
            self.n = N.bit_length() - 1
            self.theta = None
        else:
            if n is None or n < 1:
                raise ValueError("product form needs n >= 1")
            self._dense = None
            self.n = int(n)
            self.N = 2**self.n
            self.theta = float(theta)
            self.cos = math.cos(self.theta)
            self.sin = math.sin(self.theta)

    @property
    def is_product(self) -> bool:
        return self._dense is None

    def __repr__(self):
        kind = f"product, theta={self.theta!r}" if self.is_product else "dense"
        return f"AmplitudeMatrix(n={self.n}, {kind})"

    def _check_index(self, i_prime) -> int:
        if not isinstance(i_prime, (int, np.integer)) or not 0 <= i_prime < self.N:
            raise IndexError(f"message index {i_prime!r} out of range [0, {self.N})")
        return int(i_prime)

    def _check_dense_row(self):
        if self.is_product and self.n > DENSE_LIMIT:
            raise ValueError(
                f"n={self.n} exceeds the dense-mode limit {DENSE_LIMIT}; "
                "use the weight-class methods instead"
            )

    def _log_row_sq(self, d):
        # log of cos^{2(n-d)} sin^{2d}; sin > 0 since theta > 0
        return 2 * ((self.n - d) * math.log(self.cos) + d * math.log(self.sin))

    def entry(self, i_prime: int, j: int) -> float:
        i_prime = self._check_index(i_prime)
        j = self._check_index(j)
        if not self.is_product:
            return float(self._dense[i_prime, j])
        d = (i_prime ^ j).bit_count()
        return math.exp(0.5 * self._log_row_sq(d))

    def distances(self, i_prime: int) -> np.ndarray:
        """Hamming distance from ``i_prime`` to every readout index."""
        i_prime = self._check_index(i_prime)
        self._check_dense_row()
        return popcount(np.arange(self.N, dtype=np.uint64) ^ np.uint64(i_prime))

    def row(self, i_prime: int) -> np.ndarray:
        i_prime = self._check_index(i_prime)
        if not self.is_product:
            return self._dense[i_prime]
        return np.exp(0.5 * self._log_row_sq(self.distances(i_prime)))

    def row_sq(self, i_prime: int) -> np.ndarray:
        """Squared amplitudes of one row, i.e. the honest readout law."""
        i_prime = self._check_index(i_prime)
        if not self.is_product:
            r = self._dense[i_prime]
            return r * r
        return np.exp(self._log_row_sq(self.distances(i_prime)))

    def dense(self) -> np.ndarray:
        if not self.is_product:
            return self._dense
        if self.N > channel_limit():
            raise ValueError(f"N={self.N} exceeds the channel limit {channel_limit()}")
        return np.vstack([self.row(i) for i in range(self.N)])

    def weight_classes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Product form only: ``(d, multiplicity, lambda**2)`` per distance class.

        Every row of a product-form matrix is a permutation of the same
        values, so sums over a row reduce to ``n + 1`` distance classes.
        """
        if not self.is_product:
            raise ValueError("weight classes exist only for product-form amplitudes")
        d = np.arange(self.n + 1)
        mult = np.array([math.comb(self.n, int(k)) for k in d], dtype=float)
        return d, mult, np.exp(self._log_row_sq(d))


def canonical_amplitudes(params: SealParameters) -> AmplitudeMatrix:
    """Product-form scheme sealing each bit as a ``theta``-rotated basis state.

    Honest per-bit readout then flips each bit with probability ``epsilon``
    and the diagonal satisfies ``lambda[i', i']**2 == (1 - epsilon)**n``.
    """
    return AmplitudeMatrix(theta=params.theta, n=params.n)


def identity_amplitudes(N: int) -> AmplitudeMatrix:
    """Eigenstate seal: every message is sealed as its own basis state."""
    return AmplitudeMatrix(dense=np.eye(N))


def uniform_amplitudes(N: int) -> AmplitudeMatrix:
    """Every sealed state is the uniform superposition (carries no message)."""
    return AmplitudeMatrix(dense=np.full((N, N), 1.0 / math.sqrt(N)))


def random_amplitudes(N: int, rng: np.random.Generator, concentration: float = 1.0) -> AmplitudeMatrix:
    """Random dense scheme; each row's squares are a Dirichlet draw.

    Large ``concentration`` pushes rows toward uniform, small values toward
    sparse rows. A random boost on the diagonal keeps rows distinguishable
    so the honest channel carries information.
    """
    weights = rng.dirichlet(np.full(N, concentration), size=N)
    weights[np.arange(N), np.arange(N)] += rng.uniform(0.0, 2.0, size=N)
    weights /= weights.sum(axis=1, keepdims=True)
    amps = np.sqrt(weights)
    amps /= np.linalg.norm(amps, axis=1, keepdims=True)
    return AmplitudeMatrix(dense=amps)


def sealed_state(amps: AmplitudeMatrix, i_prime: int) -> StateVector:
    """State sealing message ``i_prime``; its j-th amplitude is ``lambda[i', j]``."""
    if amps.is_product and amps.n > DENSE_LIMIT:
        raise ValueError(f"n={amps.n} exceeds the dense-mode limit {DENSE_LIMIT}")
    return StateVector(amps.row(i_prime))


def honest_readout_distribution(amps: AmplitudeMatrix, i_prime: int) -> np.ndarray:
    """Born-rule law ``p(j) = lambda[i', j]**2`` of the honest measurement."""
    return amps.row_sq(i_prime)
