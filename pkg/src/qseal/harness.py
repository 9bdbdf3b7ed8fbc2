"""Monte Carlo engine and experiment runner.

Randomness is derived per work item from ``(seed, point index)`` with
:class:`numpy.random.SeedSequence`, so results never depend on execution
order or on whether points run concurrently.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .attack import (
    coin_toss_escape,
    escape_probability,
    identify_probability,
    outcome_distribution,
)
from .infometrics import (
    canonical_mutual_information,
    channel_matrix,
    check_distribution,
    mutual_information,
    noise_floor_decomposition,
    per_bit_error_rate,
)
from .report import ReportRow, ScalingRow, emit_report, load_dense_scheme
from .seal import DENSE_LIMIT, AmplitudeMatrix, canonical_amplitudes, channel_limit, make_params

# normal approximation to binomial counts is trusted from this many expected hits
MIN_EXPECTED = 10.0
DEFAULT_MESSAGE_SAMPLE = 64
METRICS = ("identify_p", "bit_error", "mi_bits", "uniform_w", "escape_p", "coin_escape_p")


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for the work item labelled by ``keys``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys)))


def sample_outcomes(dist, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` indices from ``dist`` by inverse-CDF lookup."""
    p = check_distribution(dist)
    cdf = np.cumsum(p)
    idx = np.searchsorted(cdf, rng.random(size) * cdf[-1], side="right")
    return np.minimum(idx, p.size - 1)


def sample_outcome(dist, rng: np.random.Generator) -> int:
    return int(sample_outcomes(dist, rng, 1)[0])


def binomial_z(counts, probs, trials: int, min_expected: float = MIN_EXPECTED) -> np.ndarray:
    """z-scores of observed counts against their binomial expectations.

    Cells expected to receive fewer than ``min_expected`` hits are pooled
    into one tail cell, which is scored only if it reaches the threshold.
    """
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    expected = trials * probs
    big = expected >= min_expected
    c = counts[big]
    p = probs[big]
    if not big.all():
        tail_p = probs[~big].sum()
        if trials * tail_p >= min_expected:
            c = np.append(c, counts[~big].sum())
            p = np.append(p, tail_p)
    var = trials * p * (1.0 - p)
    diff = c - trials * p
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(var > 0, diff / np.sqrt(np.where(var > 0, var, 1.0)),
                     np.where(np.abs(diff) < 0.5, 0.0, np.inf))
    return z


def estimate_channel_row(amps: AmplitudeMatrix, i_prime: int, nu: float, trials: int,
                         seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Empirical decode frequencies for one sealed message.

    Returns the frequencies and their binomial standard errors.
    """
    if trials < 100:
        raise ValueError(f"need at least 100 trials, got {trials}")
    dist = outcome_distribution(amps, i_prime, nu)
    draws = sample_outcomes(dist, np.random.default_rng(seed), trials)
    freq = np.bincount(draws, minlength=amps.N) / trials
    return freq, np.sqrt(freq * (1.0 - freq) / trials)


def _class_distribution(amps: AmplitudeMatrix, nu: float) -> np.ndarray:
    # probability that the decode lands at Hamming distance d from the sealed message
    _, mult, lam_sq = amps.weight_classes()
    return mult * ((1.0 - nu) / amps.N + nu * lam_sq)


def monte_carlo_point(amps: AmplitudeMatrix, i_prime: int, nu: float, trials: int,
                      rng: np.random.Generator) -> tuple[float, float, float]:
    """``(identify frequency, its stderr, max |z|)`` for one attack point.

    Beyond the dense limit a product-form scheme is sampled over Hamming
    distance classes, which is a sufficient statistic for that scheme.
    """
    if amps.is_product and amps.n > DENSE_LIMIT:
        probs = _class_distribution(amps, nu)
        probs = probs / probs.sum()
        draws = sample_outcomes(probs, rng, trials)
        hit = 0
    else:
        probs = outcome_distribution(amps, i_prime, nu)
        draws = sample_outcomes(probs, rng, trials)
        hit = i_prime
    counts = np.bincount(draws, minlength=probs.size)
    freq = counts[hit] / trials
    stderr = math.sqrt(freq * (1.0 - freq) / trials)
    z = binomial_z(counts, probs, trials)
    max_z = float(np.abs(z).max()) if z.size else 0.0
    return float(freq), stderr, max_z


def simulate_coin_toss(amps: AmplitudeMatrix, i_prime: int, trials: int,
                       rng: np.random.Generator) -> tuple[int, int]:
    """Run the coin-toss attack followed by a projective verification.

    Returns ``(acted, passed)`` counts. An honest read collapses the seal
    to ``|i>``, which then passes with probability ``lambda[i', i]**2``;
    an untouched seal always passes.
    """
    acted = rng.random(trials) < 0.5
    k = int(acted.sum())
    honest = amps.row_sq(i_prime)
    decoded = sample_outcomes(honest, rng, k)
    fidelity = np.minimum(honest[decoded], 1.0)
    passed = int((rng.random(k) < fidelity).sum()) + (trials - k)
    return k, passed


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameter grid for :func:`run_experiment`.

    ``messages`` is ``"all"``, a sample size ``k`` or an explicit list of
    indices. A dense scheme (``dense_path``) ignores ``n_values``, ``Theta``
    and ``alpha``.
    """

    n_values: tuple = (4,)
    Theta: float = math.pi / 8
    alpha: float = 0.25
    dense_path: str | None = None
    nu_grid: tuple = (0.5,)
    trials: int = 0
    seed: int = 0
    messages: object = DEFAULT_MESSAGE_SAMPLE
    outputs: tuple = METRICS
    out_path: str | None = None
    fmt: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not self.nu_grid:
            raise ValueError("nu grid is empty")
        for nu in self.nu_grid:
            if not 0.0 <= nu <= 1.0:
                raise ValueError(f"nu must lie in [0, 1], got {nu!r}")
        unknown = set(self.outputs) - set(METRICS)
        if unknown:
            raise ValueError(f"unknown metrics {sorted(unknown)}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.dense_path is None:
            for n in self.n_values:
                make_params(n, self.Theta, self.alpha)


def _schemes(config: ExperimentConfig):
    if config.dense_path is not None:
        return [(None, load_dense_scheme(config.dense_path))]
    out = []
    for n in sorted(set(config.n_values)):
        params = make_params(n, config.Theta, config.alpha)
        out.append((params, canonical_amplitudes(params)))
    return out


def select_messages(N: int, messages, seed: int, scheme_index: int) -> list[int]:
    if messages == "all":
        if N > channel_limit():
            raise ValueError(f"'all' messages needs N <= {channel_limit()}, got {N}")
        return list(range(N))
    if isinstance(messages, (int, np.integer)):
        k = int(messages)
        if k < 1:
            raise ValueError("message sample size must be positive")
        if k >= N:
            return list(range(N))
        rng = derive_rng(seed, 0, scheme_index)
        if N <= 2**20:
            return sorted(int(x) for x in rng.choice(N, size=k, replace=False))
        chosen: set[int] = set()
        while len(chosen) < k:
            chosen.add(int(rng.integers(0, N, dtype=np.uint64)))
        return sorted(chosen)
    picked = sorted({int(m) for m in messages})
    for m in picked:
        if not 0 <= m < N:
            raise ValueError(f"message {m} out of range [0, {N})")
    return picked


def _point_row(config, params, amps, nu, message, point_index, channel_stats):
    want = set(config.outputs)
    mi, w = channel_stats
    values = {
        "identify_p": identify_probability(amps, message, nu) if "identify_p" in want else None,
        "bit_error": per_bit_error_rate(amps, message, nu) if "bit_error" in want else None,
        "mi_bits": mi,
        "uniform_w": w,
        "escape_p": escape_probability(amps, message, nu) if "escape_p" in want else None,
        "coin_escape_p": coin_toss_escape(amps, message) if "coin_escape_p" in want else None,
    }
    mc = (None, None, None)
    if config.trials > 0:
        mc = monte_carlo_point(amps, message, nu, config.trials,
                               derive_rng(config.seed, 1, point_index))
    return ReportRow(
        n=amps.n,
        theta=None if params is None else params.Theta,
        alpha=None if params is None else params.alpha,
        nu=float(nu),
        message=message,
        trials=config.trials,
        mc_identify=mc[0],
        mc_stderr=mc[1],
        max_z=mc[2],
        **values,
    )


def _channel_stats(config, amps, nu):
    want = set(config.outputs)
    mi = w = None
    if amps.is_product:
        if "mi_bits" in want:
            mi = canonical_mutual_information(amps, nu)
        if "uniform_w" in want:
            w = 1.0 - nu
    elif want & {"mi_bits", "uniform_w"}:
        ch = channel_matrix(amps, nu)
        mi = mutual_information(ch) if "mi_bits" in want else None
        w = noise_floor_decomposition(ch)[0] if "uniform_w" in want else None
    return mi, w


def run_experiment(config: ExperimentConfig) -> list[ReportRow]:
    """Evaluate every (scheme, nu, message) point of the grid.

    Rows come out ordered by ``(n, nu, message)``. When ``out_path`` is set
    the complete report is also written there.
    """
    schemes = _schemes(config)
    nus = sorted(set(float(v) for v in config.nu_grid))
    points = []
    for s_idx, (_, amps) in enumerate(schemes):
        msgs = select_messages(amps.N, config.messages, config.seed, s_idx)
        points.extend((s_idx, nu, m) for nu in nus for m in msgs)
    stats_keys = [(s_idx, nu) for s_idx in range(len(schemes)) for nu in nus]

    def stats_job(key):
        return key, _channel_stats(config, schemes[key[0]][1], key[1])

    def point_job(item):
        idx, (s_idx, nu, m) = item
        params, amps = schemes[s_idx]
        return _point_row(config, params, amps, nu, m, idx, stats[(s_idx, nu)])

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            stats = dict(pool.map(stats_job, stats_keys))
            rows = list(pool.map(point_job, enumerate(points)))
    else:
        stats = dict(map(stats_job, stats_keys))
        rows = list(map(point_job, enumerate(points)))

    rows.sort(key=lambda r: (r.n, r.nu, r.message))
    if config.out_path is not None:
        emit_report(rows, config.fmt, path=config.out_path)
    return rows


def scaling_table(Theta: float, alpha: float, n_list) -> list[ScalingRow]:
    """Exact and asymptotic ``p_max`` per string length, in the log domain."""
    rows = []
    for n in n_list:
        params = make_params(n, Theta, alpha)
        log_exact = n * math.log1p(-params.epsilon)
        log_asym = n * math.log1p(-Theta**2 / n ** (2 * alpha))
        rows.append(ScalingRow(n, params.epsilon, math.exp(log_exact), math.exp(log_asym),
                               log_exact / log_asym))
    return rows
