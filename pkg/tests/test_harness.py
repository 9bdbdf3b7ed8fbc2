import math

import numpy as np
import pytest

from qseal import (
    ExperimentConfig,
    escape_probability,
    estimate_channel_row,
    identity_amplitudes,
    outcome_distribution,
    p_max,
    make_params,
    run_experiment,
    sample_outcome,
    sample_outcomes,
    scaling_table,
    simulate_coin_toss,
)
from qseal.harness import binomial_z, derive_rng, monte_carlo_point, select_messages

from conftest import ALPHA, THETA


def test_sample_point_mass():
    dist = np.zeros(8)
    dist[5] = 1.0
    rng = np.random.default_rng(0)
    assert all(sample_outcome(dist, rng) == 5 for _ in range(100))


def test_sample_uniform_frequencies():
    draws = sample_outcomes(np.full(4, 0.25), np.random.default_rng(1), 100_000)
    freq = np.bincount(draws, minlength=4) / draws.size
    assert np.all(np.abs(freq - 0.25) < 3 * math.sqrt(0.25 * 0.75 / draws.size))


def test_sample_rejects_unnormalised():
    with pytest.raises(ValueError):
        sample_outcome([0.5, 0.6], np.random.default_rng(0))


def test_sample_deterministic():
    dist = np.arange(1, 9) / 36
    a = sample_outcomes(dist, np.random.default_rng(3), 50)
    b = sample_outcomes(dist, np.random.default_rng(3), 50)
    np.testing.assert_array_equal(a, b)


def test_identify_frequency_at_half(canonical):
    params, amps = canonical(4)
    analytic = 1 / (2 * amps.N) + (1 - params.epsilon) ** 4 / 2
    draws = sample_outcomes(outcome_distribution(amps, 3, 0.5), np.random.default_rng(5), 100_000)
    freq = np.mean(draws == 3)
    assert abs(freq - analytic) < 3 * math.sqrt(analytic * (1 - analytic) / draws.size)


def test_estimate_channel_row_uniform():
    amps = identity_amplitudes(16)
    freq, se = estimate_channel_row(amps, 2, 0.0, 100_000, seed=11)
    z = (freq - 1 / 16) / np.sqrt(1 / 16 * 15 / 16 / 100_000)
    assert np.abs(z).max() < 4
    assert se.shape == (16,)


def test_estimate_channel_row_eigenstate():
    freq, se = estimate_channel_row(identity_amplitudes(8), 6, 1.0, 1000, seed=0)
    np.testing.assert_array_equal(freq, np.eye(8)[6])
    np.testing.assert_array_equal(se, 0.0)


def test_estimate_channel_row_canonical(canonical):
    _, amps = canonical(6)
    freq, _ = estimate_channel_row(amps, 9, 0.5, 100_000, seed=2024)
    counts = np.rint(freq * 100_000)
    z = binomial_z(counts, outcome_distribution(amps, 9, 0.5), 100_000)
    assert np.abs(z).max() < 4


def test_estimate_channel_row_reproducible(canonical):
    _, amps = canonical(3)
    a = estimate_channel_row(amps, 1, 0.5, 500, seed=9)[0]
    b = estimate_channel_row(amps, 1, 0.5, 500, seed=9)[0]
    np.testing.assert_array_equal(a, b)
    with pytest.raises(ValueError):
        estimate_channel_row(amps, 1, 0.5, 99, seed=9)


def test_binomial_z_pooling():
    probs = np.array([0.5, 0.4999, 1e-4])
    counts = np.array([500, 500, 0])
    z = binomial_z(counts, probs, 1000)
    assert z.size == 2  # tail cell expected 0.1 hits: dropped
    z = binomial_z([0, 10], [0.0, 1.0], 10)
    np.testing.assert_array_equal(z, [0.0])


def test_monte_carlo_point_weight_classes(canonical):
    params, amps = canonical(32)
    freq, se, max_z = monte_carlo_point(amps, 123, 1.0, 100_000, np.random.default_rng(4))
    target = p_max(params)[0]
    assert abs(freq - target) < 4 * math.sqrt(target * (1 - target) / 100_000)
    assert max_z < 4.5


def test_coin_toss_simulation(canonical):
    _, amps = canonical(4)
    T = 100_000
    acted, passed = simulate_coin_toss(amps, 5, T, np.random.default_rng(8))
    assert abs(acted / T - 0.5) < 3 * math.sqrt(0.25 / T)
    target = 0.5 + 0.5 * escape_probability(amps, 5, 1.0)
    assert abs(passed / T - target) < 3 * math.sqrt(target * (1 - target) / T)
    assert simulate_coin_toss(identity_amplitudes(8), 1, T, np.random.default_rng(8))[1] == T


def test_derive_rng_independent_of_order():
    a = derive_rng(42, 1, 7).random(3)
    derive_rng(42, 1, 3).random(10)
    np.testing.assert_array_equal(a, derive_rng(42, 1, 7).random(3))
    assert not np.array_equal(a, derive_rng(42, 1, 8).random(3))


def test_select_messages():
    assert select_messages(8, "all", 0, 0) == list(range(8))
    assert select_messages(4, 64, 0, 0) == [0, 1, 2, 3]
    picked = select_messages(1024, 10, 5, 0)
    assert len(picked) == 10 == len(set(picked)) and picked == sorted(picked)
    assert picked == select_messages(1024, 10, 5, 0)
    big = select_messages(2**64, 5, 1, 0)
    assert len(big) == 5 and all(0 <= m < 2**64 for m in big)
    with pytest.raises(ValueError):
        select_messages(8, [9], 0, 0)


def test_run_experiment_analytic_only():
    rows = run_experiment(ExperimentConfig(n_values=(3,), nu_grid=(0.5,), messages=[1, 2]))
    assert [r.message for r in rows] == [1, 2]
    for r in rows:
        assert r.mc_identify is None and r.mc_stderr is None and r.max_z is None
        assert r.trials == 0
        assert r.uniform_w == 0.5
        assert r.escape_p >= 0.5


def test_sweep_identify_reproduces_p_max():
    ns = (4, 8, 16, 32)
    rows = run_experiment(ExperimentConfig(n_values=ns, nu_grid=(1.0,), messages=1, trials=10_000, seed=3))
    assert [r.n for r in rows] == list(ns)
    ident = [r.identify_p for r in rows]
    for r in rows:
        assert r.identify_p == pytest.approx(p_max(make_params(r.n, THETA, ALPHA))[0], rel=1e-12)
    assert all(a > b for a, b in zip(ident, ident[1:]))


def test_run_experiment_order_and_seed_independence():
    base = dict(n_values=(5, 2), nu_grid=(1.0, 0.0, 0.5), messages=3, trials=1000)
    r1 = run_experiment(ExperimentConfig(**base, seed=1))
    r2 = run_experiment(ExperimentConfig(**base, seed=2))
    keys = [(r.n, r.nu, r.message) for r in r1]
    assert keys == sorted(keys)
    analytic = ("identify_p", "bit_error", "mi_bits", "uniform_w", "escape_p", "coin_escape_p")
    by_key = {(r.n, r.nu, r.message): r for r in r2}
    for r in r1:
        if (r.n, r.nu, r.message) in by_key:
            other = by_key[(r.n, r.nu, r.message)]
            assert all(getattr(r, f) == getattr(other, f) for f in analytic)


def test_parallel_equals_serial():
    base = dict(n_values=(2, 4, 6), nu_grid=(0.2, 0.9), messages=4, trials=2000, seed=77)
    assert run_experiment(ExperimentConfig(**base, workers=1)) == run_experiment(ExperimentConfig(**base, workers=3))


def test_metric_selection():
    rows = run_experiment(ExperimentConfig(n_values=(3,), outputs=("identify_p",)))
    assert rows[0].identify_p is not None
    assert rows[0].mi_bits is None and rows[0].escape_p is None


def test_statistical_agreement_per_entry():
    # at most 1% of individual z-scores beyond 4
    rows_z = []
    for n in (3, 5, 7):
        from qseal import canonical_amplitudes
        amps = canonical_amplitudes(make_params(n, THETA, ALPHA))
        for idx, nu in enumerate((0.1, 0.5, 1.0)):
            rng = derive_rng(5, n, idx)
            p = outcome_distribution(amps, 0, nu)
            counts = np.bincount(sample_outcomes(p, rng, 100_000), minlength=amps.N)
            rows_z.append(binomial_z(counts, p, 100_000))
    z = np.abs(np.concatenate(rows_z))
    assert np.mean(z > 4) <= 0.01


@pytest.mark.parametrize("kwargs", [dict(trials=-1), dict(nu_grid=(1.2,)), dict(nu_grid=()),
                                    dict(alpha=0.6), dict(outputs=("bogus",)), dict(seed=-1)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


def test_scaling_table():
    rows = scaling_table(THETA, ALPHA, [4, 8, 16, 32, 64])
    eps = [r.epsilon for r in rows]
    exact = [r.p_max_exact for r in rows]
    assert all(a > b for a, b in zip(eps, eps[1:]))
    assert all(a > b for a, b in zip(exact, exact[1:]))
    # mpmath, 30 digits
    assert rows[-1].log_ratio == pytest.approx(0.993528594224534102354700884035, rel=1e-10)
    assert rows[0].log_ratio == pytest.approx(0.973540306949817435054022549399, rel=1e-10)
    with pytest.raises(ValueError):
        scaling_table(1.0, ALPHA, [4])
