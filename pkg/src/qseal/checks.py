"""Executable invariant suite behind ``qseal verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import (
    chau_coefficients,
    completeness_defect,
    escape_probability,
    kraus_diagonals,
)
from .harness import ExperimentConfig, derive_rng, monte_carlo_point, run_experiment, scaling_table, simulate_coin_toss
from .infometrics import (
    binary_entropy,
    channel_matrix,
    mutual_information,
    noise_floor_decomposition,
)
from .report import emit_report
from .seal import canonical_amplitudes, identity_amplitudes, make_params, random_amplitudes

NU_GRID = tuple(k / 10 for k in range(11))
THETA = math.pi / 8
ALPHA = 0.25
SEED = 20061019
MC_TRIALS = 100_000

# n <= 8, full nu grid, up to 8 sealed messages per n
STANDARD_SWEEP = dict(n_values=tuple(range(1, 9)), nu_grid=NU_GRID, messages=8)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_dims(rng, count, max_log2=8):
    return [2 ** int(k) for k in rng.integers(1, max_log2 + 1, size=count)]


def check_kraus_equivalence(schemes=100) -> CheckResult:
    rng = derive_rng(SEED, 1)
    worst = 0.0
    for N in _random_dims(rng, schemes):
        amps = random_amplitudes(N, rng, concentration=float(rng.uniform(0.2, 3.0)))
        lam = amps.dense()
        for nu in NU_GRID:
            K = kraus_diagonals(nu, N)
            closed = (1 - nu) / N + nu * lam**2
            for ip in range(N):
                branch = K * lam[ip][None, :]
                worst = max(worst, float(np.abs((branch**2).sum(axis=1) - closed[ip]).max()))
    return CheckResult("kraus_equivalence", worst <= 1e-12, f"max |diff| = {worst:.3e}")


def check_completeness() -> CheckResult:
    worst = max(
        completeness_defect(chau_coefficients(nu, 2**k)) for nu in NU_GRID for k in range(1, 13)
    )
    return CheckResult("completeness", worst <= 1e-12, f"max defect = {worst:.3e}")


def check_noise_floor() -> CheckResult:
    rng = derive_rng(SEED, 3)
    amps_list = [canonical_amplitudes(make_params(n, THETA, ALPHA)) for n in range(1, 9)]
    amps_list += [random_amplitudes(N, rng) for N in _random_dims(rng, 10)]
    floor_gap = math.inf
    w_err = 0.0
    for amps in amps_list:
        ch = channel_matrix(amps, 0.5)
        floor_gap = min(floor_gap, float(ch.rows.min() - 1 / (2 * ch.N)))
        w, _ = noise_floor_decomposition(ch)
        w_err = max(w_err, abs(w - 0.5))
    ok = floor_gap >= -1e-12 and w_err <= 1e-10
    return CheckResult("noise_floor", ok, f"min(entry - 1/2N) = {floor_gap:.3e}, |w - 1/2| <= {w_err:.1e}")


def check_triviality_bound() -> CheckResult:
    rng = derive_rng(SEED, 4)
    schemes = [canonical_amplitudes(make_params(n, THETA, ALPHA)) for n in range(1, 11)]
    schemes += [random_amplitudes(N, rng, float(rng.uniform(0.2, 3.0))) for N in _random_dims(rng, 50)]
    worst = -math.inf
    for amps in schemes:
        honest = mutual_information(channel_matrix(amps, 1.0))
        for nu in NU_GRID:
            worst = max(worst, mutual_information(channel_matrix(amps, nu)) - nu * honest)
    return CheckResult("triviality_bound", worst <= 1e-9, f"max I(nu) - nu I(1) = {worst:.3e}")


def check_bsc_factorization() -> CheckResult:
    worst = 0.0
    for n in range(2, 11):
        params = make_params(n, THETA, ALPHA)
        mi = mutual_information(channel_matrix(canonical_amplitudes(params), 1.0))
        worst = max(worst, abs(mi - n * (1 - binary_entropy(params.epsilon))))
    return CheckResult("bsc_factorization", worst <= 1e-9, f"max |diff| = {worst:.3e} bits")


def check_scaling() -> CheckResult:
    rows = scaling_table(THETA, ALPHA, [4, 8, 16, 32, 64])
    exact = [r.p_max_exact for r in rows]
    eps = [r.epsilon for r in rows]
    ok = (
        all(a > b for a, b in zip(exact, exact[1:]))
        and exact[-1] < exact[0] / 2
        and all(a > b for a, b in zip(eps, eps[1:]))
        and 0.9 <= rows[-1].log_ratio <= 1.1
    )
    return CheckResult(
        "scaling", ok,
        f"p_max {exact[0]:.4f} -> {exact[-1]:.4f}, log ratio at n=64 = {rows[-1].log_ratio:.4f}",
    )


def check_coin_toss() -> CheckResult:
    T = MC_TRIALS
    amps = canonical_amplitudes(make_params(4, THETA, ALPHA))
    acted, passed = simulate_coin_toss(amps, 5, T, derive_rng(SEED, 7, 0))
    z_acted = (acted / T - 0.5) / math.sqrt(0.25 / T)
    target = 0.5 + 0.5 * escape_probability(amps, 5, 1.0)
    z_pass = (passed / T - target) / math.sqrt(target * (1 - target) / T)
    _, passed_eig = simulate_coin_toss(identity_amplitudes(16), 5, T, derive_rng(SEED, 7, 1))
    ok = abs(z_acted) < 3 and abs(z_pass) < 3 and passed_eig == T
    return CheckResult(
        "coin_toss", ok,
        f"z(acted) = {z_acted:+.2f}, z(pass) = {z_pass:+.2f}, eigenstate pass {passed_eig}/{T}",
    )


def check_escape_half() -> CheckResult:
    worst = min(
        escape_probability(canonical_amplitudes(make_params(n, THETA, ALPHA)), 0, 0.5)
        for n in range(2, 11)
    )
    return CheckResult("escape_at_least_half", worst >= 0.5 - 1e-10,
                       f"min escape = {worst:.6f} (projective verifier model)")


def check_monte_carlo_agreement() -> CheckResult:
    rows = run_experiment(ExperimentConfig(**STANDARD_SWEEP, trials=MC_TRIALS, seed=SEED,
                                           outputs=("identify_p",)))
    bad = sum(r.max_z >= 4 for r in rows)
    frac = 1 - bad / len(rows)
    return CheckResult("monte_carlo_agreement", frac >= 0.99,
                       f"{len(rows) - bad}/{len(rows)} points with max |z| < 4")


def check_determinism(tmpdir=None) -> CheckResult:
    import io

    def render(workers, seed=SEED):
        config = ExperimentConfig(n_values=(2, 4, 6), nu_grid=(0.0, 0.5, 1.0), trials=10_000,
                                  seed=seed, messages=4, workers=workers)
        buf = io.StringIO()
        emit_report(run_experiment(config), "csv", stream=buf)
        return buf.getvalue()

    first, second, parallel = render(1), render(1), render(4)
    ok = first == second == parallel
    return CheckResult("determinism", ok, "serial x2 and parallel outputs identical" if ok else "outputs differ")


ALL_CHECKS = (
    check_kraus_equivalence,
    check_completeness,
    check_noise_floor,
    check_triviality_bound,
    check_bsc_factorization,
    check_scaling,
    check_coin_toss,
    check_escape_half,
    check_monte_carlo_agreement,
    check_determinism,
)


def run_all() -> list[CheckResult]:
    return [check() for check in ALL_CHECKS]
