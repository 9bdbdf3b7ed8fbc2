"""Simulation and analysis of imperfect quantum string seals under measurement attacks."""

from .attack import (
    AttackOutcome,
    DegenerateBranchError,
    DiagonalKraus,
    MeasurementCoefficients,
    apply_kraus,
    chau_coefficients,
    coin_toss_attack,
    coin_toss_escape,
    completeness_defect,
    escape_probability,
    identify_probability,
    kraus_diagonals,
    kraus_operator,
    outcome_distribution,
    verification_passes,
)
from .harness import (
    ExperimentConfig,
    derive_rng,
    estimate_channel_row,
    run_experiment,
    sample_outcome,
    sample_outcomes,
    scaling_table,
    simulate_coin_toss,
)
from .infometrics import (
    ChannelMatrix,
    binary_entropy,
    canonical_mutual_information,
    channel_matrix,
    entropy,
    guessing_probability,
    largest_uniform_weight,
    mutual_information,
    noise_floor_decomposition,
    per_bit_error_rate,
)
from .report import ReportRow, ScalingRow, emit_report, load_dense_scheme, read_report, save_dense_scheme
from .seal import (
    AmplitudeMatrix,
    SealParameters,
    StateVector,
    canonical_amplitudes,
    hamming,
    honest_readout_distribution,
    identity_amplitudes,
    make_params,
    p_max,
    random_amplitudes,
    readability_check,
    sealed_state,
    uniform_amplitudes,
)

__version__ = "0.1.0"
