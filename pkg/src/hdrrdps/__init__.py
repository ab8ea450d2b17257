"""High-dimensional round-robin differential-phase-shift QKD toolkit.

Analytic secret-key-rate bounds with and without signal-disturbance
monitoring, a brute-force collective-attack oracle for small packets, a
deterministic Monte Carlo round simulator, and a lossy-channel/detector model
for key-rate-versus-loss curves.
"""

from .attack import (
    AttackMatrix,
    NonNormalizedDensity,
    SubsetIndex,
    VerificationReport,
    ZeroYieldError,
    ancilla_density,
    born_error_mc,
    error_subset,
    holevo_subset,
    overall_error,
    overall_iae,
    random_attack,
    subset_yield,
    subsets,
    verify,
    xsplit,
)
from .bounds import (
    AttackSplit,
    KeyRateResult,
    MaxIae,
    ProtocolParams,
    ThresholdResult,
    error_cap,
    error_lower_bound,
    iae_bound,
    max_iae,
    rate_monitor,
    rate_no_monitor,
    threshold,
    x1_from_error,
)
from .channel import (
    EmisTable,
    EmisTableError,
    NoiseModel,
    RatePoint,
    detection_yield,
    load_emis_table,
    qber,
    rate_curve,
    transmission,
)
from .core import (
    BINOM_MAX_N,
    DomainError,
    binom,
    dit_entropy,
    entropy_term,
    sift_probability,
    weight_entropy,
)
from .simulation import (
    Packet,
    RoundOutcome,
    SimStats,
    choose_subset,
    iter_rounds,
    mub_probabilities,
    prepare_packet,
    run,
    sift_check,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "AttackMatrix",
    "AttackSplit",
    "BINOM_MAX_N",
    "DomainError",
    "EmisTable",
    "EmisTableError",
    "KeyRateResult",
    "MaxIae",
    "NoiseModel",
    "NonNormalizedDensity",
    "Packet",
    "ProtocolParams",
    "RatePoint",
    "RoundOutcome",
    "SimStats",
    "SubsetIndex",
    "ThresholdResult",
    "VerificationReport",
    "ZeroYieldError",
    "ancilla_density",
    "binom",
    "born_error_mc",
    "choose_subset",
    "detection_yield",
    "dit_entropy",
    "entropy_term",
    "error_cap",
    "error_lower_bound",
    "error_subset",
    "holevo_subset",
    "iae_bound",
    "iter_rounds",
    "load_emis_table",
    "max_iae",
    "mub_probabilities",
    "overall_error",
    "overall_iae",
    "prepare_packet",
    "qber",
    "random_attack",
    "rate_curve",
    "rate_monitor",
    "rate_no_monitor",
    "run",
    "sift_check",
    "sift_probability",
    "subset_yield",
    "subsets",
    "threshold",
    "transmission",
    "verify",
    "weight_entropy",
    "wilson_interval",
    "x1_from_error",
    "xsplit",
]
