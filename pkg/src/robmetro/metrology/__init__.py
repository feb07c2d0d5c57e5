# this_file: src/robmetro/metrology/__init__.py

"""Fisher information, damping rates, precision curves and theta estimation."""

from robmetro.metrology.damping import (
    analytic_probability,
    analytic_trajectory,
    gamma_dephasing,
    gamma_exact_mixed,
    gamma_exact_mixed_rescaled,
    gamma_for_channel,
    gamma_mixed,
    mixed_gamma_correction,
)
from robmetro.metrology.estimation import estimate_theta
from robmetro.metrology.fisher import (
    FisherInformation,
    cfi,
    is_degenerate,
    q_pure,
    qfi,
    unitary_derivative,
    variance_bound,
    variance_from_enumerator,
)
from robmetro.metrology.precision import analytic_precision, cramer_rao_curve, precision_from_trajectories

__all__ = [
    "FisherInformation",
    "analytic_precision",
    "analytic_probability",
    "analytic_trajectory",
    "cfi",
    "cramer_rao_curve",
    "estimate_theta",
    "gamma_dephasing",
    "gamma_exact_mixed",
    "gamma_exact_mixed_rescaled",
    "gamma_for_channel",
    "gamma_mixed",
    "is_degenerate",
    "mixed_gamma_correction",
    "precision_from_trajectories",
    "q_pure",
    "qfi",
    "unitary_derivative",
    "variance_bound",
    "variance_from_enumerator",
]
