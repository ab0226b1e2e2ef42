"""Phase-estimation uncertainty bounds for a lossy Mach-Zehnder interferometer."""

__version__ = "0.1.0"

from .bounds import (chop_optimal, chop_uncertainty, heisenberg_limit, multipass_as_resource,
                     multipass_optimal, multipass_uncertainty, noon_uncertainty)
from .classical import (fisher_analytic, fisher_numeric, maxvis_uncertainty, optimal_transmission,
                        output_means, sil_uncertainty, uncertainty_vs_phase)
from .core import DomainError, InterferometerParams, StrategyPoint, WeightVector
from .montecarlo import mle_estimate, rmse_vs_crb, simulate_clicks
from .quantum import (noon_restricted_optimum, optimize_multipass, optimize_weights,
                      quantum_multipass_uncertainty, quantum_uncertainty)

__all__ = [
    "DomainError", "InterferometerParams", "StrategyPoint", "WeightVector",
    "chop_optimal", "chop_uncertainty", "fisher_analytic", "fisher_numeric", "heisenberg_limit",
    "maxvis_uncertainty", "mle_estimate", "multipass_as_resource", "multipass_optimal",
    "multipass_uncertainty", "noon_restricted_optimum", "noon_uncertainty",
    "optimal_transmission", "optimize_multipass", "optimize_weights", "output_means",
    "quantum_multipass_uncertainty", "quantum_uncertainty", "rmse_vs_crb", "sil_uncertainty",
    "simulate_clicks", "uncertainty_vs_phase",
]
