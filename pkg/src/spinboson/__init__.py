"""Non-Markovian open-system dynamics for the spin-boson model.

A second-order time-local master equation with pluggable system operators
and bath correlations, instantiated in closed form for a two-level system
coupled to discrete bosonic modes at arbitrary temperature, together with
an exact truncated-Fock-space reference solver for validation.
"""

__version__ = "0.1.0"

from .linalg import (DEFAULT_TOLS, SubsystemShape, Tolerances, commutator,
                     hermitian_propagator, kron, partial_trace)
from .master_eq import (BathStatistics, InteractionDecomposition,
                        TraceDriftError, Trajectory, first_order_hamiltonian,
                        propagate, rhs, second_order_generator)
from .oracle import (BathDimensionError, TruncatedBath, dyson_terms,
                     exact_reduced_dynamics, full_hamiltonian,
                     map_inversion_residual, reduced_map_deviation,
                     thermal_bath_state)
from .spin_boson import (RateChannel, RateFunctions, SpectralDiscretization,
                         SpinBosonModel, bath_statistics, coherence_solution,
                         element_ode_matrix, flat_density,
                         interaction_decomposition, markov_rates,
                         ohmic_density, population_solution, rate_functions,
                         second_order_hamiltonian, thermal_occupation,
                         vacuum_rates, vacuum_rhs)

__all__ = [
    "__version__",
    # linear algebra
    "Tolerances", "DEFAULT_TOLS", "SubsystemShape",
    "kron", "partial_trace", "commutator", "hermitian_propagator",
    # master equation engine
    "InteractionDecomposition", "BathStatistics", "Trajectory",
    "TraceDriftError", "first_order_hamiltonian", "second_order_generator",
    "rhs", "propagate",
    # spin-boson model
    "SpinBosonModel", "SpectralDiscretization", "RateChannel", "RateFunctions",
    "thermal_occupation", "rate_functions", "second_order_hamiltonian",
    "element_ode_matrix", "coherence_solution", "population_solution",
    "vacuum_rates", "vacuum_rhs", "markov_rates", "ohmic_density",
    "flat_density", "interaction_decomposition", "bath_statistics",
    # exact reference
    "TruncatedBath", "BathDimensionError", "full_hamiltonian",
    "thermal_bath_state", "exact_reduced_dynamics", "dyson_terms",
    "reduced_map_deviation", "map_inversion_residual",
]
