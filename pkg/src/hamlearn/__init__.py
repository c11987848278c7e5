"""hamlearn: recover local Hamiltonians from local expectation values.

The workflow is: build a constraint matrix K of commutator expectations
<i[A_n, S_m]> from a steady state (or time averages of a trajectory), take
its lowest right-singular vector, and read off the Hamiltonian coefficients.
An exact simulation harness provides the source states: ground states,
Gibbs states, quenches, and periodically driven systems.
"""

from .errors import NumericalError, ResourceLimitError
from .experiments import (
    ExperimentConfig,
    TrialRecord,
    default_checkpoints,
    default_fit_window,
    fit_power_law,
    run_driven,
    run_gibbs_sweep,
    run_groundstate_sweep,
    run_multistate_recovery,
    run_quench,
    run_sweep,
    run_xy_gap_scan,
    sweep_csv_text,
)
from .lattice import Lattice, Region
from .models import (
    Drive,
    HamiltonianSpec,
    ModelFamily,
    attach_generic_drive,
    boundary_sites,
    interior,
    model_terms,
    sample_generic_chain,
    sample_xy_chain,
    spec_from_dict,
    spec_from_json,
    spec_to_dict,
    spec_to_json,
    term_basis_for_model,
)
from .pauli import (
    OperatorBasis,
    PauliString,
    commutator_observable,
    enumerate_basis,
    multiply,
)
from .recovery import (
    ConstraintMatrix,
    ErrorEstimate,
    RecoveryResult,
    build_constraint_matrix,
    build_extended_constraint_matrix,
    build_extended_from_averages,
    error_estimate,
    full_system_correlation_matrix,
    inject_noise,
    reconstruction_error,
    recover,
    stack,
)
from .states import (
    ExpectationCache,
    QuantumState,
    TimeSeriesRecord,
    averaged_states,
    evolve,
    expectation,
    gibbs_state,
    ground_state,
    hamiltonian_matrix,
    matrix_expectation,
    pauli_sparse,
    record_time_series,
    static_hamiltonian,
    steady_state_defect,
    time_averaged_state,
)
from .version import __version__

__all__ = [
    "__version__",
    "NumericalError",
    "ResourceLimitError",
    "Lattice",
    "Region",
    "PauliString",
    "OperatorBasis",
    "multiply",
    "commutator_observable",
    "enumerate_basis",
    "ModelFamily",
    "HamiltonianSpec",
    "Drive",
    "model_terms",
    "term_basis_for_model",
    "interior",
    "boundary_sites",
    "sample_generic_chain",
    "sample_xy_chain",
    "attach_generic_drive",
    "spec_to_dict",
    "spec_from_dict",
    "spec_to_json",
    "spec_from_json",
    "QuantumState",
    "TimeSeriesRecord",
    "ExpectationCache",
    "expectation",
    "matrix_expectation",
    "pauli_sparse",
    "static_hamiltonian",
    "hamiltonian_matrix",
    "ground_state",
    "gibbs_state",
    "evolve",
    "record_time_series",
    "averaged_states",
    "time_averaged_state",
    "steady_state_defect",
    "ConstraintMatrix",
    "RecoveryResult",
    "ErrorEstimate",
    "build_constraint_matrix",
    "build_extended_constraint_matrix",
    "build_extended_from_averages",
    "stack",
    "inject_noise",
    "recover",
    "reconstruction_error",
    "error_estimate",
    "full_system_correlation_matrix",
    "ExperimentConfig",
    "TrialRecord",
    "run_groundstate_sweep",
    "run_gibbs_sweep",
    "run_multistate_recovery",
    "run_quench",
    "run_driven",
    "run_xy_gap_scan",
    "run_sweep",
    "fit_power_law",
    "default_checkpoints",
    "default_fit_window",
    "sweep_csv_text",
]
