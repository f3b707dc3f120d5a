"""Two qubits on a shared waveguide: exchange coupling versus collective decay.

The package simulates a pair of two-level emitters coupled both directly
(excitation exchange with amplitude J) and through a common
one-dimensional channel whose propagation phase phi makes their joint
decay interfere.  Tuning phi against J makes the mutual influence
one-way, shows up in the entanglement dynamics, and under a local drive
pins the pair to an entangled stationary state.
"""

from .dynamics import (
    INITIAL_STATE_NAMES,
    Liouvillian,
    SteadyStateResult,
    TimeGrid,
    Trajectory,
    build_liouvillian,
    evolve_expm,
    evolve_rk4,
    initial_state,
    liouvillian_from_params,
    steady_state,
    unvec,
    validate_density_matrix,
    vec,
)
from .experiments import (
    FIGURE_IDS,
    ExperimentConfig,
    SweepConfig,
    SweepSpec,
    parse_config,
    parse_sweep_config,
    run_experiment,
    run_figure,
    run_sweep,
    trajectory_table,
    write_csv,
)
from .linalg import (
    EigenSystem,
    dagger,
    hermitian_eigensystem,
    kron,
    matrix_exponential,
    null_vector,
    psd_sqrt,
)
from .model import (
    CircuitParams,
    Drive,
    GeometryParams,
    ModelParams,
    build_coherent_hamiltonian,
    build_drive_hamiltonian,
    build_hamiltonian,
    build_jump_operators,
    collective_decay_matrix,
    coupling_from_circuit,
    phase_from_separation,
    sigma_minus,
    sigma_plus,
    sigma_z,
    transmon_frequency,
)
from .observables import (
    COLLECTIVE_TRANSFORM,
    CollectivePopulations,
    IsolationReport,
    collective_populations,
    concurrence,
    damping_forces,
    effective_decay_amplitudes,
    isolation_map,
    populations,
    to_collective_basis,
)

__version__ = "0.1.0"
