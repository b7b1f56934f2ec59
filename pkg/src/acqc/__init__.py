"""Exact simulation of analog Rydberg-array annealing for maximum
independent set, with counterdiabatic schedule synthesis.

The workflow: build a unit-disk instance (graph), pick or synthesize a
drive schedule (schedule), assemble the interacting Hamiltonian
(hamiltonian), integrate the Schrodinger equation exactly (evolve), and
score the sampled outcomes against the exact optimum (metrics). The cli
module wires these into the `acqc` command.
"""

from .constants import (
    C6_DEFAULT,
    DELTA_MAX_DEFAULT,
    OMEGA_MAX_DEFAULT,
    SPACING_DEFAULT,
    UNIT_CONVENTION,
    default_blockade_radius,
)
from .errors import (
    AcqcError,
    DimensionError,
    IntegrationError,
    LimitViolationError,
    SingularScheduleError,
)
from .evolve import (
    EvolutionConfig,
    PROTOCOLS,
    RunResult,
    StateVector,
    bitstring_to_index,
    build_protocol_schedule,
    evolve,
    evolve_trajectory,
    ground_state_fidelity,
    index_to_bitstring,
    run_protocol,
    sample_bitstrings,
)
from .graph import (
    CostParams,
    GapConditionReport,
    GridSpec,
    MisSolution,
    UnitDiskGraph,
    check_gap_condition,
    cost_energy,
    generate_kings_graph,
    is_independent,
    load_graph,
    mis_size_by_enumeration,
    save_graph,
    solve_mis_exact,
)
from .hamiltonian import (
    CdCoefficients,
    InteractionMatrix,
    RydbergHamiltonian,
    apply_hamiltonian,
    build_dense,
    build_interactions,
    cd_coefficients,
    gauge_residual,
    zero_interactions,
)
from .metrics import (
    EnergyStats,
    KdeCurve,
    approximation_ratio,
    confidence_interval,
    kde,
)
from .schedule import (
    AnalyticWaveform,
    BoundaryReport,
    DriveSchedule,
    HardwareLimits,
    TabulatedWaveform,
    Waveform,
    cd_transform,
    cd_transform_zero_phase,
    constant_waveform,
    linear_schedule,
    sample_schedule,
    save_schedule_csv,
    save_schedule_json,
    schedule_to_dict,
    smooth_schedule,
    validate_boundary,
    z_rotation_transform,
)
from .verify import CheckResult, run_battery

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "UNIT_CONVENTION",
    "C6_DEFAULT",
    "OMEGA_MAX_DEFAULT",
    "DELTA_MAX_DEFAULT",
    "SPACING_DEFAULT",
    "default_blockade_radius",
    "AcqcError",
    "DimensionError",
    "SingularScheduleError",
    "LimitViolationError",
    "IntegrationError",
    "GridSpec",
    "CostParams",
    "UnitDiskGraph",
    "MisSolution",
    "GapConditionReport",
    "generate_kings_graph",
    "cost_energy",
    "is_independent",
    "solve_mis_exact",
    "mis_size_by_enumeration",
    "check_gap_condition",
    "save_graph",
    "load_graph",
    "HardwareLimits",
    "Waveform",
    "AnalyticWaveform",
    "TabulatedWaveform",
    "constant_waveform",
    "DriveSchedule",
    "BoundaryReport",
    "linear_schedule",
    "smooth_schedule",
    "cd_transform",
    "cd_transform_zero_phase",
    "z_rotation_transform",
    "validate_boundary",
    "sample_schedule",
    "schedule_to_dict",
    "save_schedule_json",
    "save_schedule_csv",
    "InteractionMatrix",
    "build_interactions",
    "zero_interactions",
    "RydbergHamiltonian",
    "apply_hamiltonian",
    "build_dense",
    "CdCoefficients",
    "cd_coefficients",
    "gauge_residual",
    "PROTOCOLS",
    "StateVector",
    "EvolutionConfig",
    "RunResult",
    "index_to_bitstring",
    "bitstring_to_index",
    "evolve",
    "evolve_trajectory",
    "ground_state_fidelity",
    "sample_bitstrings",
    "build_protocol_schedule",
    "run_protocol",
    "EnergyStats",
    "KdeCurve",
    "approximation_ratio",
    "confidence_interval",
    "kde",
    "CheckResult",
    "run_battery",
]
