"""Hyperfine EIT ladder simulator.

Enumerates hyperfine dipole transitions of a four-level Rydberg ladder,
diagonalizes the RF dressing Hamiltonian on the Rydberg pair, and
computes Doppler-free probe transmission spectra with a weak-probe
linear-response solver cross-checked against a dense Lindblad oracle.

All frequencies are linear MHz (angular = 2*pi*value).
"""

from .angular import (
    HalfInteger,
    SymbolValue,
    clebsch_gordan,
    dipole_angular_factor,
    triangle_ok,
    wigner3j,
    wigner6j,
)
from .config import RunConfig, ScanSpec, default_config, load_config, parse_config, \
    write_config
from .couplings import (
    Coupling,
    CouplingSet,
    FieldSpec,
    count_transitions,
    enumerate_couplings,
    export_diagram,
    reachable_origin_filter,
    spherical_components,
)
from .dressing import (
    DressedResult,
    RfHamiltonian,
    build_rf_hamiltonian,
    diagonalize,
    fine_structure_reference,
    unique_eigenvalues,
)
from .errors import (
    ConfigError,
    DegenerateSteadyStateError,
    NumericalContractError,
    SingularSystemError,
    SolverError,
    SystemSizeError,
)
from .model import (
    ROLE_ORDER,
    BasisState,
    FineLevel,
    Scenario,
    StateBasis,
    build_basis,
    hyperfine_manifolds,
    scenario_full,
    scenario_truncated,
)
from .spectrum import (
    DecayModel,
    DriveConfig,
    Peak,
    SpectrumSeries,
    cross_validation_deviation,
    cross_validation_systems,
    find_peaks,
    scan_spectrum,
    steady_state_lindblad,
    susceptibility_from_rho,
    weak_probe_response,
)
from .validate import racah_wigner3j, racah_wigner6j, run_validation

__version__ = "0.1.0"

__all__ = [
    "HalfInteger", "SymbolValue", "wigner3j", "wigner6j", "clebsch_gordan",
    "dipole_angular_factor", "triangle_ok",
    "FineLevel", "Scenario", "BasisState", "StateBasis", "ROLE_ORDER",
    "hyperfine_manifolds", "scenario_full", "scenario_truncated", "build_basis",
    "FieldSpec", "Coupling", "CouplingSet", "spherical_components",
    "enumerate_couplings", "count_transitions", "reachable_origin_filter",
    "export_diagram",
    "RfHamiltonian", "DressedResult", "build_rf_hamiltonian", "diagonalize",
    "unique_eigenvalues", "fine_structure_reference",
    "DecayModel", "DriveConfig", "SpectrumSeries", "Peak", "weak_probe_response",
    "scan_spectrum", "find_peaks", "steady_state_lindblad",
    "susceptibility_from_rho", "cross_validation_systems",
    "cross_validation_deviation",
    "RunConfig", "ScanSpec", "parse_config", "load_config", "write_config",
    "default_config",
    "ConfigError", "NumericalContractError", "SolverError", "SingularSystemError",
    "DegenerateSteadyStateError", "SystemSizeError",
    "racah_wigner3j", "racah_wigner6j", "run_validation",
    "__version__",
]
