"""Exact-diagonalization study of a long-range transverse-field Ising chain
with a single-spin dephasing witness for spin-rest quantum correlations."""

from .model import (
    ModelSpectrum,
    SpinChainParams,
    build_hamiltonian,
    coupling,
    energy_gap,
    ground_state,
    parity_operator,
    spectrum,
    thermal_state,
)
from .protocol import (
    TimeGrid,
    WitnessReport,
    WitnessTrace,
    dephase,
    evolve,
    global_D,
    global_Dmin,
    ground_witness_report,
    local_trajectory,
    marginal_eigenbasis,
    negativity,
    schmidt_dephasing_basis,
    witness_dmin,
    witness_trace,
)
from .qcore import (
    DensityMatrix,
    PureState,
    QubitBasis,
    SchmidtData,
    SpectralDecomposition,
    embed_site_operator,
    hermitian_eig,
    make_ghz,
    partial_trace_keep_site,
    partial_trace_remove_site,
    partial_transpose_site,
    sample_qubit_basis,
    schmidt_qubit,
    trace_distance,
    trace_norm,
)
from .sweep import (
    SweepConfig,
    SweepInvariantError,
    SweepRow,
    run_ground_sweep,
    run_spectrum_report,
    run_thermal_sweep,
    run_witness_trace,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "ModelSpectrum",
    "PureState",
    "QubitBasis",
    "SchmidtData",
    "SpectralDecomposition",
    "SpinChainParams",
    "SweepConfig",
    "SweepInvariantError",
    "SweepRow",
    "TimeGrid",
    "WitnessReport",
    "WitnessTrace",
    "build_hamiltonian",
    "coupling",
    "dephase",
    "embed_site_operator",
    "energy_gap",
    "evolve",
    "global_D",
    "global_Dmin",
    "ground_state",
    "ground_witness_report",
    "hermitian_eig",
    "local_trajectory",
    "make_ghz",
    "marginal_eigenbasis",
    "negativity",
    "parity_operator",
    "partial_trace_keep_site",
    "partial_trace_remove_site",
    "partial_transpose_site",
    "run_ground_sweep",
    "run_spectrum_report",
    "run_thermal_sweep",
    "run_witness_trace",
    "sample_qubit_basis",
    "schmidt_dephasing_basis",
    "schmidt_qubit",
    "spectrum",
    "thermal_state",
    "trace_distance",
    "trace_norm",
    "witness_dmin",
    "witness_trace",
]
