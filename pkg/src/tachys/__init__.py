"""Time-optimal qubit dynamics under Hermitian, metric-deformed, and open drives."""

from .brachistochrone import (
    BrachistochroneResult,
    OptimalHamiltonianSpec,
    first_passage_scan,
    minimal_time,
    optimal_hamiltonian,
    transfer,
)
from .dilation import DilationModel, build_dilation, evolve_dilated, visibility_ratio
from .gates import (
    BlochBasis,
    ChannelDecompositionError,
    ControlUReport,
    DegenerateBasisError,
    EfficiencyReport,
    NotGateReport,
    Povm,
    cloning_defect,
    control_u_channel,
    discrimination_povm,
    efficiency_bound,
    inconclusive_probability,
    not_gate_roundtrip,
)
from .metric import (
    Metric,
    QuasiHamiltonian,
    diag_metric,
    metric_angle,
    metric_from_matrix,
    metric_from_sqrt,
    pseudo_hermiticity_defect,
    quasi_hamiltonian,
    state_angle,
    transition_defect,
)
from .opendyn import (
    AlignmentError,
    DissipationScanRow,
    EvolutionTrace,
    OpenSplit,
    aligned_hamiltonian,
    dissipation_scan,
    dissipative_factor,
    energy_gap_squared,
    evolve_semigroup,
    map_boundary_states,
    revelation_probability,
    shifted_generator,
    split_generator,
)
from .smallmat import MetricDegeneracyError, fidelity, propagator, spectral_gap

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "BlochBasis",
    "BrachistochroneResult",
    "ChannelDecompositionError",
    "ControlUReport",
    "DegenerateBasisError",
    "DilationModel",
    "DissipationScanRow",
    "EfficiencyReport",
    "EvolutionTrace",
    "Metric",
    "MetricDegeneracyError",
    "NotGateReport",
    "OpenSplit",
    "OptimalHamiltonianSpec",
    "Povm",
    "QuasiHamiltonian",
    "aligned_hamiltonian",
    "build_dilation",
    "cloning_defect",
    "control_u_channel",
    "diag_metric",
    "dissipation_scan",
    "dissipative_factor",
    "discrimination_povm",
    "efficiency_bound",
    "energy_gap_squared",
    "evolve_dilated",
    "evolve_semigroup",
    "fidelity",
    "first_passage_scan",
    "inconclusive_probability",
    "map_boundary_states",
    "metric_angle",
    "metric_from_matrix",
    "metric_from_sqrt",
    "minimal_time",
    "not_gate_roundtrip",
    "optimal_hamiltonian",
    "propagator",
    "pseudo_hermiticity_defect",
    "quasi_hamiltonian",
    "revelation_probability",
    "shifted_generator",
    "spectral_gap",
    "split_generator",
    "state_angle",
    "transfer",
    "transition_defect",
    "visibility_ratio",
]
