"""Two-point quantum causal structure identification.

Simulates direct-cause (unitary channel) and common-cause (bipartite state)
mechanisms behind an observational measurement oracle and identifies which
one generated an observed Pauli correlation, using the geometry of the
reachable correlation tetrahedra.
"""

from .linalg import (
    AxisAngle,
    DEFAULT_TOL,
    Tolerances,
    axis_angle_from_rotation,
    kron,
    pauli,
    rotation_from_axis_angle,
    rotation_from_unitary,
    unitary_from_axis_angle,
)
from .comb import (
    CommonCause,
    DirectCause,
    JointDistribution,
    MeasurementOracle,
    ObservableSpec,
    Scenario,
    ShotCounts,
    TwoQubitState,
    correlation,
    exact_joint,
    load_scenario,
    make_oracle,
    pauli_vector,
    sample_counts,
    scenario_from_json,
    scenario_to_json,
)
from .geometry import (
    CC_TETRA,
    CC_VERTICES,
    DC_TETRA,
    DC_VERTICES,
    Polytope,
    RegionLabel,
    barycentric,
    classify_region,
    distance,
    member,
    plane_gap,
)
from .identify import (
    AlgoConfig,
    AxisCandidates,
    ClassificationResult,
    SECOND_ROUND_TARGET,
    alignment_scan,
    axis_candidates,
    identify,
    modifier_from_axis,
    second_round,
)
from .scenarios import (
    bell_diagonal,
    bell_ket,
    edge_cc,
    edge_dc,
    haar_unitary,
    phase_bell,
    plane_cc,
    plane_dc,
    random_state,
)
from .bench import (
    ConfusionMatrix,
    SweepRecord,
    TetraReport,
    bootstrap_errorbars,
    exact_margin,
    run_random_bench,
    run_sweep,
    run_tetra_check,
)

__version__ = "0.1.0"
