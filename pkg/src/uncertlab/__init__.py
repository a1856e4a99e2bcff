"""Desk-scale laboratory for position-momentum uncertainty trade-offs.

Three families of trade-offs are checked numerically on periodized
lattices: spread and overall-width relations for state preparations,
inaccuracy relations for approximate joint measurements of position and
momentum (covariant phase-space observables, a measure-then-evolve
instrument, and the two-probe coupling model), and the accuracy versus
disturbance balance of sequential measurement.  Everything reduces to
exact lattice linear algebra plus FFTs; reports carry machine-checkable
bound tags from `uncertlab.reporting.TAGS`.
"""

from .errors import (
    AliasingError,
    BoundaryAliasingWarning,
    ConditioningError,
    ConvergenceWarning,
    CostLimitError,
    CoverageError,
    GridError,
    NumericsError,
    ParameterError,
    ProbeValidityError,
    RepresentationError,
    ResolutionError,
    UncertaintyViolationError,
    UncertLabError,
    UntrustedMomentWarning,
    UsageError,
)
from .grids import (
    GridSpec,
    WaveFunction,
    as_momentum,
    as_position,
    boundary_mass,
    parity,
    to_momentum,
    to_position,
    transform_matrix,
    weyl_shift,
)
from .states import (
    DensityMatrixT,
    box,
    gaussian,
    mixture,
    parity_conjugate,
    pure_density,
)
from .stats import (
    ProbabilityDensity,
    WidthReport,
    check_overall_width_ur,
    check_preparation_ur,
    localization_bound,
    localization_bound_sharp,
    momentum_density,
    overall_width,
    position_density,
    stddev,
    target_spreads,
    total_variation,
)
from .concentration import (
    A0Result,
    OperatorMatrix,
    PeriodicSetFunction,
    largest_a0,
    min_area_for_confidence,
    optimal_localization,
    periodic_commutator,
    projector_momentum,
    projector_position,
)
from .covariant import (
    CovariantObservable,
    PhaseSpaceDensity,
    SmearingMeasure,
    WarpMap,
    WERNER_DISTANCE_CONSTANT,
    check_covariant_state_ur,
    error_bar_calibrate,
    gt_from_T,
    husimi,
    inaccuracy_measures,
    oscillator_basis,
    pushforward_density,
    smear,
    warp_observable,
    werner_constant_search,
    werner_distance_estimate,
)
from .sequential import (
    SequentialInstrument,
    T_for,
    build_instrument,
    disturbance_report,
    posterior_state,
    probe_grid,
    sequential_joint,
)
from .arthurs_kelly import (
    AKParams,
    TriState,
    ak_analytic_variances,
    ak_evolve,
    ak_gamma_study,
    ak_joint_distribution,
)
from .reporting import (
    BoundCheck,
    Report,
    TAGS,
    ceiling_check,
    floor_check,
    report_to_dict,
    write_checks_csv,
    write_plotdata,
    write_report_json,
    write_series_csv,
)
from .fileio import load_density, load_wavefunction, save_density, save_wavefunction

__version__ = "0.1.0"

__all__ = [
    "AKParams",
    "A0Result",
    "AliasingError",
    "BoundCheck",
    "BoundaryAliasingWarning",
    "ConditioningError",
    "ConvergenceWarning",
    "CostLimitError",
    "CovariantObservable",
    "CoverageError",
    "DensityMatrixT",
    "GridError",
    "GridSpec",
    "NumericsError",
    "OperatorMatrix",
    "ParameterError",
    "PeriodicSetFunction",
    "PhaseSpaceDensity",
    "ProbabilityDensity",
    "ProbeValidityError",
    "Report",
    "RepresentationError",
    "ResolutionError",
    "SequentialInstrument",
    "SmearingMeasure",
    "TAGS",
    "TriState",
    "T_for",
    "UncertLabError",
    "UncertaintyViolationError",
    "UntrustedMomentWarning",
    "UsageError",
    "WERNER_DISTANCE_CONSTANT",
    "WarpMap",
    "WaveFunction",
    "WidthReport",
    "ak_analytic_variances",
    "ak_evolve",
    "ak_gamma_study",
    "ak_joint_distribution",
    "as_momentum",
    "as_position",
    "boundary_mass",
    "box",
    "build_instrument",
    "ceiling_check",
    "check_covariant_state_ur",
    "check_overall_width_ur",
    "check_preparation_ur",
    "disturbance_report",
    "error_bar_calibrate",
    "floor_check",
    "gaussian",
    "gt_from_T",
    "husimi",
    "inaccuracy_measures",
    "largest_a0",
    "load_density",
    "load_wavefunction",
    "localization_bound",
    "localization_bound_sharp",
    "min_area_for_confidence",
    "mixture",
    "momentum_density",
    "optimal_localization",
    "oscillator_basis",
    "overall_width",
    "parity",
    "parity_conjugate",
    "periodic_commutator",
    "position_density",
    "posterior_state",
    "probe_grid",
    "projector_momentum",
    "projector_position",
    "pure_density",
    "pushforward_density",
    "save_density",
    "save_wavefunction",
    "sequential_joint",
    "smear",
    "stddev",
    "target_spreads",
    "to_momentum",
    "to_position",
    "total_variation",
    "transform_matrix",
    "warp_observable",
    "werner_constant_search",
    "werner_distance_estimate",
    "weyl_shift",
    "write_checks_csv",
    "write_plotdata",
    "report_to_dict",
    "write_report_json",
    "write_series_csv",
]
