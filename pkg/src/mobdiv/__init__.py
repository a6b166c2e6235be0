"""Minimum-correlation exploration paths for robotic mobility diversity."""
from .bessel import Z0, j0
from .errors import NumericalError, ParameterError
from .estimation import (
    EstimateSet,
    SmootherConfig,
    lmmse_coefficients,
    neighborhoods,
    select_qopt,
    smooth_all,
    theoretical_mse,
)
from .fading import (
    CorrelationMatrix,
    FieldRealization,
    NoiseModel,
    correlation_matrix,
    jakes_correlation,
    observe,
    sample_field,
)
from .geometry import (
    CircularPath,
    OrientedPath,
    SamplingSet,
    SplinePath,
    arc_length,
    choose_orientation,
    circular_path,
    fit_spline,
    linear_path,
    sample_uniform,
    scale_to_length,
)
from .pathopt import (
    AnnealingConfig,
    PathCostReport,
    PathPoints,
    angles_to_points,
    is_straight_line_regime,
    make_path_points,
    optimize_path,
    path_cost,
)
from .sim import (
    EnergyModel,
    StoppingConfig,
    SummaryStats,
    TrialConfig,
    TrialResult,
    monte_carlo,
    run_cmda_trial,
    run_stopping_trial,
    simulate_trials,
    sweep,
)

__version__ = "0.1.0"
