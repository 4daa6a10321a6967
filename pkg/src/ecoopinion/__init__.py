"""Deterministic simulation and analysis of 2x2 evolutionary games coupled to
environmental feedback and opinion imitation dynamics."""

from .analysis import (
    AXES,
    BasinCell,
    BasinMap,
    FixedPointRecord,
    LABEL_RADIUS,
    NoBoundaryError,
    RESIDUAL_TOL,
    UnresolvedCellError,
    basin_scan,
    distance_to,
    find_fixed_points,
    label_for,
    nearest_fixed_point,
    threshold_bisect,
)
from .config import (
    ConfigError,
    PRESET_NAMES,
    dumps_config,
    load_config,
    parse_config,
    preset_scenario,
    preset_text,
    save_config,
)
from .dynamics import (
    BlowupError,
    CLAMP_MODES,
    CUBE_TOL,
    EnvParams,
    PROTOCOL_MODES,
    StateDerivative,
    SystemState,
    TrustMatrix,
    coupled_rhs,
    environment_rhs,
    imitation_rate,
    make_rhs,
    opinion_rhs,
    opinion_weighted_payoff,
    replicator_rhs,
)
from .game import (
    EquilibriumReport,
    GamePair,
    NASH_TOL,
    Payoff2x2,
    average_payoff,
    check_pd_conditions,
    classify_2x2,
    expected_payoff,
    hawk_dove_matrix,
    hawk_dove_pair,
    interpolate,
)
from .integrate import (
    DerivedSample,
    IntegratorSettings,
    Trajectory,
    euler_step,
    rk4_step,
    simulate,
)
from .scenario import Scenario

__version__ = "0.1.0"

__all__ = [
    "AXES",
    "BasinCell",
    "BasinMap",
    "BlowupError",
    "CLAMP_MODES",
    "CUBE_TOL",
    "ConfigError",
    "DerivedSample",
    "EnvParams",
    "EquilibriumReport",
    "FixedPointRecord",
    "GamePair",
    "IntegratorSettings",
    "LABEL_RADIUS",
    "NASH_TOL",
    "NoBoundaryError",
    "PRESET_NAMES",
    "PROTOCOL_MODES",
    "Payoff2x2",
    "RESIDUAL_TOL",
    "Scenario",
    "StateDerivative",
    "SystemState",
    "Trajectory",
    "TrustMatrix",
    "UnresolvedCellError",
    "average_payoff",
    "basin_scan",
    "check_pd_conditions",
    "classify_2x2",
    "coupled_rhs",
    "distance_to",
    "dumps_config",
    "environment_rhs",
    "euler_step",
    "expected_payoff",
    "find_fixed_points",
    "hawk_dove_matrix",
    "hawk_dove_pair",
    "imitation_rate",
    "interpolate",
    "label_for",
    "load_config",
    "make_rhs",
    "nearest_fixed_point",
    "opinion_rhs",
    "opinion_weighted_payoff",
    "parse_config",
    "preset_scenario",
    "preset_text",
    "replicator_rhs",
    "rk4_step",
    "save_config",
    "simulate",
    "threshold_bisect",
]
