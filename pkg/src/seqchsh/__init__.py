"""Sequential CHSH nonlocality recycling: states, strategies, trade-offs,
frontiers, and shot-noise simulation."""

from .chsh import (
    ChshPair,
    MixedStrategy,
    TSIRELSON,
    chsh_numeric,
    closed_form,
    correlator,
    evaluate_case,
    evaluate_mixed,
    mix,
    tradeoff_closed_form,
)
from .frontier import (
    EqualPointResult,
    FrontierCurve,
    RegionGridSpec,
    RegionMap,
    deterministic_pair,
    equal_point,
    full_frontier,
    make_case,
    optimal_state_angle,
    region_map,
    violation_interval,
)
from .linalg import NumericalError
from .shotsim import (
    CountRecord,
    Estimate,
    ExperimentResult,
    ShotConfig,
    estimate_correlator,
    estimate_p,
    run_experiment,
    sample_counts,
)
from .states import StateSpec, TwoQubitState, fidelity_to_pure, prepare
from .strategies import OperatorSet, StrategyCase, build_operators, luders_relay, optimal_chi

__version__ = "0.1.0"

__all__ = [
    "ChshPair",
    "CountRecord",
    "EqualPointResult",
    "Estimate",
    "ExperimentResult",
    "FrontierCurve",
    "MixedStrategy",
    "NumericalError",
    "OperatorSet",
    "RegionGridSpec",
    "RegionMap",
    "ShotConfig",
    "StateSpec",
    "StrategyCase",
    "TSIRELSON",
    "TwoQubitState",
    "build_operators",
    "chsh_numeric",
    "closed_form",
    "correlator",
    "deterministic_pair",
    "equal_point",
    "estimate_correlator",
    "estimate_p",
    "evaluate_case",
    "evaluate_mixed",
    "fidelity_to_pure",
    "full_frontier",
    "luders_relay",
    "make_case",
    "mix",
    "optimal_chi",
    "optimal_state_angle",
    "prepare",
    "region_map",
    "run_experiment",
    "sample_counts",
    "tradeoff_closed_form",
    "violation_interval",
]
