"""Probabilistic airport capacity forecasting and robust ground holding."""

__version__ = "0.1.0"

from .capacity import (
    CapacityObservation,
    IntervalStats,
    OperationRecord,
    aggregate_intervals,
    coverage_ratio,
    estimate_capacities,
    read_capacity_observations,
    read_operation_records,
    saturation_threshold,
)
from .errors import (
    ConfigError,
    GroundholdError,
    InfeasibleReductionError,
    MissingInputError,
    SolverError,
)
from .evaluation import (
    PolicyEvaluation,
    ReductionSpec,
    SensitivityReport,
    epsilon_sweep,
    evaluate_policy,
    expected_recourse_cost,
    out_of_sample_cost,
    reduce_distribution,
    resample_capacities,
)
from .maghp import (
    Flight,
    FlightConnection,
    GroundDelayPolicy,
    MaghpInstance,
    SolveResult,
    best_capacity_profiles,
    build_det,
    build_dr,
    build_sp,
    extract_policy,
    first_stage_cost,
    inner_worst_case,
    load_instance,
    load_result,
    save_instance,
    save_result,
    solve,
)
from .pmf import (
    DiscreteJointDistribution,
    Pmf,
    make_pmf,
    normalize_ground_costs,
    pmf_mean,
    point_mass,
    wasserstein_1d,
    wasserstein_lp,
)
from .prediction import (
    PredictionMetrics,
    PredictorModel,
    TrainingConfig,
    evaluate,
    load_model,
    point_prediction,
    predict_pmf,
    save_model,
    temporal_split,
    tolerance_interval,
    train,
)
from .scenario import (
    ReducedPmf,
    ScenarioTree,
    TimeClustering,
    build_scenario_tree,
    cluster_time_series,
    compress_pmf_kmeans,
    load_trees,
    save_trees,
)

__all__ = [
    "CapacityObservation",
    "ConfigError",
    "DiscreteJointDistribution",
    "Flight",
    "FlightConnection",
    "GroundDelayPolicy",
    "GroundholdError",
    "InfeasibleReductionError",
    "IntervalStats",
    "MaghpInstance",
    "MissingInputError",
    "OperationRecord",
    "Pmf",
    "PolicyEvaluation",
    "PredictionMetrics",
    "PredictorModel",
    "ReducedPmf",
    "ReductionSpec",
    "ScenarioTree",
    "SensitivityReport",
    "SolveResult",
    "SolverError",
    "TimeClustering",
    "TrainingConfig",
    "aggregate_intervals",
    "best_capacity_profiles",
    "build_det",
    "build_dr",
    "build_scenario_tree",
    "build_sp",
    "cluster_time_series",
    "compress_pmf_kmeans",
    "coverage_ratio",
    "epsilon_sweep",
    "estimate_capacities",
    "evaluate",
    "evaluate_policy",
    "expected_recourse_cost",
    "extract_policy",
    "first_stage_cost",
    "inner_worst_case",
    "load_instance",
    "load_model",
    "load_result",
    "load_trees",
    "make_pmf",
    "normalize_ground_costs",
    "out_of_sample_cost",
    "pmf_mean",
    "point_mass",
    "point_prediction",
    "predict_pmf",
    "read_capacity_observations",
    "read_operation_records",
    "reduce_distribution",
    "resample_capacities",
    "saturation_threshold",
    "save_instance",
    "save_model",
    "save_result",
    "save_trees",
    "solve",
    "temporal_split",
    "tolerance_interval",
    "train",
    "wasserstein_1d",
    "wasserstein_lp",
]
