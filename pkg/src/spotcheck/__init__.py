"""Spot-checking mechanisms for incentivizing accurate peer grading.

Quick tour::

    >>> from spotcheck import build_model, EconParams, optimal_rss, ta_workload
    >>> model = build_model(0.8, 0.9, 0.9)
    >>> mech = optimal_rss(model, EconParams(cost=1, reward=25), n=3)
    >>> round(ta_workload(model, mech).workload, 4)
    0.1797
"""

from .errors import (
    DegenerateConditioning,
    DegenerateModel,
    DimensionError,
    InvalidProbability,
    NotApplicable,
    SolverError,
    SpotCheckError,
    TooLarge,
)
from .incentives import (
    Concept,
    Deviation,
    Strategy,
    VerificationReport,
    best_response,
    expected_utility,
    verify,
    verify_dsic,
    verify_iccp,
)
from .lp import LinearProgram, LpSolution, LpStatus, build_rsus_lp, solve
from .mechanisms import (
    CountPolicy,
    EconParams,
    Family,
    Feasibility,
    FeasibilityReport,
    Mechanism,
    PersonalPolicy,
    feasibility_report,
    optimal_hetero_prss,
    optimal_ros,
    optimal_rss,
    optimal_rsus,
    prss_policy,
    ros_policy,
    uniform_policy,
)
from .prob_model import (
    CountDistribution,
    HeteroModel,
    Signal,
    SignalModel,
    build_model,
    conditional,
    count_distribution,
    hetero_ta_joint,
    marginal,
    pair_joint,
    vector_joint,
)
from .sim import SimConfig, SimResult, simulate, utility_crosscheck
from .workload import (
    ComparisonReport,
    WorkloadReport,
    compare_mechanisms,
    hetero_workload,
    savings_floor,
    savings_lower_bound,
    ta_workload,
)

__version__ = "0.1.0"
