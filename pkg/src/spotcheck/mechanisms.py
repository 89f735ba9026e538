"""Spot-checking policies and the optimal DSIC constructions.

Every mechanism pays ``reward`` to a spot-checked student whose report
agrees with the TA's signal and nothing otherwise (output agreement).  What
distinguishes mechanisms is how likely each student is to be checked.

Infeasibility is returned as a :class:`Feasibility` value rather than
raised, so parameter sweeps can record infeasible cells.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DegenerateModel, DimensionError, InvalidProbability
from .prob_model import INFORMATIVE_TOL, HeteroModel, Signal, SignalModel, hetero_conditional

FEASIBILITY_TOL = 1e-12


class Family(str, enum.Enum):
    ROS = "ROS"
    RSS_OPT = "RSS_OPT"
    RSUS_OPT = "RSUS_OPT"
    HETERO_PRSS = "HETERO_PRSS"
    CUSTOM = "CUSTOM"


@dataclass(frozen=True)
class EconParams:
    cost: float
    reward: float

    def __post_init__(self):
        object.__setattr__(self, "cost", float(self.cost))
        object.__setattr__(self, "reward", float(self.reward))
        if not (self.cost > 0 and math.isfinite(self.cost)):
            raise ValueError(f"cost must be positive and finite, got {self.cost}")
        if not (self.reward > 0 and math.isfinite(self.reward)):
            raise ValueError(f"reward must be positive and finite, got {self.reward}")

    @property
    def ratio(self) -> float:
        """c / R, the only combination the optimal policies depend on."""
        return self.cost / self.reward


def _as_probs(name, values) -> Tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for k, v in enumerate(out):
        if not (0.0 <= v <= 1.0):
            raise InvalidProbability(f"{name}[{k}]={v!r} is not in [0, 1]")
    return out


@dataclass(frozen=True)
class CountPolicy:
    """Check probabilities indexed by k, the total number of A reports.

    ``x_a[k]`` applies to each student reporting A, ``x_b[k]`` to each
    student reporting B.  ``x_a[0]`` and ``x_b[n]`` describe impossible
    situations and are pinned to zero.
    """

    n: int
    x_a: Tuple[float, ...]
    x_b: Tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("n must be >= 1")
        x_a = _as_probs("x_a", self.x_a)
        x_b = _as_probs("x_b", self.x_b)
        if len(x_a) != self.n + 1 or len(x_b) != self.n + 1:
            raise DimensionError(f"x_a and x_b must have n+1={self.n + 1} entries")
        if x_a[0] != 0.0 or x_b[self.n] != 0.0:
            raise InvalidProbability("x_a[0] and x_b[n] must be zero")
        object.__setattr__(self, "x_a", x_a)
        object.__setattr__(self, "x_b", x_b)

    def prob(self, report: Signal, k: int) -> float:
        return self.x_a[k] if report == Signal.A else self.x_b[k]

    def consult(self, k: int) -> float:
        """Probability the TA is asked for a signal when k students report A."""
        return max(self.x_a[k], self.x_b[k])

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.x_a), np.asarray(self.x_b)


@dataclass(frozen=True)
class PersonalPolicy:
    """Per-student (x_a_i, x_b_i) pairs that ignore everybody else's report."""

    pairs: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        pairs = tuple(
            _as_probs(f"pairs[{i}]", p) for i, p in enumerate(self.pairs)
        )
        if not pairs or any(len(p) != 2 for p in pairs):
            raise DimensionError("PersonalPolicy needs one (x_a, x_b) pair per student")
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self) -> int:
        return len(self.pairs)

    def prob(self, i: int, report: Signal) -> float:
        return self.pairs[i][int(report)]


Policy = Union[CountPolicy, PersonalPolicy]


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    margin: float
    reason: str = ""

    def __bool__(self):
        return self.feasible


@dataclass(frozen=True)
class Mechanism:
    policy: Policy
    econ: EconParams
    family: Family = Family.CUSTOM
    feasibility: Optional[Feasibility] = None

    def __post_init__(self):
        if self.family == Family.ROS:
            p = self.policy
            vals = set(p.x_a[1:]) | set(p.x_b[:-1])
            if not isinstance(p, CountPolicy) or len(vals) != 1:
                raise ValueError("ROS policies are constant in k and identical for both reports")

    @property
    def n(self) -> int:
        return self.policy.n

    def check_prob(self, i: int, reports: Sequence[Signal]) -> float:
        """Marginal probability that student ``i`` is spot checked."""
        if isinstance(self.policy, PersonalPolicy):
            return self.policy.prob(i, reports[i])
        k = sum(1 for r in reports if r == Signal.A)
        return self.policy.prob(reports[i], k)

    def consult_prob(self, reports: Sequence[Signal]) -> float:
        return max(self.check_prob(i, reports) for i in range(len(reports)))

    @property
    def rsus_vector(self) -> np.ndarray:
        """x(k) for a uniform policy (same probability for both reports)."""
        p = self.policy
        if not isinstance(p, CountPolicy):
            raise TypeError("only count policies have an x(k) vector")
        return np.array([p.consult(k) for k in range(p.n + 1)])


def ros_policy(n: int, x: float) -> CountPolicy:
    return CountPolicy(n, (0.0,) + (x,) * n, (x,) * n + (0.0,))


def uniform_policy(xs: Sequence[float]) -> CountPolicy:
    """Policy checking everybody with probability x(k) when k students report A."""
    xs = tuple(float(v) for v in xs)
    n = len(xs) - 1
    return CountPolicy(n, (0.0,) + xs[1:], xs[:-1] + (0.0,))


def prss_policy(n: int, x_a: float, x_b: float) -> CountPolicy:
    return CountPolicy(n, (0.0,) + (x_a,) * n, (x_b,) * n + (0.0,))


def _clip_unit(x: float) -> float:
    # values within the feasibility tolerance above 1 are boundary cases
    return min(x, 1.0)


def _uninformative(model: SignalModel) -> Optional[Feasibility]:
    if model.variance <= INFORMATIVE_TOL:
        return Feasibility(False, -math.inf, "uninformative signals")
    return None


def optimal_ros(model: SignalModel, econ: EconParams, n: int = 1) -> Union[Mechanism, Feasibility]:
    """Smallest constant check probability that makes ROS truthful.

    ``x* = (c/R) / (P_bb - P_ab)``; infeasible when that exceeds one.
    """
    bad = _uninformative(model)
    if bad is not None:
        return bad
    denom = model.P_bb - model.P_ab
    margin = denom - econ.ratio
    if margin < -FEASIBILITY_TOL:
        return Feasibility(False, margin, "P_bb - P_ab < c/R: no DSIC ROS mechanism")
    x_star = _clip_unit(econ.ratio / denom)
    return Mechanism(ros_policy(n, x_star), econ, Family.ROS, Feasibility(True, margin))


def rss_probabilities(model: SignalModel, econ: EconParams) -> Tuple[float, float]:
    """Unclipped (x_a, x_b) of the optimal PRSS mechanism."""
    d = model.variance
    return econ.ratio * model.P_b / d, econ.ratio * model.P_a / d


def optimal_rss(model: SignalModel, econ: EconParams, n: int) -> Union[Mechanism, Feasibility]:
    """Workload-optimal DSIC mechanism.

    It only looks at the student's own report: a student reporting A is
    checked with probability ``(c/R) / (P_b|b - P_b)`` and one reporting B
    with ``(c/R) / (P_a|a - P_a)``.  Exists iff ``P_a|a - P_a >= c/R``.
    """
    if n < 1:
        raise DimensionError("n must be >= 1")
    bad = _uninformative(model)
    if bad is not None:
        return bad
    margin = model.P_aa / model.P_a - model.P_a - econ.ratio
    if margin < -FEASIBILITY_TOL:
        return Feasibility(False, margin, "P_a|a - P_a < c/R: no DSIC mechanism exists")
    x_a, x_b = rss_probabilities(model, econ)
    policy = prss_policy(n, _clip_unit(x_a), _clip_unit(x_b))
    return Mechanism(policy, econ, Family.RSS_OPT, Feasibility(True, margin))


def rsus_recursion(model: SignalModel, econ: EconParams, n: int) -> np.ndarray:
    """Intersection of the binding lazy-deviation constraints, x(0..n).

    x(n) comes from the pair of constraints at k = n-1; every smaller k
    makes ``-P_ab x(k+1) + P_bb x(k) >= c/R`` tight.
    """
    if model.P_bb <= INFORMATIVE_TOL:
        raise DegenerateModel("P_bb is zero; the uniform recursion is undefined")
    g = econ.ratio
    x = np.empty(n + 1)
    x[n] = g * model.P_b / model.variance
    for k in range(n - 1, -1, -1):
        x[k] = (g + model.P_ab * x[k + 1]) / model.P_bb
    return x


def optimal_rsus(model: SignalModel, econ: EconParams, n: int) -> Union[Mechanism, Feasibility]:
    """Optimal uniform (everyone-or-no-one) policy under lazy deviations."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    if model.P_bb <= INFORMATIVE_TOL:
        raise DegenerateModel("P_bb is zero; the uniform recursion is undefined")
    bad = _uninformative(model)
    if bad is not None:
        return bad
    x = rsus_recursion(model, econ, n)
    margin = 1.0 - float(x.max())
    if margin < -FEASIBILITY_TOL:
        return Feasibility(False, margin, f"x(0) = {x[0]:.6g} > 1: no feasible RSUS mechanism")
    policy = uniform_policy(np.minimum(x, 1.0))
    return Mechanism(policy, econ, Family.RSUS_OPT, Feasibility(True, margin))


def optimal_hetero_prss(model: HeteroModel, reward: float) -> Union[Mechanism, Feasibility]:
    """Per-student optimal PRSS for heterogeneous students and TA."""
    pairs = []
    margins = []
    problems = []
    for i in range(model.n):
        gamma = model.costs[i] / reward
        try:
            d_a = hetero_conditional(model, i, Signal.A, Signal.A) - model.student_marginal(i, Signal.A)
            d_b = hetero_conditional(model, i, Signal.B, Signal.B) - model.student_marginal(i, Signal.B)
        except ZeroDivisionError:
            problems.append(f"student {i}: TA signal is deterministic")
            margins.append(-math.inf)
            continue
        if min(d_a, d_b) <= INFORMATIVE_TOL:
            problems.append(f"student {i}: signal not positively correlated with the TA")
            margins.append(-math.inf)
            continue
        m = min(d_a, d_b) - gamma
        margins.append(m)
        if m < -FEASIBILITY_TOL:
            problems.append(f"student {i}: min_l Pr[s_i=l|s_TA=l] - Pr[s_i=l] < c_i/R")
            continue
        pairs.append((_clip_unit(gamma / d_b), _clip_unit(gamma / d_a)))
    margin = min(margins)
    if problems:
        return Feasibility(False, margin, "; ".join(problems))
    # per-student costs live on the model; econ.cost only records the largest
    econ = EconParams(max(model.costs), reward)
    return Mechanism(PersonalPolicy(tuple(pairs)), econ, Family.HETERO_PRSS, Feasibility(True, margin))


@dataclass(frozen=True)
class FeasibilityReport:
    ros_margin: float
    rss_margin: float

    @property
    def ros_feasible(self) -> bool:
        return self.ros_margin >= -FEASIBILITY_TOL

    @property
    def rss_feasible(self) -> bool:
        return self.rss_margin >= -FEASIBILITY_TOL


def feasibility_report(model: SignalModel, econ: EconParams) -> FeasibilityReport:
    ros = (model.P_bb - model.P_ab) - econ.ratio
    rss = (model.P_aa / model.P_a - model.P_a) - econ.ratio
    return FeasibilityReport(ros, rss)


def feasible_gap(model: SignalModel) -> Tuple[float, float]:
    """Interval of c/R where RSS exists but ROS does not: (P_bb - P_ab, P_a|a - P_a]."""
    return model.P_bb - model.P_ab, model.P_aa / model.P_a - model.P_a
