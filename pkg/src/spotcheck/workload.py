"""TA workload: how often the TA must grade an assignment under truthful play."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, NotApplicable, TooLarge
from .mechanisms import (
    CountPolicy,
    EconParams,
    Family,
    Feasibility,
    Mechanism,
    PersonalPolicy,
    optimal_ros,
    optimal_rss,
    optimal_rsus,
)
from .prob_model import HeteroModel, SignalModel, count_distribution

HETERO_MAX_N = 20


@dataclass(frozen=True)
class WorkloadReport:
    workload: float
    per_count: Tuple[Tuple[float, float], ...]
    family: Family

    def __float__(self):
        return self.workload


def ta_workload(model: SignalModel, mech: Mechanism) -> WorkloadReport:
    policy = mech.policy
    if not isinstance(policy, CountPolicy):
        raise TypeError("ta_workload needs a count policy; use hetero_workload for personal policies")
    dist = count_distribution(model, policy.n)
    consult = np.maximum(*policy.as_arrays())
    if len(consult) != len(dist):
        raise DimensionError("policy and count distribution sizes differ")
    per_count = tuple(zip(dist.probs.tolist(), consult.tolist()))
    return WorkloadReport(float(dist.probs @ consult), per_count, mech.family)


def _signal_matrix(n: int) -> np.ndarray:
    """All 2**n signal vectors as rows of 0 (A) / 1 (B)."""
    idx = np.arange(2 ** n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)[::-1]) & 1).astype(np.int8)


def hetero_workload(model: HeteroModel, policies: Union[Mechanism, PersonalPolicy, Sequence]) -> float:
    """Exact workload by enumerating every signal vector.

    The TA is consulted with probability ``max_i x_i^{s_i}``.
    """
    if isinstance(policies, Mechanism):
        policies = policies.policy
    if isinstance(policies, PersonalPolicy):
        pairs = policies.pairs
    else:
        pairs = tuple(tuple(p) for p in policies)
    n = model.n
    if len(pairs) != n:
        raise DimensionError(f"{len(pairs)} policies for {n} students")
    if n > HETERO_MAX_N:
        raise TooLarge(f"exact enumeration is capped at n={HETERO_MAX_N}")
    sig = _signal_matrix(n)
    noise = np.asarray(model.student_noise)
    checks = np.asarray(pairs)
    probs = np.zeros(len(sig))
    for t, prior in ((0, model.prior_a), (1, 1.0 - model.prior_a)):
        correct = noise[:, t]
        lik = np.where(sig == t, correct, 1.0 - correct)
        probs += prior * lik.prod(axis=1)
    consult = np.take_along_axis(checks.T, sig.astype(np.int64), axis=0).max(axis=1)
    return float(probs @ consult)


def savings_lower_bound(model: SignalModel, econ: EconParams) -> float:
    """Guaranteed drop in workload when moving from optimal ROS to optimal RSS."""
    if not model.P_a > model.P_b:
        raise NotApplicable("requires P_a > P_b")
    if not model.P_bb - model.P_ab > econ.ratio:
        raise NotApplicable("requires P_bb - P_ab > c/R")
    return econ.ratio * model.P_b / model.variance


def savings_floor(model: SignalModel, econ: EconParams) -> float:
    """``x* - x_b``: a saving that holds for every n, under the same preconditions.

    The savings bound above additionally needs ``D >= P_bb - P_ab``, which
    many models violate; this floor does not.
    """
    if not model.P_bb - model.P_ab > econ.ratio:
        raise NotApplicable("requires P_bb - P_ab > c/R")
    g = econ.ratio
    return g / (model.P_bb - model.P_ab) - g * model.P_a / model.variance


def rss_workload_closed_form(model: SignalModel, econ: EconParams, n: int) -> float:
    """P(all A)*x_a + (1 - P(all A))*x_b for the optimal RSS mechanism."""
    mech = optimal_rss(model, econ, n)
    if not isinstance(mech, Mechanism):
        raise NotApplicable(mech.reason)
    x_a, x_b = mech.policy.x_a[n], mech.policy.x_b[0]
    all_a = count_distribution(model, n)[n]
    return all_a * x_a + (1.0 - all_a) * x_b


@dataclass(frozen=True)
class ComparisonReport:
    ros: Union[WorkloadReport, Feasibility]
    rss: Union[WorkloadReport, Feasibility]
    rsus: Union[WorkloadReport, Feasibility]

    @staticmethod
    def _value(r) -> Optional[float]:
        return r.workload if isinstance(r, WorkloadReport) else None

    @property
    def ros_workload(self):
        return self._value(self.ros)

    @property
    def rss_workload(self):
        return self._value(self.rss)

    @property
    def rsus_workload(self):
        return self._value(self.rsus)

    def _scaled(self, other):
        if other is None or self.ros_workload is None:
            return None
        return other / self.ros_workload

    @property
    def scaled_rss(self):
        return self._scaled(self.rss_workload)

    @property
    def scaled_rsus(self):
        return self._scaled(self.rsus_workload)

    @property
    def margins(self):
        """(rsus - rss, ros - rsus) when all three exist."""
        if None in (self.ros_workload, self.rss_workload, self.rsus_workload):
            return None
        return (self.rsus_workload - self.rss_workload, self.ros_workload - self.rsus_workload)


def compare_mechanisms(model: SignalModel, econ: EconParams, n: int) -> ComparisonReport:
    def run(build):
        try:
            mech = build(model, econ, n)
        except ValueError as exc:
            return Feasibility(False, float("-inf"), str(exc))
        return ta_workload(model, mech) if isinstance(mech, Mechanism) else mech

    return ComparisonReport(run(optimal_ros), run(optimal_rss), run(optimal_rsus))
