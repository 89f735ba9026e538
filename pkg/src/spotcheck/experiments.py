"""Parameter sweeps comparing the optimal ROS, RSS and RSUS mechanisms."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .mechanisms import FEASIBILITY_TOL, EconParams
from .prob_model import INFORMATIVE_TOL, build_model
from .workload import compare_mechanisms

RC_COLUMNS = (
    "r_over_c", "p_signal", "prior_star", "ros_workload", "rss_workload",
    "scaled_rss", "feasible_ros", "feasible_rss",
)
N_COLUMNS = ("n", "ros_workload", "rss_workload", "rsus_workload", "scaled_rss", "scaled_rsus")


@dataclass(frozen=True)
class RcRow:
    r_over_c: float
    p_signal: float
    prior_star: Optional[float]
    ros_workload: Optional[float]
    rss_workload: Optional[float]
    scaled_rss: Optional[float]
    feasible_ros: bool
    feasible_rss: bool
    reason: str = ""

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class NRow:
    n: int
    ros_workload: Optional[float]
    rss_workload: Optional[float]
    rsus_workload: Optional[float]
    scaled_rss: Optional[float]
    scaled_rsus: Optional[float]

    def as_dict(self):
        return asdict(self)


def prior_grid(step: float) -> np.ndarray:
    """Interior grid step, 2*step, ... < 1; the endpoints are degenerate."""
    count = int(round(1.0 / step))
    return np.arange(1, count) / count


def scaled_rss_curve(priors: np.ndarray, p_aa: float, p_bb: float, n: int):
    """Vectorized optimal-RSS / optimal-ROS workload ratio over a prior grid.

    Returns ``(scaled, ros_threshold, rss_threshold)``: ROS exists iff
    c/R <= ros_threshold, RSS iff c/R <= rss_threshold.  The ratio itself
    does not depend on c/R.
    """
    pa = np.asarray(priors, dtype=float)
    qa, qb = p_aa, p_bb
    P_a = pa * qa + (1 - pa) * (1 - qb)
    swap = P_a < 1 - P_a
    # canonical relabeling where P_a < P_b
    prior = np.where(swap, 1 - pa, pa)
    paa = np.where(swap, qb, qa)
    pbb = np.where(swap, qa, qb)
    P_a = prior * paa + (1 - prior) * (1 - pbb)
    P_b = 1 - P_a
    P_AA = prior * paa ** 2 + (1 - prior) * (1 - pbb) ** 2
    P_AB = prior * paa * (1 - paa) + (1 - prior) * pbb * (1 - pbb)
    P_BB = prior * (1 - paa) ** 2 + (1 - prior) * pbb ** 2
    D = P_AA * P_BB - P_AB ** 2
    informative = D > INFORMATIVE_TOL
    all_a = prior * paa ** n + (1 - prior) * (1 - pbb) ** n
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = (P_BB - P_AB) * (all_a * P_b + (1 - all_a) * P_a) / D
        rss_thr = np.where(informative, P_AA / P_a - P_a, -np.inf)
    ros_thr = np.where(informative, P_BB - P_AB, -np.inf)
    return scaled, ros_thr, rss_thr


def sweep_rc(r_over_c: Sequence[float], p_signal: Sequence[float], n: int = 3,
             prior_step: float = 0.001) -> List[RcRow]:
    """For each (R/c, accuracy), the prior minimizing the scaled RSS workload."""
    priors = prior_grid(prior_step)
    rows = []
    for p in p_signal:
        scaled, ros_thr, rss_thr = scaled_rss_curve(priors, p, p, n)
        for rc in r_over_c:
            g = 1.0 / rc
            ros_ok = ros_thr >= g - FEASIBILITY_TOL
            rss_ok = rss_thr >= g - FEASIBILITY_TOL
            if not ros_ok.any():
                reason = "no_rss" if not rss_ok.any() else "no_ros"
                rows.append(RcRow(rc, p, None, None, None, None, False, bool(rss_ok.any()), reason))
                continue
            cand = np.where(ros_ok, scaled, np.inf)
            j = int(np.argmin(cand))
            # report the exact workloads through the scalar path
            model = build_model(priors[j], p, p)
            cmp = compare_mechanisms(model, EconParams(1.0, rc), n)
            rows.append(RcRow(
                rc, p, float(priors[j]), cmp.ros_workload, cmp.rss_workload,
                cmp.scaled_rss, True, True,
            ))
    return rows


def sweep_n(n_values: Iterable[int], prior_a: float = 0.8, p_a_given_a: float = 0.9,
            p_b_given_b: float = 0.9, cost: float = 1.0, reward: float = 25.0) -> List[NRow]:
    model = build_model(prior_a, p_a_given_a, p_b_given_b)
    econ = EconParams(cost, reward)
    rows = []
    for n in n_values:
        cmp = compare_mechanisms(model, econ, int(n))
        rows.append(NRow(int(n), cmp.ros_workload, cmp.rss_workload, cmp.rsus_workload,
                         cmp.scaled_rss, cmp.scaled_rsus))
    return rows
