"""Exact expected utilities and brute-force incentive certification.

Given the quality ``q``, every student's report is an independent coin
whose bias depends only on her strategy and noise model, and the TA's
signal is independent of all of them.  So a student's expected utility is
obtained exactly by conditioning on ``q``, convolving the other students'
report coins into a distribution over the number of A reports, and summing.

Soundness of checking pure opponent profiles only: a student's expected
utility is affine in each opponent's mixing weights, so the worst case over
mixed profiles is attained at a pure one.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, TooLarge
from .mechanisms import CountPolicy, Mechanism, PersonalPolicy
from .prob_model import HeteroModel, Signal, SignalModel, _likelihood

DEFAULT_TOL = 1e-9
DSIC_MAX_N = 6
ICCP_MAX_N = 8

Model = Union[SignalModel, HeteroModel]


class Strategy(enum.IntEnum):
    TRUTHFUL = 0
    EFFORT_FLIP = 1
    EFFORT_CONST_A = 2
    EFFORT_CONST_B = 3
    LAZY_A = 4
    LAZY_B = 5

    @property
    def invests_effort(self) -> bool:
        return self <= Strategy.EFFORT_CONST_B

    def report(self, observed: Optional[Signal]) -> Signal:
        if self == Strategy.TRUTHFUL:
            return observed
        if self == Strategy.EFFORT_FLIP:
            return observed.other
        if self in (Strategy.EFFORT_CONST_A, Strategy.LAZY_A):
            return Signal.A
        return Signal.B

    @property
    def is_lazy(self) -> bool:
        return self in (Strategy.LAZY_A, Strategy.LAZY_B)


CONSCIENTIOUS = (Strategy.TRUTHFUL, Strategy.LAZY_A, Strategy.LAZY_B)


class Concept(str, enum.Enum):
    DSIC = "DSIC"
    ICCP = "ICCP"


@dataclass(frozen=True)
class Agents:
    """Flattened view of a model: per-student noise and cost, TA noise, prior."""

    prior_a: float
    noise: Tuple[Tuple[float, float], ...]
    ta_noise: Tuple[float, float]
    costs: Tuple[float, ...]

    @classmethod
    def of(cls, model: Model, mech: Mechanism) -> "Agents":
        n = mech.n
        if isinstance(model, HeteroModel):
            if model.n != n:
                raise DimensionError(f"model has {model.n} students, mechanism {n}")
            return cls(model.prior_a, model.student_noise, model.ta_noise, model.costs)
        return cls(model.prior_a, (model.noise,) * n, model.noise, (mech.econ.cost,) * n)

    @property
    def n(self) -> int:
        return len(self.noise)

    def prior(self, q: Signal) -> float:
        return self.prior_a if q == Signal.A else 1.0 - self.prior_a


def report_prob_a(strategy: Strategy, noise, q: Signal) -> float:
    """Pr[report = A | q] for one student."""
    if strategy == Strategy.TRUTHFUL:
        return _likelihood(noise, Signal.A, q)
    if strategy == Strategy.EFFORT_FLIP:
        return _likelihood(noise, Signal.B, q)
    return 1.0 if strategy.report(None) == Signal.A else 0.0


def _poisson_binomial(ps) -> np.ndarray:
    dist = np.array([1.0])
    for p in ps:
        dist = np.convolve(dist, [1.0 - p, p])
    return dist


def _others_counts(agents: Agents, i: int, others: Sequence[Strategy]) -> Dict[Signal, np.ndarray]:
    idx = [j for j in range(agents.n) if j != i]
    return {
        q: _poisson_binomial([report_prob_a(s, agents.noise[j], q) for j, s in zip(idx, others)])
        for q in Signal
    }


def _utility_given_counts(agents, mech, i, own, counts) -> float:
    policy = mech.policy
    R = mech.econ.reward
    total = 0.0
    for q in Signal:
        pq = agents.prior(q)
        if pq == 0.0:
            continue
        p_own_a = report_prob_a(own, agents.noise[i], q)
        for r, w in ((Signal.A, p_own_a), (Signal.B, 1.0 - p_own_a)):
            if w == 0.0:
                continue
            if isinstance(policy, PersonalPolicy):
                check = policy.prob(i, r)
            else:
                x = np.asarray(policy.x_a if r == Signal.A else policy.x_b)
                shift = 1 if r == Signal.A else 0
                dist = counts[q]
                check = float(dist @ x[shift:shift + len(dist)])
            total += pq * w * check * R * _likelihood(agents.ta_noise, r, q)
    if own.invests_effort:
        total -= agents.costs[i]
    return total


def expected_utility(model: Model, mech: Mechanism, i: int, own: Strategy,
                     others: Sequence[Strategy]) -> float:
    """Exact expected utility of student ``i`` playing ``own``.

    ``others`` lists the strategies of the remaining students in index
    order (student ``i`` skipped).
    """
    agents = Agents.of(model, mech)
    if len(others) != agents.n - 1:
        raise DimensionError(f"expected {agents.n - 1} opponent strategies, got {len(others)}")
    if not 0 <= i < agents.n:
        raise IndexError(f"student index {i} out of range")
    counts = _others_counts(agents, i, [Strategy(s) for s in others])
    return _utility_given_counts(agents, mech, i, Strategy(own), counts)


def best_response(model: Model, mech: Mechanism, i: int, others: Sequence[Strategy],
                  tie_tol: float = 1e-12) -> Tuple[Strategy, float]:
    """Utility-maximizing pure strategy; near-ties go to the earliest enum member."""
    agents = Agents.of(model, mech)
    if len(others) != agents.n - 1:
        raise DimensionError(f"expected {agents.n - 1} opponent strategies, got {len(others)}")
    counts = _others_counts(agents, i, [Strategy(s) for s in others])
    utils = [_utility_given_counts(agents, mech, i, s, counts) for s in Strategy]
    best = max(utils)
    for s, u in zip(Strategy, utils):
        if u >= best - tie_tol * max(1.0, abs(best)):
            return s, u
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Deviation:
    student: int
    opponent_profile: Tuple[Strategy, ...]
    strategy: Strategy
    utility_gap: float
    truthful_utility: float = 0.0
    deviation_utility: float = 0.0


@dataclass(frozen=True)
class VerificationReport:
    concept: Concept
    passed: bool
    worst: Deviation
    tolerance: float
    profiles_checked: int


def verify(model: Model, mech: Mechanism, concept: Concept = Concept.DSIC,
           tolerance: float = DEFAULT_TOL, restrict_own: bool = True) -> VerificationReport:
    """Check truthfulness against every pure opponent profile and deviation.

    For ICCP the opponents play conscientious strategies only; with
    ``restrict_own`` (the default) so does the deviating student.
    """
    concept = Concept(concept)
    agents = Agents.of(model, mech)
    n = agents.n
    cap = DSIC_MAX_N if concept == Concept.DSIC else ICCP_MAX_N
    if n > cap:
        raise TooLarge(f"{concept.value} verification is capped at n={cap}")
    if concept == Concept.DSIC:
        opp_space = tuple(Strategy)
        own_space = tuple(Strategy)
    else:
        opp_space = CONSCIENTIOUS
        own_space = CONSCIENTIOUS if restrict_own else tuple(Strategy)
    deviations = [s for s in own_space if s != Strategy.TRUTHFUL]

    worst: Optional[Deviation] = None
    checked = 0
    # utilities only depend on the multiset of (noise, strategy) among the others
    cache: Dict[tuple, Tuple[float, list]] = {}
    for i in range(n):
        idx = [j for j in range(n) if j != i]
        for profile in itertools.product(opp_space, repeat=n - 1):
            checked += 1
            key = (i, tuple(sorted((agents.noise[j], int(s)) for j, s in zip(idx, profile))))
            if key not in cache:
                counts = _others_counts(agents, i, profile)
                u_truth = _utility_given_counts(agents, mech, i, Strategy.TRUTHFUL, counts)
                devs = [(s, _utility_given_counts(agents, mech, i, s, counts)) for s in deviations]
                cache[key] = (u_truth, devs)
            u_truth, devs = cache[key]
            for s, u in devs:
                gap = u - u_truth
                if worst is None or gap > worst.utility_gap:
                    worst = Deviation(i, tuple(profile), s, gap, u_truth, u)
    return VerificationReport(concept, worst.utility_gap <= tolerance, worst, tolerance, checked)


def verify_dsic(model: Model, mech: Mechanism, tolerance: float = DEFAULT_TOL) -> VerificationReport:
    return verify(model, mech, Concept.DSIC, tolerance)


def verify_iccp(model: Model, mech: Mechanism, tolerance: float = DEFAULT_TOL,
                restrict_own: bool = True) -> VerificationReport:
    return verify(model, mech, Concept.ICCP, tolerance, restrict_own)
