"""Binary quality / noisy grader signal model.

An assignment has a latent quality ``q`` in {A, B}.  Every grader (and the
TA) who inspects it observes a signal drawn independently given ``q``.
All the joint and conditional quantities used by the mechanisms are
computed here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import binom

from .errors import DegenerateConditioning, DimensionError, InvalidProbability

#: Models with signal variance below this are treated as uninformative.
INFORMATIVE_TOL = 1e-12
_PMF_FLOOR = 1e-300

NoisePair = Tuple[float, float]


class Signal(enum.IntEnum):
    A = 0
    B = 1

    @property
    def other(self) -> "Signal":
        return Signal.B if self is Signal.A else Signal.A


def _check_prob(name, value):
    value = float(value)
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise InvalidProbability(f"{name}={value!r} is not in [0, 1]")
    return value


def _likelihood(noise: NoisePair, l: Signal, t: Signal) -> float:
    """Pr[s = l | q = t] for a grader with noise (Pr[a|a], Pr[b|b])."""
    p_correct = noise[0] if t == Signal.A else noise[1]
    return p_correct if l == t else 1.0 - p_correct


@dataclass(frozen=True)
class SignalModel:
    """Homogeneous model in canonical naming (``P_a >= P_b``).

    Use :func:`build_model` to construct one from raw parameters; it
    relabels the signals when needed and records that in ``label_swapped``.
    """

    prior_a: float
    p_a_given_a: float
    p_b_given_b: float
    label_swapped: bool = False

    def __post_init__(self):
        for name in ("prior_a", "p_a_given_a", "p_b_given_b"):
            object.__setattr__(self, name, _check_prob(name, getattr(self, name)))
        if self.P_a < self.P_b - 1e-12:
            raise InvalidProbability(
                "SignalModel must be in canonical naming (P_a >= P_b); use build_model()"
            )

    @property
    def noise(self) -> NoisePair:
        return (self.p_a_given_a, self.p_b_given_b)

    def prior(self, t: Signal) -> float:
        return self.prior_a if t == Signal.A else 1.0 - self.prior_a

    def likelihood(self, l: Signal, t: Signal) -> float:
        return _likelihood(self.noise, l, t)

    # Shorthands for the quantities that appear in every formula.
    @property
    def P_a(self) -> float:
        return marginal(self, Signal.A)

    @property
    def P_b(self) -> float:
        return marginal(self, Signal.B)

    @property
    def P_aa(self) -> float:
        return pair_joint(self, Signal.A, Signal.A)

    @property
    def P_ab(self) -> float:
        return pair_joint(self, Signal.A, Signal.B)

    @property
    def P_bb(self) -> float:
        return pair_joint(self, Signal.B, Signal.B)

    @property
    def variance(self) -> float:
        """P_aa - P_a**2, which equals P_bb - P_b**2 and P_aa*P_bb - P_ab**2."""
        return self.P_aa * self.P_bb - self.P_ab ** 2

    @property
    def informative(self) -> bool:
        return self.variance > INFORMATIVE_TOL

    def raw_label(self, l: Signal) -> Signal:
        """Map a canonical label back to the caller's original naming."""
        return l.other if self.label_swapped else l


def build_model(prior_a: float, p_a_given_a: float, p_b_given_b: float) -> SignalModel:
    """Build a canonical model, swapping the labels if ``P_a < P_b``.

    >>> m = build_model(0.8, 0.9, 0.9)
    >>> round(m.P_a, 12), m.label_swapped
    (0.74, False)
    """
    prior_a = _check_prob("prior_a", prior_a)
    p_a_given_a = _check_prob("p_a_given_a", p_a_given_a)
    p_b_given_b = _check_prob("p_b_given_b", p_b_given_b)
    p_a = prior_a * p_a_given_a + (1.0 - prior_a) * (1.0 - p_b_given_b)
    if p_a < 1.0 - p_a:
        return SignalModel(1.0 - prior_a, p_b_given_b, p_a_given_a, label_swapped=True)
    return SignalModel(prior_a, p_a_given_a, p_b_given_b)


def marginal(model: SignalModel, l: Signal) -> float:
    return sum(model.prior(t) * model.likelihood(l, t) for t in Signal)


def pair_joint(model: SignalModel, l: Signal, t: Signal) -> float:
    """Probability that two graders observe ``l`` and ``t`` respectively."""
    return sum(model.prior(q) * model.likelihood(l, q) * model.likelihood(t, q) for q in Signal)


def conditional(model: SignalModel, l: Signal, t: Signal) -> float:
    """Pr[one grader sees l | another grader sees t]."""
    p_t = marginal(model, t)
    if p_t <= 0.0:
        raise DegenerateConditioning(f"marginal probability of {t.name} is zero")
    return pair_joint(model, l, t) / p_t


def vector_joint(model: SignalModel, signals: Sequence[Signal]) -> float:
    if len(signals) == 0:
        raise DimensionError("signal vector must be nonempty")
    total = 0.0
    for q in Signal:
        prod = model.prior(q)
        for s in signals:
            prod *= model.likelihood(Signal(s), q)
        total += prod
    return total


@dataclass(frozen=True)
class CountDistribution:
    """Distribution of the number of graders (out of n) who observe A."""

    n: int
    probs: np.ndarray = field(repr=False)

    def __getitem__(self, j):
        return self.probs[j]

    def __len__(self):
        return len(self.probs)


def count_distribution(model: SignalModel, n: int) -> CountDistribution:
    if n < 1:
        raise DimensionError("n must be >= 1")
    j = np.arange(n + 1)
    probs = np.zeros(n + 1)
    for t in Signal:
        p = model.likelihood(Signal.A, t)
        # scipy's incomplete-beta kernel overflows near the subnormal range; snap to the boundary
        if p < _PMF_FLOOR:
            p = 0.0
        elif 1.0 - p < _PMF_FLOOR:
            p = 1.0
        probs += model.prior(t) * binom.pmf(j, n, p)
    return CountDistribution(n, probs)


@dataclass(frozen=True)
class HeteroModel:
    """Per-student (and TA) noise models with per-student effort costs."""

    prior_a: float
    student_noise: Tuple[NoisePair, ...]
    ta_noise: NoisePair
    costs: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "prior_a", _check_prob("prior_a", self.prior_a))
        noise = tuple(
            (_check_prob(f"student_noise[{i}][0]", a), _check_prob(f"student_noise[{i}][1]", b))
            for i, (a, b) in enumerate(self.student_noise)
        )
        object.__setattr__(self, "student_noise", noise)
        ta = (_check_prob("ta_noise[0]", self.ta_noise[0]), _check_prob("ta_noise[1]", self.ta_noise[1]))
        object.__setattr__(self, "ta_noise", ta)
        costs = tuple(float(c) for c in self.costs)
        object.__setattr__(self, "costs", costs)
        if len(noise) < 1:
            raise DimensionError("HeteroModel needs at least one student")
        if len(costs) != len(noise):
            raise DimensionError("one cost per student is required")
        if any(not c > 0 for c in costs):
            raise ValueError("effort costs must be strictly positive")

    @classmethod
    def homogeneous(cls, model: SignalModel, n: int, cost: float) -> "HeteroModel":
        """Every student and the TA share ``model``'s noise."""
        return cls(model.prior_a, (model.noise,) * n, model.noise, (cost,) * n)

    @property
    def n(self) -> int:
        return len(self.student_noise)

    def prior(self, t: Signal) -> float:
        return self.prior_a if t == Signal.A else 1.0 - self.prior_a

    def student_marginal(self, i: int, l: Signal) -> float:
        noise = self.student_noise[i]
        return sum(self.prior(t) * _likelihood(noise, l, t) for t in Signal)

    def ta_marginal(self, l: Signal) -> float:
        return sum(self.prior(t) * _likelihood(self.ta_noise, l, t) for t in Signal)


def hetero_ta_joint(model: HeteroModel, i: int, l: Signal, t: Signal) -> float:
    """Pr[s_i = l, s_TA = t]."""
    if not 0 <= i < model.n:
        raise IndexError(f"student index {i} out of range for n={model.n}")
    noise = model.student_noise[i]
    return sum(
        model.prior(q) * _likelihood(noise, l, q) * _likelihood(model.ta_noise, t, q)
        for q in Signal
    )


def hetero_conditional(model: HeteroModel, i: int, l: Signal, t: Signal) -> float:
    """Pr[s_i = l | s_TA = t]."""
    p_t = model.ta_marginal(t)
    if p_t <= 0.0:
        raise DegenerateConditioning(f"TA marginal of {t.name} is zero")
    return hetero_ta_joint(model, i, l, t) / p_t
