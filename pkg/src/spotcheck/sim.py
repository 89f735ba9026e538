"""Seeded Monte Carlo simulation of one assignment being peer graded.

Per trial: draw the quality, draw signals for students who invest effort,
form reports, consult the TA with probability ``m = max_i x_i`` and, given a
consult, check student ``i`` independently with probability ``x_i / m`` so
that her marginal check probability is exactly ``x_i``.

Trials are processed in fixed-size blocks, each with its own child stream
spawned from ``numpy.random.SeedSequence(seed)``.  Block results are
combined in block order, so results do not depend on ``workers``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionError
from .incentives import Agents, Strategy, expected_utility
from .mechanisms import Mechanism, PersonalPolicy
from .prob_model import HeteroModel, SignalModel

BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    model: Union[SignalModel, HeteroModel]
    mechanism: Mechanism
    profile: Sequence[Strategy]
    trials: int
    seed: int = 0
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        if len(self.profile) != self.mechanism.n:
            raise DimensionError(
                f"profile has {len(self.profile)} strategies for n={self.mechanism.n}"
            )
        object.__setattr__(self, "profile", tuple(Strategy(s) for s in self.profile))


@dataclass(frozen=True)
class SimResult:
    trials: int
    empirical_workload: float
    workload_se: float
    mean_utility: np.ndarray
    utility_se: np.ndarray
    spot_check_rate: np.ndarray
    agreement_rate: float


def _run_block(cfg: SimConfig, agents: Agents, seed_seq, size: int):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    n = agents.n
    mech = cfg.mechanism
    noise = np.asarray(agents.noise)
    # 0 = A, 1 = B throughout
    q = (rng.random(size) >= agents.prior_a).astype(np.int8)
    u_sig = rng.random((size, n))
    correct = noise[np.arange(n)[None, :], q[:, None]]
    signal = np.where(u_sig < correct, q[:, None], 1 - q[:, None])
    reports = np.empty((size, n), dtype=np.int8)
    for j, s in enumerate(cfg.profile):
        if s == Strategy.TRUTHFUL:
            reports[:, j] = signal[:, j]
        elif s == Strategy.EFFORT_FLIP:
            reports[:, j] = 1 - signal[:, j]
        else:
            reports[:, j] = int(s.report(None))
    k = (reports == 0).sum(axis=1)

    policy = mech.policy
    if isinstance(policy, PersonalPolicy):
        table = np.asarray(policy.pairs)
        x = table[np.arange(n)[None, :], reports]
    else:
        x_a, x_b = policy.as_arrays()
        x = np.where(reports == 0, x_a[k][:, None], x_b[k][:, None])
    m = x.max(axis=1)
    consult = rng.random(size) < m
    ta_correct = np.where(q == 0, agents.ta_noise[0], agents.ta_noise[1])
    ta = np.where(rng.random(size) < ta_correct, q, 1 - q)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(m[:, None] > 0, x / m[:, None], 0.0)
    checked = consult[:, None] & (rng.random((size, n)) < ratio)
    match = checked & (reports == ta[:, None])
    effort = np.array([s.invests_effort for s in cfg.profile])
    util = mech.econ.reward * match - np.asarray(agents.costs) * effort
    return (
        consult.sum(),
        util.sum(axis=0),
        (util ** 2).sum(axis=0),
        checked.sum(axis=0),
        match.sum(),
    )


def _se(total, total_sq, count):
    if count < 2:
        return np.zeros_like(np.asarray(total, dtype=float))
    mean = total / count
    var = np.maximum(total_sq / count - mean ** 2, 0.0) * count / (count - 1)
    return np.sqrt(var / count)


def simulate(cfg: SimConfig, workers: Optional[int] = None) -> SimResult:
    agents = Agents.of(cfg.model, cfg.mechanism)
    trials = int(cfg.trials)
    sizes = [cfg.block_size] * (trials // cfg.block_size)
    if trials % cfg.block_size:
        sizes.append(trials % cfg.block_size)
    children = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    jobs = list(zip(children, sizes))
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(lambda a: _run_block(cfg, agents, *a), jobs))
    else:
        blocks = [_run_block(cfg, agents, *a) for a in jobs]

    consults = sum(int(b[0]) for b in blocks)
    util = np.zeros(agents.n)
    util_sq = np.zeros(agents.n)
    checks = np.zeros(agents.n)
    matches = 0
    for b in blocks:
        util += b[1]
        util_sq += b[2]
        checks += b[3]
        matches += int(b[4])
    w = consults / trials
    w_se = float(np.sqrt(w * (1 - w) / (trials - 1))) if trials > 1 else 0.0
    total_checks = checks.sum()
    return SimResult(
        trials=trials,
        empirical_workload=w,
        workload_se=w_se,
        mean_utility=util / trials,
        utility_se=_se(util, util_sq, trials),
        spot_check_rate=checks / trials,
        agreement_rate=float(matches / total_checks) if total_checks else 0.0,
    )


@dataclass(frozen=True)
class Crosscheck:
    max_abs_error: float
    errors: np.ndarray
    standard_errors: np.ndarray

    @property
    def max_z(self) -> float:
        se = np.where(self.standard_errors > 0, self.standard_errors, np.inf)
        return float(np.max(self.errors / se))


def utility_crosscheck(model, mech: Mechanism, profile: Sequence[Strategy],
                       trials: int, seed: int = 0) -> Crosscheck:
    """Compare simulated mean utilities with the exact expectations."""
    profile = tuple(Strategy(s) for s in profile)
    res = simulate(SimConfig(model, mech, profile, trials, seed))
    exact = np.array([
        expected_utility(model, mech, i, profile[i], profile[:i] + profile[i + 1:])
        for i in range(mech.n)
    ])
    err = np.abs(res.mean_utility - exact)
    return Crosscheck(float(err.max()), err, res.utility_se)
