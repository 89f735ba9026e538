"""Brute-force reference computations used only by the tests.

Everything here enumerates outcomes explicitly with itertools and plain
floats / Fractions, deliberately sharing no code paths with the package
beyond the data classes.
"""

import itertools
from fractions import Fraction
from math import comb

A, B = 0, 1


def lik(noise, s, q):
    p = noise[0] if q == A else noise[1]
    return p if s == q else 1 - p


def brute_pair(prior_a, noise, l, t):
    return sum(
        (prior_a if q == A else 1 - prior_a) * lik(noise, l, q) * lik(noise, t, q)
        for q in (A, B)
    )


def brute_count_distribution(prior_a, noise, n):
    out = [0.0] * (n + 1)
    for vec in itertools.product((A, B), repeat=n):
        p = 0.0
        for q in (A, B):
            w = prior_a if q == A else 1 - prior_a
            for s in vec:
                w *= lik(noise, s, q)
            p += w
        out[vec.count(A)] += p
    return out


def strategy_report(name, observed):
    if name == "TRUTHFUL":
        return observed
    if name == "EFFORT_FLIP":
        return 1 - observed
    if name in ("EFFORT_CONST_A", "LAZY_A"):
        return A
    return B


def invests(name):
    return not name.startswith("LAZY")


def brute_utility(prior_a, student_noise, ta_noise, costs, reward, check_prob, i, profile):
    """Enumerate q, every effort-investing student's signal, and the TA signal.

    ``check_prob(i, reports)`` gives student i's marginal check probability.
    ``profile`` is the full list of strategy names (including student i).
    """
    n = len(profile)
    total = 0.0
    effort = [j for j in range(n) if invests(profile[j])]
    for q in (A, B):
        pq = prior_a if q == A else 1 - prior_a
        for sigs in itertools.product((A, B), repeat=len(effort)):
            p_sig = 1.0
            observed = {}
            for j, s in zip(effort, sigs):
                p_sig *= lik(student_noise[j], s, q)
                observed[j] = s
            reports = [strategy_report(profile[j], observed.get(j)) for j in range(n)]
            x = check_prob(i, reports)
            for ta in (A, B):
                p_ta = lik(ta_noise, ta, q)
                pay = reward if reports[i] == ta else 0.0
                total += pq * p_sig * p_ta * x * pay
    if invests(profile[i]):
        total -= costs[i]
    return total


def count_check(x_a, x_b):
    def f(i, reports):
        k = reports.count(A)
        return x_a[k] if reports[i] == A else x_b[k]
    return f


def personal_check(pairs):
    def f(i, reports):
        return pairs[i][reports[i]]
    return f


def brute_hetero_workload(prior_a, student_noise, pairs):
    n = len(pairs)
    total = 0.0
    for vec in itertools.product((A, B), repeat=n):
        p = 0.0
        for q in (A, B):
            w = prior_a if q == A else 1 - prior_a
            for j, s in enumerate(vec):
                w *= lik(student_noise[j], s, q)
            p += w
        total += p * max(pairs[j][s] for j, s in enumerate(vec))
    return total


def exact_rsus(prior_a, p_aa, p_bb, gamma, n):
    """RSUS recursion in exact rational arithmetic."""
    pa, qa, qb, g = (Fraction(v) for v in (prior_a, p_aa, p_bb, gamma))
    PAA = pa * qa ** 2 + (1 - pa) * (1 - qb) ** 2
    PAB = pa * qa * (1 - qa) + (1 - pa) * qb * (1 - qb)
    PBB = pa * (1 - qa) ** 2 + (1 - pa) * qb ** 2
    PB = PBB + PAB
    D = PAA * PBB - PAB ** 2
    x = [None] * (n + 1)
    x[n] = g * PB / D
    for k in range(n - 1, -1, -1):
        x[k] = (g + PAB * x[k + 1]) / PBB
    return x


def binomial_mixture(prior_a, noise, n, j):
    return sum(
        (prior_a if t == A else 1 - prior_a) * comb(n, j) * lik(noise, A, t) ** j * lik(noise, B, t) ** (n - j)
        for t in (A, B)
    )
