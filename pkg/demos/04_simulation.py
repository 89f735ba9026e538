"""
A million grading rounds
=========================

Monte Carlo against the analytic numbers, including a student who
does not bother to look at the assignment.
"""

from spotcheck import (
    EconParams, SimConfig, Strategy, build_model, optimal_rss, simulate, ta_workload,
    utility_crosscheck,
)

model = build_model(0.8, 0.9, 0.9)
econ = EconParams(cost=1, reward=25)
mech = optimal_rss(model, econ, 3)

profile = (Strategy.TRUTHFUL, Strategy.TRUTHFUL, Strategy.TRUTHFUL)
res = simulate(SimConfig(model, mech, profile, trials=1_000_000, seed=42))
print("workload  %.5f +- %.5f   (exact %.5f)" % (res.empirical_workload, res.workload_se,
                                                  ta_workload(model, mech).workload))
print("utilities", res.mean_utility.round(4))

lazy = (Strategy.TRUTHFUL, Strategy.LAZY_A, Strategy.TRUTHFUL)
cc = utility_crosscheck(model, mech, lazy, trials=1_000_000, seed=7)
print("lazy student: |sim - exact| per student", cc.errors.round(4), " max z %.2f" % cc.max_z)
