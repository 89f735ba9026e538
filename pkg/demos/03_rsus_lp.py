"""
The uniform mechanism as a linear program
==========================================

The closed-form recursion for the best everyone-or-no-one policy is
checked against a from-scratch simplex solve.
"""

import numpy as np

from spotcheck import EconParams, build_model, build_rsus_lp, solve
from spotcheck.mechanisms import rsus_recursion

model = build_model(0.8, 0.9, 0.9)
econ = EconParams(cost=1, reward=25)

lp = build_rsus_lp(model, econ, 3)
sol = solve(lp)
rec = rsus_recursion(model, econ, 3)
print("LP       ", np.round(sol.x, 8))
print("recursion", np.round(rec, 8))
print("objective %.6f" % sol.objective_value)
print("slacks   ", np.round(lp.slack(sol.x), 10))
print("duals    ", np.round(sol.duals, 6))
print("certificate", sol.diagnostics)
