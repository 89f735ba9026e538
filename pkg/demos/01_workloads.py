"""
How much grading does the TA have to do?
=========================================

Three students grade an assignment whose true quality is A with
probability 0.8.  Each student (and the TA) sees the right grade with
probability 0.9.  Effort costs 1, a matching spot check pays 25.
"""

import numpy as np

from spotcheck import EconParams, build_model, compare_mechanisms, optimal_rss, ta_workload

model = build_model(0.8, 0.9, 0.9)
econ = EconParams(cost=1, reward=25)

print("P_a = %.2f  P_aa = %.2f  P_ab = %.2f  P_bb = %.2f" % (model.P_a, model.P_aa, model.P_ab, model.P_bb))

# The optimal mechanism checks an A-report less often than a B-report.
mech = optimal_rss(model, econ, n=3)
print("check A-reports w.p. %.7f, B-reports w.p. %.7f" % (mech.policy.x_a[1], mech.policy.x_b[0]))
print("TA workload: %.4f" % ta_workload(model, mech).workload)

# Workload grows with class size, towards x_b.
print("\n  n    ROS     RSS    RSUS   RSS/ROS")
for n in (1, 2, 3, 5, 10, 20, 50, 200):
    c = compare_mechanisms(model, econ, n)
    print("%3d  %.3f  %.4f  %.4f  %.3f" % (n, c.ros_workload, c.rss_workload, c.rsus_workload, c.scaled_rss))
