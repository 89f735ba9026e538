"""
Where does report sensitivity pay off?
=======================================

For each reward/cost ratio and grader accuracy, pick the prior that
makes the optimal RSS mechanism look best relative to ROS.
"""

from spotcheck.experiments import sweep_n, sweep_rc

rcs = [2, 3, 5, 10, 20, 50, 100, 1000]
ps = [0.7, 0.8, 0.9, 1.0]
rows = sweep_rc(rcs, ps, prior_step=0.001)
table = {(r.r_over_c, r.p_signal): r.scaled_rss for r in rows}

print("R/c   " + "".join("  p=%.1f " % p for p in ps))
for rc in rcs:
    cells = ["  %.4f" % table[(rc, p)] if table[(rc, p)] is not None else "     -- " for p in ps]
    print("%-5g " % rc + "".join(c + " " for c in cells))

print("\nscaled RSS by class size (prior 0.8, accuracy 0.9, R/c 25)")
for r in sweep_n([1, 3, 10, 30, 100, 200]):
    print("  n=%-4d %.4f" % (r.n, r.scaled_rss))
