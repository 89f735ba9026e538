"""
Is truth-telling really a dominant strategy?
=============================================

Brute force: every student, every pure opponent profile, every deviation.
Then shave 1% off a probability and watch a lazy student take over.
"""

from spotcheck import (
    EconParams, Mechanism, Strategy, build_model, expected_utility,
    optimal_rss, optimal_rsus, verify_dsic, verify_iccp,
)
from spotcheck.mechanisms import prss_policy

model = build_model(0.8, 0.9, 0.9)
econ = EconParams(cost=1, reward=25)
mech = optimal_rss(model, econ, n=3)

rep = verify_dsic(model, mech)
print("optimal RSS, DSIC:", rep.passed, "over", rep.profiles_checked, "profiles")

others = (Strategy.LAZY_B, Strategy.EFFORT_FLIP)
for s in Strategy:
    print("  %-15s %+.6f" % (s.name, expected_utility(model, mech, 0, s, others)))

# Truthful and lazy are exactly tied at the optimum, so any cut breaks it.
cheap = Mechanism(prss_policy(3, mech.policy.x_a[1], 0.99 * mech.policy.x_b[0]), econ)
bad = verify_dsic(model, cheap)
print("\nx_b cut by 1%: passed =", bad.passed, "| witness:", bad.worst.strategy.name,
      "gap %.4f" % bad.worst.utility_gap)

# Uniform checking is only safe against conscientious play.
rsus = optimal_rsus(model, econ, 3)
print("\noptimal RSUS, ICCP:", verify_iccp(model, rsus).passed, " DSIC:", verify_dsic(model, rsus).passed)
