"""Walk through a single simulation run.

Builds the synthetic Juneau dataset, runs the coupled dynamics once with
no policy levers engaged and once with a moderate policy mix, and prints
the year-by-year state to show how taxation and environment spending
reshape the trajectory.
"""

import touropt as tp

preset = tp.get_preset("juneau")
exog = tp.synth_dataset(preset, seed=0)
init = tp.initial_state(preset, exog, seed=0)

print(f"Synthetic {preset.name} dataset: {exog.years[0]}-{exog.years[-1]}, "
      f"visitors {exog.V_base[0]:.2e} -> {exog.V_base[-1]:.2e}")
print(f"Initial state: E={init.env_index:.2f}, S={init.satisfaction:.2f}\n")

hands_off = tp.PolicyVector()  # no tax, no fee, no environment budget
managed = preset.reference_policy

for label, policy in [("hands-off", hands_off), ("managed", managed)]:
    traj, objs = tp.simulate(policy, exog, preset.coefficients, init)
    print(f"--- {label}: tax={policy.tax_rate:.0%}, fee=${policy.carbon_fee:.0f}, "
          f"env share={policy.env_ratio:.0%}, cap={policy.capacity_limit:.1e}")
    print("year  visitors      E      S    cumulative net revenue")
    for i in range(0, len(traj.years), 4):
        s = traj.states[i]
        print(f"{traj.years[i]}  {s.visitors:10.3e}  {s.env_index:.3f}  "
              f"{s.satisfaction:.3f}  ${s.net_revenue_cum:.3e}")
    print(f"objectives: f1=${objs.revenue:.3e}, f2={objs.environment:.3f}, "
          f"f3={objs.satisfaction:.3f}\n")

print("The managed policy funds protection out of tourism levies: the")
print("environment index climbs instead of eroding, satisfaction follows,")
print("and cumulative revenue ends about an order of magnitude higher.")
