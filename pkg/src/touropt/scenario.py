"""Budget-allocation scenario engine.

Each year's net surplus is split across four channels -- environment,
infrastructure, community, marketing -- and fed back into the dynamics:
environment money joins next year's protection budget, infrastructure
permanently raises effective capacity, community programs lift
satisfaction immediately, and marketing adds to next year's baseline
demand.  Negative-surplus years allocate nothing.

Allocation vectors whose shares sum above 1 are scaled down to sum 1
before a run (a surplus cannot be over-spent); the scaling is recorded on
the result so reports can show it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

from .sd_core import (
    ExogenousSeries,
    ModelCoefficients,
    PolicyVector,
    SimState,
    Trajectory,
    effective_price,
    step_environment,
    step_finance,
    step_social,
    step_visitors,
)

__all__ = [
    "AllocationPolicy",
    "FeedbackCoefficients",
    "ChannelAmounts",
    "ScenarioResult",
    "DEFAULT_SCENARIOS",
    "allocate_surplus",
    "apply_feedback",
    "run_scenario",
    "compare_scenarios",
]


@dataclass(frozen=True)
class AllocationPolicy:
    """Shares of the annual surplus routed to each feedback channel."""

    name: str
    theta_env: float
    theta_infra: float
    theta_community: float
    theta_marketing: float

    def __post_init__(self):
        for f in ("theta_env", "theta_infra", "theta_community", "theta_marketing"):
            v = getattr(self, f)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{f} = {v} outside [0, 1]")

    def total(self) -> float:
        return (self.theta_env + self.theta_infra
                + self.theta_community + self.theta_marketing)

    def normalized(self) -> tuple:
        """Scaled copy summing to at most 1, plus the scale applied.

        Vectors already summing to <= 1 come back unchanged (scale 1).
        """
        s = self.total()
        if s <= 1.0 or s == 0.0:
            return self, 1.0
        return AllocationPolicy(
            self.name,
            self.theta_env / s,
            self.theta_infra / s,
            self.theta_community / s,
            self.theta_marketing / s,
        ), 1.0 / s


@dataclass(frozen=True)
class FeedbackCoefficients:
    """How channel dollars turn into model quantities.

    infra_efficiency      visitors of capacity gained per USD
    marketing_efficiency  extra baseline demand (visitors) per USD
    community_efficiency  satisfaction gain per USD, applied with a (1-S)
                          saturation; environment money needs no
                          coefficient here, it reuses the core spending
                          effectiveness.
    """

    infra_efficiency: float = 0.03
    marketing_efficiency: float = 0.02
    community_efficiency: float = 5e-9

    def __post_init__(self):
        for f in ("infra_efficiency", "marketing_efficiency", "community_efficiency"):
            if getattr(self, f) < 0:
                raise ValueError(f"{f} must be >= 0")


class ChannelAmounts(NamedTuple):
    env: float
    infra: float
    community: float
    marketing: float


# the four canonical comparison scenarios
DEFAULT_SCENARIOS = (
    AllocationPolicy("Environment First", 0.7, 0.1, 0.1, 0.2),
    AllocationPolicy("Balanced Growth", 0.3, 0.25, 0.25, 0.25),
    AllocationPolicy("Infrastructure-Led", 0.3, 0.6, 0.1, 0.0),
    AllocationPolicy("Community Focus", 0.2, 0.2, 0.6, 0.3),
)


def allocate_surplus(r_net: float, policy: AllocationPolicy) -> ChannelAmounts:
    """Channel dollars for one year: max(0, surplus) times each share.

    Plain products of the shares as stored; normalization of over-committed
    vectors happens when a scenario run starts, not here.
    """
    surplus = max(0.0, r_net)
    return ChannelAmounts(
        env=surplus * policy.theta_env,
        infra=surplus * policy.theta_infra,
        community=surplus * policy.theta_community,
        marketing=surplus * policy.theta_marketing,
    )


@dataclass(frozen=True)
class _Carry:
    """Feedback carried into the next simulated year."""

    capacity_limit: float   # effective cap, only ever grows
    v_base_bonus: float     # marketing-driven demand add-on, next year only
    extra_env: float        # extra protection budget, next year only


def apply_feedback(state: SimState, carry: _Carry, amounts: ChannelAmounts,
                   fb: FeedbackCoefficients) -> tuple:
    """Translate channel dollars into next-year parameters and an immediate
    satisfaction lift.  Returns (updated state, updated carry)."""
    sat = state.satisfaction \
        + fb.community_efficiency * amounts.community * (1.0 - state.satisfaction)
    sat = min(1.0, max(0.0, sat))
    new_state = replace(state, satisfaction=sat)
    new_carry = _Carry(
        capacity_limit=carry.capacity_limit + fb.infra_efficiency * amounts.infra,
        v_base_bonus=fb.marketing_efficiency * amounts.marketing,
        extra_env=amounts.env,
    )
    return new_state, new_carry


@dataclass
class ScenarioResult:
    name: str
    trajectory: Trajectory
    allocation: AllocationPolicy    # as run (normalized if needed)
    normalization_scale: float      # 1.0 when no scaling was applied
    channel_spend: list             # ChannelAmounts per transition year
    effective_capacity: list        # effective cap per transition year

    def objectives(self):
        return self.trajectory.objectives()


def run_scenario(alloc: AllocationPolicy, policy: PolicyVector,
                 exog: ExogenousSeries, coeffs: ModelCoefficients,
                 init: SimState,
                 feedback: FeedbackCoefficients | None = None) -> ScenarioResult:
    """Simulate with surplus allocation feeding back each year.

    With an all-zero allocation this reproduces the plain simulation
    bit-for-bit: the loop calls the same step functions in the same order
    with zero-valued add-ons.
    """
    fb = feedback if feedback is not None else FeedbackCoefficients()
    used, scale = alloc.normalized()
    init.validate()
    traj = Trajectory(years=list(exog.years), states=[init])
    spend, caps = [], []
    state = init
    carry = _Carry(policy.capacity_limit, 0.0, 0.0)
    for t in range(len(exog) - 1):
        visitors, f_pr, f_gla, f_att = step_visitors(
            state, exog, t + 1, policy, coeffs,
            v_base_bonus=carry.v_base_bonus, capacity_limit=carry.capacity_limit)
        flows = step_finance(visitors, exog, t, policy, coeffs,
                             state.net_revenue_cum)
        exp_env_eff = flows.exp_env + carry.extra_env
        env_next = step_environment(state.env_index, exp_env_eff, exog, t,
                                    policy, coeffs)
        exp_glacier = policy.glacier_ratio * exp_env_eff
        exp_waste = (1.0 - policy.glacier_ratio) * exp_env_eff
        sat_next = step_social(state.satisfaction, env_next, visitors,
                               exp_glacier, exp_waste, exog, t, coeffs)
        state = SimState(visitors, env_next, sat_next, flows.r_net_cum)
        amounts = allocate_surplus(flows.r_net, used)
        state, carry = apply_feedback(state, carry, amounts, fb)
        traj.states.append(state)
        traj.p_effective.append(effective_price(coeffs.P_visitor_base,
                                                policy.carbon_fee, policy.tax_rate))
        traj.f_glacier.append(f_gla)
        traj.f_attraction.append(f_att)
        traj.f_price.append(f_pr)
        traj.r_tourism.append(flows.r_tourism)
        traj.r_gov_total.append(flows.r_gov_total)
        traj.exp_env.append(exp_env_eff)
        traj.exp_gov_total.append(flows.exp_gov_total)
        traj.r_net.append(flows.r_net)
        spend.append(amounts)
        caps.append(carry.capacity_limit)
    return ScenarioResult(alloc.name, traj, used, scale, spend, caps)


def compare_scenarios(allocs, policy: PolicyVector, exog: ExogenousSeries,
                      coeffs: ModelCoefficients, init: SimState,
                      feedback: FeedbackCoefficients | None = None) -> dict:
    """Run each scenario on the same base and align the outputs.

    Returns {"results": [ScenarioResult...],
             "rows": long-format (scenario, year, variable, value) tuples,
             "summary": per-scenario dict with f1/f2/f3 and scaling}.
    """
    allocs = list(allocs)
    if not allocs:
        raise ValueError("need at least one scenario")
    results = [run_scenario(a, policy, exog, coeffs, init, feedback)
               for a in allocs]
    rows = []
    for res in results:
        tr = res.trajectory
        for i, year in enumerate(tr.years):
            st = tr.states[i]
            rows.append((res.name, int(year), "visitors", st.visitors))
            rows.append((res.name, int(year), "env_index", st.env_index))
            rows.append((res.name, int(year), "satisfaction", st.satisfaction))
            if i > 0:
                rows.append((res.name, int(year), "net_revenue", tr.r_net[i - 1]))
    summary = []
    for res in results:
        f1, f2, f3 = res.objectives()
        summary.append({
            "scenario": res.name,
            "f1": f1,
            "f2": f2,
            "f3": f3,
            "theta_scale": res.normalization_scale,
        })
    return {"results": results, "rows": rows, "summary": summary}
