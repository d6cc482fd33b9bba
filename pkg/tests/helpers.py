"""Shared builders for unit and property tests."""

import numpy as np

from touropt.sd_core import ExogenousSeries, ModelCoefficients, PolicyVector, SimState


def flat_exog(n=5, start_year=2008, **overrides):
    """Constant series: handy for hand-computable step tests."""
    base = {
        "V_base": 1e6,
        "R_gov_base": 1e7,
        "EXP_gov_base": 1e7,
        "G_retreat": 250.0,
        "CO2_emission": 9e4,
        "population": 32000.0,
        "unemployment": 0.05,
        "S_sat_base": 0.5,
    }
    base.update(overrides)
    years = np.arange(start_year, start_year + n)
    data = {k: (np.asarray(v, dtype=float) if np.ndim(v) else np.full(n, float(v)))
            for k, v in base.items()}
    return ExogenousSeries(years=years, **data)


def neutral_coeffs(**overrides):
    """Coefficients that make every factor an identity unless overridden."""
    base = dict(
        alpha=0.0, k1=100.0, eps_price=0.0, kappa=0.0, G_retreat_baseline=250.0,
        P_visitor_base=100.0, P_ship_capacity=5000.0, K_dev=0.0, K_gov_dev=0.0,
        alpha_gov_base=0.3, S_threshold=0.3, R_social=0.8, alpha_g=0.0,
        alpha_w=0.0, beta1=0.0, beta2=0.0, delta=0.0, p_glacier=0.0,
        p_waste=0.0, p2=0.0, p3=0.0, p4=0.0, eps_crowd=1.0,
    )
    base.update(overrides)
    return ModelCoefficients(**base)


def slack_policy(**overrides):
    """Zero levers with capacity/ship limits far above any demand."""
    base = dict(tax_rate=0.0, env_ratio=0.0, dev_incentive=0.0,
                capacity_limit=1e12, ship_limit=1e6, carbon_fee=0.0,
                glacier_ratio=0.5)
    base.update(overrides)
    return PolicyVector(**base)


def mid_state(**overrides):
    base = dict(visitors=1e6, env_index=0.5, satisfaction=0.5, net_revenue_cum=0.0)
    base.update(overrides)
    return SimState(**base)


def random_exog(rng, n=17):
    years = np.arange(2008, 2008 + n)
    return ExogenousSeries(
        years=years,
        V_base=rng.uniform(2e5, 4e6, n),
        R_gov_base=rng.uniform(1e6, 2e7, n),
        EXP_gov_base=rng.uniform(1e6, 2e7, n),
        G_retreat=rng.uniform(100.0, 500.0, n),
        CO2_emission=rng.uniform(5e4, 2e5, n),
        population=rng.uniform(1e4, 5e5, n),
        unemployment=rng.uniform(0.0, 0.2, n),
        S_sat_base=rng.uniform(0.2, 0.8, n),
    )


def random_coeffs(rng):
    """Draws over the documented admissible coefficient ranges."""
    return ModelCoefficients(
        alpha=rng.uniform(0.0, 1.0),
        k1=rng.uniform(50.0, 200.0),
        eps_price=rng.uniform(-2.0, 0.0),
        kappa=rng.uniform(0.0, 0.5),
        G_retreat_baseline=rng.uniform(100.0, 400.0),
        P_visitor_base=rng.uniform(20.0, 300.0),
        P_ship_capacity=rng.uniform(1e3, 1e4),
        K_dev=rng.uniform(0.0, 2e5),
        K_gov_dev=rng.uniform(0.0, 5e5),
        alpha_gov_base=rng.uniform(0.0, 1.0),
        S_threshold=rng.uniform(0.0, 0.6),
        R_social=rng.uniform(0.3, 1.0),
        alpha_g=rng.uniform(0.0, 5e-8),
        alpha_w=rng.uniform(0.0, 5e-8),
        beta1=rng.uniform(0.0, 3e-4),
        beta2=rng.uniform(0.0, 1e-6),
        delta=rng.uniform(0.0, 0.3),
        p_glacier=rng.uniform(0.0, 2e-8),
        p_waste=rng.uniform(0.0, 2e-8),
        p2=rng.uniform(0.0, 2e-3),
        p3=rng.uniform(0.0, 1.0),
        p4=rng.uniform(0.0, 0.5),
    )


def random_policy(rng, bounds):
    lo, hi = bounds.lows(), bounds.highs()
    return PolicyVector.from_array(lo + (hi - lo) * rng.random(len(lo)))


def random_state(rng, exog):
    return SimState(
        visitors=float(exog.V_base[0]),
        env_index=float(rng.uniform(0.0, 1.0)),
        satisfaction=float(rng.uniform(0.0, 1.0)),
        net_revenue_cum=0.0,
    )


def brute_force_fronts(objectives):
    """Independent oracle: peel non-dominated layers by pairwise counting."""
    def dom(a, b):
        return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))

    remaining = list(range(len(objectives)))
    fronts = []
    while remaining:
        layer = [i for i in remaining
                 if not any(dom(objectives[j], objectives[i])
                            for j in remaining if j != i)]
        fronts.append(layer)
        remaining = [i for i in remaining if i not in layer]
    return fronts


def hv_grid_oracle(points, ref):
    """Exact hypervolume by coordinate compression; O(n^4), test-only."""
    pts = [tuple(map(float, p)) for p in points]
    if not pts:
        return 0.0
    axes = []
    for d in range(3):
        axes.append(sorted({ref[d]} | {p[d] for p in pts}))
    vol = 0.0
    for i in range(len(axes[0]) - 1):
        for j in range(len(axes[1]) - 1):
            for k in range(len(axes[2]) - 1):
                hi = (axes[0][i + 1], axes[1][j + 1], axes[2][k + 1])
                if any(p[0] >= hi[0] and p[1] >= hi[1] and p[2] >= hi[2]
                       for p in pts):
                    vol += ((axes[0][i + 1] - axes[0][i])
                            * (axes[1][j + 1] - axes[1][j])
                            * (axes[2][k + 1] - axes[2][k]))
    return vol
