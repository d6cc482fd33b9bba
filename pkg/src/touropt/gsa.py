"""Global sensitivity analysis: Morris screening and Sobol decomposition.

Morris builds randomized one-at-a-time trajectories on a coarse grid and
summarizes each parameter by mu* (mean absolute elementary effect) and
sigma (spread of the effects, an interaction/nonlinearity signal).  Sobol
first/total indices use the classic two-matrix sampling design with the
symmetrized direct estimator for S_i, Jansen's estimator for S_Ti, and
bootstrap percentile intervals.

Sampling is plain seeded pseudo-random (recorded in result metadata, no
low-discrepancy sequence); accuracy targets are set accordingly.  Both
analyses evaluate the model at every sample point, so wiring in the
simulator means one full simulation per point; the three objectives are
extracted from the same run, never re-simulated per output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, EvaluationError
from .sd_core import (
    POLICY_FIELDS,
    ExogenousSeries,
    ModelCoefficients,
    PolicyBounds,
    PolicyVector,
    SimState,
    simulate,
)

__all__ = [
    "ParameterSpace",
    "MorrisResult",
    "SobolResult",
    "SaltelliDesign",
    "AnalysisReport",
    "morris_sample",
    "morris_indices",
    "saltelli_sample",
    "sobol_indices",
    "analyze_model",
    "make_model",
    "uncertainty_space",
    "full_space",
    "OUTPUT_NAMES",
]

OUTPUT_NAMES = ("f1", "f2", "f3")  # revenue, environment, satisfaction

COEFF_FIELDS = tuple(ModelCoefficients.__dataclass_fields__)


@dataclass(frozen=True)
class ParameterSpace:
    """Named parameters with [low, high] bounds, in a fixed order."""

    names: tuple
    lows: np.ndarray
    highs: np.ndarray

    @classmethod
    def from_dict(cls, bounds: dict) -> "ParameterSpace":
        names = tuple(bounds)
        lo = np.array([bounds[n][0] for n in names], dtype=float)
        hi = np.array([bounds[n][1] for n in names], dtype=float)
        space = cls(names, lo, hi)
        space.validate()
        return space

    def validate(self) -> None:
        if len(self.names) != len(set(self.names)):
            raise ConfigError("duplicate parameter names")
        if len(self.names) == 0:
            raise ConfigError("empty parameter space")
        if np.any(self.lows >= self.highs):
            bad = [n for n, a, b in zip(self.names, self.lows, self.highs) if a >= b]
            raise ConfigError(f"low >= high for {bad}")

    def __len__(self) -> int:
        return len(self.names)

    def to_unit(self, x: np.ndarray) -> np.ndarray:
        return (x - self.lows) / (self.highs - self.lows)

    def from_unit(self, u: np.ndarray) -> np.ndarray:
        return self.lows + u * (self.highs - self.lows)


@dataclass
class MorrisResult:
    names: tuple
    mu_star: np.ndarray   # mean |elementary effect| per parameter
    sigma: np.ndarray     # sample std of elementary effects
    r: int                # trajectories used

    def ranked(self) -> list:
        order = np.argsort(-self.mu_star, kind="stable")
        return [(self.names[i], float(self.mu_star[i]), float(self.sigma[i]))
                for i in order]


@dataclass
class SobolResult:
    names: tuple
    s1: np.ndarray        # first-order indices
    st: np.ndarray        # total-effect indices
    s1_ci: np.ndarray     # bootstrap CI half-widths for s1
    st_ci: np.ndarray     # same for st
    n: int                # base sample size
    sampler: str = "pseudorandom"

    def ranked(self) -> list:
        order = np.argsort(-self.st, kind="stable")
        return [(self.names[i], float(self.s1[i]), float(self.st[i]),
                 float(self.s1_ci[i]), float(self.st_ci[i])) for i in order]


def morris_sample(space: ParameterSpace, r: int, levels: int = 4,
                  seed: int = 0) -> np.ndarray:
    """Randomized one-at-a-time trajectories on a ``levels``-point grid.

    Returns an (r, k+1, k) array in bound space; consecutive points in a
    trajectory differ in exactly one parameter by +-Delta (unit space),
    with Delta = levels / (2 * (levels - 1)).
    """
    space.validate()
    if levels < 4 or levels % 2:
        raise ConfigError("levels must be even and >= 4")
    if r < 1:
        raise ConfigError("need at least one trajectory")
    k = len(space)
    delta = levels / (2.0 * (levels - 1.0))
    step = 1.0 / (levels - 1.0)
    n_base = levels - int(round(delta / step))  # grid points leaving room for a step
    rng = np.random.default_rng(seed)
    out = np.empty((r, k + 1, k))
    for t in range(r):
        direction = np.where(rng.random(k) < 0.5, 1.0, -1.0)
        cells = rng.integers(0, n_base, size=k).astype(float)
        base = cells * step
        # a negative step starts from the mirrored end of the grid
        base = np.where(direction < 0, 1.0 - base, base)
        order = rng.permutation(k)
        x = base.copy()
        out[t, 0] = space.from_unit(x)
        for s, dim in enumerate(order):
            x = x.copy()
            x[dim] += direction[dim] * delta
            out[t, s + 1] = space.from_unit(x)
    return out


def morris_indices(space: ParameterSpace, samples: np.ndarray,
                   outputs: np.ndarray) -> MorrisResult:
    """Elementary-effect statistics from evaluated trajectories.

    ``samples`` is the (r, k+1, k) array from :func:`morris_sample` and
    ``outputs`` the model value at each point, shape (r, k+1).  Effects
    are finite differences in unit space, signed by the step direction.
    """
    samples = np.asarray(samples, dtype=float)
    outputs = np.asarray(outputs, dtype=float)
    r, n_pts, k = samples.shape
    if outputs.shape != (r, n_pts):
        raise ConfigError(f"outputs shape {outputs.shape} != {(r, n_pts)}")
    effects = [[] for _ in range(k)]
    for t in range(r):
        unit = space.to_unit(samples[t])
        for s in range(n_pts - 1):
            du = unit[s + 1] - unit[s]
            dim = int(np.argmax(np.abs(du)))
            step = du[dim]
            if step == 0.0:
                raise EvaluationError(f"trajectory {t} step {s} moved no parameter")
            effects[dim].append((outputs[t, s + 1] - outputs[t, s]) / step)
    mu_star = np.empty(k)
    sigma = np.empty(k)
    for i in range(k):
        ee = np.asarray(effects[i])
        if len(ee) == 0:
            raise EvaluationError(f"no elementary effects for {space.names[i]}")
        mu_star[i] = np.mean(np.abs(ee))
        sigma[i] = np.std(ee, ddof=1) if len(ee) > 1 else 0.0
    return MorrisResult(space.names, mu_star, sigma, r)


@dataclass
class SaltelliDesign:
    """The A/B/A_B()/B_A() evaluation matrices, stacked row-wise."""

    space: ParameterSpace
    n: int
    A: np.ndarray
    B: np.ndarray
    AB: np.ndarray  # (k, n, k); AB[i] is A with column i from B
    BA: np.ndarray  # (k, n, k)

    def matrix(self) -> np.ndarray:
        """All n*(2k+2) evaluation points in canonical order."""
        k = len(self.space)
        blocks = [self.A, self.B]
        blocks += [self.AB[i] for i in range(k)]
        blocks += [self.BA[i] for i in range(k)]
        return np.vstack(blocks)

    def split_outputs(self, y: np.ndarray) -> tuple:
        k, n = len(self.space), self.n
        y = np.asarray(y, dtype=float)
        if y.shape[0] != n * (2 * k + 2):
            raise ConfigError(f"expected {n * (2 * k + 2)} outputs, got {y.shape[0]}")
        yA = y[:n]
        yB = y[n:2 * n]
        yAB = np.stack([y[(2 + i) * n:(3 + i) * n] for i in range(k)])
        yBA = np.stack([y[(2 + k + i) * n:(3 + k + i) * n] for i in range(k)])
        return yA, yB, yAB, yBA


def saltelli_sample(space: ParameterSpace, n: int, seed: int = 0) -> SaltelliDesign:
    """Two independent base matrices plus the column-swapped variants."""
    space.validate()
    if n < 2:
        raise ConfigError("base sample size must be >= 2")
    k = len(space)
    rng = np.random.default_rng(seed)
    unit = rng.random((n, 2 * k))
    A = space.from_unit(unit[:, :k])
    B = space.from_unit(unit[:, k:])
    AB = np.empty((k, n, k))
    BA = np.empty((k, n, k))
    for i in range(k):
        AB[i] = A
        AB[i, :, i] = B[:, i]
        BA[i] = B
        BA[i, :, i] = A[:, i]
    return SaltelliDesign(space, n, A, B, AB, BA)


def _sobol_point_estimates(yA, yB, yAB, yBA) -> tuple:
    var = np.var(np.concatenate([yA, yB]))
    if var <= 0.0:
        raise EvaluationError("zero output variance: Sobol indices undefined")
    k = yAB.shape[0]
    s1 = np.empty(k)
    st = np.empty(k)
    for i in range(k):
        v_i = 0.5 * (np.mean(yB * (yAB[i] - yA)) + np.mean(yA * (yBA[i] - yB)))
        e_i = 0.5 * (np.mean((yA - yAB[i]) ** 2) + np.mean((yB - yBA[i]) ** 2)) / 2.0
        s1[i] = v_i / var
        st[i] = e_i / var
    return s1, st


def sobol_indices(design: SaltelliDesign, outputs: np.ndarray,
                  n_boot: int = 200, ci_level: float = 0.95,
                  seed: int = 0) -> SobolResult:
    """First-order and total-effect indices with bootstrap intervals.

    S_i uses the symmetrized direct estimator over both matrix halves,
    S_Ti the Jansen squared-difference form.  The bootstrap resamples
    design rows jointly across all matrices.
    """
    yA, yB, yAB, yBA = design.split_outputs(outputs)
    if not np.all(np.isfinite(outputs)):
        raise EvaluationError("non-finite model output in Sobol design")
    s1, st = _sobol_point_estimates(yA, yB, yAB, yBA)
    k, n = len(design.space), design.n
    rng = np.random.default_rng(seed)
    boots1 = np.empty((n_boot, k))
    bootst = np.empty((n_boot, k))
    for b in range(n_boot):
        idx = rng.integers(0, n, size=n)
        boots1[b], bootst[b] = _sobol_point_estimates(
            yA[idx], yB[idx], yAB[:, idx], yBA[:, idx])
    alpha = 0.5 * (1.0 - ci_level)
    lo1, hi1 = np.quantile(boots1, [alpha, 1.0 - alpha], axis=0)
    lot, hit = np.quantile(bootst, [alpha, 1.0 - alpha], axis=0)
    return SobolResult(design.space.names, s1, st,
                       0.5 * (hi1 - lo1), 0.5 * (hit - lot), n)


def make_model(space: ParameterSpace, exog: ExogenousSeries,
               coeffs: ModelCoefficients, policy: PolicyVector,
               init: SimState):
    """Closure mapping a sample row to the three simulation objectives.

    Space names must be :class:`PolicyVector` or :class:`ModelCoefficients`
    fields; each evaluation overrides those fields and runs one full
    simulation.
    """
    pol_idx = [(j, name) for j, name in enumerate(space.names)
               if name in POLICY_FIELDS]
    coef_idx = [(j, name) for j, name in enumerate(space.names)
                if name in COEFF_FIELDS and name not in POLICY_FIELDS]
    known = {name for _, name in pol_idx} | {name for _, name in coef_idx}
    unknown = [n for n in space.names if n not in known]
    if unknown:
        raise ConfigError(f"unknown parameters {unknown}; not policy or coefficient fields")

    def run(row: np.ndarray) -> tuple:
        p = replace(policy, **{name: float(row[j]) for j, name in pol_idx}) \
            if pol_idx else policy
        c = replace(coeffs, **{name: float(row[j]) for j, name in coef_idx}) \
            if coef_idx else coeffs
        _, objs = simulate(p, exog, c, init)
        if any(math.isnan(v) for v in objs):
            raise EvaluationError(f"NaN objective at sample {dict(zip(space.names, row))}")
        return objs

    return run


@dataclass
class AnalysisReport:
    method: str
    space: ParameterSpace
    tables: dict        # output name -> MorrisResult | SobolResult
    matrix: np.ndarray  # (k, 3): mu_star or S_T per parameter and output
    outputs: tuple = OUTPUT_NAMES

    def matrix_records(self) -> list:
        return [
            {"parameter": name,
             **{out: float(self.matrix[i, j]) for j, out in enumerate(self.outputs)}}
            for i, name in enumerate(self.space.names)
        ]


def analyze_model(space: ParameterSpace, exog: ExogenousSeries,
                  coeffs: ModelCoefficients, policy: PolicyVector,
                  init: SimState, method: str = "morris",
                  output: str = "all", morris_r: int = 20,
                  morris_levels: int = 4, sobol_n: int = 512,
                  n_boot: int = 200, seed: int = 0) -> AnalysisReport:
    """Sensitivity of the simulation objectives over a parameter space.

    One simulation per sample point feeds all three outputs; ``output``
    narrows which ranked tables are returned while the parameters-by-
    outputs matrix always covers f1..f3 (mu* for Morris, S_T for Sobol).
    """
    if output not in OUTPUT_NAMES + ("all",):
        raise ConfigError(f"output must be one of {OUTPUT_NAMES + ('all',)}")
    model = make_model(space, exog, coeffs, policy, init)
    wanted = OUTPUT_NAMES if output == "all" else (output,)
    k = len(space)
    if method == "morris":
        samples = morris_sample(space, morris_r, morris_levels, seed)
        evals = np.empty((morris_r, k + 1, 3))
        for t in range(morris_r):
            for s in range(k + 1):
                evals[t, s] = model(samples[t, s])
        results = {name: morris_indices(space, samples, evals[:, :, j])
                   for j, name in enumerate(OUTPUT_NAMES)}
        matrix = np.column_stack([results[name].mu_star for name in OUTPUT_NAMES])
    elif method == "sobol":
        design = saltelli_sample(space, sobol_n, seed)
        points = design.matrix()
        evals = np.empty((points.shape[0], 3))
        for i in range(points.shape[0]):
            evals[i] = model(points[i])
        results = {name: sobol_indices(design, evals[:, j], n_boot=n_boot, seed=seed)
                   for j, name in enumerate(OUTPUT_NAMES)}
        matrix = np.column_stack([results[name].st for name in OUTPUT_NAMES])
    else:
        raise ConfigError(f"unknown method {method!r}; use 'morris' or 'sobol'")
    tables = {name: results[name] for name in wanted}
    return AnalysisReport(method=method, space=space, tables=tables, matrix=matrix)


def uncertainty_space(policy: PolicyVector, bounds: PolicyBounds,
                      rel: float = 0.2, params=POLICY_FIELDS) -> ParameterSpace:
    """Box of +-``rel`` around a reference policy, clipped to the bounds.

    This is the default space for policy-lever sensitivity runs: every
    lever varies by the same relative amount around the working policy.
    """
    spec = {}
    for name in params:
        v = getattr(policy, name)
        lo, hi = getattr(bounds, name)
        a = max(lo, v * (1.0 - rel))
        b = min(hi, v * (1.0 + rel))
        if a >= b:
            raise ConfigError(f"degenerate uncertainty range for {name}")
        spec[name] = (a, b)
    return ParameterSpace.from_dict(spec)


def full_space(bounds: PolicyBounds, coeffs: ModelCoefficients) -> ParameterSpace:
    """Policy levers over their full bounds plus the main uncertain
    coefficients (elasticity, glacier sensitivity, spending effectiveness,
    recovery rate) at +-50% of their calibrated values."""
    spec = {name: tuple(getattr(bounds, name)) for name in POLICY_FIELDS}
    spec["eps_price"] = (-1.0, -0.1)
    spec["kappa"] = (0.5 * coeffs.kappa, 1.5 * coeffs.kappa)
    spec["alpha_g"] = (0.5 * coeffs.alpha_g, 1.5 * coeffs.alpha_g)
    spec["alpha_w"] = (0.5 * coeffs.alpha_w, 1.5 * coeffs.alpha_w)
    spec["delta"] = (0.5 * coeffs.delta, 1.5 * coeffs.delta)
    return ParameterSpace.from_dict(spec)
