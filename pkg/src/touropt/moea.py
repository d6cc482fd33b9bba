"""NSGA-II over a bounded real-valued search space, maximizing three objectives.

Written from scratch: fast non-dominated sorting, crowding distance,
binary tournament selection, simulated binary crossover, polynomial
mutation, elitist environmental selection, and an exact sweep-based 3-D
hypervolume used both as a quality log and as the convergence signal
(stop when improvement over a sliding window falls below tolerance).

All dominance logic is in maximization form; objectives are stored as
returned by the problem, with no sign flips.  Runs are reproducible: a
single seeded generator drives every random draw in a fixed order.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, EvaluationError

__all__ = [
    "Individual",
    "EAConfig",
    "ParetoFront",
    "EvolveResult",
    "dominates",
    "fast_nondominated_sort",
    "crowding_distance",
    "tournament_select",
    "sbx_crossover",
    "polynomial_mutation",
    "environmental_selection",
    "hypervolume_3d",
    "evolve",
]


@dataclass
class Individual:
    genome: np.ndarray
    objectives: tuple
    rank: int = 0
    crowding: float = 0.0


@dataclass(frozen=True)
class EAConfig:
    """Knobs of the evolutionary run."""

    population_size: int = 100
    generations: int = 40
    eta_c: float = 15.0            # SBX distribution index
    eta_m: float = 20.0            # polynomial-mutation distribution index
    mutation_prob: float | None = None  # per-gene; default 1/n_genes
    crossover_prob: float = 0.9
    seed: int = 0
    hv_window: int = 10            # generations in the plateau window
    hv_rel_tol: float = 1e-4       # relative improvement below this stops
    reference_point: tuple | None = None  # hypervolume anchor; auto if None

    def validate(self) -> None:
        if self.population_size < 4 or self.population_size % 2:
            raise ConfigError("population_size must be even and >= 4")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ConfigError("distribution indices must be > 0")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError("mutation_prob must be in [0, 1]")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ConfigError("crossover_prob must be in [0, 1]")
        if self.generations < 1:
            raise ConfigError("generations must be >= 1")
        if self.hv_window < 1:
            raise ConfigError("hv_window must be >= 1")


@dataclass
class ParetoFront:
    individuals: list
    reference_point: tuple

    def objective_array(self) -> np.ndarray:
        return np.array([ind.objectives for ind in self.individuals], dtype=float)

    def check_nondominated(self) -> bool:
        objs = [ind.objectives for ind in self.individuals]
        for i, a in enumerate(objs):
            for j, b in enumerate(objs):
                if i != j and dominates(a, b):
                    return False
        return True


def dominates(a, b) -> bool:
    """Maximization dominance: a is no worse everywhere, better somewhere."""
    better = False
    for x, y in zip(a, b):
        if math.isnan(x) or math.isnan(y):
            raise EvaluationError(f"NaN objective in dominance check: {a} vs {b}")
        if x < y:
            return False
        if x > y:
            better = True
    return better


def _dominates_nocheck(a, b) -> bool:
    """Hot-path dominance for objectives already validated finite."""
    better = False
    for x, y in zip(a, b):
        if x < y:
            return False
        if x > y:
            better = True
    return better


def fast_nondominated_sort(objectives) -> list:
    """Deb's fast non-dominated sort.

    Takes a sequence of objective tuples, returns fronts as lists of
    indices; front 0 is the non-dominated set and the fronts partition the
    population.
    """
    objs = [tuple(o) for o in objectives]
    n = len(objs)
    for o in objs:
        if any(math.isnan(v) for v in o):
            raise EvaluationError(f"NaN objective in population: {o}")
    dominated_by = [[] for _ in range(n)]  # indices each solution dominates
    dom_count = [0] * n
    fronts = [[]]
    dominates_ = _dominates_nocheck
    for p in range(n):
        op = objs[p]
        for q in range(p + 1, n):
            oq = objs[q]
            if dominates_(op, oq):
                dominated_by[p].append(q)
                dom_count[q] += 1
            elif dominates_(oq, op):
                dominated_by[q].append(p)
                dom_count[p] += 1
    for p in range(n):
        if dom_count[p] == 0:
            fronts[0].append(p)
    i = 0
    while fronts[i]:
        nxt = []
        for p in fronts[i]:
            for q in dominated_by[p]:
                dom_count[q] -= 1
                if dom_count[q] == 0:
                    nxt.append(q)
        i += 1
        fronts.append(nxt)
    fronts.pop()
    return fronts


def crowding_distance(objectives) -> np.ndarray:
    """Crowding distance within one front.

    Per objective, extreme members get +inf and interior members the
    neighbor gap normalized by the objective's range; a zero-range
    objective contributes nothing.
    """
    objs = np.asarray(objectives, dtype=float)
    n = len(objs)
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for m in range(objs.shape[1]):
        order = np.argsort(objs[:, m], kind="stable")
        lo, hi = objs[order[0], m], objs[order[-1], m]
        dist[order[0]] = dist[order[-1]] = np.inf
        span = hi - lo
        if span == 0.0:
            continue
        for k in range(1, n - 1):
            gap = objs[order[k + 1], m] - objs[order[k - 1], m]
            dist[order[k]] += gap / span
    return dist


def _crowded_better(a: Individual, b: Individual) -> bool:
    if a.rank != b.rank:
        return a.rank < b.rank
    return a.crowding > b.crowding


def tournament_select(population, rng) -> Individual:
    """Binary tournament: lower rank wins, larger crowding breaks ties,
    the first-drawn candidate wins remaining ties."""
    i = int(rng.integers(len(population)))
    j = int(rng.integers(len(population)))
    a, b = population[i], population[j]
    return b if _crowded_better(b, a) else a


def _sbx_beta(u: float, eta: float) -> float:
    if u <= 0.5:
        return (2.0 * u) ** (1.0 / (eta + 1.0))
    return (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0))


def sbx_crossover(parent_a, parent_b, eta_c: float, lows, highs, rng) -> tuple:
    """Simulated binary crossover; children are clipped into the box.

    With spread 1 (u = 0.5) the children equal the parents, and identical
    parents always produce identical children.
    """
    pa = np.asarray(parent_a, dtype=float)
    pb = np.asarray(parent_b, dtype=float)
    ca = np.empty_like(pa)
    cb = np.empty_like(pb)
    for i in range(len(pa)):
        beta = _sbx_beta(float(rng.random()), eta_c)
        ca[i] = 0.5 * ((1.0 + beta) * pa[i] + (1.0 - beta) * pb[i])
        cb[i] = 0.5 * ((1.0 - beta) * pa[i] + (1.0 + beta) * pb[i])
    np.clip(ca, lows, highs, out=ca)
    np.clip(cb, lows, highs, out=cb)
    return ca, cb


def polynomial_mutation(genome, eta_m: float, prob: float, lows, highs, rng) -> np.ndarray:
    """Polynomial mutation applied gene-wise with probability ``prob``."""
    x = np.asarray(genome, dtype=float).copy()
    lo = np.asarray(lows, dtype=float)
    hi = np.asarray(highs, dtype=float)
    for i in range(len(x)):
        if rng.random() >= prob:
            continue
        u = float(rng.random())
        if u < 0.5:
            delta = (2.0 * u) ** (1.0 / (eta_m + 1.0)) - 1.0
        else:
            delta = 1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta_m + 1.0))
        x[i] += delta * (hi[i] - lo[i])
    np.clip(x, lo, hi, out=x)
    return x


def _assign_ranks_and_crowding(population) -> list:
    fronts = fast_nondominated_sort([ind.objectives for ind in population])
    for rank, front in enumerate(fronts):
        dists = crowding_distance([population[i].objectives for i in front])
        for k, idx in enumerate(front):
            population[idx].rank = rank
            population[idx].crowding = float(dists[k])
    return fronts


def environmental_selection(pool, n: int) -> list:
    """Elitist reduction of a parent+offspring pool to ``n`` survivors.

    Whole fronts are admitted in rank order; the first front that
    overflows is truncated by descending crowding distance.
    """
    fronts = _assign_ranks_and_crowding(pool)
    survivors = []
    for front in fronts:
        members = [pool[i] for i in front]
        if len(survivors) + len(members) <= n:
            survivors.extend(members)
        else:
            members.sort(key=lambda ind: -ind.crowding)
            survivors.extend(members[: n - len(survivors)])
        if len(survivors) == n:
            break
    return survivors


def _staircase_insert(xs, ys, area, x, y, ref_x, ref_y) -> float:
    """Insert an (x, y) point into a maximal staircase, returning new area.

    The staircase is kept sorted by x ascending (y strictly descending);
    ``area`` is the union area of the rectangles [ref, point].
    """
    i = bisect.bisect_left(xs, x)
    if i < len(xs) and ys[i] >= y:
        return area  # dominated in the plane: no new area
    hi = i
    if hi < len(xs) and xs[hi] == x:  # same x, strictly lower y: replaced
        hi += 1
    lo = i
    while lo > 0 and ys[lo - 1] <= y:
        lo -= 1
    x_left = xs[lo - 1] if lo > 0 else ref_x
    old = 0.0
    xprev = x_left
    for k in range(lo, hi):
        old += (xs[k] - xprev) * (ys[k] - ref_y)
        xprev = xs[k]
    if hi < len(xs) and x > xprev:
        old += (x - xprev) * (ys[hi] - ref_y)
    area += (x - x_left) * (y - ref_y) - old
    del xs[lo:hi]
    del ys[lo:hi]
    xs.insert(lo, x)
    ys.insert(lo, y)
    return area


def hypervolume_3d(points, reference_point) -> float:
    """Exact dominated hypervolume of 3-D maximization points.

    Sweeps the third objective from high to low while maintaining the
    union area of the first two as a staircase.  Every point must
    dominate the reference point.
    """
    ref = tuple(float(v) for v in reference_point)
    pts = [tuple(float(v) for v in p) for p in points]
    if not pts:
        return 0.0
    for p in pts:
        if not dominates(p, ref):
            raise ValueError(f"front point {p} does not dominate reference {ref}")
    pts.sort(key=lambda p: -p[2])
    xs, ys = [], []
    area = 0.0
    volume = 0.0
    prev_z = pts[0][2]
    for p in pts:
        if p[2] < prev_z:
            volume += area * (prev_z - p[2])
            prev_z = p[2]
        area = _staircase_insert(xs, ys, area, p[0], p[1], ref[0], ref[1])
    volume += area * (prev_z - ref[2])
    return volume


class _Archive:
    """All-time non-dominated set with vectorized dominance screening."""

    def __init__(self):
        self.members: list = []
        self._objs = np.empty((0, 3))

    def add(self, cand: Individual) -> bool:
        co = np.asarray(cand.objectives, dtype=float)
        arr = self._objs
        if len(self.members):
            # any member at least as good everywhere covers the candidate
            if bool((arr >= co).all(axis=1).any()):
                return False
            beaten = (arr <= co).all(axis=1)
            if bool(beaten.any()):
                keep = ~beaten
                self.members = [m for m, k in zip(self.members, keep) if k]
                arr = arr[keep]
        self.members.append(cand)
        self._objs = np.vstack([arr, co[None, :]])
        return True


@dataclass
class EvolveResult:
    front: ParetoFront
    hypervolume_log: list
    generations_run: int
    population: list = field(default_factory=list)


def evolve(problem, lows, highs, config: EAConfig) -> EvolveResult:
    """Run the full NSGA-II loop.

    ``problem`` maps a genome array to a tuple of three objective values
    (all maximized) and must be deterministic.  Stops at the generation
    limit, or earlier once the archive hypervolume improves by less than
    ``hv_rel_tol`` (relatively) over ``hv_window`` generations.
    """
    config.validate()
    lows = np.asarray(lows, dtype=float)
    highs = np.asarray(highs, dtype=float)
    if lows.shape != highs.shape or np.any(lows > highs):
        raise ConfigError("invalid bounds")
    n_genes = len(lows)
    pm = config.mutation_prob if config.mutation_prob is not None else 1.0 / n_genes
    rng = np.random.default_rng(config.seed)

    def evaluate(genome) -> tuple:
        vals = tuple(float(v) for v in problem(genome))
        if len(vals) != 3 or any(not math.isfinite(v) for v in vals):
            raise EvaluationError(f"bad objectives {vals} for genome {genome}")
        return vals

    pop = []
    for _ in range(config.population_size):
        genome = lows + (highs - lows) * rng.random(n_genes)
        pop.append(Individual(genome, evaluate(genome)))
    _assign_ranks_and_crowding(pop)

    archive = _Archive()
    for ind in pop:
        archive.add(ind)

    if config.reference_point is not None:
        ref = tuple(float(v) for v in config.reference_point)
    else:
        objs = np.array([ind.objectives for ind in pop])
        lo = objs.min(axis=0)
        span = objs.max(axis=0) - lo
        ref = tuple(lo - 0.01 * span - 1e-9 * (1.0 + np.abs(lo)))

    def archive_hv() -> float:
        pts = [ind.objectives for ind in archive.members
               if all(v > r for v, r in zip(ind.objectives, ref))]
        return hypervolume_3d(pts, ref) if pts else 0.0

    hv_log = [archive_hv()]
    gens = 0
    for _ in range(config.generations):
        offspring = []
        while len(offspring) < config.population_size:
            pa = tournament_select(pop, rng)
            pb = tournament_select(pop, rng)
            if rng.random() < config.crossover_prob:
                ga, gb = sbx_crossover(pa.genome, pb.genome, config.eta_c,
                                       lows, highs, rng)
            else:
                ga, gb = pa.genome.copy(), pb.genome.copy()
            for g in (ga, gb):
                g = polynomial_mutation(g, config.eta_m, pm, lows, highs, rng)
                offspring.append(Individual(g, evaluate(g)))
        pop = environmental_selection(pop + offspring, config.population_size)
        for ind in offspring:
            archive.add(ind)
        gens += 1
        hv_log.append(archive_hv())
        if gens > config.hv_window:
            base = hv_log[-1 - config.hv_window]
            gain = hv_log[-1] - base
            if gain < config.hv_rel_tol * max(abs(base), 1e-30):
                break

    front = ParetoFront(individuals=list(archive.members), reference_point=ref)
    return EvolveResult(front=front, hypervolume_log=hv_log,
                        generations_run=gens, population=pop)
