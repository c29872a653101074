"""
Point Enumerators

Fast path: fans that are products of projective spaces on complementary coordinate
blocks. A point of P^n in the torus is [x_0 : ... : x_n] with coprime nonzero integers
and x_n > 0; its log-anticanonical height is max|x_i|^(sum_j 1/m_j), and the point
conditions read coordinatewise on |x_i|. Each factor is reduced to a histogram of
coprime positive tuples by level M = max x_i; products combine the histograms under
the joint bound prod_k H_k <= B.

Generic fallback: every coordinate a/b satisfies max(|a|, b) <= B^(1/(2 kappa)), so a
finite box of coprime fractions contains all points of height <= B.

Author: Mohammed Ismail AbdElmageid
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, integer_nthroot

from core.exceptions import BudgetExceededError, UnsupportedInputError
from core.fan import Fan, OrbifoldWeights, PLFunction, is_complete
from core.heights import HeightPower, global_height, height_at_most, height_lower_bound_constant
from core.points import TorusPoint, Variant, classify_global, multiplicity_profile
from core.workers import WorkerPool, chunk_ranges
from counting.mfull import admissible_values

logger = logging.getLogger(__name__)

PointWithHeight = Tuple[TorusPoint, HeightPower]


@dataclass(frozen=True)
class ProjectiveFactor:
    """A P^n factor: lattice coordinates it occupies and the ray of each x_k

    rays[0] is the ray -(sum of the unit vectors) carrying x_0; rays[k] is the unit
    vector of coordinates[k - 1] carrying x_k.
    """
    coordinates: Tuple[int, ...]
    rays: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.coordinates)

    def coordinate_weights(self, fan: Fan, weights: OrbifoldWeights) -> Tuple:
        return tuple(weights.of_ray(fan, j) for j in self.rays)

    def exponent(self, fan: Fan, weights: OrbifoldWeights) -> Fraction:
        """sum_k 1/m_k over the rays of the factor"""
        return sum((weights.inverse(fan.orbit_of_ray[j]) for j in self.rays), Fraction(0))


def recognise_projective_factors(fan: Fan) -> Optional[List[ProjectiveFactor]]:
    """Decompose the fan as a product of projective spaces, or None"""
    if not fan.is_split or fan.dim == 0:
        return None
    parent = list(range(fan.dim))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    supports = []
    for ray in fan.rays:
        support = [k for k, x in enumerate(ray) if x != 0]
        if not support:
            return None
        supports.append(support)
        for k in support[1:]:
            parent[find(k)] = find(support[0])

    components: Dict[int, List[int]] = {}
    for k in range(fan.dim):
        components.setdefault(find(k), []).append(k)

    factors = []
    for coordinates in sorted(components.values()):
        members = set(coordinates)
        unit_rays: Dict[int, int] = {}
        negative = None
        for j, (ray, support) in enumerate(zip(fan.rays, supports)):
            if not set(support) <= members:
                continue
            if len(support) == 1 and ray[support[0]] == 1:
                unit_rays[support[0]] = j
            elif set(support) == members and all(ray[k] == -1 for k in coordinates):
                negative = j
            else:
                return None
        if negative is None or set(unit_rays) != members:
            return None
        factors.append(ProjectiveFactor(tuple(coordinates), (negative,) + tuple(unit_rays[k] for k in coordinates)))

    if sum(f.n + 1 for f in factors) != fan.ray_count:
        return None
    expected = {frozenset()}
    for factor in factors:
        expected = {cone | frozenset(omit) for cone in expected
                    for omit in itertools.combinations(factor.rays, factor.n)}
    if expected != {frozenset(c) for c in fan.maximal_cones}:
        return None
    return factors


def max_level(bound: Fraction, exponent: Fraction, cap: int) -> int:
    """Largest M <= cap with M^exponent <= bound (cap when exponent is 0)"""
    bound = Fraction(bound)
    if bound < 1:
        return 0
    if exponent == 0:
        return cap
    power = int(bound ** exponent.denominator)
    root, _ = integer_nthroot(power, exponent.numerator)
    return min(int(root), cap)


@lru_cache(maxsize=65536)
def _factorisation(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(factorint(n).items())


def weak_condition(xs: Sequence[int], ms: Sequence) -> bool:
    """Exact weak Campana filter for a coprime tuple of coordinates"""
    totals: Dict[int, Fraction] = {}
    for x, m in zip(xs, ms):
        if m in (1, math.inf):
            continue
        for p, e in _factorisation(int(x)):
            totals[p] = totals.get(p, Fraction(0)) + Fraction(e, m)
    return not any(0 < total < 1 for total in totals.values())


@dataclass
class FactorLevels:
    """Coprime positive tuples of one factor counted by level M = max x_k"""
    factor: ProjectiveFactor
    exponent: Fraction
    histogram: np.ndarray
    samples: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def signs(self) -> int:
        return 2 ** self.factor.n

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.histogram) * self.signs


def _coprime_grid(leading: np.ndarray, others: List[np.ndarray]) -> Tuple[np.ndarray, np.ndarray, List[np.ndarray]]:
    """gcd, max and broadcast coordinate arrays over leading x others"""
    axes = len(others) + 1
    shape = [-1] + [1] * (axes - 1)
    g = leading.reshape(shape)
    top = g
    arrays = [g]
    for axis, values in enumerate(others, start=1):
        shape = [1] * axes
        shape[axis] = -1
        column = values.reshape(shape)
        g = np.gcd(g, column)
        top = np.maximum(top, column)
        arrays.append(column)
    return g, top, arrays


def factor_levels(fan: Fan, weights: OrbifoldWeights, variant: Variant, factor: ProjectiveFactor, limit: int,
                  workers: int = 1, chunk_size: int = 256, sample_fraction: float = 0.0, seed: int = 0,
                  factor_index: int = 0) -> FactorLevels:
    """Histogram of admissible coprime positive tuples with max <= limit

    A seeded share sample_fraction of the tuples is kept per chunk for auditing;
    1.0 keeps every tuple.
    """
    ms = factor.coordinate_weights(fan, weights)
    values = [admissible_values(limit, m, variant) for m in ms]
    histogram = np.zeros(limit + 1, dtype=np.int64)
    exponent = factor.exponent(fan, weights)
    if limit < 1 or any(len(v) == 0 for v in values):
        return FactorLevels(factor, exponent, histogram)
    leading, others = values[0], values[1:]
    weak = variant is Variant.WEAK_CAMPANA and any(m not in (1, math.inf) for m in ms)

    def chunk(index: int, start: int, stop: int):
        g, top, arrays = _coprime_grid(leading[start:stop], others)
        mask = g == 1
        if weak:
            for position in map(tuple, np.argwhere(mask)):
                xs = [int(arrays[k].flat[position[k]]) for k in range(len(arrays))]
                if not weak_condition(xs, ms):
                    mask[position] = False
        counts = np.bincount(np.broadcast_to(top, mask.shape)[mask], minlength=limit + 1)
        picked = []
        if sample_fraction > 0:
            positions = np.argwhere(mask)
            rng = np.random.default_rng([seed, factor_index, index])
            chosen = positions[rng.random(len(positions)) < sample_fraction]
            picked = [tuple(int(arrays[k].flat[p[k]]) for k in range(len(arrays))) for p in chosen]
        return counts, picked

    arguments = [(i, start, stop) for i, (start, stop) in enumerate(chunk_ranges(len(leading), chunk_size))]
    pool = WorkerPool(workers, name=f"factor{factor_index}")
    samples = []
    for counts, picked in pool.map(chunk, arguments):
        histogram += counts[:limit + 1].astype(np.int64)
        samples.extend(picked)
    logger.debug("factor %d (P%d): %d coprime tuples up to level %d", factor_index, factor.n,
                 int(histogram.sum()), limit)
    return FactorLevels(factor, exponent, histogram, samples)


def joint_count(levels: Sequence[FactorLevels], bound: Fraction) -> int:
    """Number of points with prod_k M_k^(e_k) <= bound, signs included"""
    bound = Fraction(bound)
    if bound < 1:
        return 0
    common = math.lcm(*(lv.exponent.denominator for lv in levels))
    powers = [int(lv.exponent * common) for lv in levels]
    cumulatives = [lv.cumulative for lv in levels]

    def count_from(index: int, remaining: Fraction) -> int:
        lv = levels[index]
        cap = len(lv.histogram) - 1
        if index == len(levels) - 1:
            top = max_level(remaining, Fraction(powers[index]), cap)
            return int(cumulatives[index][top]) if top >= 1 else 0
        total = 0
        for level in np.nonzero(lv.histogram)[0]:
            level = int(level)
            cost = level ** powers[index]
            if cost > remaining:
                break
            total += int(lv.histogram[level]) * lv.signs * count_from(index + 1, remaining / cost)
        return total

    return count_from(0, bound ** common)


def factor_limit(exponent: Fraction, bound: Fraction) -> int:
    """Largest level a factor can reach when every other factor sits at height 1"""
    if exponent == 0:
        return 1
    return max_level(bound, exponent, cap=10 ** 18)


def _signed_tuples(xs: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    n = len(xs) - 1
    return [tuple(s * x for s, x in zip(signs + (1,), xs)) for signs in itertools.product((1, -1), repeat=n)]


def assemble_point(fan: Fan, factors: Sequence[ProjectiveFactor], tuples: Sequence[Tuple[int, ...]]) -> TorusPoint:
    coords = [Fraction(1)] * fan.dim
    for factor, xs in zip(factors, tuples):
        for k, coordinate in enumerate(factor.coordinates, start=1):
            coords[coordinate] = Fraction(xs[k], xs[0])
    return TorusPoint(tuple(coords))


def projective_points(fan: Fan, weights: OrbifoldWeights, variant: Variant, bound,
                      factors: Optional[List[ProjectiveFactor]] = None) -> List[PointWithHeight]:
    """Explicit points of height <= bound on a product of projective spaces"""
    bound = Fraction(bound)
    factors = factors or recognise_projective_factors(fan)
    if factors is None:
        raise UnsupportedInputError(f"{fan.describe()} is not a product of projective spaces")
    per_factor = []
    for index, factor in enumerate(factors):
        exponent = factor.exponent(fan, weights)
        limit = factor_limit(exponent, bound)
        levels = factor_levels(fan, weights, variant, factor, limit, sample_fraction=1.0, factor_index=index)
        entries = []
        for xs in levels.samples:
            for signed in _signed_tuples(xs):
                entries.append((max(xs), signed))
        per_factor.append((exponent, entries))

    points = []
    for combination in itertools.product(*(entries for _, entries in per_factor)):
        height = HeightPower.from_rational_exponents(
            [(Fraction(level), exponent) for (exponent, _), (level, _) in zip(per_factor, combination)])
        if height.at_most(bound):
            points.append((assemble_point(fan, factors, [xs for _, xs in combination]), height))
    return sort_points(points)


def sort_points(points: List[PointWithHeight]) -> List[PointWithHeight]:
    """Canonical order: height, then coordinates lexicographically"""
    return sorted(points, key=lambda item: (item[1], item[0].coords))


@dataclass
class GenericPlan:
    """Search box of the generic enumerator"""
    kappa: Fraction
    radius: int
    fractions: List[Fraction]
    estimate: int


def generic_plan(fan: Fan, weights: OrbifoldWeights, bound, budget: Optional[int] = None) -> GenericPlan:
    """Coordinates a/b in lowest terms with max(|a|, b) <= B^(1/(2 kappa))

    The integers +-1..+-radius alone give (2 radius)^d candidates; a box already above
    budget by that count is rejected before the fractions are listed.
    """
    bound = Fraction(bound)
    phi = PLFunction.log_anticanonical(fan, weights)
    kappa = height_lower_bound_constant(fan, phi)
    if kappa <= 0:
        raise UnsupportedInputError(f"{fan.describe()}: height lower bound constant is {kappa}, "
                                    f"the search box is unbounded")
    radius = max_level(bound, 2 * kappa, cap=10 ** 9)
    lower = (2 * radius) ** fan.dim
    if budget is not None and lower > budget:
        raise BudgetExceededError(f"generic search needs at least {lower} candidates, budget is {budget}",
                                  estimate=lower, budget=budget)
    fractions = sorted(Fraction(s * a, b) for b in range(1, radius + 1) for a in range(1, radius + 1)
                       if math.gcd(a, b) == 1 for s in (1, -1))
    return GenericPlan(kappa, radius, fractions, len(fractions) ** fan.dim)


def generic_points(fan: Fan, weights: OrbifoldWeights, variant: Variant, bound, budget: int = 2_000_000,
                   workers: int = 1, chunk_size: int = 256, tolerance: float = 1e-9) -> List[PointWithHeight]:
    """All points of height <= bound satisfying the variant, by exhaustive search"""
    bound = Fraction(bound)
    certificate = is_complete(fan)
    if not certificate:
        raise UnsupportedInputError(f"{fan.describe()} is not complete: {certificate.reason}")
    plan = generic_plan(fan, weights, bound, budget)
    logger.info("generic enumerator on %s: kappa=%s radius=%d, %d candidate points", fan.describe(),
                plan.kappa, plan.radius, plan.estimate)
    if plan.estimate > budget:
        raise BudgetExceededError(f"generic search needs {plan.estimate} candidates, budget is {budget}",
                                  estimate=plan.estimate, budget=budget)
    phi = PLFunction.log_anticanonical(fan, weights)
    fractions = plan.fractions

    def chunk(start: int, stop: int) -> List[PointWithHeight]:
        found = []
        for first in fractions[start:stop]:
            for rest in itertools.product(fractions, repeat=fan.dim - 1):
                point = TorusPoint((first,) + rest)
                height = global_height(fan, phi, point)
                if not height_at_most(height, bound, tolerance):
                    continue
                profile = multiplicity_profile(fan, point)
                if classify_global(fan, weights, point, (), variant, profile=profile):
                    found.append((point, height.exact))
        return found

    pool = WorkerPool(workers, name="generic")
    chunks = pool.map(chunk, chunk_ranges(len(fractions), chunk_size))
    return sort_points([item for part in chunks for item in part])


def enumerate_points(fan: Fan, weights: OrbifoldWeights, variant: Variant, bound, budget: int = 2_000_000,
                     workers: int = 1, chunk_size: int = 256, tolerance: float = 1e-9,
                     force_generic: bool = False) -> List[PointWithHeight]:
    """Every torus point of height <= bound satisfying the variant, in canonical order"""
    weights.check_against(fan)
    factors = None if force_generic else recognise_projective_factors(fan)
    if factors is not None:
        return projective_points(fan, weights, variant, bound, factors)
    if not force_generic:
        logger.warning("%s is not a product of projective spaces; using the generic enumerator", fan.describe())
    return generic_points(fan, weights, variant, bound, budget, workers, chunk_size, tolerance)
