"""
Local and Archimedean Densities

Local densities at a prime p are the Fourier transforms of the height at the trivial
character: the sum over cocharacters n of the semi-integral indicator times
p^(-s phi_{Sigma,m}(n)), normalised by mu_p(T(Z_p)) = (1 - 1/p)^d. They are computed
two ways: by direct lattice summation over the relative interiors of the cones, and in
closed form from the Q polynomial.

The archimedean density integrates exp(-s phi_{Sigma,m}(x)) over N_R, times 2^d for
the sign components of T(R).

Author: Mohammed Ismail AbdElmageid
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy import integrate

from core.exceptions import DivergenceError, UnsupportedInputError
from core.fan import Fan, OrbifoldWeights
from core.integer_matrix import determinant
from series.fan_functions import FanFunctionVariant, InvariantConeSet, q_polynomial

logger = logging.getLogger(__name__)

DEFAULT_TARGET = 1e-8
DEFAULT_THETA = Fraction(1, 2)


@dataclass
class LocalDensity:
    """Local density at p, by direct summation and in closed form"""
    p: int
    s: Fraction
    variant: FanFunctionVariant
    direct_value: object
    tail_bound: object
    level: Fraction
    closed_value: object

    @property
    def discrepancy(self):
        return abs(self.direct_value - self.closed_value)

    @property
    def consistent(self) -> bool:
        return self.discrepancy <= self.tail_bound + 1e-12 * abs(self.closed_value)


def _mp(q: Fraction):
    q = Fraction(q)
    return mpmath.mpf(q.numerator) / q.denominator


def convergence_abscissa(weights: OrbifoldWeights) -> Fraction:
    """max_i m_i / (m_i + 1) over the finite weights"""
    finite = [m for m in weights.m if m != math.inf]
    return max((Fraction(m, m + 1) for m in finite), default=Fraction(0))


def _require_density_input(fan: Fan, weights: OrbifoldWeights, variant: FanFunctionVariant, s: Fraction):
    weights.check_against(fan)
    if not fan.is_split:
        raise UnsupportedInputError(f"{fan.describe()}: local densities need a split fan")
    if s <= 0 or s < convergence_abscissa(weights):
        raise DivergenceError(f"s = {s} is below the convergence abscissa {convergence_abscissa(weights)}")
    if variant is FanFunctionVariant.PLAIN and not weights.all_finite:
        raise DivergenceError("plain density with an infinite weight diverges (phi vanishes on that ray)")


def _measure_factor(p: int, dim: int):
    return (1 - mpmath.mpf(1) / p) ** dim


def _admissible(m, level_units: int, unit: int, variant: FanFunctionVariant) -> np.ndarray:
    """Multiplicities lambda >= 1 allowed on a ray with weight m, lambda * unit / m <= level_units"""
    if m == math.inf:
        return np.zeros(0, dtype=np.int64)
    step = unit // m
    top = level_units // step
    values = np.arange(1, top + 1, dtype=np.int64)
    if variant is FanFunctionVariant.CAMPANA:
        values = values[values >= m]
    elif variant is FanFunctionVariant.DARMON:
        values = values[values % m == 0]
    return values


def _cone_lattice_sum(weights_on_rays: Sequence, x_log: float, level_units: int, unit: int,
                      variant: FanFunctionVariant) -> float:
    """sum over admissible lambda in Z_{>=1}^cone with sum lambda_j / m_j <= level of p^(-s sum lambda_j/m_j)"""
    if not weights_on_rays:
        return 1.0
    steps = [unit // m if m != math.inf else 0 for m in weights_on_rays]
    candidates = [_admissible(m, level_units, unit, variant) for m in weights_on_rays]
    if any(len(c) == 0 for c in candidates):
        return 0.0

    *head, last = list(zip(steps, candidates))
    last_step, last_values = last
    last_cost = last_values * last_step
    last_terms = np.exp(-x_log * last_cost / unit)
    last_cumulative = np.cumsum(last_terms)

    def recurse(position: int, used: int) -> float:
        if position == len(head):
            remaining = level_units - used
            count = np.searchsorted(last_cost, remaining, side="right")
            return float(last_cumulative[count - 1]) if count else 0.0
        step, values = head[position]
        total = 0.0
        for value in values:
            cost = int(value) * step
            if used + cost > level_units:
                break
            total += math.exp(-x_log * cost / unit) * recurse(position + 1, used + cost)
        return total

    return recurse(0, 0)


def _plain_majorant(fan: Fan, weights: OrbifoldWeights, p: int, exponent: Fraction):
    """sum_sigma prod_{j in sigma} x_j / (1 - x_j), x_j = p^(-exponent / m_j): the untruncated plain sum"""
    total = mpmath.mpf(0)
    for cone in fan.cones:
        term = mpmath.mpf(1)
        for j in cone:
            m = weights.of_ray(fan, j)
            if m == math.inf:
                term = mpmath.mpf(0)
                break
            x = mpmath.power(p, -_mp(exponent / m))
            term *= x / (1 - x)
        total += term
    return total


def rankin_level(fan: Fan, weights: OrbifoldWeights, p: int, s: Fraction, target: float = DEFAULT_TARGET,
                 theta: Fraction = DEFAULT_THETA) -> Fraction:
    """Smallest integer level N whose Rankin tail bound is below target"""
    majorant = _plain_majorant(fan, weights, p, (1 - theta) * s) * _measure_factor(p, fan.dim)
    needed = mpmath.log(majorant / target) / (_mp(theta * s) * mpmath.log(p))
    return Fraction(max(0, int(mpmath.ceil(needed))))


def local_density_direct(fan: Fan, weights: OrbifoldWeights, variant, p: int, s=1,
                         level: Optional[Fraction] = None, target: float = DEFAULT_TARGET,
                         theta: Fraction = DEFAULT_THETA) -> Tuple[object, object, Fraction]:
    """(value, tail bound, level) of the truncated lattice sum

    Lattice vectors are grouped by the cone whose relative interior contains them;
    on a regular fan these are sum lambda_j e_j with every lambda_j >= 1. Only
    vectors with phi_{Sigma,m}(n) <= level are summed; the remainder is bounded by
    p^(-theta s level) times the plain sum at (1 - theta) s.
    """
    variant = FanFunctionVariant.of(variant)
    s = Fraction(s)
    theta = Fraction(theta)
    _require_density_input(fan, weights, variant, s)
    if not fan.regular:
        raise UnsupportedInputError(f"{fan.describe()}: direct summation needs a regular fan")
    if level is None:
        level = rankin_level(fan, weights, p, s, target, theta)
    level = Fraction(level)

    finite = [m for m in weights.m if m != math.inf]
    unit = math.lcm(*finite) * level.denominator if finite else level.denominator
    level_units = int(level * unit)
    x_log = float(s) * math.log(p)

    raw = math.fsum(
        _cone_lattice_sum([weights.of_ray(fan, j) for j in cone], x_log, level_units, unit, variant)
        for cone in fan.cones)
    normalisation = _measure_factor(p, fan.dim)
    tail = mpmath.power(p, -_mp(theta * s * level)) * _plain_majorant(fan, weights, p, (1 - theta) * s) * normalisation
    logger.debug("direct density p=%d s=%s level=%s raw=%.12g tail=%s", p, s, level, raw, mpmath.nstr(tail, 5))
    return mpmath.mpf(raw) * normalisation, tail, level


def closed_form_raw(cone_set: InvariantConeSet, weights: OrbifoldWeights, variant, p: int, s=1):
    """Q(u = p^(-s/m)) / prod(1 - p^(-f s)) (Campana, Darmon) or / prod(1 - u^f) (plain)"""
    variant = FanFunctionVariant.of(variant)
    s = Fraction(s)
    q = q_polynomial(cone_set, weights, variant)
    m_of_block = cone_set.block_weights(weights)
    m_map = dict(zip(cone_set.blocks, m_of_block))
    s_real = _mp(s)
    values = [mpmath.power(p, -s_real / m_map[b]) for b in q.blocks]
    numerator = q.evaluate(values)
    denominator = mpmath.mpf(1)
    for block, u in zip(q.blocks, values):
        if variant is FanFunctionVariant.PLAIN:
            denominator *= 1 - u ** block.f
        else:
            denominator *= 1 - mpmath.power(p, -block.f * s_real)
    return numerator / denominator


def local_density_closed(fan: Fan, weights: OrbifoldWeights, variant, p: int, s=1,
                         cone_set: Optional[InvariantConeSet] = None):
    """Closed form of the local density, including (1 - 1/p)^d"""
    variant = FanFunctionVariant.of(variant)
    s = Fraction(s)
    _require_density_input(fan, weights, variant, s)
    cone_set = cone_set or InvariantConeSet.from_fan(fan)
    return closed_form_raw(cone_set, weights, variant, p, s) * _measure_factor(p, fan.dim)


def local_density(fan: Fan, weights: OrbifoldWeights, variant, p: int, s=1, level: Optional[Fraction] = None,
                  target: float = DEFAULT_TARGET, theta: Fraction = DEFAULT_THETA) -> LocalDensity:
    variant = FanFunctionVariant.of(variant)
    direct, tail, used_level = local_density_direct(fan, weights, variant, p, s, level, target, theta)
    closed = local_density_closed(fan, weights, variant, p, s)
    density = LocalDensity(p=p, s=Fraction(s), variant=variant, direct_value=direct, tail_bound=tail,
                           level=used_level, closed_value=closed)
    if not density.consistent:
        logger.warning("p=%d s=%s: direct and closed densities differ by %s > tail bound %s",
                       p, s, mpmath.nstr(density.discrepancy, 5), mpmath.nstr(tail, 5))
    return density


def archimedean_density(fan: Fan, weights: OrbifoldWeights, s=1) -> Fraction:
    """2^d * sum over maximal cones of |det| * prod_j m_j / s, exactly"""
    weights.check_against(fan)
    s = Fraction(s)
    if s <= 0 or not weights.all_finite:
        raise DivergenceError("archimedean density diverges: phi_{Sigma,m,s} is not positive on every ray")
    total = Fraction(0)
    for cone in fan.maximal_cones:
        if len(cone) != fan.dim:
            raise UnsupportedInputError(f"{fan.describe()}: maximal cone {cone} is not full-dimensional")
        volume = abs(determinant([fan.rays[j] for j in cone]))
        total += volume * math.prod(Fraction(weights.of_ray(fan, j)) / s for j in cone)
    return 2 ** fan.dim * total


def _phi_float(fan: Fan, weights: OrbifoldWeights, s: float):
    """Float evaluator of phi_{Sigma,m,s} on N_R"""
    pieces = []
    for cone in fan.maximal_cones:
        inverse = np.array([[float(x) for x in row] for row in fan._cone_inverses[cone]])
        values = np.array([s / weights.of_ray(fan, j) for j in cone])
        pieces.append((inverse, values))

    def phi(x: np.ndarray) -> float:
        best = None
        for inverse, values in pieces:
            coefficients = inverse @ x
            if coefficients.min() >= -1e-12 * max(1.0, np.abs(coefficients).max()):
                return float(values @ coefficients)
            score = coefficients.min()
            if best is None or score > best[0]:
                best = (score, float(values @ coefficients))
        return best[1]

    return phi


def archimedean_density_numeric(fan: Fan, weights: OrbifoldWeights, s=1) -> float:
    """Quadrature cross-check for d <= 2 using homogeneity of phi

    d = 1: 1/phi(1) + 1/phi(-1). d = 2: integral over the circle of 1/phi(theta)^2,
    split at the ray directions.
    """
    weights.check_against(fan)
    if not weights.all_finite:
        raise DivergenceError("archimedean density diverges for infinite weights")
    phi = _phi_float(fan, weights, float(s))
    if fan.dim == 1:
        total = 1.0 / phi(np.array([1.0])) + 1.0 / phi(np.array([-1.0]))
    elif fan.dim == 2:
        angles = sorted({math.atan2(r[1], r[0]) % (2 * math.pi) for r in fan.rays} | {0.0, 2 * math.pi})
        total = 0.0
        for start, stop in zip(angles, angles[1:]):
            if stop - start < 1e-15:
                continue
            value, _ = integrate.quad(lambda t: 1.0 / phi(np.array([math.cos(t), math.sin(t)])) ** 2,
                                      start, stop, epsabs=0, epsrel=1e-10, limit=200)
            total += value
    else:
        raise UnsupportedInputError(f"numeric archimedean density is implemented for d <= 2, got d = {fan.dim}")
    return 2 ** fan.dim * total


def density_table(fan: Fan, weights: OrbifoldWeights, p: int, s=1) -> Dict[FanFunctionVariant, object]:
    """Closed-form densities of all three variants at equal (p, s)"""
    return {variant: local_density_closed(fan, weights, variant, p, s) for variant in FanFunctionVariant
            if variant is not FanFunctionVariant.PLAIN or weights.all_finite}
