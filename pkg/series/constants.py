"""
Predicted Leading Constant

c_pred = alpha / (b - 1)! * d_inf * prod_{p <= P} (1 - 1/p)^b d_p * tail

for a split toric orbifold over Q. d_p is the closed-form local density at s = 1,
d_inf the archimedean density, and the tail estimates the Euler factors beyond the
prime cutoff from the monomials of Q.

Author: Mohammed Ismail AbdElmageid
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import mpmath
import numpy as np
from scipy.special import exp1
from sympy import primerange

from core.exceptions import DivergenceError, InternalConsistencyError, UnsupportedInputError
from core.fan import Fan, OrbifoldWeights
from core.picard import alpha_constants, picard
from core.workers import WorkerPool, chunk_ranges
from series.densities import archimedean_density
from series.fan_functions import FanFunctionVariant, InvariantConeSet, q_polynomial

logger = logging.getLogger(__name__)

CSV_HEADER = "fan,weights,variant,alpha_direct,alpha_paper,b,d_inf,primes_cutoff,euler_P,tail,tail_bound,c_pred"


@dataclass
class ConstantReport:
    """Every factor of the predicted constant, kept apart for audit"""
    fan: str
    weights: str
    variant: str
    alpha_direct: Fraction
    alpha_paper: Fraction
    b: int
    d_inf: Fraction
    primes_cutoff: int
    euler: float
    tail: float
    tail_bound: float
    c_pred: float
    monomials: List[Tuple[Fraction, Fraction]] = field(default_factory=list)

    def to_keyvalue(self) -> str:
        rows = [
            ("alpha_direct", self.alpha_direct),
            ("alpha_paper", self.alpha_paper),
            ("b", self.b),
            ("d_inf", self.d_inf),
            ("euler_P", f"{self.euler:.12g}"),
            ("primes_cutoff", self.primes_cutoff),
            ("tail", f"{self.tail:.12g}"),
            ("tail_bound", f"{self.tail_bound:.3g}"),
            ("c_pred", f"{self.c_pred:.12g}"),
        ]
        return "\n".join(f"{key}={value}" for key, value in rows)

    def csv_row(self) -> str:
        return ",".join(str(x) for x in (
            self.fan, f'"{self.weights}"', self.variant, self.alpha_direct, self.alpha_paper, self.b, self.d_inf,
            self.primes_cutoff, f"{self.euler:.15g}", f"{self.tail:.15g}", f"{self.tail_bound:.3g}",
            f"{self.c_pred:.15g}"))


def euler_monomials(cone_set: InvariantConeSet, weights: OrbifoldWeights,
                    variant: FanFunctionVariant) -> List[Tuple[Fraction, Fraction]]:
    """(c_k, e_k) with Q(p^(-1/m)) = 1 + sum_k c_k p^(-e_k)"""
    q = q_polynomial(cone_set, weights, variant)
    m = dict(zip(cone_set.blocks, cone_set.block_weights(weights)))
    monomials = q.exponent_weights([m[b] for b in q.blocks])
    return sorted((c, e) for c, e in monomials if e != 0)


def _log_euler_chunk(primes: np.ndarray, coefficients: np.ndarray, exponents: np.ndarray,
                     convergence_power: int, block_exponents: np.ndarray) -> float:
    """sum over the primes of log((1 - 1/p)^(b + d) Q(p^(-1/m)) / prod(1 - p^(-f)))"""
    p = primes.astype(np.float64)
    series = (np.power.outer(p, -exponents) * coefficients).sum(axis=1) if len(exponents) else np.zeros_like(p)
    if np.any(series <= -1.0):
        bad = int(primes[np.argmax(series <= -1.0)])
        raise InternalConsistencyError(f"non-positive Euler factor at p = {bad}")
    logs = np.log1p(series) + convergence_power * np.log1p(-1.0 / p)
    for g in block_exponents:
        logs -= np.log1p(-np.power(p, -g))
    return math.fsum(logs.tolist())


def euler_product(cone_set: InvariantConeSet, weights: OrbifoldWeights, variant: FanFunctionVariant,
                  convergence_power: int, primes_cutoff: int, workers: int = 1,
                  chunk_size: int = 4096) -> float:
    """prod_{p <= P} (1 - 1/p)^(b + d) Q(p^(-1/m)) / prod_blocks(1 - p^(-f))"""
    primes = np.array(list(primerange(2, primes_cutoff + 1)), dtype=np.int64)
    monomials = euler_monomials(cone_set, weights, variant)
    coefficients = np.array([float(c) for c, _ in monomials])
    exponents = np.array([float(e) for _, e in monomials])
    block_exponents = np.array([float(b.f) for b in cone_set.blocks
                                if weights.m[b.orbit] != math.inf], dtype=np.float64)

    def chunk(start: int, stop: int) -> float:
        return _log_euler_chunk(primes[start:stop], coefficients, exponents, convergence_power, block_exponents)

    pool = WorkerPool(workers, name="euler")
    logs = pool.map(chunk, chunk_ranges(len(primes), chunk_size))
    total = math.fsum(logs)
    logger.debug("Euler product over %d primes <= %d: log %.15g", len(primes), primes_cutoff, total)
    return math.exp(total)


def euler_tail(monomials: List[Tuple[Fraction, Fraction]], primes_cutoff: int) -> Tuple[float, float]:
    """(tail factor, relative bound) for the primes beyond the cutoff

    sum_{p > P} p^(-e) is estimated by E1((e - 1) log P). The bound is
    2 C P^(1 - kappa) / (kappa - 1) with C = sum |c_k| and kappa = min e_k.
    """
    if not monomials:
        return 1.0, 0.0
    kappa = min(e for _, e in monomials)
    if kappa <= 1:
        raise DivergenceError(f"Euler product diverges: a Q monomial has exponent {kappa} <= 1 at s = 1")
    if primes_cutoff < 2:
        return 1.0, math.inf
    log_cutoff = math.log(primes_cutoff)
    estimate = math.fsum(float(c) * float(exp1((float(e) - 1) * log_cutoff)) for c, e in monomials)
    constant = sum(abs(float(c)) for c, _ in monomials)
    bound = 2 * constant * primes_cutoff ** (1 - float(kappa)) / (float(kappa) - 1)
    return math.exp(estimate), bound


def predicted_constant(fan: Fan, weights: OrbifoldWeights, variant, primes_cutoff: int = 100000,
                       workers: int = 1, chunk_size: int = 4096,
                       cone_set: Optional[InvariantConeSet] = None) -> ConstantReport:
    """Assemble the predicted leading constant with alpha_direct"""
    variant = FanFunctionVariant.of(variant)
    if variant is FanFunctionVariant.PLAIN:
        raise UnsupportedInputError("the predicted constant needs a Campana or Darmon variant")
    weights.check_against(fan)
    if not fan.is_split:
        raise UnsupportedInputError(f"{fan.describe()}: the predicted constant is implemented for split fans")
    data = picard(fan)
    b = data.rank
    if b < 1:
        raise UnsupportedInputError(f"{fan.describe()}: Picard rank 0")
    alpha_direct, alpha_paper = alpha_constants(fan, weights, data)
    d_inf = archimedean_density(fan, weights, 1)
    cone_set = cone_set or InvariantConeSet.from_fan(fan)

    monomials = euler_monomials(cone_set, weights, variant)
    tail, tail_bound = euler_tail(monomials, primes_cutoff)
    euler = euler_product(cone_set, weights, variant, b + fan.dim, primes_cutoff, workers, chunk_size)
    c_pred = float(alpha_direct) / math.factorial(b - 1) * float(d_inf) * euler * tail
    if not c_pred > 0:
        raise InternalConsistencyError(f"predicted constant {c_pred} is not positive")
    logger.info("%s m=(%s) %s: c_pred=%.10g (alpha=%s, d_inf=%s, euler=%.10g, tail=%.10g)", fan.describe(),
                weights.label(), variant.value, c_pred, alpha_direct, d_inf, euler, tail)
    return ConstantReport(fan=fan.describe(), weights=weights.label(), variant=variant.value,
                          alpha_direct=alpha_direct, alpha_paper=alpha_paper, b=b, d_inf=d_inf,
                          primes_cutoff=primes_cutoff, euler=euler, tail=tail, tail_bound=tail_bound,
                          c_pred=c_pred, monomials=monomials)


def squarefull_pair_oracle(primes_cutoff: int = 100000):
    """2 (zeta(3/2)/zeta(3))^2 prod_p (1 + 2y)/(1 + y)^2 with y = p^-1 / (1 - p^(-1/2))

    Leading constant of coprime squarefull pairs counted on P^1 with m = (2, 2).
    """
    product = mpmath.mpf(1)
    for p in primerange(2, primes_cutoff + 1):
        y = (mpmath.mpf(1) / p) / (1 - 1 / mpmath.sqrt(p))
        product *= (1 + 2 * y) / (1 + y) ** 2
    return 2 * (mpmath.zeta(mpmath.mpf(3) / 2) / mpmath.zeta(3)) ** 2 * product


def coprime_pair_oracle():
    """12 / pi^2: rational points of P^1 by anticanonical height"""
    return 12 / mpmath.pi ** 2
