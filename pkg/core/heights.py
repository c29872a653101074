"""
Batyrev-Tschinkel Heights

Finite places contribute p^{phi(deg_p t)} with exact rational exponents. The
archimedean place contributes exp(phi(-(log|t_1|, ..., log|t_d|))); with this sign the
product formula holds for globally linear phi and phi_Sigma is anticanonical.
Because phi is linear on the located cone, the whole height is an algebraic number
H = value^(1/root) with value rational, which gives exact comparisons.

Author: Mohammed Ismail AbdElmageid
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Sequence, Tuple, Union

import mpmath

from core.fan import Fan, PLFunction, evaluate_pl, evaluate_pl_real
from core.points import TorusPoint, degree_vector

logger = logging.getLogger(__name__)

ARCHIMEDEAN_PREC_BITS = 128


@total_ordering
@dataclass(frozen=True, eq=False)
class HeightPower:
    """Exact height H = value ** (1 / root) with value a positive rational"""
    value: Fraction
    root: int = 1

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value <= 0 or self.root < 1:
            raise ValueError(f"invalid exact height {self.value}^(1/{self.root})")

    def _powers(self, other: "HeightPower") -> Tuple[Fraction, Fraction]:
        return self.value ** other.root, other.value ** self.root

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeightPower):
            return NotImplemented
        a, b = self._powers(other)
        return a == b

    def __lt__(self, other) -> bool:
        if not isinstance(other, HeightPower):
            return NotImplemented
        a, b = self._powers(other)
        return a < b

    __hash__ = None

    def __mul__(self, other: "HeightPower") -> "HeightPower":
        root = math.lcm(self.root, other.root)
        return HeightPower(self.value ** (root // self.root) * other.value ** (root // other.root), root)

    def at_most(self, bound) -> bool:
        bound = Fraction(bound)
        return bound > 0 and self.value <= bound ** self.root

    def log(self):
        return (mpmath.log(self.value.numerator) - mpmath.log(self.value.denominator)) / self.root

    @classmethod
    def from_rational_exponents(cls, factors: Sequence[Tuple[Fraction, Fraction]]) -> "HeightPower":
        """prod base^exponent for positive rational bases and rational exponents"""
        root = 1
        for _, exponent in factors:
            root = math.lcm(root, Fraction(exponent).denominator)
        value = Fraction(1)
        for base, exponent in factors:
            power = Fraction(exponent) * root
            value *= Fraction(base) ** int(power)
        return cls(value, root)


@dataclass
class HeightValue:
    """Global height with its finite and archimedean parts kept apart"""
    finite_part: Dict[int, Fraction]
    archimedean_log: object
    total_log: object
    exact: HeightPower = field(default=None)

    @property
    def archimedean_factor(self):
        return mpmath.exp(self.archimedean_log)

    @property
    def value(self):
        return mpmath.exp(self.total_log)


def working_precision():
    """mpmath precision for archimedean reals: at least ARCHIMEDEAN_PREC_BITS"""
    return mpmath.workprec(max(mpmath.mp.prec, ARCHIMEDEAN_PREC_BITS))


def local_height_exponent(fan: Fan, phi: PLFunction, point: TorusPoint, p: int) -> Fraction:
    """Exponent of p in the local height: phi(deg_p t)"""
    return evaluate_pl(fan, phi, degree_vector(point, p))


def archimedean_log_vector(point: TorusPoint):
    """-(log|t_1|, ..., log|t_d|) in mpmath"""
    return [-(mpmath.log(abs(c.numerator)) - mpmath.log(c.denominator)) for c in point.coords]


def archimedean_height(fan: Fan, phi: PLFunction, point: TorusPoint):
    """Archimedean factor exp(phi(-log|t|))"""
    with working_precision():
        value, _, _ = evaluate_pl_real(fan, phi, archimedean_log_vector(point))
        return mpmath.exp(value)


def global_height(fan: Fan, phi: PLFunction, point: TorusPoint) -> HeightValue:
    """Product of the local heights over the support primes and the archimedean place"""
    finite: Dict[int, Fraction] = {}
    for p in point.support_primes():
        exponent = local_height_exponent(fan, phi, point, p)
        if exponent != 0:
            finite[p] = exponent
    with working_precision():
        archimedean, _, form = evaluate_pl_real(fan, phi, archimedean_log_vector(point))
        total = archimedean + mpmath.fsum(e.numerator * mpmath.log(p) / e.denominator for p, e in finite.items())

    factors = [(Fraction(p), e) for p, e in finite.items()]
    factors += [(abs(c), -g) for c, g in zip(point.coords, form) if g != 0]
    exact = HeightPower.from_rational_exponents(factors)
    return HeightValue(finite_part=finite, archimedean_log=archimedean, total_log=total, exact=exact)


def height_at_most(height: Union[HeightValue, HeightPower], bound, tolerance: float = 1e-9) -> bool:
    """height <= bound; decided from logs away from the cutoff and exactly near it"""
    bound = Fraction(bound)
    if bound <= 0:
        return False
    exact = height.exact if isinstance(height, HeightValue) else height
    if isinstance(height, HeightValue):
        with working_precision():
            gap = height.total_log - (mpmath.log(bound.numerator) - mpmath.log(bound.denominator))
        if abs(gap) > tolerance:
            return gap < 0
    return exact.at_most(bound)


def height_lower_bound_constant(fan: Fan, phi: PLFunction) -> Fraction:
    """kappa with phi(x) >= kappa * ||x||_inf on every cone"""
    if not fan.rays:
        return Fraction(0)
    smallest = min(phi.value_on_ray)
    longest = max(max(abs(x) for x in ray) for ray in fan.rays)
    return Fraction(smallest) / longest


def height_norm(point: TorusPoint):
    """sum_p log p * ||deg_p t||_inf + ||log|t| ||_inf"""
    with working_precision():
        total = mpmath.mpf(0)
        for p in point.support_primes():
            total += max(abs(v) for v in degree_vector(point, p)) * mpmath.log(p)
        logs = archimedean_log_vector(point)
        return total + (max(abs(v) for v in logs) if logs else 0)


def projective_height(xs: Sequence[int], weights: Sequence) -> HeightPower:
    """Log-anticanonical height of [x_0 : ... : x_n] on P^n: max|x_i|^(sum 1/m_i)"""
    g = math.gcd(*xs)
    largest = max(abs(x) for x in xs) // g
    exponent = sum((Fraction(0) if m == math.inf else Fraction(1, m) for m in weights), Fraction(0))
    return HeightPower.from_rational_exponents([(Fraction(largest), exponent)])


def _short(x) -> str:
    text = mpmath.nstr(x, 12)
    return text[:-2] if text.endswith(".0") else text


def format_height(height: HeightValue) -> str:
    """'2^1 * 3^1 * 1.5 = 9'"""
    parts = [f"{p}^{e}" for p, e in sorted(height.finite_part.items())] or ["1"]
    parts.append(_short(height.archimedean_factor))
    return " * ".join(parts) + f" = {_short(height.value)}"
