"""
Torus Points and Semi-Integral Classification

Degree vectors, local intersection multiplicities via cone location, and the
Campana / Darmon / weak / strong / geometric point conditions.

Author: Mohammed Ismail AbdElmageid
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import multiplicity, primefactors

from core.exceptions import InternalConsistencyError
from core.fan import Fan, Location, OrbifoldWeights, locate
from core.workers import WorkerPool, chunk_ranges

logger = logging.getLogger(__name__)


class Variant(Enum):
    """Semi-integral point types; values are the CLI spellings"""
    CAMPANA = "campana"
    DARMON = "darmon"
    WEAK_CAMPANA = "weak"
    STRONG_CAMPANA = "strong-campana"
    STRONG_DARMON = "strong-darmon"
    GEOM_CAMPANA = "geom-campana"
    GEOM_DARMON = "geom-darmon"

    @property
    def is_darmon_family(self) -> bool:
        return self in (Variant.DARMON, Variant.STRONG_DARMON, Variant.GEOM_DARMON)

    @property
    def is_campana_family(self) -> bool:
        return self in (Variant.CAMPANA, Variant.STRONG_CAMPANA, Variant.GEOM_CAMPANA)

    @classmethod
    def parse(cls, text: str) -> "Variant":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"Unknown variant '{text}'. Choose from: {', '.join(v.value for v in cls)}")


@dataclass(frozen=True)
class TorusPoint:
    """Point of T(Q) = (Q*)^d, coordinates in lowest terms"""
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if any(c == 0 for c in coords):
            raise ValueError(f"torus point coordinates must be nonzero, got {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_projective(cls, xs: Sequence[int]) -> "TorusPoint":
        """[x_0 : ... : x_n] -> (x_1/x_0, ..., x_n/x_0)"""
        if any(x == 0 for x in xs):
            raise ValueError(f"projective point {tuple(xs)} lies on a coordinate hyperplane")
        return cls(tuple(Fraction(x, xs[0]) for x in xs[1:]))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __mul__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(tuple(a * b for a, b in zip(self.coords, other.coords)))

    def support_primes(self) -> List[int]:
        """Primes dividing some numerator or denominator"""
        primes = set()
        for c in self.coords:
            primes.update(primefactors(abs(c.numerator)))
            primes.update(primefactors(c.denominator))
        return sorted(primes)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords)


def parse_point(text: str) -> TorusPoint:
    """Parse '4/9,6' into a TorusPoint"""
    try:
        return TorusPoint(tuple(Fraction(token.strip()) for token in text.split(",") if token.strip()))
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid point '{text}': {e}")


def valuation(p: int, q: Fraction) -> int:
    """p-adic valuation of a nonzero rational"""
    return multiplicity(p, abs(q.numerator)) - multiplicity(p, q.denominator)


def degree_vector(point: TorusPoint, p: int) -> Tuple[int, ...]:
    """(v_p(t_1), ..., v_p(t_d))"""
    return tuple(valuation(p, c) for c in point.coords)


@dataclass
class MultiplicityProfile:
    """Located cone and integer coefficients per prime in the support"""
    local: Dict[int, Location] = field(default_factory=dict)

    @property
    def support(self) -> List[int]:
        return sorted(p for p, location in self.local.items() if location.cone)

    def ray_multiplicities(self, p: int, ray_count: int) -> Tuple[int, ...]:
        """lambda_j for every ray (zero off the located cone)"""
        values = [0] * ray_count
        location = self.local.get(p)
        if location is not None:
            for j, c in zip(location.cone, location.coefficients):
                if c.denominator != 1:
                    raise InternalConsistencyError(
                        f"non-integral multiplicities {location.coefficients} at p={p}: fan is not regular")
                values[j] = int(c)
        return tuple(values)

    def orbit_multiplicities(self, p: int, fan: Fan) -> Tuple[int, ...]:
        """n_p(D_i, P): sum of lambda_j over the rays of orbit i"""
        rays = self.ray_multiplicities(p, fan.ray_count)
        totals = [0] * fan.orbit_count
        for j, value in enumerate(rays):
            totals[fan.orbit_of_ray[j]] += value
        return tuple(totals)


def locate_integral(fan: Fan, point: TorusPoint, p: int) -> Location:
    """locate() of the degree vector at p, with integral coefficients"""
    location = locate(fan, degree_vector(point, p))
    if any(c.denominator != 1 for c in location.coefficients):
        raise InternalConsistencyError(
            f"non-integral multiplicities {location.coefficients} at p={p} for {point}: fan is not regular")
    return Location(location.cone, tuple(Fraction(int(c)) for c in location.coefficients))


def multiplicity_profile(fan: Fan, point: TorusPoint) -> MultiplicityProfile:
    """Locate the degree vector at every support prime"""
    return MultiplicityProfile({p: locate_integral(fan, point, p) for p in point.support_primes()})


def crosscheck_projective(xs: Sequence[int], p: int) -> Tuple[int, ...]:
    """Multiplicity of [x_0 : ... : x_n] against each coordinate hyperplane at p"""
    if any(x == 0 for x in xs):
        raise ValueError(f"projective point {tuple(xs)} lies on a coordinate hyperplane")
    g = math.gcd(*xs)
    return tuple(multiplicity(p, abs(x) // g) for x in xs)


@dataclass(frozen=True)
class LocalVerdict:
    """Outcome of classify_local; truthy when the condition holds"""
    ok: bool
    reason: str = "ok"
    orbit: Optional[int] = None
    ray: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class GlobalVerdict:
    """Outcome of classify_global; witness_prime is the first failing prime"""
    ok: bool
    witness_prime: Optional[int] = None
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def _check_ray_values(values: Sequence[int], weights: Sequence, divisibility: bool) -> Optional[int]:
    """Index of the first value failing 0-or->=m (or m-divisibility)"""
    for index, (value, m) in enumerate(zip(values, weights)):
        if m == 1 or value == 0:
            continue
        if divisibility and value % m != 0:
            return index
        if not divisibility and value < m:
            return index
    return None


def classify_local(fan: Fan, weights: OrbifoldWeights, point: TorusPoint, p: int, variant: Variant,
                   inertia: Optional[Mapping[int, int]] = None,
                   profile: Optional[MultiplicityProfile] = None) -> LocalVerdict:
    """Local semi-integrality condition at the prime p

    inertia maps ray index -> f (default 1) and is read by the strong variants only.
    """
    weights.check_against(fan)
    if profile is None or p not in profile.local:
        profile = MultiplicityProfile({p: locate_integral(fan, point, p)})
    rays = profile.ray_multiplicities(p, fan.ray_count)
    ray_weights = [weights.of_ray(fan, j) for j in range(fan.ray_count)]

    for j, value in enumerate(rays):
        if value > 0 and ray_weights[j] == math.inf:
            return LocalVerdict(False, "infinite-weight violation", orbit=fan.orbit_of_ray[j], ray=j)

    if variant in (Variant.CAMPANA, Variant.DARMON, Variant.WEAK_CAMPANA):
        orbits = profile.orbit_multiplicities(p, fan)
        if variant is Variant.WEAK_CAMPANA:
            total = sum((Fraction(n, m) for n, m in zip(orbits, weights.m) if m not in (1, math.inf)),
                        Fraction(0))
            if 0 < total < 1:
                return LocalVerdict(False, "weak sum in (0,1)")
            return LocalVerdict(True)
        failing = _check_ray_values(orbits, weights.m, divisibility=variant is Variant.DARMON)
        if failing is not None:
            reason = "not divisible" if variant is Variant.DARMON else "below weight"
            return LocalVerdict(False, reason, orbit=failing)
        return LocalVerdict(True)

    if variant in (Variant.STRONG_CAMPANA, Variant.STRONG_DARMON):
        inertia = inertia or {}
        values = [value * inertia.get(j, 1) for j, value in enumerate(rays)]
    else:
        values = list(rays)
    failing = _check_ray_values(values, ray_weights, divisibility=variant.is_darmon_family)
    if failing is not None:
        reason = "not divisible" if variant.is_darmon_family else "below weight"
        return LocalVerdict(False, reason, orbit=fan.orbit_of_ray[failing], ray=failing)
    return LocalVerdict(True)


def classify_global(fan: Fan, weights: OrbifoldWeights, point: TorusPoint, excluded: Iterable[int],
                    variant: Variant, inertia: Optional[Mapping[int, int]] = None,
                    profile: Optional[MultiplicityProfile] = None) -> GlobalVerdict:
    """Conjunction of classify_local over the support primes outside the excluded set"""
    excluded = set(excluded)
    profile = profile or multiplicity_profile(fan, point)
    for p in profile.support:
        if p in excluded:
            continue
        verdict = classify_local(fan, weights, point, p, variant, inertia=inertia, profile=profile)
        if not verdict:
            return GlobalVerdict(False, witness_prime=p, reason=verdict.reason)
    return GlobalVerdict(True)


def classify_batch(fan: Fan, weights: OrbifoldWeights, points: Sequence[TorusPoint], variants: Sequence[Variant],
                   excluded: Iterable[int] = (), workers: int = 1, chunk_size: int = 256) -> List[List[GlobalVerdict]]:
    """Classify many points against several variants; rows follow the input order"""
    excluded = frozenset(excluded)

    def classify_chunk(start: int, stop: int) -> List[List[GlobalVerdict]]:
        rows = []
        for point in points[start:stop]:
            profile = multiplicity_profile(fan, point)
            rows.append([classify_global(fan, weights, point, excluded, v, profile=profile) for v in variants])
        return rows

    pool = WorkerPool(workers, name="classify")
    chunks = pool.map(classify_chunk, chunk_ranges(len(points), chunk_size))
    return [row for chunk in chunks for row in chunk]
