"""
Fans, Orbifold Weights and Piecewise-Linear Functions

Author: Mohammed Ismail AbdElmageid
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from core.cones import dot, extreme_rays, in_cone, simplicial_inequalities, span_complement
from core.exceptions import FanValidationError, UnsupportedInputError
from core.integer_matrix import elementary_divisors, inverse_rational, rank

logger = logging.getLogger(__name__)

Weight = Union[int, float]  # positive int or math.inf


@dataclass(frozen=True)
class Fan:
    """Simplicial fan in N = Z^dim

    cones lists every cone as a sorted tuple of ray indices, the zero cone () included.
    orbit_of_ray maps each ray to a 0-based orbit index (singletons when split).
    regular marks fans whose cones must be unimodular.
    """
    dim: int
    rays: Tuple[Tuple[int, ...], ...]
    cones: Tuple[Tuple[int, ...], ...]
    orbit_of_ray: Tuple[int, ...] = ()
    regular: bool = True
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        cones = sorted({tuple(sorted(int(j) for j in c)) for c in self.cones}, key=lambda c: (len(c), c))
        object.__setattr__(self, "cones", tuple(cones))
        if not self.orbit_of_ray:
            object.__setattr__(self, "orbit_of_ray", tuple(range(len(self.rays))))
        else:
            object.__setattr__(self, "orbit_of_ray", tuple(int(i) for i in self.orbit_of_ray))

    @classmethod
    def from_maximal_cones(cls, dim: int, rays: Sequence[Sequence[int]], maximal_cones: Sequence[Sequence[int]],
                           orbit_of_ray: Sequence[int] = (), regular: bool = True, name: str = "") -> "Fan":
        """Build a simplicial fan from its maximal cones, generating every face"""
        cones = {()}
        for cone in maximal_cones:
            cone = tuple(sorted(cone))
            for k in range(len(cone) + 1):
                cones.update(combinations(cone, k))
        return cls(dim=dim, rays=tuple(tuple(r) for r in rays), cones=tuple(cones),
                   orbit_of_ray=tuple(orbit_of_ray), regular=regular, name=name)

    @property
    def ray_count(self) -> int:
        return len(self.rays)

    @property
    def orbit_count(self) -> int:
        return max(self.orbit_of_ray) + 1 if self.orbit_of_ray else 0

    @property
    def is_split(self) -> bool:
        return len(set(self.orbit_of_ray)) == len(self.orbit_of_ray)

    def rays_of_orbit(self, orbit: int) -> Tuple[int, ...]:
        return tuple(j for j, i in enumerate(self.orbit_of_ray) if i == orbit)

    @cached_property
    def maximal_cones(self) -> Tuple[Tuple[int, ...], ...]:
        cone_sets = [set(c) for c in self.cones]
        return tuple(c for c, s in zip(self.cones, cone_sets)
                     if not any(s < other for other in cone_sets))

    @cached_property
    def _cone_inverses(self) -> Dict[Tuple[int, ...], List[List[Fraction]]]:
        """Exact inverses of the ray matrices (rays as columns) of full-dimensional maximal cones"""
        inverses = {}
        for cone in self.maximal_cones:
            if len(cone) != self.dim:
                continue
            columns = [[self.rays[j][row] for j in cone] for row in range(self.dim)]
            inverse = inverse_rational(columns)
            if inverse is not None:
                inverses[cone] = inverse
        return inverses

    def cone_coordinates(self, cone: Tuple[int, ...], vector: Sequence) -> List:
        """Coefficients of vector on the rays of a full-dimensional cone (any numeric type)"""
        inverse = self._cone_inverses[cone]
        return [sum(inverse[i][k] * vector[k] for k in range(self.dim)) for i in range(self.dim)]

    def describe(self) -> str:
        return self.name or f"fan(d={self.dim}, n={self.ray_count})"


@dataclass(frozen=True)
class OrbifoldWeights:
    """Weights m_i in {1, 2, ...} or math.inf, one per orbit"""
    m: Tuple[Weight, ...]

    def __post_init__(self):
        values = []
        for value in self.m:
            if isinstance(value, float) and math.isinf(value) and value > 0:
                values.append(math.inf)
            elif isinstance(value, (int, np.integer)) or (isinstance(value, float) and value.is_integer()):
                if int(value) < 1:
                    raise ValueError(f"weights must be >= 1 or inf, got {value}")
                values.append(int(value))
            else:
                raise ValueError(f"weights must be positive integers or inf, got {value!r}")
        object.__setattr__(self, "m", tuple(values))

    @classmethod
    def parse(cls, text: str) -> "OrbifoldWeights":
        """Parse '2,2,inf' (commas or whitespace)"""
        tokens = [t for t in text.replace(",", " ").split() if t]
        values = []
        for token in tokens:
            if token.lower() in ("inf", "infinity", "∞"):
                values.append(math.inf)
            else:
                try:
                    values.append(int(token))
                except ValueError:
                    raise ValueError(f"Invalid weight '{token}': expected a positive integer or 'inf'")
        return cls(tuple(values))

    @classmethod
    def uniform(cls, fan: Fan, value: Weight = 1) -> "OrbifoldWeights":
        return cls(tuple([value] * fan.orbit_count))

    def check_against(self, fan: Fan):
        if len(self.m) != fan.orbit_count:
            raise UnsupportedInputError(
                f"{len(self.m)} weights given for {fan.orbit_count} orbits of {fan.describe()}")

    def of_ray(self, fan: Fan, ray: int) -> Weight:
        return self.m[fan.orbit_of_ray[ray]]

    def inverse(self, orbit: int) -> Fraction:
        value = self.m[orbit]
        return Fraction(0) if value == math.inf else Fraction(1, value)

    def is_finite(self, orbit: int) -> bool:
        return self.m[orbit] != math.inf

    @property
    def all_finite(self) -> bool:
        return all(v != math.inf for v in self.m)

    @property
    def any_finite(self) -> bool:
        return any(v != math.inf for v in self.m)

    def label(self) -> str:
        return ",".join("inf" if v == math.inf else str(v) for v in self.m)


@dataclass(frozen=True)
class PLFunction:
    """Sigma-piecewise-linear function given by its values on the rays"""
    value_on_ray: Tuple[Fraction, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "value_on_ray", tuple(Fraction(v) for v in self.value_on_ray))

    @classmethod
    def anticanonical(cls, fan: Fan) -> "PLFunction":
        return cls(tuple([1] * fan.ray_count), name="phi_Sigma")

    @classmethod
    def log_anticanonical(cls, fan: Fan, weights: OrbifoldWeights) -> "PLFunction":
        weights.check_against(fan)
        return cls(tuple(weights.inverse(fan.orbit_of_ray[j]) for j in range(fan.ray_count)),
                   name=f"phi_Sigma,m=({weights.label()})")

    @classmethod
    def from_linear(cls, fan: Fan, u: Sequence) -> "PLFunction":
        """Globally linear function x -> <u, x>"""
        return cls(tuple(Fraction(dot(u, r)) for r in fan.rays), name=f"linear{tuple(u)}")

    @classmethod
    def indicator(cls, fan: Fan, ray: int) -> "PLFunction":
        return cls(tuple(int(j == ray) for j in range(fan.ray_count)), name=f"D_{ray}")

    @classmethod
    def zero(cls, fan: Fan) -> "PLFunction":
        return cls(tuple([0] * fan.ray_count), name="zero")

    def __add__(self, other: "PLFunction") -> "PLFunction":
        if len(other.value_on_ray) != len(self.value_on_ray):
            raise ValueError("PL functions live on different fans")
        return PLFunction(tuple(a + b for a, b in zip(self.value_on_ray, other.value_on_ray)))

    def __mul__(self, scalar) -> "PLFunction":
        scalar = Fraction(scalar)
        return PLFunction(tuple(scalar * v for v in self.value_on_ray))

    __rmul__ = __mul__

    def is_invariant(self, fan: Fan) -> bool:
        """Constant on every orbit"""
        values: Dict[int, Fraction] = {}
        for j, orbit in enumerate(fan.orbit_of_ray):
            if values.setdefault(orbit, self.value_on_ray[j]) != self.value_on_ray[j]:
                return False
        return True


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationIssue:
    """One violated fan axiom"""
    kind: str
    message: str
    rays: Tuple[int, ...] = ()
    cones: Tuple[Tuple[int, ...], ...] = ()


@dataclass
class ValidationReport:
    """Result of validate_fan"""
    issues: List[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.ok

    def add(self, kind: str, message: str, rays=(), cones=()):
        self.issues.append(ValidationIssue(kind, message, tuple(rays), tuple(tuple(c) for c in cones)))

    def kinds(self) -> List[str]:
        return [issue.kind for issue in self.issues]

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{i.kind}: {i.message}" for i in self.issues)


def validate_fan(fan: Fan) -> ValidationReport:
    """Check the fan axioms, reporting every violation with the offending indices"""
    report = ValidationReport()
    if fan.dim < 0:
        report.add("dimension", f"negative lattice rank {fan.dim}")
        return report

    seen: Dict[Tuple[int, ...], int] = {}
    for j, ray in enumerate(fan.rays):
        if len(ray) != fan.dim:
            report.add("ray-length", f"ray {j} has {len(ray)} entries, expected {fan.dim}", rays=[j])
            continue
        if all(x == 0 for x in ray):
            report.add("zero-ray", f"ray {j} is zero", rays=[j])
            continue
        if math.gcd(*ray) != 1:
            report.add("non-primitive", f"ray {j} = {ray} is not primitive (gcd {math.gcd(*ray)})", rays=[j])
        if ray in seen:
            report.add("duplicate-ray", f"rays {seen[ray]} and {j} coincide", rays=[seen[ray], j])
        else:
            seen[ray] = j
    if len(fan.orbit_of_ray) != fan.ray_count:
        report.add("orbits", f"{len(fan.orbit_of_ray)} orbit labels for {fan.ray_count} rays")
    elif fan.orbit_of_ray and sorted(set(fan.orbit_of_ray)) != list(range(fan.orbit_count)):
        report.add("orbits", "orbit labels must be 0..r-1 without gaps")
    if not report.ok:
        return report

    cone_set = set(fan.cones)
    if () not in cone_set:
        report.add("zero-cone", "the zero cone is not listed")
    independent = set()
    for cone in fan.cones:
        if any(j < 0 or j >= fan.ray_count for j in cone):
            report.add("index", f"cone {cone} references a missing ray", cones=[cone])
            continue
        if len(set(cone)) != len(cone):
            report.add("index", f"cone {cone} repeats a ray", cones=[cone])
            continue
        generators = [fan.rays[j] for j in cone]
        if cone and rank(generators) != len(cone):
            report.add("non-simplicial", f"generators of cone {cone} are linearly dependent", cones=[cone])
            continue
        independent.add(cone)
        if fan.regular and cone:
            divisors = elementary_divisors([[fan.rays[j][row] for j in cone] for row in range(fan.dim)])
            if any(x != 1 for x in divisors):
                report.add("non-regular",
                           f"cone {cone} is not unimodular (elementary divisors {divisors}, "
                           f"index {math.prod(divisors)})", cones=[cone])
        for k in range(len(cone)):
            for face in combinations(cone, k):
                if face not in cone_set:
                    report.add("face-missing", f"face {face} of cone {cone} is not listed", cones=[cone, face])

    maximal = [c for c in fan.maximal_cones if c in independent]
    for first, second in combinations(maximal, 2):
        if not _meets_in_common_face(fan, first, second):
            report.add("overlap",
                       f"cones {first} and {second} intersect outside their common face "
                       f"{tuple(sorted(set(first) & set(second)))}", cones=[first, second])
    if report.ok:
        logger.debug("%s: fan is valid", fan.describe())
    return report


def _meets_in_common_face(fan: Fan, first: Tuple[int, ...], second: Tuple[int, ...]) -> bool:
    """True iff cone(first) meets cone(second) exactly in cone(common rays)"""
    inequalities, equalities = [], []
    for cone in (first, second):
        generators = [fan.rays[j] for j in cone]
        inequalities += simplicial_inequalities(generators)
        equalities += span_complement(generators, fan.dim)
    common = [fan.rays[j] for j in sorted(set(first) & set(second))]
    for ray in extreme_rays(inequalities, equalities, fan.dim):
        if in_cone(ray, common) is None:
            return False
    return True


def require_valid(fan: Fan) -> Fan:
    """Raise FanValidationError unless the fan is valid"""
    report = validate_fan(fan)
    if not report.ok:
        raise FanValidationError(f"invalid fan {fan.describe()}: {report.summary()}", report)
    return fan


# ---------------------------------------------------------------------------
# Regularity and completeness
# ---------------------------------------------------------------------------

def is_regular(fan: Fan) -> bool:
    """Every maximal cone has elementary divisors all 1"""
    for cone in fan.maximal_cones:
        if not cone:
            continue
        divisors = elementary_divisors([[fan.rays[j][row] for j in cone] for row in range(fan.dim)])
        if len(divisors) < len(cone) or any(x != 1 for x in divisors):
            return False
    return True


@dataclass(frozen=True)
class CompletenessCertificate:
    """Outcome of is_complete; witness is an uncovered direction or an unpaired facet"""
    complete: bool
    reason: str
    witness: Optional[Tuple] = None
    probes_checked: int = 0

    def __bool__(self) -> bool:
        return self.complete


def probe_vectors(dim: int, count: int, seed: int) -> List[Tuple[int, ...]]:
    """Deterministic generic integer directions"""
    rng = np.random.default_rng(seed)
    probes = []
    while len(probes) < count:
        vector = tuple(int(x) for x in rng.integers(-997, 998, size=dim))
        if any(vector):
            probes.append(vector)
    return probes


def _containing_cones(fan: Fan, vector: Sequence) -> Tuple[int, bool]:
    """(number of maximal cones containing vector, whether it touched a cone boundary)"""
    hits, boundary = 0, False
    for cone in fan._cone_inverses:
        coefficients = fan.cone_coordinates(cone, vector)
        if all(c >= 0 for c in coefficients):
            hits += 1
            if any(c == 0 for c in coefficients):
                boundary = True
    return hits, boundary


def is_complete(fan: Fan, probes: int = 100, seed: int = 20240611) -> CompletenessCertificate:
    """Facet pairing plus exact probe shooting"""
    if fan.dim == 0:
        return CompletenessCertificate(True, "zero lattice")
    short = [c for c in fan.maximal_cones if len(c) != fan.dim]
    if short:
        return CompletenessCertificate(False, "maximal cone of lower dimension", witness=short[0])

    facet_count: Dict[Tuple[int, ...], int] = {}
    for cone in fan.maximal_cones:
        for facet in combinations(cone, fan.dim - 1):
            facet_count[facet] = facet_count.get(facet, 0) + 1

    if any(count != 2 for count in facet_count.values()):
        direction = _uncovered_ray_sum(fan)
        if direction is not None:
            return CompletenessCertificate(False, "uncovered direction", witness=direction)
        facet = next(f for f, count in sorted(facet_count.items()) if count != 2)
        return CompletenessCertificate(False, f"facet shared by {facet_count[facet]} maximal cones",
                                       witness=facet)

    checked = 0
    candidates = probe_vectors(fan.dim, 4 * probes, seed)
    for vector in candidates:
        hits, boundary = _containing_cones(fan, vector)
        if boundary:
            continue
        if hits != 1:
            reason = "uncovered direction" if hits == 0 else f"direction in {hits} maximal cones"
            return CompletenessCertificate(False, reason, witness=vector, probes_checked=checked)
        checked += 1
        if checked == probes:
            break
    return CompletenessCertificate(True, "facets paired, probes covered once", probes_checked=checked)


def _uncovered_ray_sum(fan: Fan) -> Optional[Tuple[int, ...]]:
    """First sum of at most dim rays lying in no maximal cone"""
    for size in range(1, fan.dim + 1):
        for subset in combinations(range(fan.ray_count), size):
            vector = tuple(sum(fan.rays[j][k] for j in subset) for k in range(fan.dim))
            if any(vector) and _containing_cones(fan, vector)[0] == 0:
                return vector
    return None


# ---------------------------------------------------------------------------
# Location and evaluation
# ---------------------------------------------------------------------------

class Location(NamedTuple):
    """Minimal cone containing a vector and the positive coefficients on its rays"""
    cone: Tuple[int, ...]
    coefficients: Tuple[Fraction, ...]


def locate(fan: Fan, vector: Sequence) -> Location:
    """Unique minimal cone containing an integer or rational vector"""
    vector = [Fraction(x) for x in vector]
    if all(x == 0 for x in vector):
        return Location((), ())
    for cone in fan._cone_inverses:
        coefficients = fan.cone_coordinates(cone, vector)
        if all(c >= 0 for c in coefficients):
            support = [(j, c) for j, c in zip(cone, coefficients) if c != 0]
            return Location(tuple(j for j, _ in support), tuple(c for _, c in support))
    raise FanValidationError(f"vector {tuple(vector)} is not covered by {fan.describe()}")


def evaluate_pl(fan: Fan, phi: PLFunction, vector: Sequence) -> Fraction:
    """Value of phi at an integer or rational vector"""
    location = locate(fan, vector)
    return sum((c * phi.value_on_ray[j] for j, c in zip(location.cone, location.coefficients)), Fraction(0))


def linear_form(fan: Fan, phi: PLFunction, cone: Tuple[int, ...]) -> Tuple[Fraction, ...]:
    """The vector g with phi(x) = <g, x> on a full-dimensional cone"""
    inverse = fan._cone_inverses[cone]
    values = [phi.value_on_ray[j] for j in cone]
    return tuple(sum(inverse[i][k] * values[i] for i in range(fan.dim)) for k in range(fan.dim))


def evaluate_pl_real(fan: Fan, phi: PLFunction, vector: Sequence):
    """Value of phi at a real vector, computed in mpmath

    Returns (value, cone, linear form) where the cone is the maximal cone whose
    smallest coefficient is largest, so round-off at cone boundaries never matters.
    The linear form is exact.
    """
    if fan.dim == 0:
        return mpmath.mpf(0), (), ()
    x = [mpmath.mpf(v) for v in vector]
    best_cone, best_margin = None, None
    for cone, inverse in fan._cone_inverses.items():
        margin = min(sum(_real(inverse[i][k]) * x[k] for k in range(fan.dim)) for i in range(fan.dim))
        if best_margin is None or margin > best_margin:
            best_cone, best_margin = cone, margin
    if best_cone is None:
        raise FanValidationError(f"{fan.describe()} has no full-dimensional cones")
    form = linear_form(fan, phi, best_cone)
    value = mpmath.fsum(_real(g) * v for g, v in zip(form, x))
    return value, best_cone, form


def _real(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator
