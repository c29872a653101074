"""
Fan Functions R_sigma and Q_Sigma

For each invariant cone sigma, R_sigma is a product over the blocks (i, w) whose rays
lie in sigma. Summing over the cones and clearing the block denominators gives the
polynomial Q_Sigma that drives the local densities.

  plain    u^f / (1 - u^f)              cleared by prod (1 - u^f)
  Campana  u^(m f) / (1 - u^f)          cleared by prod (1 - u^(m f))
  Darmon   u^(m f) / (1 - u^(m f))      cleared by prod (1 - u^(m f))

Author: Mohammed Ismail AbdElmageid
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from core.exceptions import InternalConsistencyError, UnsupportedInputError
from core.fan import Fan, OrbifoldWeights
from core.points import Variant
from series.polynomials import BlockIndex, Exponent, SparseMultiPoly

logger = logging.getLogger(__name__)

WeightsLike = Union[OrbifoldWeights, Sequence]


class FanFunctionVariant(Enum):
    PLAIN = "plain"
    CAMPANA = "campana"
    DARMON = "darmon"

    @classmethod
    def of(cls, variant: Union["FanFunctionVariant", Variant, str]) -> "FanFunctionVariant":
        """Map a point variant (or a CLI spelling) onto its fan-function variant"""
        if isinstance(variant, FanFunctionVariant):
            return variant
        if isinstance(variant, str):
            if variant.strip().lower() == "plain":
                return cls.PLAIN
            variant = Variant.parse(variant)
        if variant.is_campana_family:
            return cls.CAMPANA
        if variant.is_darmon_family:
            return cls.DARMON
        raise UnsupportedInputError(f"variant '{variant.value}' has no fan function")


def _orbit_weights(weights: WeightsLike) -> Tuple:
    return tuple(weights.m) if isinstance(weights, OrbifoldWeights) else tuple(weights)


@dataclass(frozen=True)
class InvariantConeSet:
    """Cones of an invariant fan, each recorded by the blocks it contains"""
    blocks: Tuple[BlockIndex, ...]
    cones: Tuple[FrozenSet[BlockIndex], ...]
    name: str = ""

    def __post_init__(self):
        blocks = tuple(sorted(set(self.blocks)))
        cones = tuple(sorted({frozenset(c) for c in self.cones}, key=lambda c: (len(c), sorted(c))))
        if frozenset() not in cones:
            raise ValueError("the zero cone must belong to an invariant cone set")
        known = set(blocks)
        for cone in cones:
            if not cone <= known:
                raise ValueError(f"cone {sorted(b.label for b in cone)} uses unknown blocks")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "cones", cones)

    @classmethod
    def from_fan(cls, fan: Fan, blocks: Optional[Mapping[BlockIndex, Sequence[int]]] = None) -> "InvariantConeSet":
        """Cones of the fan that are unions of blocks

        blocks maps each BlockIndex to its ray indices. By default every orbit is one
        block whose inertia degree is the orbit size (f = 1 for split fans).
        """
        if blocks is None:
            blocks = {BlockIndex(i, 0, len(fan.rays_of_orbit(i))): fan.rays_of_orbit(i)
                      for i in range(fan.orbit_count)}
        ray_sets = {b: frozenset(rays) for b, rays in blocks.items()}
        for b, rays in ray_sets.items():
            if len(rays) != b.f:
                raise ValueError(f"block {b.label} has {len(rays)} rays but inertia degree {b.f}")
        cones = []
        for cone in fan.cones:
            members = frozenset(cone)
            inside = frozenset(b for b, rays in ray_sets.items() if rays <= members)
            covered = frozenset().union(*(ray_sets[b] for b in inside)) if inside else frozenset()
            if covered == members:
                cones.append(inside)
        return cls(tuple(ray_sets), tuple(cones), name=fan.name)

    @classmethod
    def synthetic(cls, fan: Fan, f_values: Sequence[int]) -> "InvariantConeSet":
        """Split cone structure of the fan with a synthetic inertia degree per orbit"""
        split = cls.from_fan(fan)
        relabel = {b: BlockIndex(b.orbit, b.place, int(f_values[b.orbit])) for b in split.blocks}
        return cls(tuple(relabel.values()), tuple(frozenset(relabel[b] for b in c) for c in split.cones),
                   name=f"{fan.name}[f={','.join(str(f) for f in f_values)}]")

    @classmethod
    def inert_toy(cls, f: int = 2) -> "InvariantConeSet":
        """One orbit forming a single inert block; only the zero cone is invariant"""
        return cls((BlockIndex(0, 0, f),), (frozenset(),), name=f"inert-f{f}")

    def block_weights(self, weights: WeightsLike) -> Tuple:
        m = _orbit_weights(weights)
        try:
            return tuple(m[b.orbit] for b in self.blocks)
        except IndexError:
            raise ValueError(f"{len(m)} weights given, blocks reach orbit {max(b.orbit for b in self.blocks)}")


def _exponents(block: BlockIndex, m, variant: FanFunctionVariant) -> Tuple[int, int]:
    """(numerator exponent, denominator exponent) of one block factor"""
    if variant is FanFunctionVariant.PLAIN:
        return block.f, block.f
    if m == math.inf:
        raise UnsupportedInputError(f"block {block.label} has weight inf and cannot enter a cone term")
    if variant is FanFunctionVariant.CAMPANA:
        return int(m) * block.f, block.f
    return int(m) * block.f, int(m) * block.f


def _clearing_exponent(block: BlockIndex, m, variant: FanFunctionVariant) -> int:
    return block.f if variant is FanFunctionVariant.PLAIN else int(m) * block.f


def _one_minus(blocks: Tuple[BlockIndex, ...], block: BlockIndex, exponent: int) -> SparseMultiPoly:
    one = SparseMultiPoly.constant(blocks, 1)
    return one - SparseMultiPoly.monomial(blocks, {block: exponent})


def r_sigma(cone: Iterable[BlockIndex], weights: WeightsLike, variant,
            blocks: Optional[Sequence[BlockIndex]] = None) -> Tuple[SparseMultiPoly, SparseMultiPoly]:
    """(numerator, denominator) of R_sigma; the zero cone gives (1, 1)"""
    variant = FanFunctionVariant.of(variant)
    cone = sorted(cone)
    blocks = tuple(blocks) if blocks is not None else tuple(cone)
    m = _orbit_weights(weights)
    numerator = SparseMultiPoly.constant(blocks, 1)
    denominator = SparseMultiPoly.constant(blocks, 1)
    for block in cone:
        top, bottom = _exponents(block, m[block.orbit], variant)
        numerator = numerator * SparseMultiPoly.monomial(blocks, {block: top})
        denominator = denominator * _one_minus(blocks, block, bottom)
    return numerator, denominator


def _finite_part(cone_set: InvariantConeSet, weights: WeightsLike,
                 variant: FanFunctionVariant) -> Tuple[Tuple[BlockIndex, ...], List[FrozenSet[BlockIndex]]]:
    """Blocks and cones left after removing weight-inf blocks (plain keeps everything)"""
    if variant is FanFunctionVariant.PLAIN:
        return cone_set.blocks, list(cone_set.cones)
    m = _orbit_weights(weights)
    finite = tuple(b for b in cone_set.blocks if m[b.orbit] != math.inf)
    excluded = set(cone_set.blocks) - set(finite)
    return finite, [c for c in cone_set.cones if not (c & excluded)]


def clearing_denominator(cone_set: InvariantConeSet, weights: WeightsLike, variant) -> SparseMultiPoly:
    """prod (1 - u^f) for plain, prod (1 - u^(m f)) otherwise"""
    variant = FanFunctionVariant.of(variant)
    blocks, _ = _finite_part(cone_set, weights, variant)
    m = _orbit_weights(weights)
    total = SparseMultiPoly.constant(blocks, 1)
    for block in blocks:
        total = total * _one_minus(blocks, block, _clearing_exponent(block, m[block.orbit], variant))
    return total


def q_polynomial(cone_set: InvariantConeSet, weights: WeightsLike, variant) -> SparseMultiPoly:
    """Q = (sum_sigma R_sigma) * clearing denominator, by exact division per cone"""
    variant = FanFunctionVariant.of(variant)
    blocks, cones = _finite_part(cone_set, weights, variant)
    clearing = clearing_denominator(cone_set, weights, variant)
    total = SparseMultiPoly(blocks)
    for cone in cones:
        numerator, denominator = r_sigma(cone, weights, variant, blocks=blocks)
        quotient, remainder = clearing.divmod(denominator)
        if not remainder.is_zero:
            raise InternalConsistencyError(
                f"clearing denominator not divisible by the denominator of cone "
                f"{sorted(b.label for b in cone)}: remainder {remainder.format()}")
        total = total + numerator * quotient
    if total.constant_term() != 1:
        raise InternalConsistencyError(f"Q has constant term {total.constant_term()}, expected 1")
    logger.debug("Q[%s, %s, m=%s] has %d terms", cone_set.name, variant.value,
                 _orbit_weights(weights), len(total.terms()))
    return total


def evaluate_cone_sum(cone_set: InvariantConeSet, weights: WeightsLike, variant, values: Mapping[BlockIndex, object]):
    """sum_sigma R_sigma at u_b = values[b], without clearing denominators"""
    variant = FanFunctionVariant.of(variant)
    _, cones = _finite_part(cone_set, weights, variant)
    m = _orbit_weights(weights)
    total = 0
    for cone in cones:
        term = 1
        for block in cone:
            top, bottom = _exponents(block, m[block.orbit], variant)
            x = values[block]
            term = term * x ** top / (1 - x ** bottom)
        total = total + term
    return total


@dataclass
class DegreeBoundReport:
    """Outcome of verify_degree_bounds; truthy when every applicable bound holds"""
    variant: FanFunctionVariant
    literal_ok: bool = True
    single_block_ok: bool = True
    darmon_ok: bool = True
    per_monomial_ok: bool = True
    witness: Optional[str] = None
    separations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.literal_ok and self.single_block_ok and self.darmon_ok and self.per_monomial_ok

    def __bool__(self) -> bool:
        return self.ok

    def _fail(self, flag: str, witness: str):
        setattr(self, flag, False)
        if self.witness is None:
            self.witness = witness

    def summary(self) -> str:
        checks = (f"literal={self.literal_ok} single_block={self.single_block_ok} "
                  f"darmon={self.darmon_ok} per_monomial={self.per_monomial_ok}")
        extra = f" witness={self.witness}" if self.witness else ""
        if self.separations:
            extra += f" separations={','.join(self.separations)}"
        return checks + extra


def _monomial_label(blocks: Sequence[BlockIndex], exponent: Exponent) -> str:
    return " * ".join(f"{blocks[k].label}^{a}" for k, a in enumerate(exponent) if a) or "1"


def verify_degree_bounds(q: SparseMultiPoly, weights: WeightsLike, variant) -> DegreeBoundReport:
    """Degree bounds on Q - 1

    Campana: every block (with m f >= 2) reaching Q - 1 has degree >= m + 1, and
    monomials on a single f = 1 block have degree >= m + 1. Darmon: Q - 1 is a
    polynomial in v = u^m with every monomial of v-degree >= 2. All variants: every
    monomial has sum a/m >= min (m + 1)/m. Blocks with m = f = 1 that miss the literal
    bound while the per-monomial bound holds are recorded as separations.
    """
    variant = FanFunctionVariant.of(variant)
    report = DegreeBoundReport(variant)
    blocks = q.blocks
    m_orbit = _orbit_weights(weights)
    m = [1 if variant is FanFunctionVariant.PLAIN else int(m_orbit[b.orbit]) for b in blocks]
    p_terms = {e: c for e, c in (q - SparseMultiPoly.constant(blocks, 1)).terms().items()}
    if not p_terms:
        return report

    threshold = min(Fraction(mk + 1, mk) for mk in m) if m else Fraction(0)
    for exponent in sorted(p_terms):
        weight = sum((Fraction(a, mk) for a, mk in zip(exponent, m)), Fraction(0))
        if weight < threshold:
            report._fail("per_monomial_ok", _monomial_label(blocks, exponent))

    if variant is FanFunctionVariant.CAMPANA:
        for k, block in enumerate(blocks):
            degrees = [e[k] for e in p_terms if e[k]]
            if not degrees or max(degrees) >= m[k] + 1:
                continue
            if m[k] * block.f >= 2:
                report._fail("literal_ok", f"deg {block.label} = {max(degrees)} < {m[k] + 1}")
            else:
                report.separations.append(block.label)
        for exponent in sorted(p_terms):
            support = [k for k, a in enumerate(exponent) if a]
            if len(support) == 1 and blocks[support[0]].f == 1 and exponent[support[0]] < m[support[0]] + 1:
                report._fail("single_block_ok", _monomial_label(blocks, exponent))

    if variant is FanFunctionVariant.DARMON:
        for exponent in sorted(p_terms):
            if any(a % mk for a, mk in zip(exponent, m)):
                report._fail("darmon_ok", f"{_monomial_label(blocks, exponent)} is not a polynomial in u^m")
            elif sum(a // mk for a, mk in zip(exponent, m)) < 2:
                report._fail("darmon_ok", f"{_monomial_label(blocks, exponent)} has v-degree < 2")

    if report.separations and report.per_monomial_ok:
        logger.warning("degree bounds: literal statement fails on %s while the per-monomial form holds",
                       ", ".join(report.separations))
    return report
