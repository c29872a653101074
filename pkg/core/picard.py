"""
Picard Group and Effective Cone

Pic(X) for a smooth complete toric variety is the cokernel of the map
M = Z^d -> Z^n, u -> (<u, e_j>)_j. The effective cone is spanned by the boundary
classes; its dual is triangulated to evaluate the effective-cone constant.

Author: Mohammed Ismail AbdElmageid
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from core.cones import dot, extreme_rays, pulling_triangulation
from core.exceptions import DivergenceError, UnsupportedInputError
from core.fan import Fan, OrbifoldWeights
from core.integer_matrix import as_object_matrix, cokernel, determinant, hermite_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PicardData:
    """Picard lattice data of a smooth complete split toric variety"""
    rank: int
    class_of_ray: Tuple[Tuple[int, ...], ...]

    @property
    def effective_cone_generators(self) -> Tuple[Tuple[int, ...], ...]:
        """Distinct boundary classes; they span Eff^1(X)"""
        return tuple(sorted(set(self.class_of_ray)))

    @cached_property
    def dual_effective_generators(self) -> Tuple[Tuple[int, ...], ...]:
        """Primitive generators of the dual cone Eff^1(X)^*"""
        return tuple(extreme_rays(self.class_of_ray, [], self.rank))

    @property
    def anticanonical_class(self) -> Tuple[int, ...]:
        return tuple(sum(c[k] for c in self.class_of_ray) for k in range(self.rank))

    def divisor_class(self, coefficients: Sequence) -> Tuple[Fraction, ...]:
        """Class of sum_j a_j D_j"""
        return tuple(sum((Fraction(a) * c[k] for a, c in zip(coefficients, self.class_of_ray)), Fraction(0))
                     for k in range(self.rank))

    def log_anticanonical_class(self, fan: Fan, weights: OrbifoldWeights) -> Tuple[Fraction, ...]:
        """Class of -K - D_{Sigma,m} = sum_j (1/m_j) D_j"""
        weights.check_against(fan)
        return self.divisor_class([weights.inverse(fan.orbit_of_ray[j]) for j in range(fan.ray_count)])


def picard(fan: Fan) -> PicardData:
    """Class map of the boundary divisors, canonicalised by a Hermite normal form"""
    V = as_object_matrix(fan.rays, fan.dim) if fan.rays else np.zeros((0, fan.dim), dtype=object)
    C, torsion = cokernel(V)
    if torsion:
        raise UnsupportedInputError(f"{fan.describe()}: Picard group has torsion {torsion}")
    b = C.shape[0]
    if b != fan.ray_count - fan.dim:
        logger.warning("%s: Picard rank %d differs from n - d = %d (fan not smooth complete?)",
                       fan.describe(), b, fan.ray_count - fan.dim)
    if b:
        C = hermite_rows(C)
    classes = tuple(tuple(int(C[k, j]) for k in range(b)) for j in range(fan.ray_count))
    logger.debug("%s: Pic rank %d, classes %s", fan.describe(), b, classes)
    return PicardData(rank=b, class_of_ray=classes)


def effective_cone_constant(data: PicardData, v: Sequence) -> Fraction:
    """Integral of exp(-<v, y>) over the dual effective cone, exactly

    The dual cone is triangulated into simplicial cones with generator matrices G;
    each contributes |det G| / prod_j <v, g_j>.
    """
    v = tuple(Fraction(x) for x in v)
    if len(v) != data.rank:
        raise ValueError(f"class has {len(v)} coordinates, Picard rank is {data.rank}")
    if data.rank == 0:
        return Fraction(1)
    if data.rank > 4:
        raise UnsupportedInputError(f"dual effective cone supported for rank <= 4, got {data.rank}")
    generators = data.dual_effective_generators
    for g in generators:
        if dot(v, g) <= 0:
            raise DivergenceError(f"class {tuple(str(x) for x in v)} is not positive on dual generator {g}: "
                                  f"the integral diverges")
    total = Fraction(0)
    for simplex in pulling_triangulation(generators, data.class_of_ray, data.rank):
        G = [generators[i] for i in simplex]
        denominator = math.prod(dot(v, g) for g in G)
        total += abs(determinant(G)) / denominator
    return total


def alpha_constants(fan: Fan, weights: OrbifoldWeights, data: PicardData = None) -> Tuple[Fraction, Fraction]:
    """(alpha_direct, alpha_paper)

    alpha_direct = prod_i 1/m_i * chi_Eff(-K - D_{Sigma,m}); alpha_paper = chi_Eff(-K).
    """
    if not weights.all_finite:
        raise UnsupportedInputError("alpha is only defined for finite weights")
    data = data or picard(fan)
    inverse_product = math.prod(weights.inverse(i) for i in range(fan.orbit_count))
    direct = inverse_product * effective_cone_constant(data, data.log_anticanonical_class(fan, weights))
    anticanonical = effective_cone_constant(data, data.anticanonical_class)
    return direct, anticanonical
