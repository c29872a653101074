"""
Polyhedral Cone Helpers

Exact H-representation / V-representation conversion for small pointed cones,
cone membership, and pulling triangulations. Everything runs on Fractions.

Author: Mohammed Ismail AbdElmageid
"""
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, List, Optional, Sequence, Tuple

from sympy import Matrix

from core.integer_matrix import nullspace_vector, primitive_integer, rank, solve_rational, to_fraction

Vector = Tuple[int, ...]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def span_complement(generators: Sequence[Sequence[int]], dim: int) -> List[List[Fraction]]:
    """Basis of the linear forms vanishing on the span of the generators"""
    if len(generators) == 0:
        return [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    basis = Matrix([[Fraction(x) for x in g] for g in generators]).nullspace()
    return [[to_fraction(x) for x in b] for b in basis]


def simplicial_inequalities(generators: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    """Dual functionals h_j with h_j(g_i) = delta_ij, taken inside the span of the g_i

    Together with span_complement as equalities they cut out cone(generators) for
    linearly independent generators.
    """
    k = len(generators)
    if k == 0:
        return []
    gram = [[Fraction(dot(gi, gj)) for gj in generators] for gi in generators]
    inequalities = []
    for j in range(k):
        unit = [1 if i == j else 0 for i in range(k)]
        coefficients = solve_rational(gram, unit)
        h = [sum(coefficients[i] * generators[i][c] for i in range(k)) for c in range(len(generators[0]))]
        inequalities.append(h)
    return inequalities


def extreme_rays(inequalities: Sequence[Sequence], equalities: Sequence[Sequence], dim: int) -> List[Vector]:
    """Extreme rays of the pointed cone {x : H x >= 0, E x = 0} as primitive integer vectors

    Every extreme ray is the one-dimensional solution set of E together with an
    active set of inequalities of rank dim - 1; active sets are enumerated directly,
    which is adequate for the small dimensions handled here.
    """
    inequalities = [list(h) for h in inequalities if any(x != 0 for x in h)]
    equalities = [list(e) for e in equalities if any(x != 0 for x in e)]
    base_rank = rank(equalities) if equalities else 0
    needed = dim - 1 - base_rank
    if needed < 0:
        return []

    found = []
    seen = set()
    candidates = [equalities] if needed == 0 else (
        equalities + list(active) for active in combinations(inequalities, needed))
    for system in candidates:
        system_rank = rank(system) if system else 0
        if system_rank != dim - 1:
            continue
        x = nullspace_vector(system, dim)
        if x is None:
            continue
        for sign in (1, -1):
            y = [sign * c for c in x]
            if all(dot(h, y) >= 0 for h in inequalities):
                ray = primitive_integer(y)
                if ray not in seen:
                    seen.add(ray)
                    found.append(ray)
    return sorted(found)


def in_cone(vector: Sequence, generators: Sequence[Sequence[int]]) -> Optional[List[Fraction]]:
    """Nonnegative coefficients expressing vector over linearly independent generators

    None if the vector lies outside the cone (or outside its span).
    """
    if len(generators) == 0:
        return [] if all(x == 0 for x in vector) else None
    k = len(generators)
    gram = [[Fraction(dot(gi, gj)) for gj in generators] for gi in generators]
    rhs = [Fraction(dot(g, vector)) for g in generators]
    coefficients = solve_rational(gram, rhs)
    if coefficients is None:
        return None
    rebuilt = [sum(coefficients[i] * generators[i][c] for i in range(k)) for c in range(len(vector))]
    if any(Fraction(a) != b for a, b in zip(vector, rebuilt)):
        return None
    if any(c < 0 for c in coefficients):
        return None
    return coefficients


def facet_normals(rays: Sequence[Vector], inequalities: Sequence[Sequence], dim: int) -> List[FrozenSet[int]]:
    """Facets of a full-dimensional cone as sets of ray indices

    inequalities must contain every facet normal (redundant rows are fine).
    """
    facets = []
    for h in inequalities:
        tight = frozenset(i for i, r in enumerate(rays) if dot(h, r) == 0)
        if len(tight) >= dim - 1 and tight not in facets and len(tight) < len(rays):
            if rank([rays[i] for i in tight]) == dim - 1:
                facets.append(tight)
    return facets


def pulling_triangulation(rays: Sequence[Vector], inequalities: Sequence[Sequence], dim: int) -> List[Tuple[int, ...]]:
    """Triangulate a full-dimensional pointed cone into simplicial cones

    Pull from the smallest ray index: the cone is split into the cones over the
    triangulated faces that avoid that ray. Faces of faces are found by intersecting
    with the global facet list.
    """
    facets = facet_normals(rays, inequalities, dim)

    def triangulate(face: FrozenSet[int], face_dim: int) -> List[Tuple[int, ...]]:
        if len(face) == face_dim:
            return [tuple(sorted(face))]
        apex = min(face)
        pieces = []
        sub_faces = []
        for facet in facets:
            sub = face & facet
            if apex in sub or sub in sub_faces:
                continue
            if sub and rank([rays[i] for i in sub]) == face_dim - 1:
                sub_faces.append(sub)
        for sub in sub_faces:
            for simplex in triangulate(sub, face_dim - 1):
                pieces.append(tuple(sorted((apex,) + simplex)))
        return pieces

    return triangulate(frozenset(range(len(rays))), dim)
