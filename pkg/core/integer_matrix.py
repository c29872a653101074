"""
Exact Integer Linear Algebra

Cokernels through a Smith decomposition, Hermite normal forms, invariant factors,
ranks and exact rational solves, all over sympy's ZZ and QQ. Integer matrices
handed to and from callers are numpy arrays with dtype=object holding Python ints,
so nothing here ever touches floating point.

Author: Mohammed Ismail AbdElmageid
"""
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors


def to_fraction(x) -> Fraction:
    """Exact Fraction from an int, Fraction or sympy rational"""
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def as_object_matrix(rows: Sequence[Sequence[int]], columns: Optional[int] = None) -> np.ndarray:
    """Integer matrix with arbitrary-precision entries"""
    if len(rows) == 0:
        return np.zeros((0, columns or 0), dtype=object)
    return np.array([[int(x) for x in row] for row in rows], dtype=object)


def _rational_matrix(rows: Sequence[Sequence]) -> Matrix:
    return Matrix([[Fraction(x) for x in row] for row in rows])


def _integer_array(M: Matrix) -> np.ndarray:
    return np.array([[int(M[i, j]) for j in range(M.cols)] for i in range(M.rows)], dtype=object).reshape(
        M.rows, M.cols)


def cokernel(A: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Free part of Z^rows / im(A)

    Returns (C, torsion) where the rows of C give the projection onto the free
    quotient and torsion lists the nontrivial cyclic orders. With S A T = D the Smith
    decomposition, the rows of S opposite the zero diagonal entries kill im(A).
    """
    rows, cols = A.shape
    if rows == 0:
        return np.zeros((0, 0), dtype=object), []
    if cols == 0 or not any(x != 0 for x in A.flat):
        return np.eye(rows, dtype=object), []
    D, S, _ = smith_normal_decomp(Matrix(A.tolist()), domain=ZZ)
    diagonal = [int(D[i, i]) for i in range(min(rows, cols))]
    diagonal += [0] * (rows - len(diagonal))
    free = [i for i in range(rows) if diagonal[i] == 0]
    torsion = [abs(x) for x in diagonal if abs(x) > 1]
    C = _integer_array(S)[free] if free else np.zeros((0, rows), dtype=object)
    return C, torsion


def elementary_divisors(rows: Sequence[Sequence[int]]) -> List[int]:
    """Invariant factors of an integer matrix (Smith normal form diagonal)"""
    if len(rows) == 0 or len(rows[0]) == 0:
        return []
    dM = DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), len(rows[0])), ZZ)
    return [abs(int(x)) for x in invariant_factors(dM)]


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix"""
    if len(rows) == 0 or len(rows[0]) == 0:
        return 0
    return _rational_matrix(rows).rank()


def hermite_rows(A: np.ndarray) -> np.ndarray:
    """Canonical basis of the row lattice of an integer matrix of full row rank

    The rows are the columns of sympy's Hermite normal form of A^T, so two matrices
    with the same row lattice give the same result.
    """
    if A.shape[0] == 0:
        return A.copy()
    W = hermite_normal_form(Matrix(A.T.tolist()))
    return _integer_array(W.T)


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Unique solution of the square system A x = b in Fractions, None if singular"""
    if len(A) == 0:
        return []
    M = _rational_matrix(A)
    if M.det() == 0:
        return None
    x = M.LUsolve(Matrix([Fraction(y) for y in b]))
    return [to_fraction(v) for v in x]


def inverse_rational(A: Sequence[Sequence]) -> Optional[List[List[Fraction]]]:
    """Exact inverse of a square rational matrix, None if singular"""
    if len(A) == 0:
        return []
    M = _rational_matrix(A)
    if M.det() == 0:
        return None
    inverse = M.inv()
    return [[to_fraction(inverse[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def determinant(A: Sequence[Sequence]) -> Fraction:
    """Exact determinant"""
    if len(A) == 0:
        return Fraction(1)
    return to_fraction(_rational_matrix(A).det())


def nullspace_vector(rows: Sequence[Sequence], dim: int) -> Optional[List[Fraction]]:
    """A nonzero rational vector orthogonal to all rows when their rank is dim - 1"""
    if len(rows) == 0:
        return [Fraction(1)] if dim == 1 else None
    basis = _rational_matrix(rows).nullspace()
    if len(basis) != 1:
        return None
    return [to_fraction(x) for x in basis[0]]


def primitive_integer(vector: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray"""
    fractions = [Fraction(x) for x in vector]
    denominator = 1
    for x in fractions:
        denominator = lcm(denominator, x.denominator)
    integers = [int(x * denominator) for x in fractions]
    g = 0
    for x in integers:
        g = gcd(g, x)
    if g == 0:
        return tuple(integers)
    return tuple(x // g for x in integers)
