"""
Sparse Multivariate Polynomials over Q

Thin wrapper around sympy's sparse polynomial rings whose variables are indexed by
BlockIndex values (orbit, place, inertia degree).

Author: Mohammed Ismail AbdElmageid
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

Exponent = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class BlockIndex:
    """Variable u_{i,w}: orbit i, place label w, inertia degree f"""
    orbit: int
    place: int = 0
    f: int = 1

    def __post_init__(self):
        if self.f < 1:
            raise ValueError(f"inertia degree must be >= 1, got {self.f}")

    @property
    def label(self) -> str:
        return f"u[{self.orbit},{self.place}]"


_RINGS: Dict[int, tuple] = {}


def _ring_for(count: int):
    """Shared sympy ring with max(count, 1) generators"""
    size = max(count, 1)
    if size not in _RINGS:
        names = ",".join(f"u{k}" for k in range(size))
        R, *gens = ring(names, QQ, lex)
        _RINGS[size] = (R, gens)
    return _RINGS[size]


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class SparseMultiPoly:
    """Exact polynomial in the block variables; zero coefficients are never stored"""

    def __init__(self, blocks: Sequence[BlockIndex], element=None):
        self.blocks = tuple(blocks)
        self._ring, self._gens = _ring_for(len(self.blocks))
        self.element = element if element is not None else self._ring.zero

    @classmethod
    def constant(cls, blocks: Sequence[BlockIndex], value=1) -> "SparseMultiPoly":
        poly = cls(blocks)
        value = Fraction(value)
        poly.element = poly._ring(QQ(value.numerator, value.denominator))
        return poly

    @classmethod
    def monomial(cls, blocks: Sequence[BlockIndex], exponents: Mapping[BlockIndex, int], coefficient=1) -> "SparseMultiPoly":
        blocks = tuple(blocks)
        exponent = tuple(int(exponents.get(b, 0)) for b in blocks)
        return cls.from_terms(blocks, {exponent: Fraction(coefficient)})

    @classmethod
    def from_terms(cls, blocks: Sequence[BlockIndex], terms: Mapping[Exponent, Fraction]) -> "SparseMultiPoly":
        poly = cls(blocks)
        width = len(poly._gens)
        data = {}
        for exponent, coefficient in terms.items():
            coefficient = Fraction(coefficient)
            if coefficient == 0:
                continue
            padded = tuple(exponent) + (0,) * (width - len(exponent))
            data[padded] = QQ(coefficient.numerator, coefficient.denominator)
        poly.element = poly._ring.from_dict(data) if data else poly._ring.zero
        return poly

    def _wrap(self, element) -> "SparseMultiPoly":
        return SparseMultiPoly(self.blocks, element)

    def _check(self, other: "SparseMultiPoly"):
        if other.blocks != self.blocks:
            raise ValueError("polynomials over different block sets")

    def __add__(self, other: "SparseMultiPoly") -> "SparseMultiPoly":
        self._check(other)
        return self._wrap(self.element + other.element)

    def __sub__(self, other: "SparseMultiPoly") -> "SparseMultiPoly":
        self._check(other)
        return self._wrap(self.element - other.element)

    def __mul__(self, other: Union["SparseMultiPoly", int, Fraction]) -> "SparseMultiPoly":
        if isinstance(other, SparseMultiPoly):
            self._check(other)
            return self._wrap(self.element * other.element)
        other = Fraction(other)
        return self._wrap(self.element * QQ(other.numerator, other.denominator))

    __rmul__ = __mul__

    def __neg__(self) -> "SparseMultiPoly":
        return self._wrap(-self.element)

    def __pow__(self, k: int) -> "SparseMultiPoly":
        return self._wrap(self.element ** k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMultiPoly):
            return NotImplemented
        return self.blocks == other.blocks and self.element == other.element

    __hash__ = None

    def divmod(self, divisor: "SparseMultiPoly") -> Tuple["SparseMultiPoly", "SparseMultiPoly"]:
        """(quotient, remainder) of multivariate division by a single polynomial"""
        self._check(divisor)
        quotient, remainder = self.element.div(divisor.element)
        return self._wrap(quotient), self._wrap(remainder)

    @property
    def is_zero(self) -> bool:
        return not self.element

    def terms(self) -> Dict[Exponent, Fraction]:
        width = len(self.blocks)
        return {tuple(monom[:width]): _to_fraction(c) for monom, c in self.element.terms()}

    def constant_term(self) -> Fraction:
        return self.terms().get((0,) * len(self.blocks), Fraction(0))

    def block_degree(self, index: int) -> int:
        """Largest exponent of one block variable (-1 for the zero polynomial)"""
        terms = self.terms()
        return max((e[index] for e in terms), default=-1)

    def substitute_powers(self, powers: Sequence[int]) -> "SparseMultiPoly":
        """u_k -> u_k ** powers[k]"""
        return SparseMultiPoly.from_terms(
            self.blocks, {tuple(a * k for a, k in zip(e, powers)): c for e, c in self.terms().items()})

    def evaluate(self, values: Sequence):
        """Value at u_k = values[k]; exact for ints/Fractions, mpmath real otherwise"""
        exact = all(isinstance(v, (int, Fraction)) for v in values)
        total = 0
        for exponent, coefficient in self.terms().items():
            term = coefficient if exact else mpmath.mpf(coefficient.numerator) / coefficient.denominator
            for value, a in zip(values, exponent):
                if a:
                    term = term * value ** a
            total = total + term
        return total

    def exponent_weights(self, weights: Sequence[int]) -> List[Tuple[Fraction, Fraction]]:
        """(coefficient, sum_k a_k / m_k) per monomial"""
        return [(c, sum((Fraction(a, m) for a, m in zip(e, weights)), Fraction(0)))
                for e, c in self.terms().items()]

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        """Exponent-graded, then lexicographic by block label"""
        order = sorted(range(len(self.blocks)), key=lambda k: self.blocks[k].label)
        return sorted(self.terms().items(), key=lambda item: (sum(item[0]), [-item[0][k] for k in order]))

    def format(self) -> str:
        pieces = []
        for exponent, coefficient in self.sorted_terms():
            factors = [f"{self.blocks[k].label}^{a}" for k, a in enumerate(exponent) if a]
            pieces.append(" * ".join([str(coefficient)] + factors))
        return " + ".join(pieces) if pieces else "0"

    def __repr__(self) -> str:
        return f"SparseMultiPoly({self.format()})"
