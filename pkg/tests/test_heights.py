"""
Unit tests for heights

Author: Mohammed Ismail AbdElmageid
"""
import math
import pytest
from fractions import Fraction

import mpmath
import numpy as np

from core.fan import OrbifoldWeights, PLFunction
from core.library import library_fan
from core.heights import (
    HeightPower,
    archimedean_height,
    format_height,
    global_height,
    height_lower_bound_constant,
    height_norm,
    height_at_most,
    local_height_exponent,
    projective_height,
)
from core.points import TorusPoint, parse_point


def coprime_triples(limit):
    for x0 in range(1, limit):
        for x1 in range(-limit, limit):
            for x2 in range(1, limit, 3):
                if x1 and math.gcd(x0, x1, x2) == 1:
                    yield [x0, x1, x2]


class TestHeightPower:
    """Test exact algebraic heights"""

    def test_equality_across_roots(self):
        """Test 8^(1/3) == 2 and 81^(1/2) == 9"""
        assert HeightPower(8, 3) == HeightPower(2)
        assert HeightPower(81, 2) == HeightPower(9)

    def test_ordering(self):
        """Test comparisons raise both sides to a common power"""
        assert HeightPower(2, 2) < HeightPower(3, 2)
        assert HeightPower(7, 2) < HeightPower(3)
        assert HeightPower(10, 2) > HeightPower(3)

    def test_product(self):
        """Test sqrt(2) * sqrt(8) = 4"""
        assert HeightPower(2, 2) * HeightPower(8, 2) == HeightPower(4)

    def test_at_most(self):
        """Test exact comparison against a rational bound"""
        assert HeightPower(9, 2).at_most(3)
        assert not HeightPower(10, 2).at_most(3)
        assert not HeightPower(1).at_most(0)

    def test_invalid(self):
        """Test non-positive values are rejected"""
        with pytest.raises(ValueError):
            HeightPower(0)

    def test_from_exponents(self):
        """Test 2^(1/2) * 3^(-1/3)"""
        h = HeightPower.from_rational_exponents([(Fraction(2), Fraction(1, 2)), (Fraction(3), Fraction(-1, 3))])
        assert h.root == 6
        assert h.value == Fraction(8, 9)


class TestGlobalHeight:
    """Test the Batyrev-Tschinkel height"""

    def test_p2_anticanonical(self, p2):
        """Test H_phi_Sigma(2,3) = 2 * 3 * 9/2 = 27"""
        height = global_height(p2, PLFunction.anticanonical(p2), parse_point("2,3"))
        assert height.finite_part == {2: 1, 3: 1}
        assert abs(height.archimedean_factor - mpmath.mpf(9) / 2) < 1e-12
        assert height.exact == HeightPower(27)
        assert abs(height.value - 27) < 1e-10

    def test_p1_squarefull(self, p1, squarefull_weights):
        """Test H(4/9) = 9 for m=(2,2) and its formatting"""
        phi = PLFunction.log_anticanonical(p1, squarefull_weights)
        height = global_height(p1, phi, parse_point("4/9"))
        assert height.exact == HeightPower(9)
        assert format_height(height) == "2^1 * 3^1 * 1.5 = 9"

    def test_trivial_point(self, p2):
        """Test the identity has height 1"""
        height = global_height(p2, PLFunction.anticanonical(p2), parse_point("1,1"))
        assert height.finite_part == {}
        assert height.exact == HeightPower(1)
        assert format_height(height) == "1 * 1 = 1"

    def test_local_exponent(self, p2):
        """Test the local exponent at p=2 for (1/4, 8)"""
        assert local_height_exponent(p2, PLFunction.anticanonical(p2), parse_point("1/4,8"), 2) == 7

    def test_product_formula(self, dp6):
        """Test globally linear functions give height 1"""
        phi = PLFunction.from_linear(dp6, (2, -3))
        for text in ("2,3", "4/9,5", "-7/12,11/6", "1/1024,3"):
            height = global_height(dp6, phi, parse_point(text))
            assert height.exact == HeightPower(1)
            assert abs(height.total_log) < 1e-10

    def test_linear_shift_invariance(self, f1):
        """Test phi and phi + linear give the same height"""
        phi = PLFunction.anticanonical(f1)
        shifted = phi + PLFunction.from_linear(f1, (1, 4))
        for text in ("2,3", "6/35,-9", "1/8,27/2"):
            point = parse_point(text)
            assert global_height(f1, phi, point).exact == global_height(f1, shifted, point).exact

    @pytest.mark.parametrize("m", [(1, 1, 1), (2, 2, 2), (2, 3, 5), (1, 2, float("inf"))])
    def test_matches_projective_height(self, p2, m):
        """Test fan heights on P2 equal max|x_i|^(sum 1/m_i)"""
        weights = OrbifoldWeights(m)
        phi = PLFunction.log_anticanonical(p2, weights)
        for xs in coprime_triples(14):
            point = TorusPoint.from_projective(xs)
            assert global_height(p2, phi, point).exact == projective_height(xs, weights.m)

    @pytest.mark.parametrize("name", ["P2", "F1", "dP6"])
    def test_lower_bound_constant(self, name):
        """Test log H >= kappa * height_norm on random points"""
        fan = library_fan(name)
        phi = PLFunction.anticanonical(fan)
        kappa = height_lower_bound_constant(fan, phi)
        assert kappa > 0
        rng = np.random.default_rng(3)
        for _ in range(200):
            num = rng.integers(1, 500, size=2) * rng.choice([-1, 1], size=2)
            den = rng.integers(1, 500, size=2)
            point = TorusPoint(tuple(Fraction(int(n), int(d)) for n, d in zip(num, den)))
            height = global_height(fan, phi, point)
            assert height.total_log >= float(kappa) * height_norm(point) - 1e-9


class TestArchimedeanHeight:
    """Test the archimedean factor and its working precision"""

    def test_squarefull_point(self, p1, squarefull_weights):
        """Test the archimedean factor of 4/9 for m=(2,2) is 3/2"""
        phi = PLFunction.log_anticanonical(p1, squarefull_weights)
        value = archimedean_height(p1, phi, parse_point("4/9"))
        assert abs(value - mpmath.mpf(3) / 2) < mpmath.mpf(2) ** -120

    def test_matches_global_height(self, p2):
        """Test archimedean_height agrees with the archimedean part of global_height"""
        phi = PLFunction.anticanonical(p2)
        point = parse_point("6/35,-11/4")
        height = global_height(p2, phi, point)
        assert abs(archimedean_height(p2, phi, point) - height.archimedean_factor) < 1e-12

    def test_precision_at_default_context(self, p2):
        """Test logs are accurate beyond 120 bits while mpmath runs at 53"""
        with mpmath.workprec(53):
            height = global_height(p2, PLFunction.anticanonical(p2), parse_point("2,3"))
            assert mpmath.mp.prec == 53
        with mpmath.workprec(256):
            error = abs(height.total_log - mpmath.log(27))
        assert error < mpmath.mpf(2) ** -120


class TestScaling:
    """Test heights of t^e against heights of t"""

    @pytest.mark.parametrize("name", ["P2", "F1", "dP6"])
    @pytest.mark.parametrize("e", [2, 3])
    def test_power_of_point(self, name, e):
        """Test local exponents scale by e and H(t^e) = H(t)^e"""
        fan = library_fan(name)
        phi = PLFunction.anticanonical(fan)
        rng = np.random.default_rng(e)
        for _ in range(50):
            num = rng.integers(1, 60, size=2) * rng.choice([-1, 1], size=2)
            den = rng.integers(1, 60, size=2)
            point = TorusPoint(tuple(Fraction(int(n), int(d)) for n, d in zip(num, den)))
            powered = TorusPoint(tuple(c ** e for c in point.coords))
            for p in point.support_primes():
                assert local_height_exponent(fan, phi, powered, p) == e * local_height_exponent(fan, phi, point, p)
            base = global_height(fan, phi, point).exact
            assert global_height(fan, phi, powered).exact == HeightPower(base.value ** e, base.root)
            ratio = archimedean_height(fan, phi, powered) / archimedean_height(fan, phi, point) ** e
            assert abs(ratio - 1) < 1e-12


class TestHeightAtMost:
    """Test comparisons against a bound"""

    def test_exact_cutoff(self, p2):
        """Test a height equal to the bound counts"""
        height = global_height(p2, PLFunction.anticanonical(p2), parse_point("2,3"))
        assert height_at_most(height, 27)
        assert not height_at_most(height, 26)
        assert height_at_most(height, Fraction(271, 10))

    def test_irrational_height(self, p1):
        """Test 2^(3/2) against 2.8 and 2.9 for m=(2,1)"""
        phi = PLFunction.log_anticanonical(p1, OrbifoldWeights((2, 1)))
        height = global_height(p1, phi, parse_point("2"))
        assert height.exact == HeightPower(8, 2)
        assert not height_at_most(height, Fraction(28, 10))
        assert height_at_most(height, Fraction(29, 10))

    def test_non_positive_bound(self, p2):
        """Test nothing lies below a non-positive bound"""
        height = global_height(p2, PLFunction.anticanonical(p2), parse_point("1,1"))
        assert not height_at_most(height, 0)

    def test_projective_height_weights(self):
        """Test [9:4] with m=(2,2) has height 9 and [1:2] with m=(2,1) has 2^(3/2)"""
        assert projective_height([9, 4], (2, 2)) == HeightPower(9)
        assert projective_height([1, 2], (2, 1)) == HeightPower(8, 2)


@pytest.mark.slow
class TestRandomHeights:
    """A thousand random coprime pairs"""

    def test_squarefull_height_is_max(self, p1, squarefull_weights):
        """Test H([a:b]) = max(|a|, |b|) on P1 with m=(2,2)"""
        rng = np.random.default_rng(11)
        phi = PLFunction.log_anticanonical(p1, squarefull_weights)
        checked = 0
        while checked < 1000:
            a, b = (int(x) for x in rng.integers(1, 10 ** 6, size=2))
            if math.gcd(a, b) != 1:
                continue
            a *= int(rng.choice([-1, 1]))
            point = TorusPoint.from_projective([b, a])
            assert global_height(p1, phi, point).exact == HeightPower(max(abs(a), b))
            checked += 1

    def test_product_formula(self, dp6):
        """Test linear functions give total log height 0 to 1e-12"""
        rng = np.random.default_rng(12)
        phi = PLFunction.from_linear(dp6, (3, -1))
        for _ in range(1000):
            num = rng.integers(1, 10 ** 4, size=2)
            den = rng.integers(1, 10 ** 4, size=2)
            point = TorusPoint(tuple(Fraction(int(n), int(d)) for n, d in zip(num, den)))
            assert abs(global_height(dp6, phi, point).total_log) < 1e-12
