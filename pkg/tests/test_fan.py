"""
Unit tests for fans: validation, regularity, completeness, location and PL functions

Author: Mohammed Ismail AbdElmageid
"""
import pytest
import mpmath
import numpy as np
from fractions import Fraction

from core.exceptions import FanValidationError
from core.fan import (
    Fan,
    OrbifoldWeights,
    PLFunction,
    evaluate_pl,
    evaluate_pl_real,
    is_complete,
    is_regular,
    locate,
    require_valid,
    validate_fan,
)
from core.library import library_fan


def random_vectors(dim, count, seed=7, spread=40):
    rng = np.random.default_rng(seed)
    return [tuple(int(x) for x in rng.integers(-spread, spread + 1, size=dim)) for _ in range(count)]


class TestValidateFan:
    """Test the fan axioms"""

    def test_p2_valid(self, p2):
        """Test the P2 fan passes validation"""
        report = validate_fan(p2)
        assert report.ok
        assert report.summary() == "valid"

    def test_determinant_two_cone_rejected(self):
        """Test a regular-flagged cone of index 2 is reported"""
        fan = Fan.from_maximal_cones(2, [(1, 0), (1, 2)], [(0, 1)])
        report = validate_fan(fan)
        assert not report.ok
        assert "non-regular" in report.kinds()

    def test_unimodular_pair_accepted(self):
        """Test rays (1,0),(2,1) span a unimodular cone"""
        fan = Fan.from_maximal_cones(2, [(1, 0), (2, 1)], [(0, 1)])
        assert validate_fan(fan).ok

    def test_overlapping_cones_rejected(self):
        """Test cones meeting outside a common face are reported"""
        fan = Fan.from_maximal_cones(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
        report = validate_fan(fan)
        assert "overlap" in report.kinds()
        issue = next(i for i in report.issues if i.kind == "overlap")
        assert set(issue.cones) == {(0, 1), (0, 2)}

    def test_non_primitive_ray(self):
        """Test a non-primitive ray is reported with its index"""
        fan = Fan.from_maximal_cones(1, [(2,), (-1,)], [(0,), (1,)])
        report = validate_fan(fan)
        assert "non-primitive" in report.kinds()
        assert report.issues[0].rays == (0,)

    def test_duplicate_ray(self):
        """Test duplicated rays are reported"""
        fan = Fan.from_maximal_cones(1, [(1,), (1,)], [(0,), (1,)])
        assert "duplicate-ray" in validate_fan(fan).kinds()

    def test_require_valid_raises(self):
        """Test require_valid raises with the report attached"""
        fan = Fan.from_maximal_cones(2, [(1, 0), (1, 2)], [(0, 1)])
        with pytest.raises(FanValidationError) as info:
            require_valid(fan)
        assert info.value.report is not None
        assert not info.value.report.ok


class TestRegularity:
    """Test is_regular"""

    def test_p2_regular(self, p2):
        """Test P2 is regular"""
        assert is_regular(p2)

    def test_index_two_cone(self):
        """Test a cone spanned by (1,0),(1,2) is not regular"""
        fan = Fan.from_maximal_cones(2, [(1, 0), (1, 2)], [(0, 1)], regular=False)
        assert not is_regular(fan)

    def test_zero_fan(self):
        """Test the fan with only the zero cone is regular"""
        fan = Fan.from_maximal_cones(2, [], [])
        assert is_regular(fan)

    def test_library_fans_regular(self, library_fans):
        """Test every library fan is regular"""
        assert all(is_regular(fan) for fan in library_fans)


class TestCompleteness:
    """Test is_complete"""

    def test_p2_complete(self, p2):
        """Test P2 is complete"""
        certificate = is_complete(p2)
        assert certificate
        assert certificate.probes_checked == 100

    def test_p1_complete(self, p1):
        """Test P1 is complete"""
        assert is_complete(p1)

    def test_missing_cone_witness(self):
        """Test removing the first quadrant yields the witness direction (1,1)"""
        fan = Fan.from_maximal_cones(2, [(1, 0), (0, 1), (-1, -1)], [(1, 2), (0, 2)])
        certificate = is_complete(fan)
        assert not certificate
        assert certificate.witness == (1, 1)

    def test_library_fans_complete(self, library_fans, p3):
        """Test every library fan is complete"""
        assert all(is_complete(fan) for fan in library_fans + [p3])


class TestLocate:
    """Test cone location"""

    def test_positive_quadrant(self, p2):
        """Test (2,3) lies in the cone of (1,0),(0,1)"""
        location = locate(p2, (2, 3))
        assert location.cone == (0, 1)
        assert location.coefficients == (2, 3)

    def test_on_a_ray(self, p2):
        """Test (-1,-1) is the ray itself"""
        location = locate(p2, (-1, -1))
        assert location.cone == (2,)
        assert location.coefficients == (1,)

    def test_mixed_cone(self, p2):
        """Test (-2,1) = 3 (0,1) + 2 (-1,-1)"""
        location = locate(p2, (-2, 1))
        assert location.cone == (1, 2)
        assert location.coefficients == (3, 2)

    def test_zero_vector(self, p2):
        """Test the zero vector lies in the zero cone"""
        assert locate(p2, (0, 0)).cone == ()

    @pytest.mark.parametrize("name", ["P2", "P1xP1", "F1", "dP6"])
    def test_partition(self, name):
        """Test coefficients reproduce the vector and are positive integers"""
        fan = library_fan(name)
        for vector in random_vectors(fan.dim, 2000):
            location = locate(fan, vector)
            assert all(c > 0 and c.denominator == 1 for c in location.coefficients)
            rebuilt = [sum(c * fan.rays[j][k] for j, c in zip(location.cone, location.coefficients))
                       for k in range(fan.dim)]
            assert rebuilt == list(vector)


class TestPLFunctions:
    """Test piecewise-linear functions"""

    def test_anticanonical_value(self, p2):
        """Test phi_Sigma at (2,3) is 5"""
        assert evaluate_pl(p2, PLFunction.anticanonical(p2), (2, 3)) == 5

    def test_log_anticanonical_value(self, p2):
        """Test phi_Sigma,m with m=(2,2,2) at (-2,1) is 5/2"""
        phi = PLFunction.log_anticanonical(p2, OrbifoldWeights((2, 2, 2)))
        assert evaluate_pl(p2, phi, (-2, 1)) == Fraction(5, 2)

    def test_zero_vector(self, p2):
        """Test any phi vanishes at 0"""
        phi = PLFunction((Fraction(1, 3), 2, 5))
        assert evaluate_pl(p2, phi, (0, 0)) == 0

    def test_infinite_weight_gives_zero(self, p1):
        """Test weight inf contributes 0 on its ray"""
        phi = PLFunction.log_anticanonical(p1, OrbifoldWeights((2, float("inf"))))
        assert phi.value_on_ray == (Fraction(1, 2), Fraction(0))

    def test_homogeneity(self, dp6):
        """Test phi(lambda x) = lambda phi(x) exactly"""
        phi = PLFunction((1, Fraction(1, 2), 3, Fraction(2, 3), 1, 5))
        for vector in random_vectors(2, 300):
            for scale in (Fraction(1, 3), Fraction(2), Fraction(7, 5)):
                scaled = [scale * x for x in vector]
                assert evaluate_pl(dp6, phi, scaled) == scale * evaluate_pl(dp6, phi, vector)

    def test_additivity(self, f1):
        """Test eval(phi1 + phi2) = eval(phi1) + eval(phi2)"""
        phi1 = PLFunction((1, 2, 3, 4))
        phi2 = PLFunction((Fraction(1, 2), 0, Fraction(-1, 3), 7))
        for vector in random_vectors(2, 300, seed=11):
            assert evaluate_pl(f1, phi1 + phi2, vector) == \
                evaluate_pl(f1, phi1, vector) + evaluate_pl(f1, phi2, vector)

    def test_globally_linear(self, p1xp1):
        """Test a linear function evaluates to <u, x>"""
        u = (3, -2)
        phi = PLFunction.from_linear(p1xp1, u)
        for vector in random_vectors(2, 300, seed=3):
            assert evaluate_pl(p1xp1, phi, vector) == 3 * vector[0] - 2 * vector[1]

    def test_invariance(self, p2):
        """Test is_invariant follows the orbit labels"""
        orbit_fan = Fan.from_maximal_cones(2, p2.rays, p2.maximal_cones, orbit_of_ray=(0, 0, 1))
        assert PLFunction((1, 1, 2)).is_invariant(orbit_fan)
        assert not PLFunction((1, 2, 2)).is_invariant(orbit_fan)

    def test_real_evaluation_matches_exact(self, p2):
        """Test the mpmath evaluator agrees with the exact one on integer vectors"""
        phi = PLFunction((Fraction(1, 2), 1, Fraction(1, 3)))
        for vector in random_vectors(2, 100, seed=5):
            value, _, _ = evaluate_pl_real(p2, phi, vector)
            exact = evaluate_pl(p2, phi, vector)
            assert abs(value - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.mpf(10) ** -10


class TestOrbifoldWeights:
    """Test weight parsing"""

    def test_parse(self):
        """Test commas, whitespace and inf"""
        weights = OrbifoldWeights.parse("2, 3 inf")
        assert weights.m == (2, 3, float("inf"))
        assert weights.label() == "2,3,inf"

    def test_reject_zero(self):
        """Test weights below 1 are rejected"""
        with pytest.raises(ValueError):
            OrbifoldWeights((0, 2))

    def test_reject_garbage(self):
        """Test non-numeric weights are rejected"""
        with pytest.raises(ValueError):
            OrbifoldWeights.parse("2,x")
