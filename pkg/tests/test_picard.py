"""
Unit tests for the Picard group and the effective-cone constant

Author: Mohammed Ismail AbdElmageid
"""
import pytest
from fractions import Fraction

from core.exceptions import DivergenceError, UnsupportedInputError
from core.fan import Fan, OrbifoldWeights
from core.picard import alpha_constants, effective_cone_constant, picard


class TestPicard:
    """Test the class map of boundary divisors"""

    def test_p2_rank_one(self, p2):
        """Test all three lines of P2 are linearly equivalent"""
        data = picard(p2)
        assert data.rank == 1
        assert len(set(data.class_of_ray)) == 1
        assert data.class_of_ray[0] != (0,)

    def test_p1xp1_classes(self, p1xp1):
        """Test opposite rays share a class and the two rulings differ"""
        data = picard(p1xp1)
        assert data.rank == 2
        assert data.class_of_ray[0] == data.class_of_ray[1]
        assert data.class_of_ray[2] == data.class_of_ray[3]
        assert data.class_of_ray[0] != data.class_of_ray[2]

    @pytest.mark.parametrize("fixture, rank", [("p1", 1), ("p3", 1), ("f1", 2), ("dp6", 4)])
    def test_rank_is_n_minus_d(self, fixture, rank, request):
        """Test rank Pic = n - d for smooth complete fans"""
        fan = request.getfixturevalue(fixture)
        assert picard(fan).rank == rank == fan.ray_count - fan.dim

    def test_linear_relations(self, dp6):
        """Test sum_j <u, e_j> [D_j] = 0 for the standard basis u"""
        data = picard(dp6)
        for u in ((1, 0), (0, 1)):
            total = [sum((u[0] * ray[0] + u[1] * ray[1]) * data.class_of_ray[j][k]
                         for j, ray in enumerate(dp6.rays)) for k in range(data.rank)]
            assert total == [0] * data.rank

    def test_torsion_rejected(self):
        """Test a Picard group with Z/2 torsion raises UnsupportedInputError"""
        fan = Fan.from_maximal_cones(2, [(1, 0), (1, 2), (-1, 0), (-1, -2)],
                                     [(0, 1), (1, 2), (2, 3), (0, 3)], regular=False)
        with pytest.raises(UnsupportedInputError):
            picard(fan)


class TestEffectiveConeConstant:
    """Test chi_Eff"""

    def test_p2_anticanonical(self, p2):
        """Test chi_Eff(-K_P2) = 1/3"""
        data = picard(p2)
        assert effective_cone_constant(data, data.anticanonical_class) == Fraction(1, 3)

    def test_p1xp1_anticanonical(self, p1xp1):
        """Test chi_Eff(-K_P1xP1) = 1/4"""
        data = picard(p1xp1)
        assert effective_cone_constant(data, data.anticanonical_class) == Fraction(1, 4)

    def test_p1_anticanonical(self, p1):
        """Test chi_Eff(-K_P1) = 1/2"""
        data = picard(p1)
        assert effective_cone_constant(data, data.anticanonical_class) == Fraction(1, 2)

    def test_homogeneous_of_degree_minus_rank(self, f1):
        """Test chi(2v) = chi(v) / 2^rank"""
        data = picard(f1)
        v = data.anticanonical_class
        doubled = tuple(2 * x for x in v)
        assert effective_cone_constant(data, doubled) == effective_cone_constant(data, v) / 4

    def test_boundary_class_diverges(self, p1xp1):
        """Test a class on the boundary of the effective cone raises DivergenceError"""
        data = picard(p1xp1)
        with pytest.raises(DivergenceError):
            effective_cone_constant(data, data.class_of_ray[0])

    def test_wrong_length(self, p2):
        """Test a class of the wrong rank is rejected"""
        with pytest.raises(ValueError):
            effective_cone_constant(picard(p2), (1, 2))


class TestAlphaConstants:
    """Test alpha_direct and alpha_paper"""

    def test_uniform_weight_one(self, p2):
        """Test both readings agree when every weight is 1"""
        direct, anticanonical = alpha_constants(p2, OrbifoldWeights((1, 1, 1)))
        assert direct == anticanonical == Fraction(1, 3)

    def test_squarefull_p1(self, p1, squarefull_weights):
        """Test P1 with m=(2,2): alpha_direct = 1/4, alpha_paper = 1/2"""
        direct, anticanonical = alpha_constants(p1, squarefull_weights)
        assert direct == Fraction(1, 4)
        assert anticanonical == Fraction(1, 2)

    def test_infinite_weight_rejected(self, p1):
        """Test infinite weights are outside the alpha formula"""
        with pytest.raises(UnsupportedInputError):
            alpha_constants(p1, OrbifoldWeights((2, float("inf"))))
