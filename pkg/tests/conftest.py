"""
Shared fixtures: library fans and weights

Author: Mohammed Ismail AbdElmageid
"""
import pytest

from core.fan import OrbifoldWeights
from core.library import del_pezzo_6, hirzebruch, product, projective_space


@pytest.fixture
def p1():
    return projective_space(1)


@pytest.fixture
def p2():
    return projective_space(2)


@pytest.fixture
def p3():
    return projective_space(3)


@pytest.fixture
def p1xp1():
    return product(projective_space(1), projective_space(1))


@pytest.fixture
def f1():
    return hirzebruch(1)


@pytest.fixture
def dp6():
    return del_pezzo_6()


@pytest.fixture
def library_fans(p1, p2, p1xp1, f1, dp6):
    """The five fans of the density grid"""
    return [p1, p2, p1xp1, f1, dp6]


@pytest.fixture
def squarefull_weights():
    return OrbifoldWeights((2, 2))
