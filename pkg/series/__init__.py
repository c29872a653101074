"""
Fan Functions, Densities and Constants
"""
from .polynomials import BlockIndex, SparseMultiPoly
from .fan_functions import (
    DegreeBoundReport,
    FanFunctionVariant,
    InvariantConeSet,
    r_sigma,
    q_polynomial,
    verify_degree_bounds
)
from .densities import (
    LocalDensity,
    local_density,
    local_density_direct,
    local_density_closed,
    archimedean_density,
    archimedean_density_numeric
)
from .constants import (
    ConstantReport,
    predicted_constant,
    squarefull_pair_oracle,
    coprime_pair_oracle
)

__all__ = [
    'BlockIndex',
    'SparseMultiPoly',
    'DegreeBoundReport',
    'FanFunctionVariant',
    'InvariantConeSet',
    'r_sigma',
    'q_polynomial',
    'verify_degree_bounds',
    'LocalDensity',
    'local_density',
    'local_density_direct',
    'local_density_closed',
    'archimedean_density',
    'archimedean_density_numeric',
    'ConstantReport',
    'predicted_constant',
    'squarefull_pair_oracle',
    'coprime_pair_oracle'
]
