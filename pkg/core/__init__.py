"""
Core Fan Model, Points and Heights
"""
from .exceptions import (
    ToricToolkitError,
    FanValidationError,
    FanFileError,
    ConfigurationError,
    UnsupportedInputError,
    DivergenceError,
    BudgetExceededError,
    InternalConsistencyError
)
from .config import ToolkitConfig, load_config
from .fan import (
    Fan,
    OrbifoldWeights,
    PLFunction,
    ValidationReport,
    CompletenessCertificate,
    Location,
    validate_fan,
    require_valid,
    is_regular,
    is_complete,
    locate,
    evaluate_pl,
    evaluate_pl_real
)
from .picard import PicardData, picard, effective_cone_constant, alpha_constants
from .points import (
    Variant,
    TorusPoint,
    MultiplicityProfile,
    LocalVerdict,
    GlobalVerdict,
    parse_point,
    degree_vector,
    multiplicity_profile,
    crosscheck_projective,
    classify_local,
    classify_global,
    classify_batch
)
from .heights import (
    HeightPower,
    HeightValue,
    local_height_exponent,
    archimedean_height,
    global_height,
    height_at_most,
    height_lower_bound_constant,
    projective_height,
    format_height
)

__all__ = [
    'ToricToolkitError',
    'FanValidationError',
    'FanFileError',
    'ConfigurationError',
    'UnsupportedInputError',
    'DivergenceError',
    'BudgetExceededError',
    'InternalConsistencyError',
    'ToolkitConfig',
    'load_config',
    'Fan',
    'OrbifoldWeights',
    'PLFunction',
    'ValidationReport',
    'CompletenessCertificate',
    'Location',
    'validate_fan',
    'require_valid',
    'is_regular',
    'is_complete',
    'locate',
    'evaluate_pl',
    'evaluate_pl_real',
    'PicardData',
    'picard',
    'effective_cone_constant',
    'alpha_constants',
    'Variant',
    'TorusPoint',
    'MultiplicityProfile',
    'LocalVerdict',
    'GlobalVerdict',
    'parse_point',
    'degree_vector',
    'multiplicity_profile',
    'crosscheck_projective',
    'classify_local',
    'classify_global',
    'classify_batch',
    'HeightPower',
    'HeightValue',
    'local_height_exponent',
    'archimedean_height',
    'global_height',
    'height_at_most',
    'height_lower_bound_constant',
    'projective_height',
    'format_height'
]
