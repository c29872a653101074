"""
Enumeration, Counting and Fitting
"""
from .mfull import enumerate_mfull, enumerate_powers, admissible_values, is_mfull
from .enumerators import (
    ProjectiveFactor,
    recognise_projective_factors,
    enumerate_points,
    projective_points,
    generic_points,
    generic_plan,
    joint_count
)
from .count_manager import CountRun, count, checkpoint_grid, write_count_csv
from .fitting import (
    FitResult,
    FitComparison,
    fit_counts,
    fit_and_report,
    count_and_fit,
    doubling_ratios
)

__all__ = [
    'enumerate_mfull',
    'enumerate_powers',
    'admissible_values',
    'is_mfull',
    'ProjectiveFactor',
    'recognise_projective_factors',
    'enumerate_points',
    'projective_points',
    'generic_points',
    'generic_plan',
    'joint_count',
    'CountRun',
    'count',
    'checkpoint_grid',
    'write_count_csv',
    'FitResult',
    'FitComparison',
    'fit_counts',
    'fit_and_report',
    'count_and_fit',
    'doubling_ratios'
]
