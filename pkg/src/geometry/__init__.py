"""Fundamental forms, curvature and the isothermic construction"""

from .forms import (
    CurvatureData, FundamentalData, alpha_terms, curvature, fundamental,
    is_umbilic, normal_curvature, shape_operator,
)
from .isothermic import (
    AlphaGradient, ExistenceFields, FrameAngle, FrameVectors,
    alpha, alpha_gradient, chart_rhs, existence_fields, existence_residual,
    existence_residual_special, frames, k_rhs, select_special_case,
)

__all__ = [
    'CurvatureData', 'FundamentalData', 'alpha_terms', 'curvature', 'fundamental',
    'is_umbilic', 'normal_curvature', 'shape_operator',
    'AlphaGradient', 'ExistenceFields', 'FrameAngle', 'FrameVectors',
    'alpha', 'alpha_gradient', 'chart_rhs', 'existence_fields', 'existence_residual',
    'existence_residual_special', 'frames', 'k_rhs', 'select_special_case',
]
