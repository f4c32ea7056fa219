"""
KahlerLab Core Package

Suite manifests, console helpers and the domain exceptions. The numerical
modules (jets, kahler, constraints, chart, identity_lab, spectral, rational,
kuranishi) and the run plumbing (runconfig, reports) are imported directly
from their modules, since they need numpy and scipy.
"""

from .yaml import (
    load_suite_yaml_by_filename,
    find_suite_yaml_path,
    set_suite_enabled,
    list_suite_manifests,
    list_enabled_suite_ids,
)

from .errors import (
    KahlerLabError,
    ConfigError,
    ShapeError,
    DegreeError,
    SingularInputError,
    NotAMetricError,
    InfeasibleError,
    ObstructionError,
    GaugeError,
    DGLAValidationError,
    ConditioningError,
    ZeroFieldError,
    SolverError,
)

from .utils import (
    color_text,
    format_float,
    pass_label,
    _format_table,
)

__all__ = [
    # YAML operations
    'load_suite_yaml_by_filename',
    'find_suite_yaml_path',
    'set_suite_enabled',
    'list_suite_manifests',
    'list_enabled_suite_ids',

    # Errors
    'KahlerLabError',
    'ConfigError',
    'ShapeError',
    'DegreeError',
    'SingularInputError',
    'NotAMetricError',
    'InfeasibleError',
    'ObstructionError',
    'GaugeError',
    'DGLAValidationError',
    'ConditioningError',
    'ZeroFieldError',
    'SolverError',

    # Utility functions
    'color_text',
    'format_float',
    'pass_label',
    '_format_table',
]
