"""
KahlerLab scripts package.

This package contains the command scripts for the KahlerLab verification lab.
"""

from .list import (
    list_suites,
    summarize_params,
)

from .inspect import (
    inspect_suite
)

from .file_ops import (
    report_name,
    resolve_output_path,
    ensure_output_dir,
    emit_report,
    emit_csv,
)

from .check import (
    check_all_dependencies,
    check_python_dependencies,
    check_optional_dependencies,
    print_dependency_status,
    get_installation_instructions,
    require_dependencies
)

from .error_handlers import (
    handle_yaml_error,
    handle_numeric_error,
    exit_code_for,
    describe_error,
    print_error_with_suggestion,
    check_directory_permissions
)

from .identities import (
    cmd_identities,
    execute_identities,
    run_identities,
    summarize_identities,
    map_tasks
)

from .spectrum import (
    cmd_spectrum,
    execute_spectrum,
    run_spectrum
)

from .kuranishi_cmd import (
    cmd_kuranishi,
    execute_kuranishi,
    solve_dgla
)

from .run import (
    run_main,
    run_suite,
    combine_exit_codes
)

__all__ = [
    # List commands
    'list_suites',
    'summarize_params',

    # Display commands
    'inspect_suite',

    # File operations
    'report_name',
    'resolve_output_path',
    'ensure_output_dir',
    'emit_report',
    'emit_csv',

    # Dependency checker
    'check_all_dependencies',
    'check_python_dependencies',
    'check_optional_dependencies',
    'print_dependency_status',
    'get_installation_instructions',
    'require_dependencies',

    # Error handlers
    'handle_yaml_error',
    'handle_numeric_error',
    'exit_code_for',
    'describe_error',
    'print_error_with_suggestion',
    'check_directory_permissions',

    # Identities
    'cmd_identities',
    'execute_identities',
    'run_identities',
    'summarize_identities',
    'map_tasks',

    # Spectrum
    'cmd_spectrum',
    'execute_spectrum',
    'run_spectrum',

    # Kuranishi
    'cmd_kuranishi',
    'execute_kuranishi',
    'solve_dgla',

    # Run
    'run_main',
    'run_suite',
    'combine_exit_codes',
]
