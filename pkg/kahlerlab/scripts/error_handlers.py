"""
Error handlers for KahlerLab.

Decorators and helpers that turn library and domain errors into short,
actionable messages and stable exit codes.
"""

import sys
from functools import wraps
from typing import Any, Callable, TypeVar

from core.constants import EXIT_FAILURE, EXIT_INPUT_ERROR
from core.errors import (
    ConditioningError,
    ConfigError,
    DGLAValidationError,
    KahlerLabError,
    SingularInputError,
    SolverError,
)
from core.utils import PREFIX_ERROR

T = TypeVar('T')


def handle_yaml_error(func: Callable[..., T]) -> Callable[..., T]:
    """Decorator to handle YAML parsing errors in suite manifests."""
    @wraps(func)
    def wrapper(*args, **kwargs) -> T:
        try:
            return func(*args, **kwargs)
        except ImportError as e:
            if "yaml" in str(e).lower():
                print(f"{PREFIX_ERROR} PyYAML is not available!")
                print("   Install with: pip install PyYAML")
                sys.exit(EXIT_FAILURE)
            raise
        except Exception as e:
            cause = e.__cause__ or e
            if "yaml" in type(cause).__module__.lower() or "yaml" in type(cause).__name__.lower():
                print(f"{PREFIX_ERROR} Failed to parse suite manifest: {e}")
                print("   Make sure the YAML file is valid and contains no syntax errors")
                sys.exit(EXIT_INPUT_ERROR)
            raise
    return wrapper


def handle_numeric_error(func: Callable[..., T]) -> Callable[..., T]:
    """Decorator re-raising numpy/scipy LinAlgError as a domain error."""
    @wraps(func)
    def wrapper(*args, **kwargs) -> T:
        import numpy as np

        try:
            return func(*args, **kwargs)
        except np.linalg.LinAlgError as e:
            message = str(e)
            if "singular" in message.lower():
                raise SingularInputError(f"Singular matrix: {message}") from e
            if "positive definite" in message.lower():
                raise ConditioningError(f"Mass matrix is not positive definite: {message}") from e
            raise SolverError(f"Linear algebra failure: {message}") from e
    return wrapper


def exit_code_for(error: BaseException) -> int:
    """2 for input/config problems, 1 for everything else."""
    if isinstance(error, (ConfigError, DGLAValidationError, FileNotFoundError)):
        return EXIT_INPUT_ERROR
    return EXIT_FAILURE


def describe_error(error: BaseException) -> str:
    """One line for the console; validation witnesses are listed after the message."""
    text = str(error)
    if isinstance(error, DGLAValidationError) and error.witnesses:
        first = error.witnesses[0]
        text += f" (e.g. {first.get('axiom')} on {', '.join(first.get('witness', []))})"
    if isinstance(error, KahlerLabError) and not isinstance(error, ConfigError):
        text = f"{type(error).__name__}: {text}"
    return text


def print_error_with_suggestion(error: Exception,
                                suggestion: str = "",
                                exit_code: int = EXIT_FAILURE) -> None:
    """
    Print an error along with a helpful suggestion.

    Args:
        error: The exception raised
        suggestion: Helpful suggestion for the user
        exit_code: Program exit code (0 returns instead of exiting)
    """
    print(f"{PREFIX_ERROR} {describe_error(error)}", file=sys.stderr)
    if suggestion:
        print(f"   {suggestion}", file=sys.stderr)
    if exit_code != 0:
        sys.exit(exit_code)


def check_directory_permissions(dir_path: Any) -> bool:
    """Check if directory is accessible and writable."""
    import os
    from pathlib import Path

    try:
        path = Path(dir_path)
        if not path.exists() or not path.is_dir():
            return False
        return os.access(path, os.R_OK | os.W_OK)
    except Exception:
        return False
