#!/usr/bin/env python3
"""
KahlerLab - numerical verification lab for Kähler geometry identities

Dispatches the command line to the suite-management and run commands.
"""

from __future__ import annotations

import sys
from typing import List

from core import set_suite_enabled
from core.argaparse import build_arg_parser, format_full_help
from core.utils import PREFIX_ERROR, PREFIX_OK

from scripts import (
    # List and display commands
    list_suites,
    inspect_suite,

    # Dependency checker
    require_dependencies,

    # Error handling
    handle_yaml_error,
    print_error_with_suggestion,

    # Run commands
    cmd_identities,
    cmd_spectrum,
    cmd_kuranishi,
    run_main,
)

from test import run_import_self_test


@handle_yaml_error
def _toggle_suites(suite_ids: List[str], enabled: bool) -> int:
    from scripts import check_directory_permissions
    from core.yaml import find_suite_yaml_path

    word = "enabled" if enabled else "disabled"
    for suite_id in suite_ids:
        path = find_suite_yaml_path(suite_id)
        if not check_directory_permissions(path.parent):
            print_error_with_suggestion(PermissionError(f"No write permission for {path.parent}"),
                                        "Check directory permissions", exit_code=0)
            return 1
        set_suite_enabled(suite_id, enabled)
        print(f"{PREFIX_OK}: Suite '{suite_id}' {word}.")
    return 0


def main(argv: List[str]) -> int:
    """Main entrypoint for the application."""
    parser = build_arg_parser()
    # If only -h/--help is requested, print the full help that includes all subcommands
    if argv and all(arg in ("-h", "--help") for arg in argv):
        try:
            print(format_full_help(parser))
        except Exception:
            parser.print_help()
        return 0

    args = parser.parse_args(argv)

    # Check dependencies command
    if args.command == "check":
        try:
            if not run_import_self_test():
                return 1
            from scripts import print_dependency_status
            return 0 if print_dependency_status() else 1
        except Exception as exc:
            print(f"{PREFIX_ERROR} Failed to check dependencies: {exc}", file=sys.stderr)
            return 1

    # Check dependencies before running other commands (except 'check')
    try:
        require_dependencies()
    except SystemExit:
        return 1
    except Exception as exc:
        print(f"{PREFIX_ERROR} Failed to check dependencies: {exc}", file=sys.stderr)
        return 1

    # List command
    if args.command == "list":
        try:
            list_suites(detailed=bool(args.a))
        except Exception as exc:
            print(f"{PREFIX_ERROR} Failed to list suites: {exc}", file=sys.stderr)
            return 1
        return 0

    # Inspect command
    if args.command == "inspect":
        try:
            return 0 if inspect_suite(args.suite) else 2
        except Exception as exc:
            print(f"{PREFIX_ERROR} Failed to inspect '{args.suite}': {exc}", file=sys.stderr)
            return 1

    # Enable / disable commands
    if args.command in ("enable", "disable"):
        try:
            return _toggle_suites(args.suite, args.command == "enable")
        except FileNotFoundError as exc:
            print(f"{PREFIX_ERROR} Failed to {args.command} suites: {exc}", file=sys.stderr)
            return 2
        except Exception as exc:
            print(f"{PREFIX_ERROR} Failed to {args.command} suites: {exc}", file=sys.stderr)
            return 1

    # Identities command
    if args.command == "identities":
        return cmd_identities(args)

    # Spectrum command
    if args.command == "spectrum":
        return cmd_spectrum(args)

    # Kuranishi command
    if args.command == "kuranishi":
        return cmd_kuranishi(args)

    # Run command
    if args.command == "run":
        try:
            return run_main(args)
        except Exception as exc:
            print(f"{PREFIX_ERROR} Failed to run suites: {exc}", file=sys.stderr)
            return 1

    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
