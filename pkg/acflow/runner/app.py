"""
acflow command-line application.
Registers the subcommands and maps errors to exit codes.
"""

import argparse
import logging
import sys

from acflow import __version__
from acflow.config.app_config import configure_logging, print_config
from acflow.core.exceptions import AcflowError, ConfigError, InvalidParameterError, NumericalError, StepError
from acflow.runner.commands import COMMANDS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_error_handlers = {}


def errorhandler(exception_type):
    """Register a handler returning the exit code for an exception type."""
    def decorator(function):
        _error_handlers[exception_type] = function
        return function
    return decorator


@errorhandler(ConfigError)
def config_error(error):
    print(f"Configuration error: {error}", file=sys.stderr)
    return EXIT_CONFIG


@errorhandler(InvalidParameterError)
def invalid_parameter(error):
    print(f"Invalid parameter: {error}", file=sys.stderr)
    return EXIT_CONFIG


@errorhandler(StepError)
def step_failed(error):
    print(f"Simulation failed at step {error.step_index} ({error.stage}): {error.cause}", file=sys.stderr)
    return EXIT_NUMERICAL


@errorhandler(NumericalError)
def numerical_error(error):
    print(f"Numerical failure: {error}", file=sys.stderr)
    return EXIT_NUMERICAL


@errorhandler(AcflowError)
def acflow_error(error):
    print(f"Error: {error}", file=sys.stderr)
    return EXIT_NUMERICAL


def handle_error(error: Exception) -> int:
    """Dispatch to the handler of the most specific registered base class."""
    for cls in type(error).__mro__:
        if cls in _error_handlers:
            return _error_handlers[cls](error)
    raise error


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='acflow',
        description='Artificial compressibility solver for variable-density incompressible flow',
    )
    parser.add_argument('--version', action='version', version=f'acflow {__version__}')
    parser.add_argument('--log-level', default=None, help='overrides LOG_LEVEL')
    parser.add_argument('--quiet', action='store_true', help='skip the configuration banner')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(level=args.log_level)
    if args.command in ('run', 'converge') and not args.quiet:
        print_config()

    try:
        return args.handler(args)
    except AcflowError as e:
        logger.debug(f"Command '{args.command}' failed", exc_info=True)
        return handle_error(e)
