"""
Command modules; each registers one subcommand on the top-level parser.
"""

from acflow.runner.commands import converge, mesh, run, validate_mms

COMMANDS = [run, converge, mesh, validate_mms]

__all__ = ['COMMANDS']
