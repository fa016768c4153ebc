"""
Manufactured solutions, source synthesis and the finite-difference oracle.
"""

from acflow.mms.cases import ManufacturedCase, builtin_cases, case_names, get_case
from acflow.mms.oracle import OracleReport, fd_momentum_source, sample_points, validate_case
from acflow.mms.sources import (
    levelset_source_function, momentum_source_function, source_levelset, source_momentum,
)

__all__ = [
    'ManufacturedCase', 'builtin_cases', 'case_names', 'get_case',
    'source_momentum', 'source_levelset', 'momentum_source_function', 'levelset_source_function',
    'OracleReport', 'validate_case', 'sample_points', 'fd_momentum_source',
]
