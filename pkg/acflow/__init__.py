"""
acflow - artificial compressibility solver for incompressible flows with
variable density and viscosity (P2/P1 finite elements, level-set transport).
"""

__version__ = "1.0.0"
