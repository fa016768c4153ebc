"""
Level-set transport and material reconstruction.
"""

from acflow.levelset.materials import MaterialLaw, reconstruct_materials
from acflow.levelset.transport import (
    LevelSetParams, LevelSetStepper, artificial_viscosity, compression_flux,
    overshoot, sharp_disc, step_levelset_explicit, step_levelset_semi_implicit,
)

__all__ = [
    'MaterialLaw', 'reconstruct_materials',
    'LevelSetParams', 'LevelSetStepper', 'artificial_viscosity', 'compression_flux',
    'overshoot', 'sharp_disc', 'step_levelset_semi_implicit', 'step_levelset_explicit',
]
