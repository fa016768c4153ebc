"""
Run configuration.

A run is described by a JSON document validated with pydantic. Presets fill in
the mesh-size list and final time the same way the environment classes of a
web app fill in their settings.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from acflow.config.app_config import OUTPUT_DIR
from acflow.config.constants import (
    DEFAULT_C_COMP, DEFAULT_C_VISC, DEFAULT_GRAD_FLOOR, DEFAULT_LAMBDA, DESK_H_LIST, FULL_H_LIST,
)
from acflow.core.exceptions import ConfigError
from acflow.mms.cases import case_names

logger = logging.getLogger(__name__)


class TauRule(BaseModel):
    """tau = h / c, or one explicit value per mesh level."""

    model_config = ConfigDict(extra='forbid')

    rule: Literal['ratio', 'list'] = 'ratio'
    c: float = Field(default=2.0, gt=0.0)
    values: Optional[List[float]] = None

    @model_validator(mode='after')
    def check_values(self):
        if self.rule == 'list':
            if not self.values:
                raise ValueError("rule 'list' needs a non-empty 'values' list")
            if any(not v > 0.0 for v in self.values):
                raise ValueError("time steps must be positive")
        return self

    def for_level(self, h: float, level: int) -> float:
        if self.rule == 'ratio':
            return h / self.c
        return self.values[level]


class RunConfig(BaseModel):
    """One simulation or a convergence study of a builtin case."""

    model_config = ConfigDict(extra='forbid')

    case: str
    description: str = ""
    variant: Literal['semi_implicit', 'explicit'] = 'semi_implicit'
    preset: Optional[Literal['desk', 'full', 'testing']] = None
    h_list: Optional[List[float]] = None
    tau: TauRule = Field(default_factory=TauRule)
    t_final: Optional[float] = Field(default=None, gt=0.0)
    lambda_user: float = Field(default=DEFAULT_LAMBDA, gt=0.0)
    c_visc: float = Field(default=DEFAULT_C_VISC, ge=0.0)
    c_comp: float = Field(default=DEFAULT_C_COMP, ge=0.0)
    grad_floor: float = Field(default=DEFAULT_GRAD_FLOOR, gt=0.0)
    levelset_bc: Literal['dirichlet_exact', 'natural'] = 'dirichlet_exact'
    grad_div_implicit_coef: Literal['lambda_bar', 'lambda_eff'] = 'lambda_bar'
    single_diffusion_factor: bool = False
    solver: Literal['direct', 'cg', 'auto'] = 'direct'
    output_dir: str = OUTPUT_DIR
    seed: int = 0
    plot: bool = True

    @field_validator('case')
    @classmethod
    def check_case(cls, value):
        if value not in case_names():
            raise ValueError(f"unknown case '{value}', expected one of {case_names()}")
        return value

    @field_validator('h_list')
    @classmethod
    def check_h_list(cls, value):
        if value is None:
            return value
        if not value:
            raise ValueError("h_list must not be empty")
        if any(not h > 0.0 for h in value):
            raise ValueError("mesh sizes must be positive")
        if any(b >= a for a, b in zip(value, value[1:])):
            raise ValueError("h_list must be strictly decreasing")
        return value

    @model_validator(mode='after')
    def apply_preset(self):
        preset = PRESETS.get(self.preset or 'desk')
        if self.h_list is None:
            self.h_list = list(preset['h_list'])
        if self.t_final is None and preset.get('t_final') is not None:
            self.t_final = preset['t_final']
        if self.tau.rule == 'list' and len(self.tau.values) != len(self.h_list):
            raise ValueError("tau.values needs one entry per mesh level")
        if self.t_final is not None:
            for level, h in enumerate(self.h_list):
                if self.tau.for_level(h, level) > self.t_final:
                    raise ValueError(f"time step of level {level} exceeds t_final")
        return self

    def levels(self, default_t_final: float) -> List[Dict[str, float]]:
        """(h, tau, n_steps, t_final) per level; tau is shrunk so n_steps tau = t_final."""
        t_final = self.t_final if self.t_final is not None else default_t_final
        levels = []
        for level, h in enumerate(self.h_list):
            tau = self.tau.for_level(h, level)
            n_steps = max(1, math.ceil(t_final / tau - 1e-9))
            levels.append({'level': level, 'h': h, 'tau': t_final / n_steps,
                           'n_steps': n_steps, 't_final': t_final})
        return levels


PRESETS = {
    'desk': {'h_list': DESK_H_LIST, 't_final': None},
    'full': {'h_list': FULL_H_LIST, 't_final': None},
    'testing': {'h_list': [0.5, 0.25], 't_final': 0.5},
}


def _field_path(error: Dict[str, Any]) -> str:
    return ".".join(str(part) for part in error.get('loc', ()))


def validate_config(data: Dict[str, Any]) -> RunConfig:
    """Validate a config mapping; failures raise ConfigError with the dotted field path."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(first.get('msg', str(e)), field_path=_field_path(first)) from e


def load_run_config(source: Union[str, Path, Dict[str, Any]]) -> RunConfig:
    """Load a RunConfig from a JSON file path or an already parsed mapping."""
    if isinstance(source, dict):
        return validate_config(source)
    path = Path(source)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON at line {e.lineno}: {e.msg}") from e
    config = validate_config(data)
    logger.info(f"Loaded run config for case '{config.case}' from {path}")
    return config


def dump_config(config: RunConfig, path: Union[str, Path]):
    """Write the validated config (defaults filled in) as JSON."""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(config.model_dump(mode='json'), f, indent=2, sort_keys=True)
