# -*- coding: utf-8 -*-
# cython: language_level=3
# BSD 3-Clause License
#
# Copyright (c) 2021, The driftwave authors
# All rights reserved.
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# * Redistributions of source code must retain the above copyright notice, this
#   list of conditions and the following disclaimer.
#
# * Redistributions in binary form must reproduce the above copyright notice,
#   this list of conditions and the following disclaimer in the documentation
#   and/or other materials provided with the distribution.
#
# * Neither the name of the copyright holder nor the names of its
#   contributors may be used to endorse or promote products derived from
#   this software without specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.
"""Simulation configuration models and their JSON loader.

Configurations are nested pydantic models with one group per concern. Unknown
keys are rejected at every level and parsed configurations are immutable.
"""
from __future__ import annotations

__all__: list[str] = [
    "DomainConfig",
    "EstimatesConfig",
    "GridConfig",
    "ICConfig",
    "ICParams",
    "ICType",
    "OutputConfig",
    "PhysicsConfig",
    "SimConfig",
    "SolverConfig",
    "SolverMode",
    "TimeConfig",
    "check_config",
    "load_config",
    "override",
    "parse_config",
]

import enum
import json
import math
import pathlib
import typing
from collections import abc as collections

import pydantic

from . import errors
from .hyperbolic_rhs import Nonlinearity
from .spectral_grid import GridSpec
from .time_integration import Centering


class _Group(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class DomainConfig(_Group):
    """The periodic square `[0, L]²`."""

    L: float = pydantic.Field(default=2 * math.pi, gt=0)  # noqa: N815 - domain length


class GridConfig(_Group):
    """The collocation grid."""

    n: int = pydantic.Field(default=32, ge=4)
    dealias_fraction: float = pydantic.Field(default=2 / 3, gt=0, le=1)

    @pydantic.field_validator("n")
    @classmethod
    def _check_even(cls, value: int) -> int:
        if value % 2:
            raise ValueError("grid size must be even")

        return value


class PhysicsConfig(_Group):
    """Physical parameters."""

    k: float = 1.0


class TimeConfig(_Group):
    """Time stepping."""

    dt: float = pydantic.Field(default=1e-3, gt=0)
    T: float = pydantic.Field(default=1.0, ge=0)  # noqa: N815 - horizon


class ICType(str, enum.Enum):
    """Kinds of initial condition."""

    SINGLE_MODE = "single_mode"
    GAUSSIAN_VORTEX = "gaussian_vortex"
    RANDOM_SPECTRUM = "random_spectrum"
    FROM_FILE = "from_file"


class ICParams(_Group):
    """Parameters of the initial condition; each kind reads the subset it needs."""

    amplitude: float = 1e-2
    xi_x: int = 0
    xi_y: int = 1
    width: typing.Optional[float] = pydantic.Field(default=None, gt=0)
    seed: typing.Optional[int] = pydantic.Field(default=None, ge=0)
    decay_exponent: float = 4.0
    path: typing.Optional[pathlib.Path] = None


class ICConfig(_Group):
    """The initial condition."""

    type: ICType = ICType.SINGLE_MODE
    params: ICParams = ICParams()


class SolverMode(str, enum.Enum):
    """Time integrators available to a run."""

    CN = "cn"
    PICARD_GALERKIN = "picard_galerkin"
    RK4 = "rk4"


class SolverConfig(_Group):
    """Solver selection and tolerances."""

    mode: SolverMode = SolverMode.CN
    tol: float = pydantic.Field(default=1e-10, gt=0)
    max_iters: int = pydantic.Field(default=50, ge=1)
    centering: Centering = Centering.PAPER_FORM
    radius: typing.Optional[int] = pydantic.Field(default=None, ge=0)
    nonlinearity: Nonlinearity = Nonlinearity.TRANSFORM


class OutputConfig(_Group):
    """Where and how often outputs are written."""

    dir: pathlib.Path = pathlib.Path("output")
    every: int = pydantic.Field(default=10, ge=1)


class EstimatesConfig(_Group):
    """Constants of the a priori estimates."""

    c_e: float = pydantic.Field(default=1.0, gt=0)
    c_inf: float = pydantic.Field(default=1.0, gt=0)


class SimConfig(_Group):
    """A complete simulation configuration."""

    domain: DomainConfig = DomainConfig()
    grid: GridConfig = GridConfig()
    physics: PhysicsConfig = PhysicsConfig()
    time: TimeConfig = TimeConfig()
    ic: ICConfig = ICConfig()
    solver: SolverConfig = SolverConfig()
    output: OutputConfig = OutputConfig()
    estimates: EstimatesConfig = EstimatesConfig()

    @property
    def radius(self) -> int:
        """Truncation radius `M`, resolving the default to the grid's dealias radius."""
        if self.solver.radius is not None:
            return self.solver.radius

        return self.grid_spec.dealias_radius

    @property
    def grid_spec(self) -> GridSpec:
        """The collocation grid described by the domain and grid groups."""
        return GridSpec(self.domain.L, self.grid.n, dealias_fraction=self.grid.dealias_fraction)


def check_config(config: SimConfig, /) -> SimConfig:
    """Run the checks spanning several fields.

    Returns
    -------
    SimConfig
        The same configuration.

    Raises
    ------
    driftwave.errors.ConfigError
        If the configuration is inconsistent.
    """
    steps = round(config.time.T / config.time.dt)
    if not math.isclose(steps * config.time.dt, config.time.T, rel_tol=1e-9, abs_tol=1e-12):
        raise errors.ConfigError("must be a whole number of time steps", "time.T")

    params = config.ic.params
    if config.ic.type is ICType.RANDOM_SPECTRUM and params.seed is None:
        raise errors.ConfigError("a seed is required for random_spectrum initial conditions", "ic.params.seed")

    if config.ic.type is ICType.FROM_FILE and params.path is None:
        raise errors.ConfigError("a path is required for from_file initial conditions", "ic.params.path")

    nyquist = config.grid.n // 2
    if config.ic.type is ICType.SINGLE_MODE:
        for name in ("xi_x", "xi_y"):
            if abs(getattr(params, name)) >= nyquist:
                raise errors.ConfigError(f"wavenumber must be below {nyquist}", f"ic.params.{name}")

    if config.solver.radius is not None and config.solver.radius > nyquist - 1:
        raise errors.ConfigError(f"radius must not exceed {nyquist - 1}", "solver.radius")

    dealias = config.grid_spec.dealias_radius
    if (
        config.solver.nonlinearity is Nonlinearity.TRANSFORM
        and config.solver.mode is not SolverMode.PICARD_GALERKIN
        and config.radius > dealias
    ):
        raise errors.ConfigError(f"the transform nonlinearity needs a radius of at most {dealias}", "solver.radius")

    if config.solver.nonlinearity is Nonlinearity.ORACLE and config.radius > 8:
        raise errors.ConfigError("the oracle nonlinearity needs a radius of at most 8", "solver.radius")

    return config


def parse_config(data: collections.Mapping[str, typing.Any], /) -> SimConfig:
    """Validate a configuration mapping.

    Raises
    ------
    driftwave.errors.ConfigError
        If validation fails; `field` is the dotted location of the first error.
    """
    try:
        config = SimConfig.model_validate(data)

    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        raise errors.ConfigError(first["msg"], field) from exc

    return check_config(config)


def load_config(path: typing.Union[str, pathlib.Path], /) -> SimConfig:
    """Load and validate a JSON configuration file.

    Raises
    ------
    driftwave.errors.ConfigError
        If the file can't be read, isn't JSON or fails validation.
    """
    path = pathlib.Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))

    except OSError as exc:
        raise errors.ConfigError(f"couldn't read {path}: {exc.strerror}", None) from exc

    except json.JSONDecodeError as exc:
        raise errors.ConfigError(f"{path} isn't valid JSON: {exc.msg} (line {exc.lineno})", None) from exc

    if not isinstance(data, dict):
        raise errors.ConfigError(f"{path} must hold a JSON object", None)

    return parse_config(data)


def override(config: SimConfig, field: str, value: typing.Any, /) -> SimConfig:
    """Copy a configuration with one dotted field replaced, re-validating the result.

    Raises
    ------
    driftwave.errors.ConfigError
        If the field doesn't exist or the new value is invalid.
    """
    data = config.model_dump(mode="json")
    *groups, name = field.split(".")
    target = data
    for group in groups:
        target = target.get(group) if isinstance(target, dict) else None
        if not isinstance(target, dict):
            raise errors.ConfigError("unknown configuration group", field)

    if name not in target:
        raise errors.ConfigError("unknown configuration field", field)

    target[name] = value
    return parse_config(data)
