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
"""The errors and warnings raised within and by driftwave."""
from __future__ import annotations

__all__: list[str] = [
    "ConfigError",
    "DivergenceError",
    "DriftWaveError",
    "DriftWaveWarning",
    "GridMismatchError",
    "HermitianSymmetryError",
    "NonConvergenceError",
    "OracleSizeError",
    "SnapshotError",
    "StudyError",
    "WindowWarning",
]

import typing

if typing.TYPE_CHECKING:
    import pathlib


class DriftWaveError(Exception):
    """The base class for all errors raised by driftwave."""

    __slots__ = ("message",)

    message: str
    """String message for this error."""

    def __init__(self, message: str, /) -> None:
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return self.message


class DriftWaveWarning(RuntimeWarning):
    """The base class for all warnings raised by driftwave."""

    __slots__ = ()


class WindowWarning(DriftWaveWarning):
    """Warning raised when a time horizon lies outside the guaranteed existence window."""

    __slots__ = ()


class HermitianSymmetryError(DriftWaveError, ValueError):
    """Error raised when a coefficient lattice doesn't represent a real field.

    Parameters
    ----------
    message : str
        String message for this error.
    violation : float
        The largest relative mismatch between `coeff(-xi)` and `conj(coeff(xi))`.
    """

    __slots__ = ("violation",)

    violation: float
    """The largest relative mismatch found between mirrored coefficients."""

    def __init__(self, message: str, violation: float, /) -> None:
        super().__init__(message)
        self.violation = violation


class GridMismatchError(DriftWaveError, ValueError):
    """Error raised when fields defined on different grids are combined."""

    __slots__ = ()


class OracleSizeError(DriftWaveError, ValueError):
    """Error raised when the brute-force convolution oracle is asked for too many modes.

    Parameters
    ----------
    message : str
        String message for this error.
    radius : int
        The truncation radius which was requested.
    """

    __slots__ = ("radius",)

    radius: int
    """The truncation radius which was requested."""

    def __init__(self, message: str, radius: int, /) -> None:
        super().__init__(message)
        self.radius = radius


class NonConvergenceError(DriftWaveError, RuntimeError):
    """Error raised when an iteration hits its cap before meeting its tolerance.

    For the Crank-Nicolson corrector this usually signals a time step which is
    too large, for the Picard construction a horizon or truncation too large
    for the map to contract.

    Parameters
    ----------
    message : str
        String message for this error.
    residual : float
        The last residual reached.
    iterations : int
        How many iterations were performed.
    """

    __slots__ = ("iterations", "residual")

    iterations: int
    """How many iterations were performed before giving up."""

    residual: float
    """The last residual reached."""

    def __init__(self, message: str, residual: float, iterations: int, /) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class DivergenceError(DriftWaveError, ArithmeticError):
    """Error raised when an integrated quantity stops being finite.

    Parameters
    ----------
    message : str
        String message for this error.
    time : float
        The simulation time at which the blow-up was detected.
    """

    __slots__ = ("time",)

    time: float
    """The simulation time at which the blow-up was detected."""

    def __init__(self, message: str, time: float, /) -> None:
        super().__init__(message)
        self.time = time


class ConfigError(DriftWaveError, ValueError):
    """Error raised when a simulation config is invalid.

    Parameters
    ----------
    message : str
        String message for this error.
    field : typing.Optional[str]
        Dotted path of the offending field (e.g. `"ic.params.seed"`), should
        be `None` if the error isn't tied to a single field.
    """

    __slots__ = ("field",)

    field: typing.Optional[str]
    """Dotted path of the field this was raised for.

    .. note::
        This will be `None` if the whole document failed to load.
    """

    def __init__(self, message: str, field: typing.Optional[str], /) -> None:
        super().__init__(message)
        self.field = field

    def __str__(self) -> str:
        if self.field:
            return f"{self.field}: {self.message}"

        return self.message


class SnapshotError(DriftWaveError, ValueError):
    """Error raised when a snapshot file is malformed or fails validation.

    Parameters
    ----------
    message : str
        String message for this error.
    path : typing.Optional[pathlib.Path]
        The file this was raised for, if any.
    """

    __slots__ = ("path",)

    path: typing.Optional[pathlib.Path]
    """The file this was raised for, if any."""

    def __init__(self, message: str, path: typing.Optional[pathlib.Path] = None, /) -> None:
        super().__init__(message)
        self.path = path


class StudyError(DriftWaveError, ValueError):
    """Error raised when a convergence study is set up with unusable resolutions."""

    __slots__ = ()
