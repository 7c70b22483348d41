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
"""Interfaces of the time steppers used by the run harness."""
from __future__ import annotations

__all__: list[str] = ["StepStats", "Stepper"]

import abc
import typing

if typing.TYPE_CHECKING:
    from . import time_integration


class StepStats(typing.NamedTuple):
    """Solver statistics of the most recent step."""

    iterations: int
    """Number of corrector passes taken (`0` for explicit steppers)."""

    residual: float
    """Final relative residual of the implicit equations (`0.0` for explicit steppers)."""


class Stepper(abc.ABC):
    """Interface of a one-step time integrator of the coupled system.

    Implementations may carry history between calls (such as the predictor's
    previous state) so a stepper instance belongs to exactly one run.
    """

    __slots__ = ()

    @property
    @abc.abstractmethod
    def k(self) -> float:
        """Drift parameter of the equation being integrated."""

    @property
    @abc.abstractmethod
    def last_stats(self) -> StepStats:
        """Statistics of the most recent call to `Stepper.step`.

        Before the first step this reports zero iterations and residual.
        """

    @property
    @abc.abstractmethod
    def tau(self) -> float:
        """The fixed time step."""

    @abc.abstractmethod
    def reset(self) -> None:
        """Forget any history carried between steps."""

    @abc.abstractmethod
    def step(self, state: time_integration.State, /) -> time_integration.State:
        """Advance a state by one time step.

        Parameters
        ----------
        state : driftwave.time_integration.State
            State at time `t`.

        Returns
        -------
        driftwave.time_integration.State
            State at time `t + tau`.

        Raises
        ------
        driftwave.errors.NonConvergenceError
            If an implicit stepper's corrector doesn't converge.
        driftwave.errors.DivergenceError
            If the new state holds non-finite values.
        """
