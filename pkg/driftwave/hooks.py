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
"""Callbacks observing a simulation run."""
from __future__ import annotations

__all__: list[str] = ["ErrorHookSig", "RunHooks", "SnapshotHookSig", "StepHookSig"]

import copy
import pathlib
import typing
from collections import abc as collections

if typing.TYPE_CHECKING:
    from . import diagnostics
    from . import time_integration

    _RunHooksT = typing.TypeVar("_RunHooksT", bound="RunHooks")

StepHookSig = collections.Callable[["diagnostics.DiagnosticsRecord", "time_integration.State"], None]
"""Type hint of a step hook.

This is called after every accepted step (and once for the initial state) with
the step's `driftwave.diagnostics.DiagnosticsRecord` and the new
`driftwave.time_integration.State`.
"""

SnapshotHookSig = collections.Callable[[pathlib.Path, "time_integration.State"], None]
"""Type hint of a snapshot hook.

This is called after a snapshot file has been written with its path and the
state it holds.
"""

ErrorHookSig = collections.Callable[[BaseException], None]
"""Type hint of an error hook.

This is called with the exception which ended a run early, after the partial
outputs and manifest have been written and before the exception propagates.
"""


class RunHooks:
    """Collection of optional callbacks triggered during `driftwave.harness.run`.

    Examples
    --------
    ```py
    hooks = RunHooks()

    @hooks.with_on_step
    def log_energy(record: DiagnosticsRecord, state: State) -> None:
        print(record.t, record.energy)

    run(config, hooks=hooks)
    ```
    """

    __slots__ = ("_error", "_snapshot", "_step")

    def __init__(self) -> None:
        self._error: typing.Optional[ErrorHookSig] = None
        self._snapshot: typing.Optional[SnapshotHookSig] = None
        self._step: typing.Optional[StepHookSig] = None

    def __repr__(self) -> str:
        return f"RunHooks <{self._step!r}, {self._snapshot!r}, {self._error!r}>"

    def copy(self: _RunHooksT) -> _RunHooksT:
        """Copy this hook object."""
        return copy.copy(self)

    def set_on_error(self: _RunHooksT, hook: typing.Optional[ErrorHookSig], /) -> _RunHooksT:
        """Set the error hook, returning this object for chaining."""
        self._error = hook
        return self

    def with_on_error(self, hook: ErrorHookSig, /) -> ErrorHookSig:
        """Set the error hook through a decorator call."""
        self.set_on_error(hook)
        return hook

    def set_on_snapshot(self: _RunHooksT, hook: typing.Optional[SnapshotHookSig], /) -> _RunHooksT:
        """Set the snapshot hook, returning this object for chaining."""
        self._snapshot = hook
        return self

    def with_on_snapshot(self, hook: SnapshotHookSig, /) -> SnapshotHookSig:
        """Set the snapshot hook through a decorator call."""
        self.set_on_snapshot(hook)
        return hook

    def set_on_step(self: _RunHooksT, hook: typing.Optional[StepHookSig], /) -> _RunHooksT:
        """Set the step hook, returning this object for chaining."""
        self._step = hook
        return self

    def with_on_step(self, hook: StepHookSig, /) -> StepHookSig:
        """Set the step hook through a decorator call."""
        self.set_on_step(hook)
        return hook

    def trigger_error(self, exception: BaseException, /) -> None:
        """Call the error hook, if set."""
        if self._error:
            self._error(exception)

    def trigger_snapshot(self, path: pathlib.Path, state: time_integration.State, /) -> None:
        """Call the snapshot hook, if set."""
        if self._snapshot:
            self._snapshot(path, state)

    def trigger_step(self, record: diagnostics.DiagnosticsRecord, state: time_integration.State, /) -> None:
        """Call the step hook, if set."""
        if self._step:
            self._step(record, state)
