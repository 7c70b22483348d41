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
"""Command line interface (`driftwave <command> ...` or `python -m driftwave`)."""
from __future__ import annotations

__all__: list[str] = ["ExitCodeManager", "build_parser", "main"]

import argparse
import asyncio
import logging
import pathlib
import sys
import types
import typing
from collections import abc as collections

from . import config
from . import diagnostics
from . import errors
from . import harness

if typing.TYPE_CHECKING:
    _ExitCodeManagerT = typing.TypeVar("_ExitCodeManagerT", bound="ExitCodeManager")

_LOGGER: typing.Final[logging.Logger] = logging.getLogger("driftwave.cli")

_Rule = tuple[tuple[type[BaseException], ...], collections.Callable[[BaseException], int]]


class ExitCodeManager:
    """Context manager which turns matching exceptions into process exit codes.

    Other Parameters
    ----------------
    *rules : tuple[collections.abc.Iterable[type[BaseException]], collections.abc.Callable[[BaseException], int]]
        Rules to initiate this manager with.

        These are each a 2-length tuple where tuple[0] is an iterable of the
        exception types the rule applies to and tuple[1] is a callback which is
        called with the matching exception and returns the exit code. Rules
        are tried in the order they were added.

    Examples
    --------
    ```py
    manager = ExitCodeManager(((ConfigError,), lambda _: 2)).with_rule((StudyError,), lambda _: 4)
    with manager:
        converge_time(cfg, [1e-3])

    sys.exit(manager.code)
    ```
    """

    __slots__ = ("_rules", "code")

    def __init__(
        self,
        *rules: tuple[collections.Iterable[type[BaseException]], collections.Callable[[BaseException], int]],
    ) -> None:
        self._rules: list[_Rule] = [(tuple(exceptions), callback) for exceptions, callback in rules]
        self.code = 0
        """Exit code of the last exception caught, `0` if none was."""

    def __enter__(self: _ExitCodeManagerT) -> _ExitCodeManagerT:
        return self

    def __exit__(
        self,
        exception_type: typing.Optional[type[BaseException]],
        exception: typing.Optional[BaseException],
        exception_traceback: typing.Optional[types.TracebackType],
    ) -> typing.Optional[bool]:
        if exception is None:
            return None

        code = self.code_for(exception)
        if code is None:
            return None

        self.code = code
        return True

    def code_for(self, exception: BaseException, /) -> typing.Optional[int]:
        """Exit code for an exception, `None` if no rule matches it."""
        for exceptions, callback in self._rules:
            if isinstance(exception, exceptions):
                return callback(exception)

        return None

    def with_rule(
        self: _ExitCodeManagerT,
        exceptions: collections.Iterable[type[BaseException]],
        result: collections.Callable[[BaseException], int],
        /,
    ) -> _ExitCodeManagerT:
        """Add a rule to this manager, returning it for chaining."""
        self._rules.append((tuple(exceptions), result))
        return self


def _report(code: int, /) -> collections.Callable[[BaseException], int]:
    def callback(exception: BaseException, /) -> int:
        _LOGGER.error("%s: %s", type(exception).__name__, exception)
        return code

    return callback


def _echo(text: str, /) -> None:
    sys.stdout.write(text + "\n")


def _default_manager() -> ExitCodeManager:
    return ExitCodeManager(
        ((errors.ConfigError, errors.SnapshotError), _report(2)),
        ((errors.NonConvergenceError, errors.DivergenceError), _report(3)),
        ((errors.StudyError,), _report(4)),
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser of the command line interface."""
    parser = argparse.ArgumentParser(prog="driftwave", description="Spectral Hasegawa-Mima drift-wave simulator.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a configuration and write its outputs")
    run.add_argument("config", type=pathlib.Path)

    window = commands.add_parser("window", help="evaluate the existence window of the initial data")
    window.add_argument("config", type=pathlib.Path)
    window.add_argument(
        "--variant", choices=[variant.value for variant in diagnostics.WindowVariant], default="H3"
    )

    converge_time = commands.add_parser("converge-time", help="observe the temporal convergence order")
    converge_time.add_argument("config", type=pathlib.Path)
    converge_time.add_argument("--taus", type=float, nargs="+", required=True)

    converge_space = commands.add_parser("converge-space", help="observe spatial convergence")
    converge_space.add_argument("config", type=pathlib.Path)
    converge_space.add_argument("--ns", type=int, nargs="+", required=True)
    converge_space.add_argument("--reference-n", type=int, default=None)

    dispersion = commands.add_parser("dispersion", help="measure a single mode's frequency")
    dispersion.add_argument("config", type=pathlib.Path)

    sweep = commands.add_parser("sweep", help="run every configuration in a directory concurrently")
    sweep.add_argument("directory", type=pathlib.Path)
    sweep.add_argument("--workers", type=int, default=None)
    return parser


def _run_command(arguments: argparse.Namespace, manager: ExitCodeManager, /) -> int:
    command: str = arguments.command
    if command == "sweep":
        results = asyncio.run(harness.sweep(arguments.directory, max_workers=arguments.workers))
        code = 0
        for result in results:
            if result.error is None:
                assert result.report is not None
                _echo(f"{result.path.name}: complete in {result.report.wall_time:.3f}s")
                continue

            _echo(f"{result.path.name}: failed ({type(result.error).__name__}: {result.error})")
            failure = manager.code_for(result.error)
            if failure is None:
                raise result.error

            code = max(code, failure)

        return code

    cfg = config.load_config(arguments.config)
    if command == "run":
        _echo(harness.run(cfg).format())

    elif command == "window":
        report = harness.window(cfg, variant=diagnostics.WindowVariant(arguments.variant))
        _echo(report.format())
        if not report.covers(cfg.time.T):
            _echo(f"WARNING: T={cfg.time.T!r} lies outside the existence window (T_max={report.t_max!r})")

    elif command == "converge-time":
        _echo(harness.converge_time(cfg, arguments.taus).format())

    elif command == "converge-space":
        _echo(harness.converge_space(cfg, arguments.ns, reference_n=arguments.reference_n).format())

    else:
        _echo(harness.dispersion(cfg).format())

    return 0


def main(argv: typing.Optional[collections.Sequence[str]] = None, /) -> int:
    """Entry point of the command line interface.

    Returns
    -------
    int
        The exit code: `0` on success, `2` for configuration or snapshot errors,
        `3` when the solver fails to converge or blows up and `4` for unusable
        convergence studies.
    """
    arguments = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if arguments.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    manager = _default_manager()
    with manager:
        return _run_command(arguments, manager)

    return manager.code
