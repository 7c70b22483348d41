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
"""Collection of utility functions used across the package."""
from __future__ import annotations

__all__: list[str] = ["THREADS_ENV_VAR", "gather_in_threads", "observed_orders", "thread_cap"]

import asyncio
import concurrent.futures
import math
import os
import typing
from collections import abc as collections

from . import errors

THREADS_ENV_VAR: typing.Final[str] = "HM_THREADS"
"""Environment variable capping worker threads."""

_ValueT = typing.TypeVar("_ValueT")


def thread_cap(environ: typing.Optional[collections.Mapping[str, str]] = None, /) -> typing.Optional[int]:
    """Read the worker cap from `HM_THREADS`.

    Parameters
    ----------
    environ : typing.Optional[collections.abc.Mapping[str, str]]
        Environment to read; defaults to `os.environ`.

    Returns
    -------
    typing.Optional[int]
        The cap or `None` if the variable is unset or empty.

    Raises
    ------
    driftwave.errors.ConfigError
        If the variable isn't a positive integer.
    """
    raw = (os.environ if environ is None else environ).get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return None

    try:
        value = int(raw)

    except ValueError:
        value = 0

    if value < 1:
        raise errors.ConfigError(f"expected a positive integer, got {raw!r}", THREADS_ENV_VAR)

    return value


def observed_orders(steps: collections.Sequence[float], errors_: collections.Sequence[float], /) -> list[float]:
    """Observed convergence orders between consecutive resolutions.

    The order between resolutions `i` and `i + 1` is
    `log(e_i / e_{i+1}) / log(h_i / h_{i+1})`; a pair with a zero error gives `inf`.

    Raises
    ------
    ValueError
        If the sequences differ in length.
    """
    if len(steps) != len(errors_):
        raise ValueError("Expected one error per resolution")

    orders: list[float] = []
    for (step, error), (next_step, next_error) in zip(zip(steps, errors_), zip(steps[1:], errors_[1:])):
        if error == 0.0 or next_error == 0.0:
            orders.append(math.inf)
            continue

        orders.append(math.log(error / next_error) / math.log(step / next_step))

    return orders


async def gather_in_threads(
    callbacks: collections.Iterable[collections.Callable[[], _ValueT]],
    /,
    *,
    max_workers: typing.Optional[int] = None,
    return_exceptions: bool = False,
) -> list[typing.Union[_ValueT, BaseException]]:
    """Run blocking callbacks concurrently on a thread pool.

    Parameters
    ----------
    callbacks : collections.abc.Iterable[collections.abc.Callable[[], _ValueT]]
        Zero-argument callbacks to run.

    Other Parameters
    ----------------
    max_workers : typing.Optional[int]
        Size of the thread pool; defaults to `thread_cap()` and then to the
        executor's own default.
    return_exceptions : bool
        Whether raised exceptions are returned in place of results rather than
        propagated. Defaults to `False`.

    Returns
    -------
    list[typing.Union[_ValueT, BaseException]]
        Results in the order the callbacks were given.
    """
    loop = asyncio.get_running_loop()
    max_workers = thread_cap() if max_workers is None else max_workers
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        return await asyncio.gather(
            *(loop.run_in_executor(executor, callback) for callback in callbacks), return_exceptions=return_exceptions
        )
