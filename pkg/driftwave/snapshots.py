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
"""Reading and writing `HMSNAP01` binary snapshots.

Layout (all little-endian): the 8 byte magic `HMSNAP01`, then `u32` version,
`f64` L, `u32` n, `f64` t, `f64` k, then `n²` `f64` samples of `u` followed by
`n²` samples of `w`, both row-major with the first index along x.
"""
from __future__ import annotations

__all__: list[str] = [
    "MAGIC",
    "VERSION",
    "Snapshot",
    "SnapshotHeader",
    "load_snapshot",
    "save_snapshot",
    "write_snapshot",
]

import logging
import math
import pathlib
import struct
import typing

import numpy as np
import numpy.typing as npt

from . import elliptic_solver
from . import errors
from . import spectral_grid
from . import time_integration

MAGIC: typing.Final[bytes] = b"HMSNAP01"
VERSION: typing.Final[int] = 1
COUPLING_TOLERANCE: typing.Final[float] = 1e-10
"""Relative tolerance of the `w = (I - Δ)u` check applied on load."""

_HEADER: typing.Final[struct.Struct] = struct.Struct("<8sIdIdd")
_SAMPLE_DTYPE: typing.Final[np.dtype[np.float64]] = np.dtype("<f8")
_LOGGER: typing.Final[logging.Logger] = logging.getLogger("driftwave.snapshots")


class SnapshotHeader(typing.NamedTuple):
    """The fixed-size header of a snapshot."""

    version: int
    length: float
    n: int
    t: float
    k: float


class Snapshot:
    """Physical-space samples of a state as stored on disk.

    Parameters
    ----------
    header : SnapshotHeader
        The header.
    u_samples : numpy.typing.ArrayLike
        `n × n` samples of `u`.
    w_samples : numpy.typing.ArrayLike
        `n × n` samples of `w`.
    """

    __slots__ = ("_header", "_u_samples", "_w_samples")

    def __init__(self, header: SnapshotHeader, u_samples: npt.ArrayLike, w_samples: npt.ArrayLike, /) -> None:
        self._header = header
        self._u_samples = np.ascontiguousarray(u_samples, dtype=_SAMPLE_DTYPE)
        self._w_samples = np.ascontiguousarray(w_samples, dtype=_SAMPLE_DTYPE)

    @classmethod
    def from_state(cls, state: time_integration.State, k: float, /) -> Snapshot:
        """Sample a state on its collocation grid."""
        grid = state.grid
        return cls(
            SnapshotHeader(VERSION, grid.length, grid.n, state.t, float(k)),
            spectral_grid.inverse_transform(state.u).samples,
            spectral_grid.inverse_transform(state.w).samples,
        )

    @property
    def header(self) -> SnapshotHeader:
        """The header."""
        return self._header

    @property
    def u_samples(self) -> npt.NDArray[np.float64]:
        """Samples of `u`."""
        return self._u_samples

    @property
    def w_samples(self) -> npt.NDArray[np.float64]:
        """Samples of `w`."""
        return self._w_samples

    def to_bytes(self) -> bytes:
        """Serialise to the `HMSNAP01` layout."""
        header = self._header
        packed = _HEADER.pack(MAGIC, header.version, header.length, header.n, header.t, header.k)
        return packed + self._u_samples.tobytes(order="C") + self._w_samples.tobytes(order="C")

    def to_state(self, *, dealias_fraction: float = 2.0 / 3.0) -> time_integration.State:
        """Transform back to a spectral state.

        `w` is recomputed as `(I - Δ)u`; the stored `w` has already been checked
        against it on load.
        """
        grid = spectral_grid.GridSpec(self._header.length, self._header.n, dealias_fraction=dealias_fraction)
        u = spectral_grid.forward_transform(spectral_grid.RealField(grid, self._u_samples))
        return time_integration.State.from_u(self._header.t, u)


def write_snapshot(path: typing.Union[str, pathlib.Path], snapshot: Snapshot, /) -> pathlib.Path:
    """Write a snapshot to a file, replacing any existing one."""
    path = pathlib.Path(path)
    path.write_bytes(snapshot.to_bytes())
    _LOGGER.info("Wrote snapshot t=%s to %s", snapshot.header.t, path)
    return path


def save_snapshot(path: typing.Union[str, pathlib.Path], state: time_integration.State, k: float, /) -> pathlib.Path:
    """Sample a state and write it as a snapshot."""
    return write_snapshot(path, Snapshot.from_state(state, k))


def load_snapshot(path: typing.Union[str, pathlib.Path], /) -> Snapshot:
    """Read and validate a snapshot.

    Raises
    ------
    driftwave.errors.SnapshotError
        If the file can't be read, is malformed, holds non-finite samples or
        if `w` isn't `(I - Δ)u` to `COUPLING_TOLERANCE`.
    """
    path = pathlib.Path(path)
    try:
        data = path.read_bytes()

    except OSError as exc:
        raise errors.SnapshotError(f"Couldn't read snapshot: {exc.strerror}", path) from exc

    if len(data) < _HEADER.size:
        raise errors.SnapshotError("Snapshot is truncated", path)

    magic, version, length, n, t, k = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise errors.SnapshotError(f"Bad magic {magic!r}", path)

    if version != VERSION:
        raise errors.SnapshotError(f"Unsupported snapshot version {version}", path)

    if n < 4 or n % 2 or not (math.isfinite(length) and length > 0) or not (math.isfinite(t) and t >= 0):
        raise errors.SnapshotError(f"Invalid header (L={length}, n={n}, t={t})", path)

    if not math.isfinite(k):
        raise errors.SnapshotError("Non-finite drift parameter in header", path)

    expected = _HEADER.size + 2 * n * n * _SAMPLE_DTYPE.itemsize
    if len(data) != expected:
        raise errors.SnapshotError(f"Expected {expected} bytes for n={n}, found {len(data)}", path)

    samples = np.frombuffer(data, dtype=_SAMPLE_DTYPE, offset=_HEADER.size).reshape(2, n, n)
    if not np.all(np.isfinite(samples)):
        raise errors.SnapshotError("Snapshot holds non-finite samples", path)

    snapshot = Snapshot(SnapshotHeader(version, length, n, t, k), samples[0], samples[1])
    grid = spectral_grid.GridSpec(length, n)
    try:
        u = spectral_grid.forward_transform(spectral_grid.RealField(grid, snapshot.u_samples))

    except ValueError as exc:
        raise errors.SnapshotError(str(exc), path) from exc

    w = spectral_grid.inverse_transform(elliptic_solver.apply_helmholtz(u)).samples
    mismatch = float(np.max(np.abs(w - snapshot.w_samples)))
    if mismatch > COUPLING_TOLERANCE * max(float(np.max(np.abs(snapshot.w_samples))), 1.0):
        raise errors.SnapshotError(f"Stored w isn't (I - Δ)u (mismatch {mismatch:.3e})", path)

    return snapshot
