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
"""Exact solver for the elliptic half `-Δu + u = w` of the coupled system.

`I - Δ` is diagonal in the Fourier eigenbasis so the solution map `E` is a
division by `λ(ξ)`; no iterative solver is involved and `w = (I - Δ)u` holds to
machine precision wherever the rest of the package relies on it.
"""
from __future__ import annotations

__all__: list[str] = [
    "DEFAULT_ELLIPTIC_CONSTANT",
    "apply_helmholtz",
    "projection_commutes",
    "regularity_identity_check",
    "solve_elliptic",
]

import typing

from . import spectral_grid

if typing.TYPE_CHECKING:
    from .spectral_grid import SpectralField


DEFAULT_ELLIPTIC_CONSTANT: typing.Final[float] = 1.0
"""Default `C_E`; exact for the λ-weighted norms where `⦀E(w)⦀_{m+2} = ⦀w⦀_m`."""


def solve_elliptic(w: SpectralField, /) -> SpectralField:
    """Solve `-Δu + u = w`, i.e. `u(ξ) = w(ξ) / λ(ξ)` for every mode."""
    return spectral_grid.SpectralField.from_owned(w.grid, w.coeffs / w.grid.eigenvalues)


def apply_helmholtz(u: SpectralField, /) -> SpectralField:
    """Apply `I - Δ`, i.e. `w(ξ) = λ(ξ) u(ξ)` for every mode."""
    return spectral_grid.SpectralField.from_owned(u.grid, u.coeffs * u.grid.eigenvalues)


def regularity_identity_check(w: SpectralField, m: int, /) -> tuple[float, float]:
    """Evaluate both sides of the regularity identity `⦀E(w)⦀_{m+2} = ⦀w⦀_m`.

    Parameters
    ----------
    w : SpectralField
        Right-hand side of the elliptic equation.
    m : int
        Sobolev index, one of `0`, `1`, `2` or `3`.

    Returns
    -------
    tuple[float, float]
        `(⦀solve_elliptic(w)⦀_{m+2}, ⦀w⦀_m)`; the caller decides how close they must be.

    Raises
    ------
    ValueError
        If `m` is outside `0..3`.
    """
    if m not in (0, 1, 2, 3):
        raise ValueError("Regularity index must be one of 0, 1, 2 or 3")

    u = solve_elliptic(w)
    return spectral_grid.sobolev_norm(u, m + 2), spectral_grid.sobolev_norm(w, m)


def projection_commutes(u: SpectralField, radius: int, /) -> float:
    """L² size of `P_N[(I - Δ)u] - (I - Δ)P_N u`, zero to round-off."""
    left = spectral_grid.project(apply_helmholtz(u), radius)
    right = apply_helmholtz(spectral_grid.project(u, radius))
    return spectral_grid.sobolev_norm(left - right, 0)
