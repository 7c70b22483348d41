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
"""The hyperbolic half of the coupled system: `w_t + V(u)·∇w = k u_y`.

Two evaluations of the quadratic term are provided. `advect` forms products on
the collocation grid and truncates them with the 2/3 rule, which for quadratic
terms reproduces the Galerkin truncated convolution exactly. `convolution_oracle`
computes the same Galerkin term by a direct double sum over modes and serves as
an independent reference on small truncations.
"""
from __future__ import annotations

__all__: list[str] = [
    "GalerkinBasis",
    "GalerkinSystem",
    "Nonlinearity",
    "ORACLE_MAX_RADIUS",
    "VelocityField",
    "advect",
    "assemble_galerkin",
    "convolution_oracle",
    "galerkin_basis",
    "nonlinear_term",
    "rhs",
    "velocity",
]

import enum
import functools
import math
import typing

import numpy as np
import numpy.typing as npt

from . import errors
from . import spectral_grid
from .spectral_grid import GridSpec
from .spectral_grid import SpectralField

ORACLE_MAX_RADIUS: typing.Final[int] = 8
"""Largest truncation radius the brute-force convolution oracle accepts."""


class Nonlinearity(str, enum.Enum):
    """How the advective term is evaluated by the time integrators."""

    TRANSFORM = "transform"
    """Collocation products with 2/3-rule dealiasing."""

    ORACLE = "oracle"
    """Exact Galerkin convolution (`convolution_oracle`), small truncations only."""


class VelocityField(typing.NamedTuple):
    """The divergence-free drift velocity `V(u) = (-u_y, u_x)`."""

    vx: SpectralField
    """`-∂_y u`."""

    vy: SpectralField
    """`∂_x u`."""

    def divergence(self) -> SpectralField:
        """`∂_x vx + ∂_y vy`, zero to round-off."""
        return spectral_grid.derivative(self.vx, "x") + spectral_grid.derivative(self.vy, "y")


def velocity(u: SpectralField, /) -> VelocityField:
    """Drift velocity `V(u) = -u_y i + u_x j`."""
    return VelocityField(vx=-spectral_grid.derivative(u, "y"), vy=spectral_grid.derivative(u, "x"))


def _samples(field: SpectralField, /) -> npt.NDArray[np.float64]:
    return spectral_grid.inverse_transform(field).samples


def advect(u: SpectralField, w: SpectralField, /) -> SpectralField:
    """Dealiased `V(u)·∇w = -u_y w_x + u_x w_y` (equivalently `-{w, u}`).

    Raises
    ------
    driftwave.errors.GridMismatchError
        If `u` and `w` live on different grids.
    """
    if u.grid != w.grid:
        raise errors.GridMismatchError(f"Fields live on different grids: {u.grid!r} and {w.grid!r}")

    u_x = _samples(spectral_grid.derivative(u, "x"))
    u_y = _samples(spectral_grid.derivative(u, "y"))
    w_x = _samples(spectral_grid.derivative(w, "x"))
    w_y = _samples(spectral_grid.derivative(w, "y"))
    product = spectral_grid.RealField(u.grid, u_x * w_y - u_y * w_x)
    return spectral_grid.dealias(spectral_grid.forward_transform(product))


def rhs(u: SpectralField, w: SpectralField, k: float, /) -> SpectralField:
    """Right-hand side `k u_y - V(u)·∇w` of the transport equation for `w`."""
    return float(k) * spectral_grid.derivative(u, "y") - advect(u, w)


def _mode_array(grid: GridSpec, radius: int, /) -> npt.NDArray[np.int64]:
    return np.array(spectral_grid.enumerate_modes(grid, radius), dtype=np.int64).reshape(-1, 2)


def convolution_oracle(u: SpectralField, w: SpectralField, radius: int, /) -> SpectralField:
    """Galerkin `P_M[V(P_M u)·∇(P_M w)]` by direct summation over mode pairs.

    No transforms are involved: with `φ_p φ_q = φ_{p+q} / L` the coefficient at
    `r` is `(4π²/L³) Σ_{p+q=r} (p_y q_x - p_x q_y) û_p ŵ_q`. Inputs are read
    through `P_M`.

    Raises
    ------
    driftwave.errors.OracleSizeError
        If `radius` exceeds `ORACLE_MAX_RADIUS` or reaches the grid's Nyquist wavenumber.
    driftwave.errors.GridMismatchError
        If `u` and `w` live on different grids.
    """
    grid = u.grid
    if w.grid != grid:
        raise errors.GridMismatchError(f"Fields live on different grids: {u.grid!r} and {w.grid!r}")

    if radius > ORACLE_MAX_RADIUS or radius >= grid.nyquist:
        raise errors.OracleSizeError(
            f"Oracle radius must be at most {min(ORACLE_MAX_RADIUS, grid.nyquist - 1)}, got {radius}", radius
        )

    if radius < 0:
        raise ValueError("Truncation radius must be non-negative")

    modes = _mode_array(grid, radius)
    rows = modes[:, 0] % grid.n
    columns = modes[:, 1] % grid.n
    u_hat = u.coeffs[rows, columns]
    w_hat = w.coeffs[rows, columns]

    p = modes[:, None, :]
    q = modes[None, :, :]
    weight = (p[..., 1] * q[..., 0] - p[..., 0] * q[..., 1]).astype(np.float64)
    terms = (4.0 * math.pi**2 / grid.length**3) * weight * u_hat[:, None] * w_hat[None, :]
    targets = p + q
    keep = np.max(np.abs(targets), axis=-1) <= radius

    size = 2 * radius + 1
    window = np.zeros((size, size), dtype=np.complex128)
    # np.add.at accumulates sequentially so the summation order is fixed.
    np.add.at(window, (targets[keep][:, 0] + radius, targets[keep][:, 1] + radius), terms[keep])

    coeffs = np.zeros((grid.n, grid.n), dtype=np.complex128)
    wavenumbers = np.arange(-radius, radius + 1) % grid.n
    coeffs[np.ix_(wavenumbers, wavenumbers)] = window
    return SpectralField.from_owned(grid, coeffs)


def nonlinear_term(
    u: SpectralField,
    w: SpectralField,
    /,
    *,
    nonlinearity: Nonlinearity = Nonlinearity.TRANSFORM,
    radius: typing.Optional[int] = None,
) -> SpectralField:
    """Advective term truncated to `E_M` with the requested evaluation strategy.

    Parameters
    ----------
    u : SpectralField
        Field generating the drift velocity.
    w : SpectralField
        Advected field.

    Other Parameters
    ----------------
    nonlinearity : Nonlinearity
        Evaluation strategy. Defaults to `Nonlinearity.TRANSFORM`.
    radius : typing.Optional[int]
        Truncation radius `M`. Defaults to the grid's dealias radius.

    Returns
    -------
    SpectralField
        `P_M[V(u)·∇w]`.
    """
    radius = u.grid.dealias_radius if radius is None else radius
    if nonlinearity is Nonlinearity.ORACLE:
        return convolution_oracle(u, w, radius)

    return spectral_grid.project(advect(u, w), radius)


class GalerkinBasis:
    """Real orthonormal trigonometric basis of `E_M`.

    The zero mode `1/L` comes first, then for every mode `ξ` of the half lattice
    (in λ-shell order) the pair `√2·cos(2πξ·x/L)/L`, `√2·sin(2πξ·x/L)/L`.

    Parameters
    ----------
    grid : GridSpec
        The grid the basis lives on.
    radius : int
        Truncation radius `M`.
    """

    __slots__ = ("_columns", "_grid", "_modes", "_radius", "_rows", "_transform")

    def __init__(self, grid: GridSpec, radius: int, /) -> None:
        modes = _mode_array(grid, radius)
        position = {(int(x), int(y)): index for index, (x, y) in enumerate(modes)}
        transform = np.zeros((len(modes), len(modes)), dtype=np.complex128)
        transform[0, position[(0, 0)]] = 1.0
        row = 1
        root_half = 1.0 / math.sqrt(2.0)
        for x, y in modes:
            if not (x > 0 or (x == 0 and y > 0)):
                continue

            plus = position[(int(x), int(y))]
            minus = position[(-int(x), -int(y))]
            # cos = (φ_ξ + φ_-ξ)/√2 and sin = (φ_ξ - φ_-ξ)/(√2 i)
            transform[row, plus] = root_half
            transform[row, minus] = root_half
            transform[row + 1, plus] = -1j * root_half
            transform[row + 1, minus] = 1j * root_half
            row += 2

        transform.flags.writeable = False
        modes.flags.writeable = False
        self._grid = grid
        self._modes = modes
        self._radius = radius
        self._rows = modes[:, 0] % grid.n
        self._columns = modes[:, 1] % grid.n
        self._transform = transform

    @property
    def dimension(self) -> int:
        """Number of real basis functions, `(2M + 1)²`."""
        return len(self._modes)

    @property
    def grid(self) -> GridSpec:
        """The grid this basis lives on."""
        return self._grid

    @property
    def modes(self) -> npt.NDArray[np.int64]:
        """Complex modes of `E_M` in λ-shell order, shape `(dimension, 2)`."""
        return self._modes

    @property
    def radius(self) -> int:
        """Truncation radius `M`."""
        return self._radius

    @property
    def transform(self) -> npt.NDArray[np.complex128]:
        """Matrix `Q` with `e_j = Σ_p Q[j, p] φ_p`."""
        return self._transform

    def coordinates(self, field: SpectralField, /) -> npt.NDArray[np.float64]:
        """Real coordinates `C_j = ⟨f, e_j⟩` of `P_M f`."""
        values = field.coeffs[self._rows, self._columns]
        return (np.conj(self._transform) @ values).real

    def field(self, coordinates: npt.ArrayLike, /) -> SpectralField:
        """The field `Σ_j C_j e_j`."""
        values = self._transform.T @ np.asarray(coordinates, dtype=np.float64)
        coeffs = np.zeros((self._grid.n, self._grid.n), dtype=np.complex128)
        coeffs[self._rows, self._columns] = values
        return SpectralField.from_owned(self._grid, coeffs)


@functools.lru_cache(maxsize=16)
def galerkin_basis(grid: GridSpec, radius: int, /) -> GalerkinBasis:
    """Cached `GalerkinBasis` for a grid and truncation radius."""
    return GalerkinBasis(grid, radius)


class GalerkinSystem:
    """The spectral ODE system `C' + AᵀC = F` of the transport equation on `E_M`.

    `A[i, j] = ⟨V(u)·∇e_i, e_j⟩` and `F[j] = k⟨u_y, e_j⟩` in the real basis
    `GalerkinBasis`. Testing against `e_j` gives `c_j' + Σ_i A[i, j] c_i = F[j]`;
    `A` is skew-symmetric so this is also `C' = A C + F`.
    """

    __slots__ = ("_basis", "_forcing", "_matrix")

    def __init__(
        self, basis: GalerkinBasis, matrix: npt.NDArray[np.float64], forcing: npt.NDArray[np.float64], /
    ) -> None:
        self._basis = basis
        self._forcing = forcing
        self._matrix = matrix

    @property
    def A(self) -> npt.NDArray[np.float64]:  # noqa: N802 - matrix name
        """Galerkin advection matrix `A[i, j] = ⟨V(u)·∇e_i, e_j⟩`."""
        return self._matrix

    @property
    def F(self) -> npt.NDArray[np.float64]:  # noqa: N802 - vector name
        """Forcing vector `F[j] = k⟨u_y, e_j⟩`."""
        return self._forcing

    @property
    def basis(self) -> GalerkinBasis:
        """The real basis the system is written in."""
        return self._basis

    @property
    def n_modes(self) -> int:
        """Dimension of the real representation of `E_M`."""
        return self._basis.dimension

    def derivative(self, coordinates: npt.NDArray[np.float64], /) -> npt.NDArray[np.float64]:
        """`C' = F - AᵀC`."""
        return self._forcing - self._matrix.T @ coordinates


def assemble_galerkin(u: SpectralField, radius: int, k: float, /) -> GalerkinSystem:
    """Assemble the Galerkin matrix and forcing of the transport equation on `E_M`.

    In the complex basis `⟨V(u)·∇φ_p, φ_q⟩ = -(4π²/L³)(q_x p_y - q_y p_x) û_{q-p}`,
    which is then rotated into the real basis. Coefficients `û_r` outside the
    grid's resolved range count as zero.

    Parameters
    ----------
    u : SpectralField
        Field generating the drift velocity.
    radius : int
        Truncation radius `M`.
    k : float
        Drift parameter.

    Returns
    -------
    GalerkinSystem
        The real skew-symmetric system.
    """
    grid = u.grid
    basis = galerkin_basis(grid, radius)
    modes = basis.modes
    p = modes[:, None, :]
    q = modes[None, :, :]
    offsets = q - p
    resolved = np.max(np.abs(offsets), axis=-1) < grid.nyquist
    u_offsets = np.where(resolved, u.coeffs[offsets[..., 0] % grid.n, offsets[..., 1] % grid.n], 0.0)
    weight = (q[..., 0] * p[..., 1] - q[..., 1] * p[..., 0]).astype(np.float64)
    complex_matrix = -(4.0 * math.pi**2 / grid.length**3) * weight * u_offsets

    transform = basis.transform
    matrix = (transform @ complex_matrix @ transform.conj().T).real

    u_y = spectral_grid.derivative(u, "y")
    forcing = float(k) * basis.coordinates(u_y)
    return GalerkinSystem(basis, np.ascontiguousarray(matrix), forcing)
