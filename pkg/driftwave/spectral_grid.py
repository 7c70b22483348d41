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
"""Periodic square domain, its Fourier eigenbasis and the transforms between representations.

Fields are stored against the L²-orthonormal eigenbasis of `I - Δ`

    φ_ξ(x) = exp(2πi x·ξ / L) / L,     λ(ξ) = 1 + 4π²|ξ|² / L²

so Parseval and the λ-weighted Sobolev norms hold without extra scale factors.
Coefficient lattices use the FFT layout: axis 0 is `x`, axis 1 is `y` and
integer wavenumbers follow `fftfreq` ordering.
"""
from __future__ import annotations

__all__: list[str] = [
    "Axis",
    "GridSpec",
    "HERMITIAN_TOLERANCE",
    "RealField",
    "SpectralField",
    "WaveIndex",
    "collocation_points",
    "dealias",
    "derivative",
    "eigenvalue",
    "enumerate_modes",
    "forward_transform",
    "hermitian_violation",
    "inverse_transform",
    "l2_inner",
    "linf_norm",
    "max_eigenvalue",
    "project",
    "quadrature_norm",
    "resample",
    "sobolev_norm",
    "sup_norm",
]

import functools
import math
import typing

import numpy as np
import numpy.typing as npt
from scipy import fft as sp_fft

from . import errors
from . import utilities

Axis = typing.Literal["x", "y"]
"""Name of a spatial axis; `"x"` is array axis 0 and `"y"` is array axis 1."""

HERMITIAN_TOLERANCE: typing.Final[float] = 1e-12
"""Largest relative asymmetry (and imaginary residue) tolerated when leaving spectral space."""

ComplexArray = npt.NDArray[np.complex128]
FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


class WaveIndex(typing.NamedTuple):
    """Integer wave vector `ξ = (ξ_x, ξ_y)` labelling one basis function."""

    xi_x: int
    """Wavenumber along `x`."""

    xi_y: int
    """Wavenumber along `y`."""

    def __neg__(self) -> WaveIndex:
        return WaveIndex(-self.xi_x, -self.xi_y)

    @property
    def squared_magnitude(self) -> int:
        """`|ξ|²`."""
        return self.xi_x * self.xi_x + self.xi_y * self.xi_y

    def eigenvalue(self, length: float, /) -> float:
        """Eigenvalue of `I - Δ` for this mode on a domain of side `length`."""
        return eigenvalue(self, length)


def eigenvalue(xi: WaveIndex, length: float, /) -> float:
    """Eigenvalue `λ(ξ) = 1 + 4π²|ξ|²/L²` of `I - Δ` for a basis mode.

    Parameters
    ----------
    xi : WaveIndex
        The mode's wave vector.
    length : float
        Side length of the periodic square.

    Returns
    -------
    float
        The eigenvalue, always `>= 1` with equality only for the zero mode.

    Raises
    ------
    ValueError
        If `length` isn't positive.
    """
    if not length > 0:
        raise ValueError("Domain length must be positive")

    return 1.0 + 4.0 * math.pi**2 * (xi[0] ** 2 + xi[1] ** 2) / length**2


@functools.lru_cache(maxsize=32)
def _lattice(n: int, /) -> tuple[IntArray, IntArray]:
    wavenumbers = np.rint(np.fft.fftfreq(n, 1.0 / n)).astype(np.int64)
    kx, ky = np.meshgrid(wavenumbers, wavenumbers, indexing="ij")
    kx.flags.writeable = False
    ky.flags.writeable = False
    return kx, ky


@functools.lru_cache(maxsize=32)
def _eigenvalue_lattice(length: float, n: int, /) -> FloatArray:
    kx, ky = _lattice(n)
    result = 1.0 + 4.0 * np.pi**2 * (kx**2 + ky**2).astype(np.float64) / length**2
    result.flags.writeable = False
    return result


class GridSpec:
    """The periodic square `(0, L) × (0, L)` sampled on a uniform `n × n` collocation grid.

    Parameters
    ----------
    length : float
        Side length `L` of the domain.
    n : int
        Collocation points per dimension, even and at least 4.

    Other Parameters
    ----------------
    dealias_fraction : float
        Fraction of the resolved wavenumber range kept after forming products.
        Defaults to `2/3` (Orszag's rule).

    Raises
    ------
    ValueError
        If any of the above constraints is violated.
    """

    __slots__ = ("_dealias_fraction", "_length", "_n")

    def __init__(self, length: float, n: int, /, *, dealias_fraction: float = 2.0 / 3.0) -> None:
        if not (length > 0 and math.isfinite(length)):
            raise ValueError("Domain length must be a positive finite number")

        if n < 4 or n % 2:
            raise ValueError("Grid size must be an even integer of at least 4")

        if not 0 < dealias_fraction <= 1:
            raise ValueError("Dealias fraction must be in (0, 1]")

        self._dealias_fraction = float(dealias_fraction)
        self._length = float(length)
        self._n = int(n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridSpec):
            return NotImplemented

        return (self._length, self._n, self._dealias_fraction) == (
            other._length,
            other._n,
            other._dealias_fraction,
        )

    def __hash__(self) -> int:
        return hash((self._length, self._n, self._dealias_fraction))

    def __repr__(self) -> str:
        return f"GridSpec(length={self._length!r}, n={self._n!r}, dealias_fraction={self._dealias_fraction!r})"

    @property
    def dealias_fraction(self) -> float:
        """Fraction of the resolved wavenumber range kept after products."""
        return self._dealias_fraction

    @property
    def dealias_radius(self) -> int:
        """Largest wavenumber kept by `dealias`.

        This is the largest integer strictly below `dealias_fraction * n / 2`,
        which for the 2/3 rule guarantees `3 * radius < n` so that quadratic
        products are alias free on the retained modes.
        """
        return max(math.ceil(round(self._dealias_fraction * self._n / 2, 9)) - 1, 0)

    @property
    def length(self) -> float:
        """Side length `L` of the periodic square."""
        return self._length

    @property
    def n(self) -> int:
        """Collocation points per dimension."""
        return self._n

    @property
    def nyquist(self) -> int:
        """The Nyquist wavenumber `n / 2`."""
        return self._n // 2

    @property
    def spacing(self) -> float:
        """Distance between neighbouring collocation points."""
        return self._length / self._n

    @property
    def eigenvalues(self) -> FloatArray:
        """Read-only lattice of `λ(ξ)` in FFT layout."""
        return _eigenvalue_lattice(self._length, self._n)

    @property
    def wavenumbers(self) -> tuple[IntArray, IntArray]:
        """Read-only integer lattices `(ξ_x, ξ_y)` in FFT layout."""
        return _lattice(self._n)

    def index_of(self, xi: WaveIndex, /) -> tuple[int, int]:
        """Array position of a wave vector within this grid's coefficient lattice."""
        if max(abs(xi[0]), abs(xi[1])) > self.nyquist:
            raise ValueError(f"Mode {tuple(xi)} isn't resolved on a grid of size {self._n}")

        return xi[0] % self._n, xi[1] % self._n

    def truncation_mask(self, radius: int, /) -> npt.NDArray[np.bool_]:
        """Boolean lattice of the modes with `max(|ξ_x|, |ξ_y|) <= radius`."""
        kx, ky = self.wavenumbers
        return np.maximum(np.abs(kx), np.abs(ky)) <= radius


def _reflect(coeffs: ComplexArray, /) -> ComplexArray:
    # index k -> (-k) mod n along both axes.
    return np.roll(np.flip(coeffs, axis=(0, 1)), 1, axis=(0, 1))


def hermitian_violation(coeffs: ComplexArray, /) -> float:
    """Largest relative mismatch between `coeff(-ξ)` and `conj(coeff(ξ))`.

    Parameters
    ----------
    coeffs : numpy.ndarray
        Square coefficient lattice in FFT layout.

    Returns
    -------
    float
        `max |c(-ξ) - conj(c(ξ))| / max |c|`, or `0` for an all zero lattice.
    """
    scale = float(np.max(np.abs(coeffs), initial=0.0))
    if scale == 0.0:
        return 0.0

    return float(np.max(np.abs(_reflect(coeffs) - np.conj(coeffs)))) / scale


class SpectralField:
    """A real periodic field stored as Hermitian-symmetric coefficients against `φ_ξ`.

    Instances are immutable; the coefficient array is read-only.

    Parameters
    ----------
    grid : GridSpec
        The grid this field lives on.
    coeffs : numpy.typing.ArrayLike
        An `n × n` complex lattice in FFT layout. This is copied.

    Raises
    ------
    ValueError
        If the array's shape doesn't match the grid or it holds non-finite values.
    """

    __slots__ = ("_coeffs", "_grid")

    def __init__(self, grid: GridSpec, coeffs: npt.ArrayLike, /) -> None:
        array = np.array(coeffs, dtype=np.complex128, copy=True)
        if array.shape != (grid.n, grid.n):
            raise ValueError(f"Expected a {grid.n}x{grid.n} coefficient lattice, got {array.shape}")

        if not np.all(np.isfinite(array)):
            raise ValueError("Spectral coefficients must be finite")

        array.flags.writeable = False
        self._coeffs = array
        self._grid = grid

    @classmethod
    def from_owned(cls, grid: GridSpec, coeffs: ComplexArray, /) -> SpectralField:
        """Wrap a freshly computed lattice without copying or validating it.

        The array is marked read-only; callers must not hold other references
        they intend to write through.
        """
        self = cls.__new__(cls)
        coeffs.flags.writeable = False
        self._coeffs = coeffs
        self._grid = grid
        return self

    @classmethod
    def zeros(cls, grid: GridSpec, /) -> SpectralField:
        """Create the zero field on a grid."""
        return cls.from_owned(grid, np.zeros((grid.n, grid.n), dtype=np.complex128))

    @classmethod
    def from_modes(cls, grid: GridSpec, modes: typing.Mapping[WaveIndex, complex], /) -> SpectralField:
        """Build a real field from coefficients on half of the lattice.

        The mirrored coefficient `conj(c)` is written at `-ξ` for every entry so
        the result is always Hermitian-symmetric. The zero mode's coefficient
        must be real.

        Parameters
        ----------
        grid : GridSpec
            The grid to build the field on.
        modes : typing.Mapping[WaveIndex, complex]
            Mapping of wave vectors to their coefficients.

        Returns
        -------
        SpectralField
            The Hermitian field.
        """
        coeffs = np.zeros((grid.n, grid.n), dtype=np.complex128)
        for xi, value in modes.items():
            xi = WaveIndex(*xi)
            if xi == (0, 0):
                coeffs[0, 0] += complex(value).real
                continue

            coeffs[grid.index_of(xi)] += value
            coeffs[grid.index_of(-xi)] += complex(value).conjugate()

        return cls.from_owned(grid, coeffs)

    @classmethod
    def real_mode(cls, grid: GridSpec, xi: WaveIndex, /, *, norm: float = 1.0, phase: float = 0.0) -> SpectralField:
        """The real mode `√2·cos(2πξ·x/L + phase)/L` scaled to a given L² norm.

        For `ξ = (0, 0)` this is the constant `norm / L`.
        """
        xi = WaveIndex(*xi)
        if xi == (0, 0):
            return cls.from_modes(grid, {xi: norm})

        return cls.from_modes(grid, {xi: norm / math.sqrt(2.0) * complex(math.cos(phase), math.sin(phase))})

    def __repr__(self) -> str:
        return f"SpectralField({self._grid!r}, <{np.count_nonzero(self._coeffs)} nonzero modes>)"

    def __add__(self, other: SpectralField) -> SpectralField:
        _check_same_grid(self, other)
        return SpectralField.from_owned(self._grid, self._coeffs + other._coeffs)

    def __sub__(self, other: SpectralField) -> SpectralField:
        _check_same_grid(self, other)
        return SpectralField.from_owned(self._grid, self._coeffs - other._coeffs)

    def __neg__(self) -> SpectralField:
        return SpectralField.from_owned(self._grid, -self._coeffs)

    def __mul__(self, scalar: float) -> SpectralField:
        if isinstance(scalar, complex):
            # A complex factor would break Hermitian symmetry.
            return NotImplemented

        return SpectralField.from_owned(self._grid, self._coeffs * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> SpectralField:
        return SpectralField.from_owned(self._grid, self._coeffs / float(scalar))

    @property
    def coeffs(self) -> ComplexArray:
        """Read-only `n × n` coefficient lattice in FFT layout."""
        return self._coeffs

    @property
    def grid(self) -> GridSpec:
        """The grid this field lives on."""
        return self._grid

    def coeff(self, xi: WaveIndex, /) -> complex:
        """The coefficient `⟨f, φ_ξ⟩` of one mode."""
        return complex(self._coeffs[self._grid.index_of(WaveIndex(*xi))])

    def is_zero(self) -> bool:
        """Whether every coefficient is exactly zero."""
        return not np.any(self._coeffs)


class RealField:
    """Real samples of a field on the uniform collocation grid.

    Sample `(i, j)` sits at `(x, y) = (i L / n, j L / n)`.

    Parameters
    ----------
    grid : GridSpec
        The grid the samples live on.
    samples : numpy.typing.ArrayLike
        An `n × n` real array. This is copied.

    Raises
    ------
    ValueError
        If the shape doesn't match the grid or any sample isn't finite.
    """

    __slots__ = ("_grid", "_samples")

    def __init__(self, grid: GridSpec, samples: npt.ArrayLike, /) -> None:
        array = np.array(samples, dtype=np.float64, copy=True)
        if array.shape != (grid.n, grid.n):
            raise ValueError(f"Expected {grid.n}x{grid.n} samples, got {array.shape}")

        if not np.all(np.isfinite(array)):
            raise ValueError("Field samples must be finite")

        array.flags.writeable = False
        self._grid = grid
        self._samples = array

    def __repr__(self) -> str:
        return f"RealField({self._grid!r})"

    @property
    def grid(self) -> GridSpec:
        """The grid the samples live on."""
        return self._grid

    @property
    def samples(self) -> FloatArray:
        """Read-only `n × n` sample array, axis 0 along `x`."""
        return self._samples


def _check_same_grid(left: SpectralField, right: SpectralField, /) -> None:
    if left.grid != right.grid:
        raise errors.GridMismatchError(f"Fields live on different grids: {left.grid!r} and {right.grid!r}")


def collocation_points(grid: GridSpec, /) -> tuple[FloatArray, FloatArray]:
    """Coordinates `(x, y)` of every collocation point, each an `n × n` array."""
    axis = np.arange(grid.n, dtype=np.float64) * grid.spacing
    x, y = np.meshgrid(axis, axis, indexing="ij")
    return x, y


def forward_transform(field: RealField, /, *, workers: typing.Optional[int] = None) -> SpectralField:
    """Expand collocation samples in the orthonormal basis `φ_ξ`.

    Parameters
    ----------
    field : RealField
        The samples to transform.

    Other Parameters
    ----------------
    workers : typing.Optional[int]
        Thread count forwarded to `scipy.fft`; defaults to the `HM_THREADS` cap.

    Returns
    -------
    SpectralField
        Hermitian-symmetric coefficients `c(ξ) = (L / n²) · FFT(f)(ξ)`.
    """
    grid = field.grid
    workers = utilities.thread_cap() if workers is None else workers
    coeffs = sp_fft.fft2(field.samples, workers=workers) * (grid.length / grid.n**2)
    # Enforce exact symmetry so round-off never reaches the inverse check.
    coeffs = 0.5 * (coeffs + np.conj(_reflect(coeffs)))
    return SpectralField.from_owned(grid, coeffs)


def inverse_transform(field: SpectralField, /, *, workers: typing.Optional[int] = None) -> RealField:
    """Evaluate a spectral field on its collocation grid.

    Parameters
    ----------
    field : SpectralField
        The field to evaluate.

    Other Parameters
    ----------------
    workers : typing.Optional[int]
        Thread count forwarded to `scipy.fft`; defaults to the `HM_THREADS` cap.

    Returns
    -------
    RealField
        The real samples; an imaginary residue below `HERMITIAN_TOLERANCE` is discarded.

    Raises
    ------
    driftwave.errors.HermitianSymmetryError
        If the coefficients don't describe a real field.
    """
    violation = hermitian_violation(field.coeffs)
    if violation > HERMITIAN_TOLERANCE:
        raise errors.HermitianSymmetryError(
            f"Coefficients aren't Hermitian-symmetric (relative violation {violation:.3e})", violation
        )

    grid = field.grid
    workers = utilities.thread_cap() if workers is None else workers
    values = sp_fft.ifft2(field.coeffs, workers=workers) * (grid.n**2 / grid.length)
    return RealField(grid, values.real)


def project(field: SpectralField, radius: int, /) -> SpectralField:
    """Orthogonal projection onto `E_M`, the modes with `max(|ξ_x|, |ξ_y|) <= radius`.

    Raises
    ------
    ValueError
        If `radius` is negative.
    """
    if radius < 0:
        raise ValueError("Truncation radius must be non-negative")

    grid = field.grid
    if radius >= grid.nyquist:
        return field

    return SpectralField.from_owned(grid, np.where(grid.truncation_mask(radius), field.coeffs, 0.0))


def dealias(field: SpectralField, /) -> SpectralField:
    """Project onto the grid's dealiased range (`GridSpec.dealias_radius`)."""
    return project(field, field.grid.dealias_radius)


@functools.lru_cache(maxsize=64)
def _derivative_multiplier(length: float, n: int, axis: Axis, order: int, /) -> ComplexArray:
    kx, ky = _lattice(n)
    wavenumbers = kx if axis == "x" else ky
    multiplier = (2j * np.pi * wavenumbers / length) ** order
    # The Nyquist lines have no Hermitian partner.
    multiplier[(np.abs(kx) == n // 2) | (np.abs(ky) == n // 2)] = 0.0
    multiplier.flags.writeable = False
    return multiplier


def derivative(field: SpectralField, axis: Axis, order: int = 1, /) -> SpectralField:
    """Spectral partial derivative `∂^order / ∂axis^order`.

    Each coefficient is multiplied by `(2πi ξ_axis / L)^order`; both Nyquist
    lines are zeroed.

    Raises
    ------
    ValueError
        If `order < 1` or `axis` isn't `"x"` or `"y"`.
    """
    if order < 1:
        raise ValueError("Derivative order must be at least 1")

    if axis not in ("x", "y"):
        raise ValueError(f"Unknown axis {axis!r}")

    grid = field.grid
    return SpectralField.from_owned(grid, field.coeffs * _derivative_multiplier(grid.length, grid.n, axis, order))


def l2_inner(left: SpectralField, right: SpectralField, /) -> float:
    """L² inner product `∫ f g dx` of two real fields (Parseval)."""
    _check_same_grid(left, right)
    return float(np.vdot(right.coeffs, left.coeffs).real)


def sobolev_norm(field: SpectralField, m: int, /) -> float:
    """λ-weighted Sobolev norm `⦀f⦀_m = (Σ λ(ξ)^m |c(ξ)|²)^½`.

    `m = 0` is the L² norm and `m = 1` is the standard H¹ norm exactly.

    Raises
    ------
    ValueError
        If `m` is negative.
    """
    if m < 0:
        raise ValueError("Sobolev index must be non-negative")

    weights = field.grid.eigenvalues**m
    return math.sqrt(float(np.sum(weights * np.abs(field.coeffs) ** 2)))


def quadrature_norm(field: RealField, /) -> float:
    """L² norm by the collocation (trapezoid) rule, an oracle for `sobolev_norm(·, 0)`."""
    return math.sqrt(float(np.sum(field.samples**2)) * field.grid.spacing**2)


def linf_norm(field: RealField, /) -> float:
    """Collocation approximation `max |f(x_ij)|` of the sup-norm."""
    return float(np.max(np.abs(field.samples), initial=0.0))


def sup_norm(field: SpectralField, /, *, oversample: int = 4) -> float:
    """Sup-norm estimate from the field evaluated on an `oversample`-times finer grid."""
    if oversample < 1:
        raise ValueError("Oversampling factor must be at least 1")

    grid = field.grid
    if oversample == 1:
        return linf_norm(inverse_transform(field))

    fine = GridSpec(grid.length, grid.n * oversample, dealias_fraction=grid.dealias_fraction)
    return linf_norm(inverse_transform(resample(field, fine)))


def resample(field: SpectralField, grid: GridSpec, /) -> SpectralField:
    """Move a field onto a grid of another size with the same domain length.

    Modes below both grids' Nyquist wavenumber are copied, everything else
    (including the source's Nyquist lines) is dropped.

    Raises
    ------
    driftwave.errors.GridMismatchError
        If the domain lengths differ.
    """
    source = field.grid
    if source.length != grid.length:
        raise errors.GridMismatchError("Cannot resample between domains of different length")

    keep = min(source.n, grid.n) // 2 - 1
    wavenumbers = np.arange(-keep, keep + 1)
    src = np.ix_(wavenumbers % source.n, wavenumbers % source.n)
    dst = np.ix_(wavenumbers % grid.n, wavenumbers % grid.n)
    coeffs = np.zeros((grid.n, grid.n), dtype=np.complex128)
    coeffs[dst] = field.coeffs[src]
    return SpectralField.from_owned(grid, coeffs)


def enumerate_modes(grid: GridSpec, radius: int, /) -> list[WaveIndex]:
    """List the modes of `E_M` in increasing eigenvalue order.

    Ties within a λ-shell are broken lexicographically on `(ξ_x, ξ_y)`; the
    choice is arbitrary but fixed so matrix assembly is deterministic.

    `E_M` keeps its order inside `E_{M+1}` but is only a leading block of it
    for `M <= 2`; from `M = 3` on, axis modes of the larger square such as
    `(4, 0)` sort ahead of corner modes like `(3, 3)`.

    Raises
    ------
    ValueError
        If `radius` is negative or reaches the Nyquist wavenumber.
    """
    if not 0 <= radius < grid.nyquist:
        raise ValueError(f"Radius must be in [0, {grid.nyquist - 1}] for a grid of size {grid.n}")

    modes = [WaveIndex(x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1)]
    modes.sort(key=lambda xi: (xi.squared_magnitude, xi.xi_x, xi.xi_y))
    return modes


def max_eigenvalue(grid: GridSpec, radius: int, /) -> float:
    """`λ_N`, the largest eigenvalue within `E_M` (attained at the corner mode)."""
    return eigenvalue(WaveIndex(radius, radius), grid.length)
