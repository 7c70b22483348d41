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
"""Scalar diagnostics, a priori estimate checks and existence-window evaluation.

Every estimate check returns a margin `RHS - LHS`; a non-negative margin means
the bound holds along the trajectory. Time integrals use the trapezoid rule on
the stored samples and sup-norms are taken on a 4× oversampled grid.
"""
from __future__ import annotations

__all__: list[str] = [
    "CSV_COLUMNS",
    "DiagnosticsRecord",
    "EstimateSeries",
    "WindowInputs",
    "WindowReport",
    "WindowVariant",
    "check_estimate1",
    "check_estimate2_3",
    "check_estimate4",
    "dispersion_check",
    "existence_window",
    "expected_frequency",
    "integral_form_residual",
    "measure_frequency",
    "norm_equivalence_check",
    "projection_linf_ratio",
    "quadrature_invariants",
    "record",
    "window_from_norms",
]

import dataclasses
import enum
import math
import typing

import numpy as np
import numpy.typing as npt
from scipy import integrate

from . import abc
from . import hyperbolic_rhs
from . import spectral_grid
from .spectral_grid import SpectralField
from .spectral_grid import WaveIndex

if typing.TYPE_CHECKING:
    from collections import abc as collections

    from . import time_integration

CSV_COLUMNS: typing.Final[tuple[str, ...]] = (
    "t",
    "energy",
    "enstrophy",
    "l2_w",
    "h1_w",
    "linf_w",
    "corrector_iters",
    "residual",
)
"""Fixed column order of the diagnostics CSV."""


@dataclasses.dataclass(frozen=True)
class DiagnosticsRecord:
    """Scalar diagnostics of one state."""

    t: float
    """Time."""

    energy: float
    """`⦀u⦀₁² = Σ λ|û|²`."""

    enstrophy: float
    """`‖w‖²_{L²}`."""

    l2_w: float
    """`‖w‖_{L²}`."""

    h1_w: float
    """`‖w‖_{H¹}`."""

    linf_w: float
    """Grid sup-norm of `w`."""

    corrector_iters: int
    """Corrector passes taken by the step that produced this state."""

    residual: float
    """Final corrector residual of that step."""

    linf_grad_w: float = 0.0
    """Grid sup-norm of `|∇w|`; observational only and not part of the CSV."""

    def as_row(self) -> tuple[typing.Union[float, int], ...]:
        """Values in `CSV_COLUMNS` order."""
        return tuple(getattr(self, column) for column in CSV_COLUMNS)


def record(
    state: time_integration.State, stats: abc.StepStats = abc.StepStats(0, 0.0), /
) -> DiagnosticsRecord:
    """Compute the diagnostics of a state.

    Parameters
    ----------
    state : driftwave.time_integration.State
        The state to measure.
    stats : driftwave.abc.StepStats
        Solver statistics of the step which produced `state`.

    Returns
    -------
    DiagnosticsRecord
        The record.
    """
    energy = spectral_grid.sobolev_norm(state.u, 1) ** 2
    l2_w = spectral_grid.sobolev_norm(state.w, 0)
    w_x = spectral_grid.inverse_transform(spectral_grid.derivative(state.w, "x")).samples
    w_y = spectral_grid.inverse_transform(spectral_grid.derivative(state.w, "y")).samples
    return DiagnosticsRecord(
        t=state.t,
        energy=energy,
        enstrophy=l2_w**2,
        l2_w=l2_w,
        h1_w=spectral_grid.sobolev_norm(state.w, 1),
        linf_w=spectral_grid.linf_norm(spectral_grid.inverse_transform(state.w)),
        corrector_iters=stats.iterations,
        residual=stats.residual,
        linf_grad_w=float(np.max(np.hypot(w_x, w_y), initial=0.0)),
    )


def quadrature_invariants(state: time_integration.State, /) -> tuple[float, float]:
    """Energy `‖u‖² + ‖∇u‖²` and enstrophy `‖w‖²` by collocation quadrature.

    This is an independent evaluation of the coefficient sums used by `record`.
    """

    def squared(field: SpectralField, /) -> float:
        return spectral_grid.quadrature_norm(spectral_grid.inverse_transform(field)) ** 2

    energy = squared(state.u) + squared(spectral_grid.derivative(state.u, "x"))
    energy += squared(spectral_grid.derivative(state.u, "y"))
    return energy, squared(state.w)


class EstimateSeries:
    """Running time series of the norms entering the a priori estimates.

    States are appended one at a time so long runs don't need to keep their
    trajectory in memory. `w'` is approximated by second-order centred
    differences at interior samples and first-order one-sided differences at
    both ends (the `numpy.gradient` stencil).
    """

    __slots__ = (
        "_previous",
        "_rates",
        "_times",
        "_u_h1",
        "_u_h3",
        "_w0_h1",
        "_w0_l2",
        "_w0_sup",
        "_w_h1",
        "_w_l2",
        "_w_sup",
    )

    def __init__(self) -> None:
        self._previous: list[tuple[float, npt.NDArray[np.complex128]]] = []
        self._rates: list[float] = []
        self._times: list[float] = []
        self._u_h1: list[float] = []
        self._u_h3: list[float] = []
        self._w0_h1 = 0.0
        self._w0_l2 = 0.0
        self._w0_sup = 0.0
        self._w_h1: list[float] = []
        self._w_l2: list[float] = []
        self._w_sup: list[float] = []

    @classmethod
    def from_trajectory(cls, trajectory: collections.Iterable[time_integration.State], /) -> EstimateSeries:
        """Build a series from every state of a trajectory."""
        series = cls()
        for state in trajectory:
            series.append(state)

        return series

    def __len__(self) -> int:
        return len(self._times)

    @property
    def horizon(self) -> float:
        """Time span covered so far."""
        return self._times[-1] - self._times[0] if self._times else 0.0

    @property
    def times(self) -> npt.NDArray[np.float64]:
        """Sample times."""
        return np.array(self._times, dtype=np.float64)

    def append(self, state: time_integration.State, /) -> None:
        """Add the next state.

        Raises
        ------
        ValueError
            If the state isn't later than the last one added.
        """
        if self._times and state.t <= self._times[-1]:
            raise ValueError("States must be appended in increasing time order")

        w = state.w
        w_l2 = spectral_grid.sobolev_norm(w, 0)
        w_sup = spectral_grid.sup_norm(w)
        w_h1 = spectral_grid.sobolev_norm(w, 1)
        if not self._times:
            self._w0_l2, self._w0_sup, self._w0_h1 = w_l2, w_sup, w_h1

        if len(self._previous) == 1:
            [(t0, w0)] = self._previous
            self._rates.append(_squared_l2((w.coeffs - w0) / (state.t - t0)))

        elif len(self._previous) == 2:
            (t0, w0), (t1, w1) = self._previous
            before, after = t1 - t0, state.t - t1
            rate = (before**2 * w.coeffs - after**2 * w0 + (after**2 - before**2) * w1) / (
                before * after * (before + after)
            )
            self._rates.append(_squared_l2(rate))

        self._previous = [*self._previous[-1:], (state.t, w.coeffs)]
        self._times.append(state.t)
        self._u_h1.append(spectral_grid.sobolev_norm(state.u, 1) ** 2)
        self._u_h3.append(spectral_grid.sobolev_norm(state.u, 3) ** 2)
        self._w_l2.append(w_l2)
        self._w_sup.append(w_sup)
        self._w_h1.append(w_h1)

    def _integral(self, values: collections.Sequence[float], /) -> float:
        if len(self._times) < 2:
            return 0.0

        return max(float(integrate.trapezoid(np.asarray(values), self.times)), 0.0)

    def _check(self) -> None:
        if not self._times:
            raise ValueError("No states have been added")

    def estimate1(self, k: float, horizon: typing.Optional[float] = None, /) -> float:
        """Margin of `sup_t ‖w‖ <= |k| T^½ ‖u‖_{L²(H¹)} + ‖(I - Δ)u0‖`."""
        self._check()
        horizon = self.horizon if horizon is None else horizon
        rhs = abs(k) * math.sqrt(horizon) * math.sqrt(self._integral(self._u_h1)) + self._w0_l2
        return rhs - max(self._w_l2)

    def estimate2_3(self, k: float, c_inf: float, horizon: typing.Optional[float] = None, /) -> tuple[float, float]:
        """Margins of the sup-norm and H¹ bounds on `w` (see `check_estimate2_3`)."""
        self._check()
        horizon = self.horizon if horizon is None else horizon
        root_t = math.sqrt(horizon)
        u_h3 = math.sqrt(self._integral(self._u_h3))
        linf_rhs = 2 * abs(k) * root_t * c_inf * u_h3 + 2 * self._w0_sup
        h1_rhs = (16 * abs(k) * root_t * c_inf * u_h3 + 16 * self._w0_sup + 2 * abs(k)) * root_t * u_h3
        h1_rhs += self._w0_h1
        return linf_rhs - max(self._w_sup), h1_rhs - max(self._w_h1)

    def estimate4(self, k: float, c_inf: float, /) -> float:
        """Margin of `‖w'‖_{L²(L²)} <= (4 C_∞ sup_t ‖w‖_{H¹} + |k|) ‖u‖_{L²(H³)}`."""
        self._check()
        if len(self._times) < 2:
            return 0.0

        (t0, w0), (t1, w1) = self._previous
        rates = [*self._rates, _squared_l2((w1 - w0) / (t1 - t0))]
        lhs = math.sqrt(self._integral(rates))
        rhs = (4 * c_inf * max(self._w_h1) + abs(k)) * math.sqrt(self._integral(self._u_h3))
        return rhs - lhs


def _squared_l2(coeffs: npt.NDArray[np.complex128], /) -> float:
    return float(np.sum(np.abs(coeffs) ** 2))


def check_estimate1(
    trajectory: time_integration.Trajectory, k: float, horizon: typing.Optional[float] = None, /
) -> float:
    """Margin of `sup_t ‖w‖ <= |k| T^½ ‖u‖_{L²(H¹)} + ‖(I - Δ)u0‖`.

    Parameters
    ----------
    trajectory : driftwave.time_integration.Trajectory
        Trajectory spanning `[0, T]`.
    k : float
        Drift parameter.
    horizon : typing.Optional[float]
        `T`; defaults to the trajectory's time span.

    Returns
    -------
    float
        `RHS - LHS`.
    """
    return EstimateSeries.from_trajectory(trajectory).estimate1(k, horizon)


def check_estimate2_3(
    trajectory: time_integration.Trajectory, k: float, c_inf: float, horizon: typing.Optional[float] = None, /
) -> tuple[float, float]:
    """Margins of the sup-norm and H¹ bounds on `w`.

    The bounds are

        sup_t ‖w‖_∞ <= 2|k| T^½ C_∞ ‖u‖_{L²(H³)} + 2‖w0‖_∞
        sup_t ‖w‖_{H¹} <= (16|k| T^½ C_∞ ‖u‖_{L²(H³)} + 16‖w0‖_∞ + 2|k|) T^½ ‖u‖_{L²(H³)} + ‖w0‖_{H¹}

    A too small `c_inf` may make either margin negative; this is reported, not raised.

    Parameters
    ----------
    trajectory : driftwave.time_integration.Trajectory
        Trajectory spanning `[0, T]`.
    k : float
        Drift parameter.
    c_inf : float
        Embedding constant `C_∞` of `H² ↪ L∞`.
    horizon : typing.Optional[float]
        `T`; defaults to the trajectory's time span.

    Returns
    -------
    tuple[float, float]
        The sup-norm and H¹ margins.
    """
    return EstimateSeries.from_trajectory(trajectory).estimate2_3(k, c_inf, horizon)


def check_estimate4(trajectory: time_integration.Trajectory, k: float, c_inf: float, /) -> float:
    """Margin of `‖w'‖_{L²(L²)} <= (4 C_∞ sup_t ‖w‖_{H¹} + |k|) ‖u‖_{L²(H³)}`.

    `w'` is approximated by centred differences of the stored samples.

    Returns
    -------
    float
        `RHS - LHS`, `0.0` for a single-sample trajectory.
    """
    return EstimateSeries.from_trajectory(trajectory).estimate4(k, c_inf)


class WindowVariant(str, enum.Enum):
    """Which existence-window formula to evaluate."""

    H3 = "H3"
    """The `H³` potential / `H¹ ∩ L∞` vorticity window."""

    H2 = "H2"
    """The `H²` potential / `L²` vorticity window."""


@dataclasses.dataclass(frozen=True)
class WindowInputs:
    """The scalars an existence window is computed from."""

    k: float
    c_e: float
    c_inf: float
    w0_linf: float
    w0_h1: float
    u0_h2: float


@dataclasses.dataclass(frozen=True)
class WindowReport:
    """Evaluation of an existence-window formula."""

    a_const: float
    """`A = 16|k| C_∞ C_E` (`0` for the `H2` variant)."""

    b_const: float
    """`B = 2 C_E (|k| + 8‖w0‖_∞) + 1` (`C_E|k| + 1` for the `H2` variant)."""

    c_const: float
    """`C = C_E ‖w0‖_{H¹}` (`3 C_E ‖u0‖_{H²}` for the `H2` variant)."""

    t_max: float
    """Supremum of the admissible horizons (the window is open)."""

    c_x: float
    """Radius of the trajectory ball at `horizon`."""

    horizon: float
    """Horizon at which `c_x` was evaluated."""

    variant: WindowVariant
    """The formula evaluated."""

    inputs: WindowInputs
    """The scalars used."""

    def covers(self, horizon: float, /) -> bool:
        """Whether `0 <= horizon < t_max`."""
        return 0.0 <= horizon < self.t_max

    def format(self) -> str:
        """Render the report as `key = value` lines."""
        lines = [
            f"variant = {self.variant.value}",
            f"k = {self.inputs.k!r}",
            f"C_E = {self.inputs.c_e!r}",
            f"C_inf = {self.inputs.c_inf!r}",
            f"|w0|_inf = {self.inputs.w0_linf!r}",
            f"|w0|_H1 = {self.inputs.w0_h1!r}",
            f"|u0|_H2 = {self.inputs.u0_h2!r}",
            f"A = {self.a_const!r}",
            f"B = {self.b_const!r}",
            f"C = {self.c_const!r}",
            f"T_max = {self.t_max!r}",
            f"C_X(T={self.horizon!r}) = {self.c_x!r}",
        ]
        return "\n".join(lines)


def window_from_norms(
    inputs: WindowInputs,
    variant: WindowVariant = WindowVariant.H3,
    /,
    *,
    horizon: typing.Optional[float] = None,
) -> WindowReport:
    """Evaluate an existence-window formula from precomputed norms.

    For `WindowVariant.H3`, `T_max = 1 / (B + 2√(AC))` and the ball radius is
    `C T^½ / (1 - BT)` when `k = 0` or `(1 - BT) / (2 A T^{3/2})` otherwise.
    For `WindowVariant.H2`, `T_max = 1 / (C_E|k| + 1)` and the radius is
    `3 C_E T^½ ‖u0‖_{H²} / (1 - C_E|k| T)`.

    Parameters
    ----------
    inputs : WindowInputs
        The norms and constants.
    variant : WindowVariant
        The formula to evaluate.

    Other Parameters
    ----------------
    horizon : typing.Optional[float]
        Horizon at which to evaluate the ball radius. Values outside the window
        (or `None`) fall back to `T_max / 2`.

    Returns
    -------
    WindowReport
        The evaluated window.
    """
    k = abs(inputs.k)
    if variant is WindowVariant.H3:
        a_const = 16 * k * inputs.c_inf * inputs.c_e
        b_const = 2 * inputs.c_e * (k + 8 * inputs.w0_linf) + 1
        c_const = inputs.c_e * inputs.w0_h1
        t_max = 1 / (b_const + 2 * math.sqrt(a_const * c_const))

    else:
        a_const = 0.0
        b_const = inputs.c_e * k + 1
        c_const = 3 * inputs.c_e * inputs.u0_h2
        t_max = 1 / b_const

    at = horizon if horizon is not None and 0 < horizon < t_max else t_max / 2
    if variant is WindowVariant.H2:
        c_x = c_const * math.sqrt(at) / (1 - inputs.c_e * k * at)

    elif k == 0:
        c_x = c_const * math.sqrt(at) / (1 - b_const * at)

    else:
        c_x = (1 - b_const * at) / (2 * a_const * at**1.5)

    return WindowReport(
        a_const=a_const,
        b_const=b_const,
        c_const=c_const,
        t_max=t_max,
        c_x=c_x,
        horizon=at,
        variant=variant,
        inputs=inputs,
    )


def existence_window(
    w0: SpectralField,
    u0: SpectralField,
    k: float,
    c_e: float,
    c_inf: float,
    variant: WindowVariant = WindowVariant.H3,
    /,
    *,
    horizon: typing.Optional[float] = None,
) -> WindowReport:
    """Evaluate the guaranteed existence window for initial data.

    `‖w0‖_∞` is measured on a 4× oversampled grid. See `window_from_norms`
    for the formulas.

    Parameters
    ----------
    w0 : driftwave.spectral_grid.SpectralField
        Initial vorticity.
    u0 : driftwave.spectral_grid.SpectralField
        Initial potential.
    k : float
        Drift parameter.
    c_e : float
        Elliptic regularity constant `C_E`.
    c_inf : float
        Embedding constant `C_∞` of `H² ↪ L∞`.
    variant : WindowVariant
        The formula to evaluate.

    Other Parameters
    ----------------
    horizon : typing.Optional[float]
        Horizon at which to evaluate the ball radius.

    Returns
    -------
    WindowReport
        The evaluated window.
    """
    inputs = WindowInputs(
        k=float(k),
        c_e=float(c_e),
        c_inf=float(c_inf),
        w0_linf=spectral_grid.sup_norm(w0),
        w0_h1=spectral_grid.sobolev_norm(w0, 1),
        u0_h2=spectral_grid.sobolev_norm(u0, 2),
    )
    return window_from_norms(inputs, variant, horizon=horizon)


def expected_frequency(xi: WaveIndex, k: float, length: float, /) -> float:
    """Linear drift-wave frequency `ω = -k (2π ξ_y / L) / λ(ξ)`.

    The coefficient at `+ξ` evolves as `exp(-iωt)`.
    """
    xi = WaveIndex(*xi)
    return -k * (2 * math.pi * xi.xi_y / length) / xi.eigenvalue(length)


def dispersion_check(xi: WaveIndex, k: float, length: float, measured_frequency: float, /) -> float:
    """Relative error of a measured single-mode frequency.

    When the expected frequency is zero the absolute error is returned.
    """
    expected = expected_frequency(xi, k, length)
    error = abs(measured_frequency - expected)
    return error / abs(expected) if expected else error


def measure_frequency(times: npt.ArrayLike, coefficients: npt.ArrayLike, /) -> float:
    """Frequency `ω` of a coefficient series `c(t) ≈ c0·exp(-iωt)` by phase regression.

    Raises
    ------
    ValueError
        If fewer than two samples are given.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(coefficients, dtype=np.complex128)
    if len(times) < 2 or len(times) != len(values):
        raise ValueError("Need at least two matching time and coefficient samples")

    phase = np.unwrap(np.angle(values))
    slope = np.polyfit(times, phase, 1)[0]
    return -float(slope)


def integral_form_residual(
    trajectory: time_integration.Trajectory,
    k: float,
    radius: int,
    /,
    *,
    nonlinearity: hyperbolic_rhs.Nonlinearity = hyperbolic_rhs.Nonlinearity.TRANSFORM,
) -> float:
    """Discrepancy of a trajectory in the integrated weak form of the transport equation.

    For every sample time and every test function `v ∈ E_M` this measures
    `⟨w(t) - w0, v⟩ - ∫₀ᵗ ⟨V(u)·∇v, w⟩ + k⟨u_y, v⟩ ds` and returns the sup over
    time of its L² size, with the time integral taken by the trapezoid rule.
    """
    if len(trajectory) < 2:
        return 0.0

    times = trajectory.times
    tendencies = np.stack(
        [
            spectral_grid.project(
                float(k) * spectral_grid.derivative(u, "y")
                - hyperbolic_rhs.nonlinear_term(u, w, nonlinearity=nonlinearity, radius=radius),
                radius,
            ).coeffs
            for u, w in zip(trajectory.u, trajectory.w)
        ]
    )
    integrals = integrate.cumulative_trapezoid(tendencies, times, axis=0, initial=0)
    w0 = trajectory[0].w
    residuals = [
        np.linalg.norm(spectral_grid.project(w - w0, radius).coeffs - integral)
        for w, integral in zip(trajectory.w, integrals)
    ]
    return float(max(residuals))


def norm_equivalence_check(field: SpectralField, radius: int, /) -> tuple[float, float, float]:
    """`(‖v‖, ⦀v⦀₁, √λ_N ‖v‖)` for `v = P_M field`; these are always ordered."""
    projected = spectral_grid.project(field, radius)
    l2 = spectral_grid.sobolev_norm(projected, 0)
    ceiling = math.sqrt(spectral_grid.max_eigenvalue(field.grid, radius)) * l2
    return l2, spectral_grid.sobolev_norm(projected, 1), ceiling


def projection_linf_ratio(field: SpectralField, radius: int, /) -> float:
    """`‖P_M u‖_∞ / ‖u‖_∞` on the oversampled grid.

    Raises
    ------
    ValueError
        If `field` is zero.
    """
    denominator = spectral_grid.sup_norm(field)
    if denominator == 0.0:
        raise ValueError("The L∞ projection ratio of the zero field is undefined")

    return spectral_grid.sup_norm(spectral_grid.project(field, radius)) / denominator
