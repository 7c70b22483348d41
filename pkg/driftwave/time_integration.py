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
"""Time integration of the coupled system.

Three integrators are provided:

* `cn_step`: the implicit Crank-Nicolson predictor-corrector scheme.
* `picard_fixed_point`: the fixed point of `u ↦ E(H_M(u))` where `H_M` solves
  the Galerkin transport system (`hn_solve`) for a prescribed `u`.
* `rk4_step`: an explicit classical Runge-Kutta reference integrator.
"""
from __future__ import annotations

__all__: list[str] = [
    "Centering",
    "CrankNicolsonStepper",
    "PicardParams",
    "PicardResult",
    "RungeKuttaStepper",
    "SchemeParams",
    "State",
    "Trajectory",
    "cn_step",
    "hn_solve",
    "integrate",
    "picard_fixed_point",
    "rk4_step",
]

import dataclasses
import enum
import logging
import math
import typing
import warnings
from collections import abc as collections

import numpy as np
import numpy.typing as npt

from . import abc
from . import diagnostics
from . import elliptic_solver
from . import errors
from . import hyperbolic_rhs
from . import spectral_grid
from .hyperbolic_rhs import Nonlinearity
from .spectral_grid import SpectralField

COUPLING_TOLERANCE: typing.Final[float] = 1e-12
"""Relative tolerance of the `w = (I - Δ)u` coupling a `State` must satisfy."""

_LOGGER: typing.Final[logging.Logger] = logging.getLogger("driftwave.time_integration")


class State:
    """The coupled pair `(u, w)` at time `t`.

    Parameters
    ----------
    t : float
        Time, finite and non-negative.
    u : driftwave.spectral_grid.SpectralField
        The potential.
    w : driftwave.spectral_grid.SpectralField
        The generalised vorticity `(I - Δ)u`.

    Raises
    ------
    ValueError
        If `t` is negative or not finite or if `w` isn't `(I - Δ)u` to
        `COUPLING_TOLERANCE` relative.
    driftwave.errors.GridMismatchError
        If `u` and `w` live on different grids.
    """

    __slots__ = ("_t", "_u", "_w")

    def __init__(self, t: float, u: SpectralField, w: SpectralField, /) -> None:
        if not math.isfinite(t) or t < 0:
            raise ValueError(f"State time must be finite and non-negative, got {t}")

        if u.grid != w.grid:
            raise errors.GridMismatchError("u and w must live on the same grid")

        mismatch = np.linalg.norm(elliptic_solver.apply_helmholtz(u).coeffs - w.coeffs)
        if mismatch > COUPLING_TOLERANCE * np.linalg.norm(w.coeffs):
            raise ValueError(f"w isn't (I - Δ)u (mismatch {mismatch:.3e})")

        self._t = float(t)
        self._u = u
        self._w = w

    @classmethod
    def from_u(cls, t: float, u: SpectralField, /) -> State:
        """Build a state from the potential, setting `w = (I - Δ)u`."""
        return cls(t, u, elliptic_solver.apply_helmholtz(u))

    @classmethod
    def from_w(cls, t: float, w: SpectralField, /) -> State:
        """Build a state from the vorticity, setting `u = E(w)`."""
        return cls(t, elliptic_solver.solve_elliptic(w), w)

    def __repr__(self) -> str:
        return f"State(t={self._t!r}, grid={self._u.grid!r})"

    @property
    def grid(self) -> spectral_grid.GridSpec:
        """The grid both fields live on."""
        return self._u.grid

    @property
    def t(self) -> float:
        """Time of this state."""
        return self._t

    @property
    def u(self) -> SpectralField:
        """The potential."""
        return self._u

    @property
    def w(self) -> SpectralField:
        """The generalised vorticity `(I - Δ)u`."""
        return self._w


class Trajectory(collections.Sequence[State]):
    """An immutable time-ordered sequence of states on one grid.

    Parameters
    ----------
    states : collections.abc.Iterable[State]
        The states, in strictly increasing time order.

    Raises
    ------
    ValueError
        If no states are given or times don't strictly increase.
    """

    __slots__ = ("_states",)

    def __init__(self, states: collections.Iterable[State], /) -> None:
        self._states = tuple(states)
        if not self._states:
            raise ValueError("A trajectory needs at least one state")

        if any(later.t <= earlier.t for earlier, later in zip(self._states, self._states[1:])):
            raise ValueError("Trajectory times must strictly increase")

    @typing.overload
    def __getitem__(self, index: int, /) -> State:
        ...

    @typing.overload
    def __getitem__(self, index: slice, /) -> collections.Sequence[State]:
        ...

    def __getitem__(self, index: typing.Union[int, slice], /) -> typing.Union[State, collections.Sequence[State]]:
        return self._states[index]

    def __len__(self) -> int:
        return len(self._states)

    def __repr__(self) -> str:
        return f"Trajectory(<{len(self._states)} states over [{self._states[0].t}, {self._states[-1].t}]>)"

    @property
    def horizon(self) -> float:
        """Time span covered, `t_last - t_first`."""
        return self._states[-1].t - self._states[0].t

    @property
    def times(self) -> npt.NDArray[np.float64]:
        """Sample times."""
        return np.array([state.t for state in self._states], dtype=np.float64)

    @property
    def u(self) -> tuple[SpectralField, ...]:
        """Potentials at the sample times."""
        return tuple(state.u for state in self._states)

    @property
    def w(self) -> tuple[SpectralField, ...]:
        """Vorticities at the sample times."""
        return tuple(state.w for state in self._states)


class Centering(str, enum.Enum):
    """Time centering of the advected field in the Crank-Nicolson step."""

    PAPER_FORM = "paper_form"
    """Advect `W(t + τ)` with the time-summed velocity."""

    SYMMETRIC_W = "symmetric_w"
    """Advect `(W(t + τ) + W(t)) / 2`; the implicit midpoint rule, which conserves energy and enstrophy."""


@dataclasses.dataclass(frozen=True)
class SchemeParams:
    """Parameters of the Crank-Nicolson predictor-corrector step.

    Raises
    ------
    ValueError
        If any parameter is out of range.
    """

    tau: float
    """Time step."""

    corrector_tol: float = 1e-10
    """Tolerance on the L² residual relative to `‖W‖`."""

    max_correctors: int = 50
    """Cap on corrector passes before `driftwave.errors.NonConvergenceError` is raised."""

    advection_time_centering: Centering = Centering.PAPER_FORM
    """Which W is advected."""

    radius: typing.Optional[int] = None
    """Truncation radius `M` of the nonlinear term; defaults to the grid's dealias radius."""

    nonlinearity: Nonlinearity = Nonlinearity.TRANSFORM
    """How the nonlinear term is evaluated."""

    max_sub_iterations: int = 100
    """Cap on the inner sub-iterations solving the frozen-velocity advection problem."""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError("tau must be positive")

        if not self.corrector_tol > 0:
            raise ValueError("corrector_tol must be positive")

        if self.max_correctors < 1:
            raise ValueError("max_correctors must be at least 1")

        if self.max_sub_iterations < 1:
            raise ValueError("max_sub_iterations must be at least 1")

        if self.radius is not None and self.radius < 0:
            raise ValueError("radius must be non-negative")


def _l2(field: SpectralField, /) -> float:
    return float(np.linalg.norm(field.coeffs))


def _relative(numerator: float, denominator: float, /) -> float:
    if numerator == 0.0:
        return 0.0

    return numerator / denominator if denominator > 0.0 else math.inf


def _check_finite(field: SpectralField, t: float, /) -> None:
    if not np.all(np.isfinite(field.coeffs)):
        raise errors.DivergenceError(f"Solution blew up before t={t}", t)


def _cn_step(
    state: State, params: SchemeParams, k: float, previous: typing.Optional[SpectralField], /
) -> tuple[State, abc.StepStats]:
    tau = params.tau
    radius = state.grid.dealias_radius if params.radius is None else params.radius
    symmetric = params.advection_time_centering is Centering.SYMMETRIC_W
    u_old = state.u
    w_old = state.w

    def advected(w_new: SpectralField, /) -> SpectralField:
        return 0.5 * (w_new + w_old) if symmetric else w_new

    def implicit_update(velocity_sum: SpectralField, w_new: SpectralField, /) -> SpectralField:
        bracket = hyperbolic_rhs.nonlinear_term(
            velocity_sum, advected(w_new), nonlinearity=params.nonlinearity, radius=radius
        )
        drift = spectral_grid.derivative(velocity_sum, "y")
        return w_old - (0.5 * tau) * bracket + (0.5 * tau * k) * drift

    u_new = u_old if previous is None else 2.0 * u_old - previous
    w_new = elliptic_solver.apply_helmholtz(u_new)
    residual = math.inf
    for iteration in range(1, params.max_correctors + 1):
        velocity_sum = u_new + u_old
        # The velocity is frozen so the inner problem is linear in W.
        for _ in range(params.max_sub_iterations):
            w_next = implicit_update(velocity_sum, w_new)
            increment = _relative(_l2(w_next - w_new), _l2(w_next))
            w_new = w_next
            _check_finite(w_new, state.t + tau)
            if increment <= 0.1 * params.corrector_tol:
                break

        u_new = elliptic_solver.solve_elliptic(w_new)
        defect = w_new - implicit_update(u_new + u_old, w_new)
        residual = _relative(_l2(defect), max(_l2(w_new), _l2(w_old)))
        if residual <= params.corrector_tol:
            _LOGGER.debug("Corrector converged after %s passes (residual %.3e)", iteration, residual)
            return State(state.t + tau, u_new, w_new), abc.StepStats(iteration, residual)

    raise errors.NonConvergenceError(
        f"Corrector didn't converge in {params.max_correctors} passes at t={state.t + tau}; try a smaller tau",
        residual,
        params.max_correctors,
    )


def cn_step(
    state: State, params: SchemeParams, k: float, /, *, previous: typing.Optional[SpectralField] = None
) -> State:
    """Advance a state by one Crank-Nicolson predictor-corrector step.

    The new vorticity satisfies, on `E_M`,

        W_new = W_old - (τ/2) P_M[V(U_new + U_old)·∇W*] + (τk/2) ∂_y(U_new + U_old)

    with `U_new = E(W_new)` and `W* = W_new` (`Centering.PAPER_FORM`) or
    `W* = (W_new + W_old)/2` (`Centering.SYMMETRIC_W`).

    Each corrector pass freezes the velocity sum and solves for `W_new` by
    fixed-point sub-iteration, then re-solves `U_new` and evaluates the full
    relative residual. The first pass starts from the predictor
    `2 U_old - U_older` (or `U_old` when there's no older state).

    Parameters
    ----------
    state : State
        State at time `t`.
    params : SchemeParams
        Step parameters.
    k : float
        Drift parameter.

    Other Parameters
    ----------------
    previous : typing.Optional[driftwave.spectral_grid.SpectralField]
        The potential one step before `state`, used by the predictor.

    Returns
    -------
    State
        State at time `t + τ`.

    Raises
    ------
    driftwave.errors.NonConvergenceError
        If the corrector doesn't converge within `params.max_correctors` passes.
    driftwave.errors.DivergenceError
        If the iteration produces non-finite values.
    """
    return _cn_step(state, params, k, previous)[0]


def _tendency(
    w: SpectralField, k: float, radius: typing.Optional[int], nonlinearity: Nonlinearity, /
) -> SpectralField:
    u = elliptic_solver.solve_elliptic(w)
    return float(k) * spectral_grid.derivative(u, "y") - hyperbolic_rhs.nonlinear_term(
        u, w, nonlinearity=nonlinearity, radius=radius
    )


def rk4_step(
    state: State,
    tau: float,
    k: float,
    /,
    *,
    radius: typing.Optional[int] = None,
    nonlinearity: Nonlinearity = Nonlinearity.TRANSFORM,
) -> State:
    """Advance a state by one classical fourth-order Runge-Kutta step.

    `u = E(w)` is re-solved at every stage.

    Parameters
    ----------
    state : State
        State at time `t`.
    tau : float
        Time step.
    k : float
        Drift parameter.

    Other Parameters
    ----------------
    radius : typing.Optional[int]
        Truncation radius of the nonlinear term; defaults to the grid's dealias radius.
    nonlinearity : driftwave.hyperbolic_rhs.Nonlinearity
        How the nonlinear term is evaluated.

    Returns
    -------
    State
        State at time `t + tau`.

    Raises
    ------
    driftwave.errors.DivergenceError
        If the new state holds non-finite values.
    """
    w = state.w
    k1 = _tendency(w, k, radius, nonlinearity)
    k2 = _tendency(w + (0.5 * tau) * k1, k, radius, nonlinearity)
    k3 = _tendency(w + (0.5 * tau) * k2, k, radius, nonlinearity)
    k4 = _tendency(w + tau * k3, k, radius, nonlinearity)
    w_new = w + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    _check_finite(w_new, state.t + tau)
    return State.from_w(state.t + tau, w_new)


class CrankNicolsonStepper(abc.Stepper):
    """`cn_step` with the predictor history carried between steps.

    Parameters
    ----------
    params : SchemeParams
        Step parameters.
    k : float
        Drift parameter.
    """

    __slots__ = ("_k", "_last_stats", "_params", "_previous")

    def __init__(self, params: SchemeParams, k: float, /) -> None:
        self._k = float(k)
        self._last_stats = abc.StepStats(0, 0.0)
        self._params = params
        self._previous: typing.Optional[State] = None

    @property
    def k(self) -> float:
        return self._k

    @property
    def last_stats(self) -> abc.StepStats:
        return self._last_stats

    @property
    def params(self) -> SchemeParams:
        """Step parameters."""
        return self._params

    @property
    def tau(self) -> float:
        return self._params.tau

    def reset(self) -> None:
        self._last_stats = abc.StepStats(0, 0.0)
        self._previous = None

    def step(self, state: State, /) -> State:
        previous = None
        # History only applies when stepping on from the state this stepper produced.
        if self._previous is not None and math.isclose(self._previous.t + self.tau, state.t):
            previous = self._previous.u

        new_state, self._last_stats = _cn_step(state, self._params, self._k, previous)
        self._previous = state
        return new_state


class RungeKuttaStepper(abc.Stepper):
    """Stateless `rk4_step` wrapper.

    Parameters
    ----------
    tau : float
        Time step.
    k : float
        Drift parameter.

    Other Parameters
    ----------------
    radius : typing.Optional[int]
        Truncation radius of the nonlinear term; defaults to the grid's dealias radius.
    nonlinearity : driftwave.hyperbolic_rhs.Nonlinearity
        How the nonlinear term is evaluated.
    """

    __slots__ = ("_k", "_nonlinearity", "_radius", "_tau")

    def __init__(
        self,
        tau: float,
        k: float,
        /,
        *,
        radius: typing.Optional[int] = None,
        nonlinearity: Nonlinearity = Nonlinearity.TRANSFORM,
    ) -> None:
        if not (math.isfinite(tau) and tau > 0):
            raise ValueError("tau must be positive")

        self._k = float(k)
        self._nonlinearity = nonlinearity
        self._radius = radius
        self._tau = float(tau)

    @property
    def k(self) -> float:
        return self._k

    @property
    def last_stats(self) -> abc.StepStats:
        return abc.StepStats(0, 0.0)

    @property
    def tau(self) -> float:
        return self._tau

    def reset(self) -> None:
        pass

    def step(self, state: State, /) -> State:
        return rk4_step(state, self._tau, self._k, radius=self._radius, nonlinearity=self._nonlinearity)


def integrate(stepper: abc.Stepper, initial: State, steps: int, /) -> Trajectory:
    """Take `steps` steps from `initial`, returning every state visited.

    The stepper's history is reset first.

    Raises
    ------
    ValueError
        If `steps` is negative.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")

    stepper.reset()
    states = [initial]
    for _ in range(steps):
        states.append(stepper.step(states[-1]))

    return Trajectory(states)


def hn_solve(
    times: npt.ArrayLike,
    u_samples: collections.Sequence[SpectralField],
    radius: int,
    k: float,
    w0: SpectralField,
    horizon: float,
    tau_ode: float,
    /,
) -> list[SpectralField]:
    """Solve the Galerkin transport system for a prescribed potential trajectory.

    Integrates `C' + A(t)ᵀC = F(t)` on `E_M` with classical RK4, assembling
    `A` and `F` at the sample times and interpolating them linearly in between.
    Each sample interval is split into `max(1, round(Δt / tau_ode))` equal
    sub-steps. The initial coordinates are those of `P_M w0`.

    Parameters
    ----------
    times : numpy.typing.ArrayLike
        Increasing sample times starting at `0`.
    u_samples : collections.abc.Sequence[driftwave.spectral_grid.SpectralField]
        Potential at each sample time.
    radius : int
        Truncation radius `M`.
    k : float
        Drift parameter.
    w0 : driftwave.spectral_grid.SpectralField
        Initial vorticity.
    horizon : float
        Final time; at most the last sample time.
    tau_ode : float
        Target RK4 step.

    Returns
    -------
    list[driftwave.spectral_grid.SpectralField]
        `w_M` at every sample time up to `horizon`.

    Raises
    ------
    ValueError
        If the samples are malformed or don't cover `[0, horizon]`.
    driftwave.errors.DivergenceError
        If the coordinates become non-finite.
    """
    sample_times = np.asarray(times, dtype=np.float64)
    if sample_times.ndim != 1 or len(sample_times) != len(u_samples) or not len(sample_times):
        raise ValueError("Expected one potential per sample time")

    if sample_times[0] != 0.0 or np.any(np.diff(sample_times) <= 0):
        raise ValueError("Sample times must start at 0 and strictly increase")

    if horizon < 0 or horizon > sample_times[-1] * (1 + 1e-12):
        raise ValueError(f"Horizon {horizon} isn't covered by samples up to {sample_times[-1]}")

    if not tau_ode > 0:
        raise ValueError("tau_ode must be positive")

    covered = int(np.searchsorted(sample_times, horizon * (1 + 1e-12), side="right"))
    basis = hyperbolic_rhs.galerkin_basis(w0.grid, radius)
    systems = [hyperbolic_rhs.assemble_galerkin(u, radius, k) for u in u_samples[:covered]]
    coordinates = basis.coordinates(w0)
    output = [basis.field(coordinates)]

    def derivative(
        system: hyperbolic_rhs.GalerkinSystem,
        following: hyperbolic_rhs.GalerkinSystem,
        theta: float,
        values: npt.NDArray[np.float64],
        /,
    ) -> npt.NDArray[np.float64]:
        matrix = (1.0 - theta) * system.A + theta * following.A
        forcing = (1.0 - theta) * system.F + theta * following.F
        return forcing - matrix.T @ values

    for index in range(covered - 1):
        start, end = sample_times[index], sample_times[index + 1]
        sub_steps = max(1, round((end - start) / tau_ode))
        h = (end - start) / sub_steps
        step = 1.0 / sub_steps
        system, following = systems[index], systems[index + 1]
        for sub_step in range(sub_steps):
            theta = sub_step * step
            k1 = derivative(system, following, theta, coordinates)
            k2 = derivative(system, following, theta + 0.5 * step, coordinates + (0.5 * h) * k1)
            k3 = derivative(system, following, theta + 0.5 * step, coordinates + (0.5 * h) * k2)
            k4 = derivative(system, following, theta + step, coordinates + h * k3)
            coordinates = coordinates + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        if not np.all(np.isfinite(coordinates)):
            raise errors.DivergenceError(f"Galerkin solution blew up before t={end}", float(end))

        output.append(basis.field(coordinates))

    return output


@dataclasses.dataclass(frozen=True)
class PicardParams:
    """Parameters of the Picard fixed-point construction.

    Raises
    ------
    ValueError
        If any parameter is out of range.
    """

    tau: float
    """Spacing of the uniform time sampling."""

    tol: float = 1e-10
    """Tolerance on the absolute update `sup_t ‖u⁽ᵐ⁺¹⁾ - u⁽ᵐ⁾‖_{H¹}`."""

    max_iterations: int = 50
    """Cap on fixed-point iterations."""

    tau_ode: typing.Optional[float] = None
    """RK4 step of the inner Galerkin solve; defaults to `tau`."""

    c_e: float = elliptic_solver.DEFAULT_ELLIPTIC_CONSTANT
    """Elliptic regularity constant used for the existence-window warning."""

    c_inf: float = 1.0
    """Embedding constant `H² ↪ L∞` used for the existence-window warning."""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError("tau must be positive")

        if not self.tol > 0:
            raise ValueError("tol must be positive")

        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")

        if self.tau_ode is not None and not self.tau_ode > 0:
            raise ValueError("tau_ode must be positive")


class PicardResult(typing.NamedTuple):
    """Outcome of `picard_fixed_point`."""

    trajectory: Trajectory
    """The converged pair `(u, w)` at the sample times."""

    iterations: int
    """Number of fixed-point iterations taken."""

    residual_history: list[float]
    """`sup_t ‖u⁽ᵐ⁺¹⁾ - u⁽ᵐ⁾‖_{H¹}` after every iteration."""


def picard_fixed_point(
    u0: SpectralField, radius: int, k: float, horizon: float, params: PicardParams, /
) -> PicardResult:
    """Construct the solution on `E_M` as the fixed point of `u ↦ E(H_M(u))`.

    Starting from `u⁽⁰⁾(t) = P_M u0`, every iteration solves the Galerkin
    transport system for `w` along `u⁽ᵐ⁾` (`hn_solve`) and sets
    `u⁽ᵐ⁺¹⁾ = E(w)` on a uniform time sampling. Iteration stops once
    `sup_t ‖u⁽ᵐ⁺¹⁾ - u⁽ᵐ⁾‖_{H¹} <= tol`.

    .. note::
        Contraction is only guaranteed below the existence window; a horizon
        above it triggers a `driftwave.errors.WindowWarning` but is still attempted.

    Parameters
    ----------
    u0 : driftwave.spectral_grid.SpectralField
        Initial potential.
    radius : int
        Truncation radius `M`.
    k : float
        Drift parameter.
    horizon : float
        Final time `T`.
    params : PicardParams
        Iteration parameters.

    Returns
    -------
    PicardResult
        The converged trajectory, iteration count and residual history.

    Raises
    ------
    driftwave.errors.NonConvergenceError
        If the iteration cap is reached first.
    """
    if horizon < 0 or not math.isfinite(horizon):
        raise ValueError("horizon must be finite and non-negative")

    u_start = spectral_grid.project(u0, radius)
    w_start = elliptic_solver.apply_helmholtz(u_start)
    report = diagnostics.existence_window(w_start, u_start, k, params.c_e, params.c_inf)
    if horizon >= report.t_max:
        warnings.warn(
            f"Horizon {horizon} lies outside the guaranteed existence window (T_max={report.t_max:.6g})",
            category=errors.WindowWarning,
            stacklevel=2,
        )

    steps = max(1, round(horizon / params.tau)) if horizon > 0 else 0
    if steps == 0:
        return PicardResult(Trajectory([State(0.0, u_start, w_start)]), 0, [])

    times = np.linspace(0.0, horizon, steps + 1)
    tau_ode = params.tau if params.tau_ode is None else params.tau_ode
    iterate = [u_start] * len(times)
    history: list[float] = []
    for iteration in range(1, params.max_iterations + 1):
        w_samples = hn_solve(times, iterate, radius, k, w_start, horizon, tau_ode)
        following = [elliptic_solver.solve_elliptic(w) for w in w_samples]
        residual = max(spectral_grid.sobolev_norm(new - old, 1) for new, old in zip(following, iterate))
        history.append(residual)
        _LOGGER.debug("Picard iteration %s: H1 update %.3e", iteration, residual)
        iterate = following
        if residual <= params.tol:
            states = (State(float(t), u, w) for t, u, w in zip(times, following, w_samples))
            return PicardResult(Trajectory(states), iteration, history)

    raise errors.NonConvergenceError(
        f"Picard iteration didn't converge in {params.max_iterations} iterations; try a shorter horizon",
        history[-1],
        params.max_iterations,
    )
