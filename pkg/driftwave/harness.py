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
"""Initial conditions, simulation runs with persisted outputs, and study drivers."""
from __future__ import annotations

__all__: list[str] = [
    "DispersionReport",
    "OrderReport",
    "RunReport",
    "SweepResult",
    "build_initial_state",
    "converge_space",
    "converge_time",
    "dispersion",
    "evolve",
    "gaussian_vortex",
    "make_stepper",
    "periodized_gaussian_samples",
    "random_spectrum",
    "run",
    "simulate",
    "single_mode",
    "sweep",
    "window",
]

import csv
import dataclasses
import json
import logging
import math
import pathlib
import time
import typing
import warnings
from collections import abc as collections

import numpy as np
import numpy.typing as npt

from . import abc
from . import config as config_
from . import diagnostics
from . import errors
from . import hooks as hooks_
from . import snapshots
from . import spectral_grid
from . import time_integration
from . import utilities
from .config import SimConfig
from .spectral_grid import GridSpec
from .spectral_grid import SpectralField
from .spectral_grid import WaveIndex

CSV_NAME: typing.Final[str] = "diagnostics.csv"
MANIFEST_NAME: typing.Final[str] = "MANIFEST.json"
GAUSSIAN_IMAGES: typing.Final[int] = 2
"""Image cells summed on each side of the home cell (5 per axis) by `periodized_gaussian_samples`."""

_LOGGER: typing.Final[logging.Logger] = logging.getLogger("driftwave.harness")


def single_mode(grid: GridSpec, xi: WaveIndex, amplitude: float, /) -> SpectralField:
    """The field `a cos(2π(ξ_x x + ξ_y y)/L)`."""
    xi = WaveIndex(*xi)
    if xi == (0, 0):
        return SpectralField.from_modes(grid, {xi: amplitude * grid.length})

    return SpectralField.from_modes(grid, {xi: amplitude * grid.length / 2})


def gaussian_vortex(
    grid: GridSpec, amplitude: float, width: float, /, *, center: typing.Optional[tuple[float, float]] = None
) -> SpectralField:
    """Periodised Gaussian `a Σ_m exp(-|x - c - mL|² / 2σ²)` from its exact Fourier coefficients.

    The coefficient at `ξ` is `(a/L) 2πσ² exp(-2π²σ²|ξ|²/L²) exp(-2πi ξ·c/L)`;
    the Nyquist lines are left empty. `center` defaults to the middle of the box.
    """
    cx, cy = (grid.length / 2, grid.length / 2) if center is None else center
    kx, ky = grid.wavenumbers
    length = grid.length
    envelope = (amplitude / length) * 2 * math.pi * width**2
    envelope *= np.exp(-2 * math.pi**2 * width**2 * (kx**2 + ky**2) / length**2)
    angle = 2 * math.pi * (kx * cx + ky * cy) / length
    coeffs = envelope * (np.cos(angle) - 1j * np.sin(angle))
    coeffs[(np.abs(kx) == grid.nyquist) | (np.abs(ky) == grid.nyquist)] = 0.0
    return SpectralField(grid, coeffs)


def periodized_gaussian_samples(
    grid: GridSpec,
    amplitude: float,
    width: float,
    /,
    *,
    center: typing.Optional[tuple[float, float]] = None,
    images: int = GAUSSIAN_IMAGES,
) -> npt.NDArray[np.float64]:
    """Sum the Gaussian over `2 images + 1` periodic copies per axis on the collocation grid."""
    cx, cy = (grid.length / 2, grid.length / 2) if center is None else center
    x, y = spectral_grid.collocation_points(grid)
    total = np.zeros_like(x)
    for mx in range(-images, images + 1):
        for my in range(-images, images + 1):
            dx = x - cx - mx * grid.length
            dy = y - cy - my * grid.length
            total += np.exp(-(dx**2 + dy**2) / (2 * width**2))

    return amplitude * total


def random_spectrum(grid: GridSpec, seed: int, amplitude: float, decay_exponent: float, /) -> SpectralField:
    """Random real field with `|c(ξ)| ∝ (1 + |ξ|²)^(-decay_exponent/2)` and uniform random phases.

    Phases are drawn for the whole lattice in a fixed order from
    `numpy.random.default_rng(seed)` and mirrored so the field is real. The zero
    mode and Nyquist lines are left empty and the result is scaled to an L²
    norm of `amplitude`.
    """
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2 * math.pi, size=(grid.n, grid.n))
    kx, ky = grid.wavenumbers
    half = ((kx > 0) | ((kx == 0) & (ky > 0))) & (np.abs(kx) < grid.nyquist) & (np.abs(ky) < grid.nyquist)
    magnitude = (1.0 + kx**2 + ky**2) ** (-decay_exponent / 2)
    coeffs = np.where(half, magnitude * np.exp(1j * phases), 0.0)
    coeffs = coeffs + np.conj(np.roll(np.flip(coeffs, (0, 1)), 1, (0, 1)))
    norm = float(np.linalg.norm(coeffs))
    if norm:
        coeffs *= amplitude / norm

    return SpectralField(grid, coeffs)


def build_initial_state(cfg: SimConfig, /) -> time_integration.State:
    """Construct the initial state `(P_M u0, (I - Δ) P_M u0)` described by a configuration.

    Raises
    ------
    driftwave.errors.ConfigError
        If the initial condition's parameters are unusable.
    """
    config_.check_config(cfg)
    grid = cfg.grid_spec
    params = cfg.ic.params
    ic_type = cfg.ic.type
    if ic_type is config_.ICType.SINGLE_MODE:
        u0 = single_mode(grid, WaveIndex(params.xi_x, params.xi_y), params.amplitude)

    elif ic_type is config_.ICType.GAUSSIAN_VORTEX:
        width = grid.length / 8 if params.width is None else params.width
        u0 = gaussian_vortex(grid, params.amplitude, width)

    elif ic_type is config_.ICType.RANDOM_SPECTRUM:
        assert params.seed is not None
        u0 = random_spectrum(grid, params.seed, params.amplitude, params.decay_exponent)

    else:
        assert params.path is not None
        try:
            snapshot = snapshots.load_snapshot(params.path)

        except errors.SnapshotError as exc:
            raise errors.ConfigError(str(exc), "ic.params.path") from exc

        header = snapshot.header
        if header.n != grid.n or not math.isclose(header.length, grid.length):
            raise errors.ConfigError(
                f"snapshot grid (L={header.length}, n={header.n}) doesn't match the configured grid", "ic.params.path"
            )

        u0 = snapshot.to_state(dealias_fraction=grid.dealias_fraction).u

    return time_integration.State.from_u(0.0, spectral_grid.project(u0, cfg.radius))


def _step_count(cfg: SimConfig, /) -> int:
    return round(cfg.time.T / cfg.time.dt)


def make_stepper(cfg: SimConfig, /) -> abc.Stepper:
    """Create the one-step integrator a configuration selects.

    Raises
    ------
    ValueError
        If the configuration selects the Picard construction, which isn't a one-step method.
    """
    solver = cfg.solver
    if solver.mode is config_.SolverMode.CN:
        params = time_integration.SchemeParams(
            tau=cfg.time.dt,
            corrector_tol=solver.tol,
            max_correctors=solver.max_iters,
            advection_time_centering=solver.centering,
            radius=cfg.radius,
            nonlinearity=solver.nonlinearity,
        )
        return time_integration.CrankNicolsonStepper(params, cfg.physics.k)

    if solver.mode is config_.SolverMode.RK4:
        return time_integration.RungeKuttaStepper(
            cfg.time.dt, cfg.physics.k, radius=cfg.radius, nonlinearity=solver.nonlinearity
        )

    raise ValueError(f"{solver.mode.value} isn't a one-step method")


def evolve(
    cfg: SimConfig, initial: time_integration.State, /
) -> collections.Iterator[tuple[time_integration.State, abc.StepStats]]:
    """Yield the initial state and then every state the configured solver produces up to `time.T`.

    Each state comes with the solver statistics of the step that produced it.
    """
    steps = _step_count(cfg)
    yield initial, abc.StepStats(0, 0.0)
    if cfg.solver.mode is config_.SolverMode.PICARD_GALERKIN:
        if not steps:
            return

        params = time_integration.PicardParams(
            tau=cfg.time.dt,
            tol=cfg.solver.tol,
            max_iterations=cfg.solver.max_iters,
            c_e=cfg.estimates.c_e,
            c_inf=cfg.estimates.c_inf,
        )
        result = time_integration.picard_fixed_point(initial.u, cfg.radius, cfg.physics.k, steps * cfg.time.dt, params)
        stats = abc.StepStats(result.iterations, result.residual_history[-1])
        for state in result.trajectory[1:]:
            yield state, stats

        return

    stepper = make_stepper(cfg)
    state = initial
    for _ in range(steps):
        state = stepper.step(state)
        yield state, stepper.last_stats


def simulate(cfg: SimConfig, /) -> time_integration.Trajectory:
    """Run a configuration in memory without writing outputs."""
    return time_integration.Trajectory(state for state, _ in evolve(cfg, build_initial_state(cfg)))


def _final_state(cfg: SimConfig, /) -> time_integration.State:
    state = None
    for state, _ in evolve(cfg, build_initial_state(cfg)):
        pass

    assert state is not None
    return state


@dataclasses.dataclass(frozen=True)
class RunReport:
    """Summary of a completed run."""

    status: str
    """`"complete"`."""

    steps: int
    """Number of steps taken."""

    t_final: float
    """Time of the last state."""

    wall_time: float
    """Elapsed wall-clock seconds."""

    margins: dict[str, float]
    """A priori estimate margins keyed `estimate1` to `estimate4`."""

    window: diagnostics.WindowReport
    """Existence window of the initial data."""

    output_dir: pathlib.Path
    """Directory holding the run's outputs."""

    def format(self) -> str:
        """Render the report as `key = value` lines."""
        lines = [
            f"status = {self.status}",
            f"steps = {self.steps}",
            f"t_final = {self.t_final!r}",
            f"wall_time = {self.wall_time:.3f}s",
            f"output_dir = {self.output_dir}",
            f"T_max = {self.window.t_max!r}",
        ]
        lines.extend(f"{name} margin = {value!r}" for name, value in self.margins.items())
        return "\n".join(lines)


def _write_manifest(directory: pathlib.Path, cfg: SimConfig, status: str, steps: int, t: float, /) -> None:
    manifest = {
        "config": cfg.model_dump(mode="json"),
        "seed": cfg.ic.params.seed,
        "status": status,
        "steps": steps,
        "t_final": t,
    }
    (directory / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run(cfg: SimConfig, /, *, hooks: typing.Optional[hooks_.RunHooks] = None) -> RunReport:
    """Run a configuration, persisting diagnostics, snapshots and a manifest.

    One `DiagnosticsRecord` row is written to `diagnostics.csv` per state
    (including the initial one) and a snapshot `snapshot_<step>.hmsnap` every
    `output.every` steps, starting with the initial state. `MANIFEST.json`
    records the configuration, seed and whether the run completed.

    Parameters
    ----------
    cfg : driftwave.config.SimConfig
        The configuration.

    Other Parameters
    ----------------
    hooks : typing.Optional[driftwave.hooks.RunHooks]
        Callbacks to trigger during the run.

    Returns
    -------
    RunReport
        Summary with the a priori estimate margins and wall time.

    Raises
    ------
    driftwave.errors.ConfigError
        If the configuration is unusable.
    driftwave.errors.NonConvergenceError
        If the solver fails to converge; partial outputs are kept and the
        manifest is marked `"truncated"`.
    driftwave.errors.DivergenceError
        If the solution blows up; handled as for `NonConvergenceError`.
    """
    started = time.perf_counter()
    initial = build_initial_state(cfg)
    directory = pathlib.Path(cfg.output.dir)
    directory.mkdir(parents=True, exist_ok=True)
    k = cfg.physics.k
    window_report = diagnostics.existence_window(
        initial.w, initial.u, k, cfg.estimates.c_e, cfg.estimates.c_inf, horizon=cfg.time.T
    )
    _LOGGER.info("Starting %s run to T=%s in %s", cfg.solver.mode.value, cfg.time.T, directory)
    _write_manifest(directory, cfg, "running", 0, 0.0)

    series = diagnostics.EstimateSeries()
    steps = 0
    state = initial
    with (directory / CSV_NAME).open("w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(diagnostics.CSV_COLUMNS)
        try:
            for steps, (state, stats) in enumerate(evolve(cfg, initial)):
                entry = diagnostics.record(state, stats)
                writer.writerow(entry.as_row())
                series.append(state)
                _LOGGER.debug("t=%s |grad w|_inf=%.6e", state.t, entry.linf_grad_w)
                if hooks:
                    hooks.trigger_step(entry, state)

                if steps % cfg.output.every == 0:
                    path = snapshots.save_snapshot(directory / f"snapshot_{steps:06d}.hmsnap", state, k)
                    if hooks:
                        hooks.trigger_snapshot(path, state)

        except (errors.NonConvergenceError, errors.DivergenceError) as exc:
            file.flush()
            _write_manifest(directory, cfg, "truncated", steps, state.t)
            _LOGGER.warning("Run truncated at t=%s: %s", state.t, exc)
            if hooks:
                hooks.trigger_error(exc)

            raise

    horizon = series.horizon
    linf_margin, h1_margin = series.estimate2_3(k, cfg.estimates.c_inf, horizon)
    margins = {
        "estimate1": series.estimate1(k, horizon),
        "estimate2": linf_margin,
        "estimate3": h1_margin,
        "estimate4": series.estimate4(k, cfg.estimates.c_inf),
    }
    for name, value in margins.items():
        if value < 0:
            _LOGGER.warning("%s margin is negative (%.3e)", name, value)

    _write_manifest(directory, cfg, "complete", steps, state.t)
    report = RunReport(
        status="complete",
        steps=steps,
        t_final=state.t,
        wall_time=time.perf_counter() - started,
        margins=margins,
        window=window_report,
        output_dir=directory,
    )
    _LOGGER.info("Finished run at t=%s after %s steps (%.3fs)", state.t, steps, report.wall_time)
    return report


@dataclasses.dataclass(frozen=True)
class OrderReport:
    """Outcome of a convergence study."""

    resolutions: list[float]
    """Time steps or grid sizes, coarse to fine."""

    errors: list[float]
    """L² error of the final `w` against the reference, per resolution."""

    orders: list[float]
    """Observed orders between consecutive resolutions."""

    reference: float
    """Resolution of the reference solution."""

    def format(self) -> str:
        """Render the report as a table."""
        lines = [f"reference = {self.reference!r}", "resolution,error,order"]
        padded = [math.nan, *self.orders]
        lines.extend(f"{res!r},{err!r},{order!r}" for res, err, order in zip(self.resolutions, self.errors, padded))
        return "\n".join(lines)


def _check_resolutions(values: collections.Sequence[float], name: str, /) -> None:
    if len(values) < 3:
        raise errors.StudyError(f"A convergence study needs at least 3 {name}, got {len(values)}")

    if len(set(values)) != len(values):
        raise errors.StudyError(f"Duplicate {name} in study: {list(values)}")

    if any(value <= 0 for value in values):
        raise errors.StudyError(f"All {name} must be positive")


def converge_time(cfg: SimConfig, taus: collections.Sequence[float], /) -> OrderReport:
    """Observe the temporal order of the configured solver.

    Runs every time step to `time.T`. Orders come from Richardson's estimate on
    successive differences, `log(‖w_τ1 - w_τ2‖ / ‖w_τ2 - w_τ3‖) / log(τ1 / τ2)`,
    so they don't depend on knowing the exact solution. The reported errors are
    measured against the finest run.

    Raises
    ------
    driftwave.errors.StudyError
        If fewer than 3 distinct positive time steps are given.
    """
    _check_resolutions(taus, "time steps")
    ordered = sorted((float(tau) for tau in taus), reverse=True)
    finals = [_final_state(config_.override(cfg, "time.dt", tau)).w for tau in ordered]
    differences = [spectral_grid.sobolev_norm(coarse - fine, 0) for coarse, fine in zip(finals, finals[1:])]
    orders = utilities.observed_orders(ordered[:-1], differences)
    report = OrderReport(
        resolutions=ordered,
        errors=[spectral_grid.sobolev_norm(final - finals[-1], 0) for final in finals],
        orders=orders,
        reference=ordered[-1],
    )
    _LOGGER.info("Temporal orders for %s: %s", cfg.solver.mode.value, orders)
    return report


def converge_space(
    cfg: SimConfig, ns: collections.Sequence[int], /, *, reference_n: typing.Optional[int] = None
) -> OrderReport:
    """Observe spatial convergence against a 4× finer reference run.

    Every run uses the grid's own dealias radius. Final vorticities are moved
    onto the reference grid by `driftwave.spectral_grid.resample` and compared
    in L².

    Other Parameters
    ----------------
    reference_n : typing.Optional[int]
        Reference grid size; defaults to four times the largest of `ns`.

    Raises
    ------
    driftwave.errors.StudyError
        If fewer than 3 distinct positive sizes are given or the reference isn't finer than all of them.
    """
    _check_resolutions(ns, "grid sizes")
    ordered = sorted(int(n) for n in ns)
    reference_n = 4 * ordered[-1] if reference_n is None else reference_n
    if reference_n <= ordered[-1]:
        raise errors.StudyError("The reference grid must be finer than every studied grid")

    base = config_.override(cfg, "solver.radius", None)
    reference = _final_state(config_.override(base, "grid.n", reference_n)).w
    errors_ = [
        spectral_grid.sobolev_norm(
            spectral_grid.resample(_final_state(config_.override(base, "grid.n", n)).w, reference.grid) - reference, 0
        )
        for n in ordered
    ]
    spacings = [cfg.domain.L / n for n in ordered]
    report = OrderReport(
        resolutions=[float(n) for n in ordered],
        errors=errors_,
        orders=utilities.observed_orders(spacings, errors_),
        reference=float(reference_n),
    )
    _LOGGER.info("Spatial errors against n=%s: %s", reference_n, errors_)
    return report


def window(
    cfg: SimConfig, /, *, variant: diagnostics.WindowVariant = diagnostics.WindowVariant.H3
) -> diagnostics.WindowReport:
    """Evaluate the existence window for the configured initial condition.

    A `driftwave.errors.WindowWarning` is emitted when `time.T` lies outside it.
    """
    initial = build_initial_state(cfg)
    report = diagnostics.existence_window(
        initial.w, initial.u, cfg.physics.k, cfg.estimates.c_e, cfg.estimates.c_inf, variant, horizon=cfg.time.T
    )
    if not report.covers(cfg.time.T):
        _LOGGER.warning("T=%s exceeds the existence window T_max=%s", cfg.time.T, report.t_max)
        warnings.warn(
            f"T={cfg.time.T} exceeds the existence window T_max={report.t_max}",
            category=errors.WindowWarning,
            stacklevel=2,
        )

    return report


@dataclasses.dataclass(frozen=True)
class DispersionReport:
    """Measured and analytic frequency of a single-mode run."""

    xi: WaveIndex
    expected: float
    measured: float
    relative_error: float

    def format(self) -> str:
        """Render the report as `key = value` lines."""
        return "\n".join(
            [
                f"xi = ({self.xi.xi_x}, {self.xi.xi_y})",
                f"expected = {self.expected!r}",
                f"measured = {self.measured!r}",
                f"relative_error = {self.relative_error!r}",
            ]
        )


def dispersion(cfg: SimConfig, /) -> DispersionReport:
    """Measure the frequency of a single-mode run by phase regression.

    Raises
    ------
    driftwave.errors.ConfigError
        If the initial condition isn't a single mode.
    """
    if cfg.ic.type is not config_.ICType.SINGLE_MODE:
        raise errors.ConfigError("dispersion runs need a single_mode initial condition", "ic.type")

    xi = WaveIndex(cfg.ic.params.xi_x, cfg.ic.params.xi_y)
    times: list[float] = []
    samples: list[complex] = []
    for state, _ in evolve(cfg, build_initial_state(cfg)):
        times.append(state.t)
        samples.append(state.u.coeff(xi))

    measured = diagnostics.measure_frequency(times, samples)
    report = DispersionReport(
        xi=xi,
        expected=diagnostics.expected_frequency(xi, cfg.physics.k, cfg.domain.L),
        measured=measured,
        relative_error=diagnostics.dispersion_check(xi, cfg.physics.k, cfg.domain.L, measured),
    )
    _LOGGER.info("Dispersion for ξ=%s: measured %s, expected %s", tuple(xi), report.measured, report.expected)
    return report


class SweepResult(typing.NamedTuple):
    """Outcome of one configuration in a sweep."""

    path: pathlib.Path
    """The configuration file."""

    report: typing.Optional[RunReport]
    """The run report, `None` if the run failed."""

    error: typing.Optional[BaseException]
    """The exception which ended the run, `None` on success."""


async def sweep(
    directory: typing.Union[str, pathlib.Path], /, *, max_workers: typing.Optional[int] = None
) -> list[SweepResult]:
    """Run every `*.json` configuration in a directory concurrently.

    Each run writes to `<output.dir>/<config stem>` so runs never share files.

    Other Parameters
    ----------------
    max_workers : typing.Optional[int]
        Worker threads; defaults to `HM_THREADS` and then the executor default.

    Returns
    -------
    list[SweepResult]
        One result per configuration, sorted by file name.

    Raises
    ------
    driftwave.errors.ConfigError
        If the directory holds no configurations.
    """
    directory = pathlib.Path(directory)
    paths = sorted(directory.glob("*.json"))
    if not paths:
        raise errors.ConfigError(f"no *.json configurations found in {directory}", None)

    def job(path: pathlib.Path, /) -> collections.Callable[[], RunReport]:
        def call() -> RunReport:
            cfg = config_.load_config(path)
            return run(config_.override(cfg, "output.dir", str(pathlib.Path(cfg.output.dir) / path.stem)))

        return call

    outcomes = await utilities.gather_in_threads(
        [job(path) for path in paths], max_workers=max_workers, return_exceptions=True
    )
    results: list[SweepResult] = []
    for path, outcome in zip(paths, outcomes):
        if isinstance(outcome, BaseException):
            _LOGGER.warning("Sweep run %s failed: %s", path.name, outcome)
            results.append(SweepResult(path, None, outcome))

        else:
            results.append(SweepResult(path, outcome, None))

    return results
