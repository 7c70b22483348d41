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

# pyright: reportUnknownMemberType=none
# pyright: reportPrivateUsage=none
# This leads to too many false-positives around mocks.

import math

import numpy as np
import pytest

import driftwave
from driftwave import diagnostics
from driftwave import elliptic_solver
from driftwave import spectral_grid
from driftwave import time_integration

_GRID = driftwave.GridSpec(2 * math.pi, 16)


def _small_field(grid: driftwave.GridSpec, seed: int, radius: int, norm: float, /) -> driftwave.SpectralField:
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((grid.n, grid.n))
    field = spectral_grid.project(spectral_grid.forward_transform(driftwave.RealField(grid, samples)), radius)
    return field * (norm / spectral_grid.sobolev_norm(field, 0))


def _steady_trajectory(norm: float, times: list[float], /) -> time_integration.Trajectory:
    # Not a solution: the same cosine mode held at every sample time.
    u = driftwave.SpectralField.real_mode(_GRID, driftwave.WaveIndex(0, 1), norm=norm)
    return time_integration.Trajectory(time_integration.State.from_u(t, u) for t in times)


def _cn_trajectory(seed: int, steps: int, /) -> time_integration.Trajectory:
    params = time_integration.SchemeParams(
        0.01, corrector_tol=1e-12, advection_time_centering=time_integration.Centering.SYMMETRIC_W
    )
    initial = time_integration.State.from_u(0.0, _small_field(_GRID, seed, _GRID.dealias_radius, 0.05))
    return time_integration.integrate(time_integration.CrankNicolsonStepper(params, 1.0), initial, steps)


class TestRecord:
    def test_single_mode(self):
        norm = 0.5
        state = _steady_trajectory(norm, [0.25])[0]

        result = diagnostics.record(state, driftwave.StepStats(4, 1e-11))

        assert result.t == 0.25
        assert result.energy == pytest.approx(2 * norm**2)
        assert result.enstrophy == pytest.approx(4 * norm**2)
        assert result.l2_w == pytest.approx(2 * norm)
        assert result.h1_w == pytest.approx(2 ** 1.5 * norm)
        assert result.linf_w == pytest.approx(2 * math.sqrt(2) * norm / (2 * math.pi))
        assert result.linf_grad_w == pytest.approx(2 * math.sqrt(2) * norm / (2 * math.pi))
        assert result.corrector_iters == 4
        assert result.residual == 1e-11

    def test_default_stats(self):
        result = diagnostics.record(_steady_trajectory(1.0, [0.0])[0])

        assert result.corrector_iters == 0
        assert result.residual == 0.0

    def test_as_row(self):
        result = diagnostics.DiagnosticsRecord(
            t=1.0, energy=2.0, enstrophy=3.0, l2_w=4.0, h1_w=5.0, linf_w=6.0, corrector_iters=7, residual=8.0
        )

        assert result.as_row() == (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7, 8.0)
        assert len(diagnostics.CSV_COLUMNS) == len(result.as_row())

    def test_matches_quadrature(self):
        state = time_integration.State.from_u(0.0, _small_field(_GRID, 1, 7, 0.3))

        energy, enstrophy = diagnostics.quadrature_invariants(state)

        result = diagnostics.record(state)
        assert energy == pytest.approx(result.energy, rel=1e-12)
        assert enstrophy == pytest.approx(result.enstrophy, rel=1e-12)


class TestEstimateSeries:
    def test_append_when_not_increasing(self):
        series = diagnostics.EstimateSeries()
        state = _steady_trajectory(1.0, [0.5])[0]
        series.append(state)

        with pytest.raises(ValueError, match="increasing time order"):
            series.append(state)

    def test_when_empty(self):
        series = diagnostics.EstimateSeries()

        assert len(series) == 0
        assert series.horizon == 0.0
        with pytest.raises(ValueError, match="No states"):
            series.estimate1(1.0)

    def test_from_trajectory(self):
        trajectory = _steady_trajectory(1.0, [0.0, 0.5, 2.0])

        series = diagnostics.EstimateSeries.from_trajectory(trajectory)

        assert len(series) == 3
        assert series.horizon == 2.0
        np.testing.assert_array_equal(series.times, [0.0, 0.5, 2.0])

    def test_estimate1_for_steady_mode(self):
        series = diagnostics.EstimateSeries.from_trajectory(_steady_trajectory(0.5, [0.0, 0.25, 0.5, 1.0]))

        assert series.estimate1(2.0) == pytest.approx(math.sqrt(2))
        assert series.estimate1(2.0, 4.0) == pytest.approx(2 * math.sqrt(2))
        assert series.estimate1(0.0) == pytest.approx(0.0, abs=1e-15)

    def test_estimate2_3_for_steady_mode_without_drift(self):
        trajectory = _steady_trajectory(0.5, [0.0, 0.5, 1.0])
        series = diagnostics.EstimateSeries.from_trajectory(trajectory)

        linf_margin, h1_margin = series.estimate2_3(0.0, 1.0)

        assert linf_margin == pytest.approx(spectral_grid.sup_norm(trajectory[0].w))
        assert h1_margin == pytest.approx(16 / math.pi)

    def test_estimate2_3_grows_with_drift(self):
        series = diagnostics.EstimateSeries.from_trajectory(_steady_trajectory(0.5, [0.0, 0.5, 1.0]))

        low = series.estimate2_3(0.5, 1.0)
        high = series.estimate2_3(1.0, 1.0)

        assert high[0] > low[0] > 0
        assert high[1] > low[1] > 0

    def test_estimate4_for_steady_mode(self):
        series = diagnostics.EstimateSeries.from_trajectory(_steady_trajectory(0.5, [0.0, 0.5, 1.0]))

        assert series.estimate4(0.0, 1.0) == pytest.approx(8.0)

    def test_estimate4_differences_linear_series_exactly(self):
        grid = driftwave.GridSpec(2 * math.pi, 16)
        w0 = _small_field(grid, 2, 5, 1.0)
        rate = _small_field(grid, 3, 5, 0.5)
        times = [0.0, 0.1, 0.3, 0.6]
        series = diagnostics.EstimateSeries.from_trajectory(
            time_integration.State.from_w(t, w0 + t * rate) for t in times
        )

        assert series.estimate4(0.0, 0.0) == pytest.approx(-math.sqrt(0.6) * 0.5, rel=1e-10)

    def test_estimate4_for_single_state(self):
        series = diagnostics.EstimateSeries.from_trajectory(_steady_trajectory(0.5, [0.0]))

        assert series.estimate4(1.0, 1.0) == 0.0

    def test_append_matches_from_trajectory(self):
        trajectory = _steady_trajectory(0.3, [0.0, 0.2, 0.4])
        series = diagnostics.EstimateSeries()

        for state in trajectory:
            series.append(state)

        expected = diagnostics.EstimateSeries.from_trajectory(trajectory)
        assert series.estimate1(1.0) == expected.estimate1(1.0)
        assert series.estimate2_3(1.0, 2.0) == expected.estimate2_3(1.0, 2.0)
        assert series.estimate4(1.0, 2.0) == expected.estimate4(1.0, 2.0)


class TestChecks:
    def test_delegate_to_series(self):
        trajectory = _steady_trajectory(0.5, [0.0, 0.5, 1.0])
        series = diagnostics.EstimateSeries.from_trajectory(trajectory)

        assert diagnostics.check_estimate1(trajectory, 2.0) == series.estimate1(2.0)
        assert diagnostics.check_estimate1(trajectory, 2.0, 3.0) == series.estimate1(2.0, 3.0)
        assert diagnostics.check_estimate2_3(trajectory, 2.0, 1.0) == series.estimate2_3(2.0, 1.0)
        assert diagnostics.check_estimate4(trajectory, 2.0, 1.0) == series.estimate4(2.0, 1.0)

    def test_hold_along_computed_trajectory(self):
        trajectory = _cn_trajectory(4, 20)

        assert diagnostics.check_estimate1(trajectory, 1.0) >= -1e-12
        linf_margin, h1_margin = diagnostics.check_estimate2_3(trajectory, 1.0, 1.0)
        assert linf_margin > 0
        assert h1_margin > 0
        assert diagnostics.check_estimate4(trajectory, 1.0, 1.0) > 0


class TestWindowFromNorms:
    def test_h3_without_drift(self):
        inputs = diagnostics.WindowInputs(k=0.0, c_e=1.0, c_inf=1.0, w0_linf=1.0, w0_h1=2.0, u0_h2=3.0)

        result = diagnostics.window_from_norms(inputs)

        assert result.variant is diagnostics.WindowVariant.H3
        assert result.a_const == 0.0
        assert result.b_const == 17.0
        assert result.c_const == 2.0
        assert result.t_max == pytest.approx(1 / 17)
        assert result.horizon == pytest.approx(1 / 34)
        assert result.c_x == pytest.approx(2 * 2.0 / math.sqrt(34))
        assert result.inputs is inputs

    def test_h3_with_drift(self):
        inputs = diagnostics.WindowInputs(k=-1.0, c_e=1.0, c_inf=1.0, w0_linf=0.0, w0_h1=1.0, u0_h2=0.0)

        result = diagnostics.window_from_norms(inputs, horizon=1 / 22)

        assert result.a_const == 16.0
        assert result.b_const == 3.0
        assert result.c_const == 1.0
        assert result.t_max == pytest.approx(1 / 11)
        assert result.horizon == 1 / 22
        assert result.c_x == pytest.approx((1 - 3 / 22) / (32 * (1 / 22) ** 1.5))

    def test_h2(self):
        inputs = diagnostics.WindowInputs(k=1.0, c_e=1.0, c_inf=5.0, w0_linf=9.0, w0_h1=9.0, u0_h2=2.0)

        result = diagnostics.window_from_norms(inputs, diagnostics.WindowVariant.H2, horizon=0.25)

        assert result.a_const == 0.0
        assert result.b_const == 2.0
        assert result.c_const == 6.0
        assert result.t_max == pytest.approx(0.5)
        assert result.c_x == pytest.approx(6.0 * 0.5 / 0.75)

    @pytest.mark.parametrize("horizon", [0.0, 1.0, -1.0])
    def test_falls_back_to_half_window(self, horizon: float):
        inputs = diagnostics.WindowInputs(k=1.0, c_e=1.0, c_inf=1.0, w0_linf=0.0, w0_h1=1.0, u0_h2=0.0)

        result = diagnostics.window_from_norms(inputs, horizon=horizon)

        assert result.horizon == pytest.approx(result.t_max / 2)

    def test_t_max_shrinks_with_data(self):
        def t_max(k: float, w0_linf: float, w0_h1: float) -> float:
            inputs = diagnostics.WindowInputs(k=k, c_e=1.0, c_inf=1.0, w0_linf=w0_linf, w0_h1=w0_h1, u0_h2=0.0)
            return diagnostics.window_from_norms(inputs).t_max

        assert t_max(1.0, 1.0, 1.0) > t_max(2.0, 1.0, 1.0)
        assert t_max(1.0, 1.0, 1.0) > t_max(1.0, 2.0, 1.0)
        assert t_max(1.0, 1.0, 1.0) > t_max(1.0, 1.0, 2.0)
        assert t_max(1.0, 1.0, 1.0) == t_max(-1.0, 1.0, 1.0)

    def test_covers(self):
        inputs = diagnostics.WindowInputs(k=0.0, c_e=1.0, c_inf=1.0, w0_linf=1.0, w0_h1=2.0, u0_h2=3.0)
        result = diagnostics.window_from_norms(inputs)

        assert result.covers(0.0)
        assert result.covers(0.05)
        assert not result.covers(1 / 17)
        assert not result.covers(-0.01)

    def test_format(self):
        inputs = diagnostics.WindowInputs(k=1.0, c_e=1.0, c_inf=1.0, w0_linf=0.0, w0_h1=1.0, u0_h2=2.0)

        result = diagnostics.window_from_norms(inputs, diagnostics.WindowVariant.H2).format()

        lines = result.splitlines()
        assert lines[0] == "variant = H2"
        assert "T_max = 0.5" in lines
        assert lines[-1].startswith("C_X(T=0.25) = ")


class TestExistenceWindow:
    def test(self):
        u0 = driftwave.SpectralField.real_mode(_GRID, driftwave.WaveIndex(1, 0), norm=0.5)
        w0 = elliptic_solver.apply_helmholtz(u0)

        result = diagnostics.existence_window(w0, u0, 2.0, 1.5, 0.5)

        assert result.inputs == diagnostics.WindowInputs(
            k=2.0,
            c_e=1.5,
            c_inf=0.5,
            w0_linf=pytest.approx(2 * math.sqrt(2) * 0.5 / (2 * math.pi)),
            w0_h1=pytest.approx(2 ** 1.5 * 0.5),
            u0_h2=pytest.approx(2 * 0.5),
        )
        assert result.a_const == pytest.approx(16 * 2.0 * 0.5 * 1.5)

    def test_with_variant_and_horizon(self):
        u0 = driftwave.SpectralField.real_mode(_GRID, driftwave.WaveIndex(1, 0), norm=0.5)
        w0 = elliptic_solver.apply_helmholtz(u0)

        result = diagnostics.existence_window(w0, u0, 1.0, 1.0, 1.0, diagnostics.WindowVariant.H2, horizon=0.1)

        assert result.variant is diagnostics.WindowVariant.H2
        assert result.t_max == pytest.approx(0.5)
        assert result.horizon == 0.1


class TestDispersion:
    @pytest.mark.parametrize(
        ("xi", "k", "length", "expected"),
        [
            (driftwave.WaveIndex(0, 1), 1.0, 2 * math.pi, -0.5),
            (driftwave.WaveIndex(0, 1), -2.0, 2 * math.pi, 1.0),
            (driftwave.WaveIndex(3, 0), 1.0, 2 * math.pi, 0.0),
            (driftwave.WaveIndex(1, 1), 1.0, 2 * math.pi, -1 / 3),
        ],
    )
    def test_expected_frequency(self, xi: driftwave.WaveIndex, k: float, length: float, expected: float):
        assert diagnostics.expected_frequency(xi, k, length) == pytest.approx(expected)

    def test_dispersion_check(self):
        assert diagnostics.dispersion_check(driftwave.WaveIndex(0, 1), 1.0, 2 * math.pi, -0.51) == pytest.approx(0.02)

    def test_dispersion_check_when_expected_zero(self):
        assert diagnostics.dispersion_check(driftwave.WaveIndex(2, 0), 1.0, 1.0, 0.003) == pytest.approx(0.003)

    def test_measure_frequency(self):
        times = np.linspace(0.0, 10.0, 201)

        result = diagnostics.measure_frequency(times, 0.3 * np.exp(-3j * times + 0.7j))

        assert result == pytest.approx(3.0)

    def test_measure_frequency_when_too_few_samples(self):
        with pytest.raises(ValueError, match="at least two"):
            diagnostics.measure_frequency([0.0], [1.0])


class TestIntegralFormResidual:
    def test_small_for_computed_trajectory(self):
        trajectory = _cn_trajectory(5, 20)

        result = diagnostics.integral_form_residual(trajectory, 1.0, _GRID.dealias_radius)

        assert result < 1e-4 * spectral_grid.sobolev_norm(trajectory[0].w, 0)

    def test_large_for_wrong_drift(self):
        trajectory = _cn_trajectory(5, 20)

        right = diagnostics.integral_form_residual(trajectory, 1.0, _GRID.dealias_radius)
        wrong = diagnostics.integral_form_residual(trajectory, -1.0, _GRID.dealias_radius)

        assert wrong > 100 * right

    def test_for_single_state(self):
        assert diagnostics.integral_form_residual(_steady_trajectory(1.0, [0.0]), 1.0, 2) == 0.0


class TestNormChecks:
    @pytest.mark.parametrize("radius", [0, 2, 5])
    def test_norm_equivalence_check(self, radius: int):
        field = _small_field(_GRID, 6, 7, 1.0)

        l2, energy, ceiling = diagnostics.norm_equivalence_check(field, radius)

        assert l2 <= energy <= ceiling

    def test_projection_linf_ratio_for_resolved_field(self):
        field = _small_field(_GRID, 7, 3, 1.0)

        assert diagnostics.projection_linf_ratio(field, 3) == pytest.approx(1.0)

    def test_projection_linf_ratio_for_truncated_field(self):
        field = _small_field(_GRID, 8, 7, 1.0)

        assert diagnostics.projection_linf_ratio(field, 2) > 0

    def test_projection_linf_ratio_when_zero(self):
        with pytest.raises(ValueError, match="zero field"):
            diagnostics.projection_linf_ratio(driftwave.SpectralField.zeros(_GRID), 2)
