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

import csv
import json
import math
import pathlib
import typing
import warnings
from unittest import mock

import numpy as np
import pytest

import driftwave
from driftwave import config
from driftwave import harness
from driftwave import spectral_grid
from driftwave import time_integration


def _config(directory: pathlib.Path, /, **groups: dict[str, typing.Any]) -> config.SimConfig:
    data: dict[str, typing.Any] = {
        "grid": {"n": 16},
        "time": {"dt": 0.05, "T": 0.2},
        "ic": {"type": "random_spectrum", "params": {"seed": 3, "amplitude": 0.05}},
        "output": {"dir": str(directory / "out"), "every": 2},
    }
    for name, values in groups.items():
        data[name] = {**data.get(name, {}), **values}

    return config.parse_config(data)


def _read_csv(path: pathlib.Path, /) -> list[list[str]]:
    with path.open(newline="", encoding="utf-8") as file:
        return list(csv.reader(file))


class TestInitialConditions:
    @pytest.mark.parametrize("xi", [driftwave.WaveIndex(0, 1), driftwave.WaveIndex(2, -3), driftwave.WaveIndex(0, 0)])
    def test_single_mode(self, xi: driftwave.WaveIndex):
        grid = driftwave.GridSpec(3.0, 16)
        x, y = spectral_grid.collocation_points(grid)

        result = spectral_grid.inverse_transform(harness.single_mode(grid, xi, 0.2))

        expected = 0.2 * np.cos(2 * math.pi * (xi.xi_x * x + xi.xi_y * y) / 3.0)
        np.testing.assert_allclose(result.samples, expected, atol=1e-14)

    def test_gaussian_vortex_matches_periodized_samples(self):
        grid = driftwave.GridSpec(2 * math.pi, 32)

        result = spectral_grid.inverse_transform(harness.gaussian_vortex(grid, 0.3, grid.length / 8))

        expected = harness.periodized_gaussian_samples(grid, 0.3, grid.length / 8)
        np.testing.assert_allclose(result.samples, expected, atol=1e-10)

    def test_gaussian_vortex_with_center(self):
        grid = driftwave.GridSpec(2.0, 32)

        result = spectral_grid.inverse_transform(harness.gaussian_vortex(grid, 1.0, 0.2, center=(0.5, 1.5)))

        expected = harness.periodized_gaussian_samples(grid, 1.0, 0.2, center=(0.5, 1.5))
        np.testing.assert_allclose(result.samples, expected, atol=1e-10)
        assert np.unravel_index(np.argmax(result.samples), result.samples.shape) == (8, 24)

    def test_random_spectrum(self):
        grid = driftwave.GridSpec(2 * math.pi, 16)

        result = harness.random_spectrum(grid, 5, 0.25, 4.0)

        assert spectral_grid.sobolev_norm(result, 0) == pytest.approx(0.25)
        assert result.coeff(driftwave.WaveIndex(0, 0)) == 0
        assert not np.any(result.coeffs[8, :])
        assert not np.any(result.coeffs[:, 8])
        assert spectral_grid.hermitian_violation(result.coeffs) == 0.0

    def test_random_spectrum_is_reproducible(self):
        grid = driftwave.GridSpec(1.0, 16)

        first = harness.random_spectrum(grid, 9, 1.0, 2.0)
        second = harness.random_spectrum(grid, 9, 1.0, 2.0)
        other = harness.random_spectrum(grid, 10, 1.0, 2.0)

        np.testing.assert_array_equal(first.coeffs, second.coeffs)
        assert np.any(first.coeffs != other.coeffs)

    def test_random_spectrum_decays(self):
        grid = driftwave.GridSpec(1.0, 32)

        result = harness.random_spectrum(grid, 1, 1.0, 4.0)

        low = abs(result.coeff(driftwave.WaveIndex(1, 0)))
        high = abs(result.coeff(driftwave.WaveIndex(10, 0)))
        assert high / low == pytest.approx((2 / 101) ** 2)


class TestBuildInitialState:
    def test_single_mode(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, ic={"type": "single_mode", "params": {"xi_x": 1, "xi_y": 2, "amplitude": 0.1}})

        result = harness.build_initial_state(cfg)

        grid = driftwave.GridSpec(2 * math.pi, 16)
        expected = harness.single_mode(grid, driftwave.WaveIndex(1, 2), 0.1)
        assert result.t == 0.0
        np.testing.assert_array_equal(result.u.coeffs, expected.coeffs)

    def test_projects_onto_radius(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, solver={"radius": 2})

        result = harness.build_initial_state(cfg)

        kx, ky = result.grid.wavenumbers
        assert not np.any(result.u.coeffs[np.maximum(np.abs(kx), np.abs(ky)) > 2])
        assert np.any(result.u.coeffs)

    def test_gaussian_vortex_default_width(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, ic={"type": "gaussian_vortex", "params": {"amplitude": 1.0}})

        result = harness.build_initial_state(cfg)

        grid = result.grid
        expected = spectral_grid.project(harness.gaussian_vortex(grid, 1.0, grid.length / 8), cfg.radius)
        np.testing.assert_array_equal(result.u.coeffs, expected.coeffs)

    def test_from_file(self, tmp_path: pathlib.Path):
        source = harness.build_initial_state(_config(tmp_path))
        path = driftwave.save_snapshot(tmp_path / "start.hmsnap", source, 1.0)
        cfg = _config(tmp_path, ic={"type": "from_file", "params": {"path": str(path)}})

        result = harness.build_initial_state(cfg)

        np.testing.assert_allclose(result.u.coeffs, source.u.coeffs, rtol=0, atol=1e-12)

    def test_from_file_when_missing(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, ic={"type": "from_file", "params": {"path": str(tmp_path / "missing.hmsnap")}})

        with pytest.raises(driftwave.ConfigError) as exc_info:
            harness.build_initial_state(cfg)

        assert exc_info.value.field == "ic.params.path"

    def test_from_file_when_grid_differs(self, tmp_path: pathlib.Path):
        source = harness.build_initial_state(_config(tmp_path, grid={"n": 8}))
        path = driftwave.save_snapshot(tmp_path / "start.hmsnap", source, 1.0)
        cfg = _config(tmp_path, ic={"type": "from_file", "params": {"path": str(path)}})

        with pytest.raises(driftwave.ConfigError, match="doesn't match") as exc_info:
            harness.build_initial_state(cfg)

        assert exc_info.value.field == "ic.params.path"


class TestMakeStepper:
    def test_cn(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, solver={"tol": 1e-12, "max_iters": 7, "centering": "symmetric_w"}, physics={"k": 2.0})

        result = harness.make_stepper(cfg)

        assert isinstance(result, driftwave.CrankNicolsonStepper)
        assert result.k == 2.0
        assert result.params == driftwave.SchemeParams(
            tau=0.05,
            corrector_tol=1e-12,
            max_correctors=7,
            advection_time_centering=driftwave.Centering.SYMMETRIC_W,
            radius=5,
        )

    def test_rk4(self, tmp_path: pathlib.Path):
        result = harness.make_stepper(_config(tmp_path, solver={"mode": "rk4"}))

        assert isinstance(result, driftwave.RungeKuttaStepper)
        assert result.tau == 0.05

    def test_picard(self, tmp_path: pathlib.Path):
        with pytest.raises(ValueError, match="isn't a one-step method"):
            harness.make_stepper(_config(tmp_path, solver={"mode": "picard_galerkin"}))


class TestSimulate:
    @pytest.mark.parametrize("mode", ["cn", "rk4"])
    def test(self, tmp_path: pathlib.Path, mode: str):
        result = harness.simulate(_config(tmp_path, solver={"mode": mode}))

        assert len(result) == 5
        np.testing.assert_allclose(result.times, [0.0, 0.05, 0.1, 0.15, 0.2])

    @pytest.mark.filterwarnings("ignore::driftwave.errors.WindowWarning")
    def test_picard(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, solver={"mode": "picard_galerkin", "radius": 3}, time={"dt": 0.02, "T": 0.1})

        result = harness.simulate(cfg)

        reference_cfg = _config(
            tmp_path, solver={"radius": 3, "centering": "symmetric_w", "tol": 1e-13}, time={"dt": 0.005, "T": 0.1}
        )
        reference = harness.simulate(reference_cfg)
        assert len(result) == 6
        error = spectral_grid.sobolev_norm(result[-1].u - reference[-1].u, 0)
        assert error < 1e-3 * spectral_grid.sobolev_norm(reference[-1].u, 0)

    def test_with_zero_horizon(self, tmp_path: pathlib.Path):
        result = harness.simulate(_config(tmp_path, time={"T": 0.0}))

        assert len(result) == 1

    def test_evolve_reports_stats(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path)

        result = list(harness.evolve(cfg, harness.build_initial_state(cfg)))

        assert result[0][1] == driftwave.StepStats(0, 0.0)
        assert all(stats.iterations >= 1 for _, stats in result[1:])
        assert all(stats.residual <= 1e-10 for _, stats in result[1:])


class TestRun:
    def test_writes_outputs(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path)

        report = harness.run(cfg)

        directory = tmp_path / "out"
        rows = _read_csv(directory / "diagnostics.csv")
        assert rows[0] == list(driftwave.CSV_COLUMNS)
        assert len(rows) == 6
        assert [float(row[0]) for row in rows[1:]] == pytest.approx([0.0, 0.05, 0.1, 0.15, 0.2])
        assert rows[1][6] == "0"
        assert sorted(path.name for path in directory.glob("*.hmsnap")) == [
            "snapshot_000000.hmsnap",
            "snapshot_000002.hmsnap",
            "snapshot_000004.hmsnap",
        ]
        manifest = json.loads((directory / "MANIFEST.json").read_text(encoding="utf-8"))
        assert manifest["status"] == "complete"
        assert manifest["steps"] == 4
        assert manifest["t_final"] == pytest.approx(0.2)
        assert manifest["seed"] == 3
        assert manifest["config"] == cfg.model_dump(mode="json")
        assert report.status == "complete"
        assert report.steps == 4
        assert report.output_dir == directory
        assert set(report.margins) == {"estimate1", "estimate2", "estimate3", "estimate4"}

    def test_snapshot_holds_final_state(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path)

        harness.run(cfg)

        snapshot = driftwave.load_snapshot(tmp_path / "out" / "snapshot_000004.hmsnap")
        final = harness.simulate(cfg)[-1]
        assert snapshot.header.t == pytest.approx(0.2)
        np.testing.assert_array_equal(snapshot.u_samples, spectral_grid.inverse_transform(final.u).samples)

    def test_is_deterministic(self, tmp_path: pathlib.Path):
        first = _config(tmp_path / "a")
        second = _config(tmp_path / "b")

        harness.run(first)
        harness.run(second)

        for name in ("diagnostics.csv", "snapshot_000000.hmsnap", "snapshot_000004.hmsnap"):
            assert (tmp_path / "a" / "out" / name).read_bytes() == (tmp_path / "b" / "out" / name).read_bytes()

    def test_with_zero_horizon(self, tmp_path: pathlib.Path):
        report = harness.run(_config(tmp_path, time={"T": 0.0}))

        directory = tmp_path / "out"
        assert len(_read_csv(directory / "diagnostics.csv")) == 2
        assert [path.name for path in directory.glob("*.hmsnap")] == ["snapshot_000000.hmsnap"]
        assert report.steps == 0
        assert report.t_final == 0.0
        assert report.margins["estimate4"] == 0.0

    def test_triggers_hooks(self, tmp_path: pathlib.Path):
        on_step = mock.Mock()
        on_snapshot = mock.Mock()
        on_error = mock.Mock()
        hooks = driftwave.RunHooks().set_on_step(on_step).set_on_snapshot(on_snapshot).set_on_error(on_error)

        harness.run(_config(tmp_path), hooks=hooks)

        assert on_step.call_count == 5
        first_record, first_state = on_step.call_args_list[0].args
        assert first_record.t == 0.0
        assert first_state.t == 0.0
        assert [call.args[0].name for call in on_snapshot.call_args_list] == [
            "snapshot_000000.hmsnap",
            "snapshot_000002.hmsnap",
            "snapshot_000004.hmsnap",
        ]
        on_error.assert_not_called()

    def test_when_solver_fails(self, tmp_path: pathlib.Path):
        on_error = mock.Mock()
        cfg = _config(
            tmp_path,
            ic={"params": {"seed": 3, "amplitude": 0.5}},
            time={"dt": 0.1, "T": 0.2},
            solver={"tol": 1e-15, "max_iters": 1},
        )

        with pytest.raises(driftwave.NonConvergenceError) as exc_info:
            harness.run(cfg, hooks=driftwave.RunHooks().set_on_error(on_error))

        directory = tmp_path / "out"
        manifest = json.loads((directory / "MANIFEST.json").read_text(encoding="utf-8"))
        assert manifest["status"] == "truncated"
        assert manifest["steps"] == 0
        assert manifest["t_final"] == 0.0
        assert len(_read_csv(directory / "diagnostics.csv")) == 2
        assert (directory / "snapshot_000000.hmsnap").exists()
        on_error.assert_called_once_with(exc_info.value)

    def test_report_format(self, tmp_path: pathlib.Path):
        report = harness.run(_config(tmp_path))

        lines = report.format().splitlines()

        assert lines[0] == "status = complete"
        assert lines[1] == "steps = 4"
        assert any(line.startswith("T_max = ") for line in lines)
        assert any(line.startswith("estimate4 margin = ") for line in lines)


class TestConvergeTime:
    def test_crank_nicolson_is_second_order(self, tmp_path: pathlib.Path):
        cfg = _config(
            tmp_path,
            ic={"params": {"seed": 3, "amplitude": 0.2}},
            time={"dt": 0.05, "T": 0.4},
            solver={"tol": 1e-13, "centering": "symmetric_w"},
        )

        report = harness.converge_time(cfg, [0.025, 0.1, 0.05])

        assert report.resolutions == [0.1, 0.05, 0.025]
        assert report.reference == 0.025
        assert report.errors[-1] == 0.0
        assert report.errors[0] > report.errors[1] > 0
        [order] = report.orders
        assert 1.8 < order < 2.2

    def test_rk4_is_fourth_order(self, tmp_path: pathlib.Path):
        cfg = _config(
            tmp_path,
            ic={"params": {"seed": 4, "amplitude": 1.0}},
            time={"dt": 0.05, "T": 0.8},
            solver={"mode": "rk4"},
        )

        report = harness.converge_time(cfg, [0.2, 0.1, 0.05])

        [order] = report.orders
        assert 3.5 < order < 4.5

    @pytest.mark.parametrize(
        ("taus", "message"),
        [([0.1, 0.05], "at least 3"), ([0.1, 0.1, 0.05], "Duplicate"), ([0.1, 0.05, 0.0], "positive")],
    )
    def test_when_resolutions_invalid(self, tmp_path: pathlib.Path, taus: list[float], message: str):
        with pytest.raises(driftwave.StudyError, match=message):
            harness.converge_time(_config(tmp_path), taus)

    def test_format(self):
        report = harness.OrderReport(resolutions=[0.1, 0.05], errors=[1e-3, 0.0], orders=[2.0], reference=0.05)

        assert report.format().splitlines() == [
            "reference = 0.05",
            "resolution,error,order",
            "0.1,0.001,nan",
            "0.05,0.0,2.0",
        ]


class TestConvergeSpace:
    def test(self, tmp_path: pathlib.Path):
        cfg = _config(
            tmp_path,
            ic={"type": "gaussian_vortex", "params": {"amplitude": 0.5}},
            time={"dt": 0.01, "T": 0.03},
        )

        report = harness.converge_space(cfg, [12, 8, 16])

        assert report.resolutions == [8.0, 12.0, 16.0]
        assert report.reference == 64.0
        assert report.errors[0] > report.errors[1] > report.errors[2] > 0
        assert all(order > 0 for order in report.orders)

    def test_with_reference_n(self, tmp_path: pathlib.Path):
        cfg = _config(
            tmp_path, ic={"type": "gaussian_vortex", "params": {"amplitude": 0.5}}, time={"dt": 0.01, "T": 0.01}
        )

        report = harness.converge_space(cfg, [8, 16, 32], reference_n=64)

        assert report.reference == 64.0
        assert report.errors[0] > report.errors[1] > report.errors[2]
        assert report.errors[2] / report.errors[1] <= 1e-2

    def test_when_reference_too_coarse(self, tmp_path: pathlib.Path):
        with pytest.raises(driftwave.StudyError, match="finer"):
            harness.converge_space(_config(tmp_path), [8, 12, 16], reference_n=16)

    def test_when_too_few_sizes(self, tmp_path: pathlib.Path):
        with pytest.raises(driftwave.StudyError, match="at least 3 grid sizes"):
            harness.converge_space(_config(tmp_path), [8, 16])


class TestWindow:
    def test(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, time={"dt": 0.001, "T": 0.001})

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            result = harness.window(cfg)

        initial = harness.build_initial_state(cfg)
        assert result.covers(0.001)
        assert result.horizon == 0.001
        assert result.inputs.w0_h1 == pytest.approx(spectral_grid.sobolev_norm(initial.w, 1))

    def test_warns_outside_window(self, tmp_path: pathlib.Path):
        cfg = _config(tmp_path, time={"dt": 1.0, "T": 10.0})

        with pytest.warns(driftwave.WindowWarning, match="exceeds the existence window"):
            result = harness.window(cfg)

        assert not result.covers(10.0)

    def test_with_variant(self, tmp_path: pathlib.Path):
        result = harness.window(_config(tmp_path, time={"dt": 0.01, "T": 0.01}), variant=driftwave.WindowVariant.H2)

        assert result.variant is driftwave.WindowVariant.H2
        assert result.t_max == pytest.approx(0.5)


class TestDispersion:
    def test(self, tmp_path: pathlib.Path):
        cfg = _config(
            tmp_path,
            ic={"type": "single_mode", "params": {"xi_x": 1, "xi_y": 2, "amplitude": 1e-3}},
            time={"dt": 0.01, "T": 1.0},
        )

        report = harness.dispersion(cfg)

        assert report.xi == driftwave.WaveIndex(1, 2)
        assert report.expected == pytest.approx(-2 / 6)
        assert report.relative_error < 1e-4
        assert report.format().splitlines()[0] == "xi = (1, 2)"

    def test_when_not_single_mode(self, tmp_path: pathlib.Path):
        with pytest.raises(driftwave.ConfigError) as exc_info:
            harness.dispersion(_config(tmp_path))

        assert exc_info.value.field == "ic.type"


class TestSweep:
    @pytest.mark.asyncio()
    async def test(self, tmp_path: pathlib.Path):
        configs = tmp_path / "configs"
        configs.mkdir()
        output = tmp_path / "runs"
        base = {"grid": {"n": 8}, "time": {"dt": 0.05, "T": 0.1}, "output": {"dir": str(output)}}
        (configs / "b.json").write_text(json.dumps({**base, "physics": {"k": 2.0}}), encoding="utf-8")
        (configs / "a.json").write_text(json.dumps(base), encoding="utf-8")
        (configs / "c.json").write_text(json.dumps({**base, "grid": {"n": 7}}), encoding="utf-8")

        results = await harness.sweep(configs, max_workers=2)

        assert [result.path.name for result in results] == ["a.json", "b.json", "c.json"]
        assert results[0].report is not None
        assert results[0].report.output_dir == output / "a"
        assert results[1].report is not None
        assert results[1].error is None
        assert results[2].report is None
        assert isinstance(results[2].error, driftwave.ConfigError)
        assert (output / "a" / "MANIFEST.json").exists()
        assert (output / "b" / "diagnostics.csv").exists()
        assert not (output / "c").exists()

    @pytest.mark.asyncio()
    async def test_when_empty(self, tmp_path: pathlib.Path):
        with pytest.raises(driftwave.ConfigError, match="no"):
            await harness.sweep(tmp_path)


def test_simulate_matches_integrate(tmp_path: pathlib.Path):
    cfg = _config(tmp_path, solver={"mode": "rk4"})

    result = harness.simulate(cfg)

    expected = time_integration.integrate(
        driftwave.RungeKuttaStepper(0.05, 1.0, radius=5), harness.build_initial_state(cfg), 4
    )
    np.testing.assert_array_equal(result[-1].w.coeffs, expected[-1].w.coeffs)
