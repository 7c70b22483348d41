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
"""A spectral simulator for the Hasegawa-Mima drift-wave equation.

The equation `-Δu_t + u_t = {u, Δu} + k u_y` is solved on a periodic square in
its coupled form: a transport equation `w_t + V(u)·∇w = k u_y` for
`w = (I - Δ)u` and the elliptic problem `-Δu + u = w`.

Examples
--------
Fields live on a `GridSpec` and are stored as Fourier coefficients against the
eigenbasis of `I - Δ`:

```py
grid = driftwave.GridSpec(2 * math.pi, 32)
u0 = driftwave.SpectralField.real_mode(grid, driftwave.WaveIndex(0, 1), norm=1e-2)
state = driftwave.State.from_u(0.0, u0)

stepper = driftwave.CrankNicolsonStepper(driftwave.SchemeParams(tau=1e-3), 1.0)
trajectory = driftwave.integrate(stepper, state, 1000)
print(driftwave.check_estimate1(trajectory, 1.0))
```

Whole runs are driven from a `SimConfig`, usually loaded from JSON:

```py
cfg = driftwave.load_config("config.json")
report = driftwave.run(cfg)
print(report.format())
```
"""
from __future__ import annotations

__all__: list[str] = [
    # __init__.py
    "__author__",
    "__copyright__",
    "__license__",
    "__version__",
    # abc.py
    "abc",
    "StepStats",
    "Stepper",
    # config.py
    "config",
    "DomainConfig",
    "EstimatesConfig",
    "GridConfig",
    "ICConfig",
    "ICParams",
    "ICType",
    "OutputConfig",
    "PhysicsConfig",
    "SimConfig",
    "SolverConfig",
    "SolverMode",
    "TimeConfig",
    "check_config",
    "load_config",
    "override",
    "parse_config",
    # diagnostics.py
    "diagnostics",
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
    # elliptic_solver.py
    "elliptic_solver",
    "DEFAULT_ELLIPTIC_CONSTANT",
    "apply_helmholtz",
    "projection_commutes",
    "regularity_identity_check",
    "solve_elliptic",
    # errors.py
    "errors",
    "ConfigError",
    "DivergenceError",
    "DriftWaveError",
    "DriftWaveWarning",
    "GridMismatchError",
    "HermitianSymmetryError",
    "NonConvergenceError",
    "OracleSizeError",
    "SnapshotError",
    "StudyError",
    "WindowWarning",
    # harness.py
    "harness",
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
    # hooks.py
    "hooks",
    "ErrorHookSig",
    "RunHooks",
    "SnapshotHookSig",
    "StepHookSig",
    # hyperbolic_rhs.py
    "hyperbolic_rhs",
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
    # snapshots.py
    "snapshots",
    "MAGIC",
    "VERSION",
    "Snapshot",
    "SnapshotHeader",
    "load_snapshot",
    "save_snapshot",
    "write_snapshot",
    # spectral_grid.py
    "spectral_grid",
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
    # time_integration.py
    "time_integration",
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
    # utilities.py
    "utilities",
]

import typing

from . import abc
from . import utilities
from .abc import StepStats
from .abc import Stepper
from .config import *
from .diagnostics import *
from .elliptic_solver import *
from .errors import *
from .harness import *
from .hooks import *
from .hyperbolic_rhs import *
from .snapshots import *
from .spectral_grid import *
from .time_integration import *

__author__: typing.Final[str] = "The driftwave authors"
__copyright__: typing.Final[str] = "© 2021 The driftwave authors"
__license__: typing.Final[str] = "BSD"
__version__: typing.Final[str] = "0.1.0a1"
