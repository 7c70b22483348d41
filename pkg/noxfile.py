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
from __future__ import annotations

import pathlib
import shutil
import typing

import nox

nox.options.sessions = ["reformat", "lint", "spell-check", "type-check", "test", "smoke"]  # type: ignore
GENERAL_TARGETS = ["./noxfile.py", "./driftwave", "./tests"]
CONFIGS_DIR = pathlib.Path("./configs")
SMOKE_OUTPUT = pathlib.Path("./.smoke-output")
ARTIFACTS = [
    "./dist",
    "./docs",
    "./.nox",
    "./.pytest_cache",
    "./driftwave.egg-info",
    "./coverage_html",
    "./.coverage",
    "./coverage.xml",
    str(SMOKE_OUTPUT),
]


def install_requirements(session: nox.Session, *other_requirements: str) -> None:
    session.install("--upgrade", "wheel")
    session.install("--upgrade", *other_requirements)


def _option(session: nox.Session, *names: str, default: typing.Optional[str] = None) -> typing.Optional[str]:
    args = iter(session.posargs)
    for arg in args:
        if arg in names:
            return next(args, default)

    return default


@nox.session(venv_backend="none")
def cleanup(session: nox.Session) -> None:
    for raw_path in ARTIFACTS:
        path = pathlib.Path(raw_path)
        if not path.exists():
            continue

        try:
            if path.is_dir():
                shutil.rmtree(path)

            else:
                path.unlink()

        except OSError as exc:
            session.warn(f"[ FAIL ] Failed to remove '{raw_path}': {exc!s}")

        else:
            session.log(f"[  OK  ] Removed '{raw_path}'")


@nox.session(name="generate-docs", reuse_venv=True)
def generate_docs(session: nox.Session) -> None:
    install_requirements(session, ".[docs]")
    output_directory = _option(session, "-o", "--output", default="./docs")
    assert output_directory is not None
    session.run("pdoc", "--docformat", "numpy", "-o", output_directory, "./driftwave")
    session.log("Docs generated: %s", pathlib.Path(output_directory, "index.html").absolute())


@nox.session(reuse_venv=True)
def lint(session: nox.Session) -> None:
    install_requirements(session, ".[flake8]")
    session.run("flake8", *GENERAL_TARGETS)


@nox.session(reuse_venv=True, name="spell-check")
def spell_check(session: nox.Session) -> None:
    install_requirements(session, ".[lint]")
    session.run("codespell", *GENERAL_TARGETS, "LICENSE", "pyproject.toml", "README.md", "CHANGELOG.md", "DESIGN.md")


@nox.session(reuse_venv=True)
def build(session: nox.Session) -> None:
    session.install("flit")
    session.run("flit", "build")


@nox.session(reuse_venv=True)
def reformat(session: nox.Session) -> None:
    install_requirements(session, ".[reformat]")
    session.run("black", *GENERAL_TARGETS)
    session.run("isort", *GENERAL_TARGETS)


@nox.session(reuse_venv=True)
def test(session: nox.Session) -> None:
    install_requirements(session, ".[tests]")
    session.run("pytest", "--import-mode", "importlib", *session.posargs)


@nox.session(name="test-coverage", reuse_venv=True)
def test_coverage(session: nox.Session) -> None:
    install_requirements(session, ".[tests]")
    session.run("pytest", "--cov=driftwave", "--cov-report", "html:coverage_html", "--cov-report", "xml:coverage.xml")


@nox.session(name="type-check", reuse_venv=True)
def type_check(session: nox.Session) -> None:
    install_requirements(session, ".[tests]", "-r", "nox-requirements.txt")
    session.run("pyright", external=True)


@nox.session(reuse_venv=True)
def smoke(session: nox.Session) -> None:
    """Run the command line interface over the sample configurations."""
    install_requirements(session, ".")
    SMOKE_OUTPUT.mkdir(exist_ok=True)
    for path in sorted(CONFIGS_DIR.glob("*.json")):
        session.log(f"Checking {path.name}")
        session.run("driftwave", "window", str(path))

    session.run("driftwave", "dispersion", str(CONFIGS_DIR / "single_mode.json"))
    session.run("driftwave", "sweep", str(CONFIGS_DIR))
