#!/usr/bin/env python3
"""Development tasks: ``run test``, ``run sweep``, ``run check`` etc.

Run inside the poetry environment (``poetry run run <command>``) or
directly as ``./commands.py <command>`` once ``poetry install`` has
been run.

"""
import os
import pathlib
import shutil
import sys
import unittest

from runcommands import arg, command
from runcommands.commands import local
from runcommands.util import abort, find_project_root, printer


ROOT = pathlib.Path(__file__).resolve().parent
PACKAGE = ROOT / "src" / "hitchinfibres"

sys.path.insert(0, str(ROOT / "src"))


@command(creates=(".venv", "poetry.lock"), sources="pyproject.toml")
def install():
    """Install the package and its dev dependencies with poetry."""
    local("poetry install")
    (ROOT / ".venv").touch()
    (ROOT / "poetry.lock").touch()


@command
def test(
    *tests: arg(help="Dotted names of test modules, cases or methods"),
    fail_fast: arg(short_option="-x") = False,
    verbosity: arg(type=int) = 1,
    with_coverage: arg(short_option="-c") = True,
    with_checks: arg(short_option="-k", help="Run check after a full run") = True,
):
    """Run the unit, property and doc tests."""
    os.chdir(find_project_root())
    runner = unittest.TextTestRunner(failfast=fail_fast, verbosity=verbosity)
    loader = unittest.TestLoader()

    if tests:
        printer.hr(f"Running {', '.join(tests)}")
        result = runner.run(loader.loadTestsFromNames(tests))
        if not result.wasSuccessful():
            abort(1, "")
        return

    coverage = None
    if with_coverage:
        from coverage import Coverage

        coverage = Coverage(source=[str(PACKAGE)])
        coverage.start()

    printer.hr("Running all tests" + (" with coverage" if coverage else ""))
    result = runner.run(loader.discover(str(ROOT / "tests"), top_level_dir=str(ROOT)))

    if coverage:
        coverage.stop()
        coverage.report(show_missing=False)
    if not result.wasSuccessful():
        abort(1, "")
    if with_checks:
        check()


@command
def sweep(
    config_file: arg(short_option="-f", help="TOML file with a [sweep] table") = None,
    only: arg(container=tuple, help="Criteria to run (default all)") = (),
    json_out: arg(help="Also write the PASS/FAIL matrix here") = None,
):
    """Run the acceptance grid through the console script."""
    local(
        (
            "hitchinfibres",
            ("--config-file", config_file) if config_file else None,
            "sweep",
            [("--only", name) for name in only],
            ("--json-out", json_out) if json_out else None,
        )
    )


@command
def roundtrip(seed: arg(type=int) = None, trials: arg(type=int) = None):
    """Fuzz the Higgs chart round trip with the console script."""
    local(
        (
            "hitchinfibres",
            "roundtrip",
            ("--seed", str(seed)) if seed is not None else None,
            ("--trials", str(trials)) if trials is not None else None,
        )
    )


@command
def check(fix: arg(help="Reformat instead of only checking") = False):
    """Check formatting with black and lint with ruff."""
    printer.hr("black")
    black = local(
        ("black", None if fix else "--check", "src", "tests", "commands.py"),
        raise_on_error=False,
    )
    printer.hr("ruff")
    ruff = local(
        ("ruff", "--fix" if fix else None, "src", "tests", "commands.py"),
        raise_on_error=False,
    )
    if black.failed or ruff.failed:
        abort(1, "Formatting or lint problems found")
    printer.success("Formatting and lint OK")


@command
def tox(
    envs: arg(container=tuple, help="Environments to pass to tox -e") = (),
    recreate: arg(help="Recreate the tox environments") = False,
):
    """Run the test suite against every supported Python."""
    local(("tox", ("-e", ",".join(envs)) if envs else None, "--recreate" if recreate else None))


@command
def clean(all_: arg(short_option="-a", help="Also remove .venv, .tox and poetry.lock") = False):
    """Remove build output, caches and hypothesis examples."""
    paths = [ROOT / "build", ROOT / "dist", ROOT / ".hypothesis", ROOT / ".coverage"]
    paths.extend(p for p in ROOT.rglob("__pycache__") if ".venv" not in p.parts)
    if all_:
        paths.extend([ROOT / ".venv", ROOT / ".tox", ROOT / "poetry.lock"])
    for path in paths:
        if path.is_dir():
            shutil.rmtree(path)
        elif path.is_file():
            path.unlink()
        else:
            continue
        printer.info("Removed", path.relative_to(ROOT))


if __name__ == "__main__":
    from runcommands.__main__ import main

    main()
