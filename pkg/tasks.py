"""Invoke tasks for PCQA development."""

import re
import sys
from pathlib import Path

from invoke import task
from invoke.context import Context


@task
def test(ctx: Context, verbose: bool = False, coverage: bool = False) -> None:
    """Run the default test suite, then the performance targets.

    Args:
        ctx: Invoke context
        verbose: Enable verbose output
        coverage: Run with coverage report
    """
    print("Running unit tests...")
    test_unit(ctx, verbose=verbose, coverage=coverage)

    print("\nRunning performance targets...")
    test_perf(ctx, verbose=verbose)


@task(name="test-unit")
def test_unit(ctx: Context, verbose: bool = False, coverage: bool = False, workers: str = "auto") -> None:
    """Run unit tests only (performance targets deselected).

    Args:
        ctx: Invoke context
        verbose: Enable verbose output
        coverage: Run with coverage report
        workers: pytest-xdist worker count (default: auto)
    """
    cmd = f"uv run python -m pytest tests/ -n {workers}"
    if verbose:
        cmd += " -v"
    if coverage:
        cmd += " --cov=pcqa --cov-report=term-missing"
    ctx.run(cmd, pty=True)


@task(name="test-perf")
def test_perf(ctx: Context, verbose: bool = False) -> None:
    """Run the million-point performance targets serially.

    Timings are only meaningful without other tests competing for cores.

    Args:
        ctx: Invoke context
        verbose: Enable verbose output
    """
    cmd = "uv run python -m pytest tests/test_performance.py -m perf -n 0"
    if verbose:
        cmd += " -v"
    ctx.run(cmd, pty=True)


@task
def clean(ctx: Context, all: bool = False) -> None:
    """Clean up temporary files.

    Args:
        ctx: Invoke context
        all: Also remove the results directory and built docs
    """
    for pattern in ["__pycache__", "*.pyc", "*.pyo", ".pytest_cache"]:
        ctx.run(f"find . -name '{pattern}' -exec rm -rf {{}} + 2>/dev/null || true", warn=True)

    for path in ["build", "dist", "*.egg-info", ".eggs", ".coverage", "htmlcov"]:
        ctx.run(f"rm -rf {path} 2>/dev/null || true", warn=True)

    if all:
        print("Removing results and built docs...")
        ctx.run("rm -rf results docs/_build", warn=True)


@task
def docs(ctx: Context) -> None:
    """Build the Sphinx documentation."""
    ctx.run("uv run sphinx-build -b html docs docs/_build/html", pty=True)
    print("Documentation built at docs/_build/html/index.html")


@task(name="docs-serve")
def docs_serve(ctx: Context, port: int = 8080) -> None:
    """Serve the documentation locally.

    Args:
        ctx: Invoke context
        port: Port to serve on (default: 8080)
    """
    docs(ctx)
    print(f"Serving documentation at http://localhost:{port}")
    ctx.run(f"uv run python -m http.server {port} --directory docs/_build/html", pty=True)


# =============================================================================
# Version Helpers
# =============================================================================

def _get_current_version() -> str:
    """Read the current version from pyproject.toml."""
    content = Path("pyproject.toml").read_text()
    match = re.search(r'^version = "(.+)"', content, re.MULTILINE)
    if not match:
        print("Error: Could not find version in pyproject.toml")
        sys.exit(1)
    return match.group(1)


def _bump_version(current: str, major: bool = False, minor: bool = False) -> str:
    """Bump a semver version string.

    Args:
        current: Current version string (e.g. "0.3.2")
        major: Bump major version
        minor: Bump minor version

    Returns:
        New version string
    """
    maj, min_, patch = (int(part) for part in current.split("."))
    if major:
        return f"{maj + 1}.0.0"
    if minor:
        return f"{maj}.{min_ + 1}.0"
    return f"{maj}.{min_}.{patch + 1}"


@task
def bump(ctx: Context, major: bool = False, minor: bool = False) -> None:
    """Bump the version in pyproject.toml and pcqa/__init__.py.

    Args:
        ctx: Invoke context
        major: Bump major version
        minor: Bump minor version (default is a patch bump)
    """
    current = _get_current_version()
    new_version = _bump_version(current, major=major, minor=minor)
    for path, pattern, line in (
        (Path("pyproject.toml"), r'^version = ".*"', f'version = "{new_version}"'),
        (Path("pcqa/__init__.py"), r'^__version__ = ".*"', f'__version__ = "{new_version}"'),
    ):
        content = re.sub(pattern, line, path.read_text(), count=1, flags=re.MULTILINE)
        path.write_text(content)
    print(f"Version bumped: {current} -> {new_version}")
