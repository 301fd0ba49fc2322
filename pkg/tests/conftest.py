"""
Pytest configuration and fixtures.

This module configures pytest behavior for different test types:
- Local tests (end-to-end CLI runs): Fail on any warnings logged by the package
- Unit tests: Allow warnings
"""

from __future__ import annotations

import json
import logging
import random
from fractions import Fraction
from typing import TYPE_CHECKING, Any, override

import pytest

from commutator_solver.matrix import RatMatrix
from commutator_solver.polynomial import FactoredPoly
from commutator_solver.two_eigen import TwoEigInstance

if TYPE_CHECKING:
    from collections.abc import Callable, Generator
    from pathlib import Path

# Store warning records during test execution
_local_test_warnings: dict[str, list[logging.LogRecord]] = {}

# The CLI reconfigures the root logger with force=True, so the guard listens on the package logger.
PACKAGE_LOGGER = "commutator_solver"


class LocalTestWarningHandler(logging.Handler):
    """Custom logging handler to capture warnings during local tests."""

    test_nodeid: str

    def __init__(self, test_nodeid: str) -> None:
        super().__init__()
        self.test_nodeid = test_nodeid
        self.setLevel(logging.WARNING)

    @override
    def emit(self, record: logging.LogRecord) -> None:
        """Capture WARNING and above level logs."""
        _local_test_warnings.setdefault(self.test_nodeid, []).append(record)


@pytest.fixture(autouse=True)
def fail_on_log_warnings_for_local_tests(
    request: pytest.FixtureRequest,
) -> Generator[None]:
    """
    Automatically fail local tests if any WARNING level logs are emitted from the package.

    End-to-end runs on well-formed input are expected to be silent on the warning channel;
    unit tests may exercise warning paths freely.
    """
    if request.node.get_closest_marker("local") is None:
        yield
        return

    test_nodeid = request.node.nodeid
    _local_test_warnings[test_nodeid] = []

    handler = LocalTestWarningHandler(test_nodeid)
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    package_logger.addHandler(handler)

    try:
        yield
    finally:
        package_logger.removeHandler(handler)


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo[None]) -> Generator[None]:  # type: ignore[misc]
    """
    Hook to check for warnings after test execution and mark test as failed if warnings were detected.
    """
    outcome = yield
    report = outcome.get_result()

    if call.when == "call" and report.outcome == "passed":
        test_nodeid = item.nodeid
        warning_records = _local_test_warnings.get(test_nodeid, [])

        if warning_records:
            warning_messages = [
                f"{record.levelname}: {record.getMessage()} (in {record.name}:{record.lineno})"
                for record in warning_records
            ]
            report.outcome = "failed"
            report.longrepr = f"Local test failed: {len(warning_records)} warning(s) detected:\n" + "\n".join(
                f"  - {msg}" for msg in warning_messages
            )

        _local_test_warnings.pop(test_nodeid, None)


@pytest.fixture
def x_squared_minus_one() -> FactoredPoly:
    """f = (x - 1)(x + 1), whose critical set is {2, -2}."""
    return FactoredPoly.of(1, [(1, 1), (-1, 1)])


@pytest.fixture
def cubic_factored() -> FactoredPoly:
    """f = x^2 - x^3 = -x^2 (x - 1)."""
    return FactoredPoly.of(-1, [(0, 2), (1, 1)])


@pytest.fixture
def degenerate_instance(x_squared_minus_one: FactoredPoly) -> TwoEigInstance:
    """A = diag(2, 2, 0, 0) with f = x^2 - 1: both +-2 are critical values."""
    return TwoEigInstance(p=2, q=2, mu=Fraction(2), lam=Fraction(0), f=x_squared_minus_one)


@pytest.fixture
def degenerate_blocks() -> tuple[RatMatrix, RatMatrix]:
    """P = S = diag(1, -1)."""
    return RatMatrix.diagonal([1, -1]), RatMatrix.diagonal([1, -1])


@pytest.fixture
def degenerate_member() -> Callable[[int, int], RatMatrix]:
    """Non-triangular solutions of XA - AX = X^2 - I for A = diag(2, 2, 0, 0), indexed by (u, v)."""

    def _member(u: int, v: int) -> RatMatrix:
        return RatMatrix.from_rows(
            [
                [1, 0, 0, 0],
                [0, -1, 0, u],
                [v, 0, 1, 0],
                [0, 0, 0, -1],
            ]
        )

    return _member


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], str]:
    """Write a JSON payload under tmp_path and return the path as a string."""

    def _write(name: str, payload: Any) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return _write
