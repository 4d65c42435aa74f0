"""Shared fixtures and an acceptance-criteria summary printed after the run."""

import numpy as np
import pytest

import leipnik as lp

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results.items():
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture(scope="session")
def paper_params():
    return lp.Params(a=0.4, alpha=0.175)


@pytest.fixture(scope="session")
def equilibria(paper_params):
    return lp.find_equilibria(paper_params)


# Catalog of the five equilibria at a=0.4, alpha=0.175 (the first coordinate
# of the second point corrects an obvious transcription slip in the usual
# listing) and the eigenvalues of the Jacobian at each.
CATALOG_POINTS = np.array(
    [
        [0.0, 0.0, 0.0],
        [-0.031549, 0.12238, -0.11031],
        [0.031549, -0.12238, -0.11031],
        [0.23897, 0.030803, 0.21031],
        [-0.23897, -0.030803, 0.21031],
    ]
)

CATALOG_EIGS = [
    [0.175 + 0j, -0.4 + 1j, -0.4 - 1j],
    [0.087484 + 0.87526j, 0.087484 - 0.87526j, -0.79997 + 0j],
    [0.087484 + 0.87526j, 0.087484 - 0.87526j, -0.79997 + 0j],
    [0.087487 + 1.2114j, 0.087487 - 1.2114j, -0.79997 + 0j],
    [0.087487 + 1.2114j, 0.087487 - 1.2114j, -0.79997 + 0j],
]
