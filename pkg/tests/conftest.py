"""Shared fixtures; the expensive solves and simulations run once per session."""

import time
from pathlib import Path

import pytest

from hlplan import load_scenario, run_simulation, solve

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

# one line per acceptance criterion, echoed after the test summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def free_spec():
    return load_scenario(SCENARIOS / "free.json")


@pytest.fixture(scope="session")
def fig1_spec():
    return load_scenario(SCENARIOS / "fig1.json")


@pytest.fixture(scope="session")
def fig2_spec():
    return load_scenario(SCENARIOS / "fig2.json")


@pytest.fixture(scope="session")
def free_solve(free_spec):
    """Obstacle-free constant-speed solve, timed; returns (result, seconds)."""
    ham = free_spec.hamiltonian(())
    t0 = time.perf_counter()
    result = solve(ham, free_spec.start, free_spec.solver)
    return result, time.perf_counter() - t0


@pytest.fixture(scope="session")
def fig1_trace(fig1_spec):
    return run_simulation(fig1_spec)


@pytest.fixture(scope="session")
def fig2_trace(fig2_spec):
    return run_simulation(fig2_spec)
