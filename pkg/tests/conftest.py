"""Shared fixtures: the four reference fields and their analyses.

Each analysis fixture runs the full pipeline once per session at the
default grid so individual tests can inspect different facets of the same
result without recomputing it.
"""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from torusdeform.field import (
    TrigFieldSpec,
    TrigTerm,
    detect_translation_symmetries,
    find_critical_points,
)
from torusdeform.reeb import build_reeb_graph, classify


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _analysis(spec, grid=128):
    cps = find_critical_points(spec, grid=grid)
    sym = detect_translation_symmetries(spec)
    graph = build_reeb_graph(spec, cps, resolution=grid)
    cls = classify(spec, graph, sym)
    return spec, cps, sym, graph, cls


@pytest.fixture(scope="session")
def tilted_spec():
    """One bump pair, one saddle pair: the smallest circuit case."""
    return TrigFieldSpec((TrigTerm(1.0, 1, 0), TrigTerm(0.5, 0, 1)))


@pytest.fixture(scope="session")
def eggcarton_spec():
    """Product of two sine waves: a tree with a half-turn symmetry."""
    return TrigFieldSpec((TrigTerm(0.5, 1, -1), TrigTerm(-0.5, 1, 1)))


@pytest.fixture(scope="session")
def doubled_spec():
    """Doubled frequency along x: circuit with a two-fold symmetry."""
    return TrigFieldSpec((TrigTerm(1.0, 2, 0), TrigTerm(0.5, 0, 1)))


@pytest.fixture(scope="session")
def doubled_y_spec():
    """Doubled frequency along y: circuit whose hanging pieces pair up."""
    return TrigFieldSpec((TrigTerm(1.0, 1, 0), TrigTerm(0.5, 0, 2)))


@pytest.fixture(scope="session")
def tilted_analysis(tilted_spec):
    return _analysis(tilted_spec)


@pytest.fixture(scope="session")
def eggcarton_analysis(eggcarton_spec):
    return _analysis(eggcarton_spec)


@pytest.fixture(scope="session")
def doubled_analysis(doubled_spec):
    return _analysis(doubled_spec)


@pytest.fixture(scope="session")
def doubled_y_analysis(doubled_y_spec):
    return _analysis(doubled_y_spec)


@pytest.fixture(scope="session")
def all_analyses(tilted_analysis, eggcarton_analysis, doubled_analysis,
                 doubled_y_analysis):
    return {
        "tilted": tilted_analysis,
        "eggcarton": eggcarton_analysis,
        "doubled": doubled_analysis,
        "doubled_y": doubled_y_analysis,
    }
