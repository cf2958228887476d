import json
import math

import pytest

from ptmu import cli
from ptmu.circle_sets import Arc, CantorGenerator, CircleSet, PowerGapRule, wrap_angle
from ptmu.measures import BoundaryWeight, CantorComponent, SingularMeasure, SpaceMeasure


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def shipped_run(tmp_path_factory):
    """One run of every shipped config; returns ``(out_dir, {name: report})``."""
    out = tmp_path_factory.mktemp("shipped")
    code = cli.main(["run", "--shipped", "--out", str(out)])
    assert code == 0
    reports = {}
    for d in sorted(out.iterdir()):
        reports[d.name] = json.loads((d / "report.json").read_text(encoding="utf-8"))
    return out, reports


@pytest.fixture(scope="session")
def left_half():
    return CircleSet.from_closed_arc(math.pi / 2, 3 * math.pi / 2)


@pytest.fixture(scope="session")
def dichotomy_measure(left_half):
    return SpaceMeasure(0.0, 1.0, BoundaryWeight.lebesgue(left_half))


@pytest.fixture(scope="session")
def divergent_cantor():
    """Mass-one, depth-10 Cantor measure on the arc of length 0.4 centred at angle 0."""
    gen = CantorGenerator(Arc(wrap_angle(-0.4 * math.pi), 0.4), PowerGapRule())
    return SingularMeasure((), (CantorComponent(gen, 1.0, 10),))
