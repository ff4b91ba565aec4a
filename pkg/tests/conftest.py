import pytest

from uavlora.propagation import LinkScenario
from uavlora.terrain import PRESETS


@pytest.fixture
def standing_dry():
    return LinkScenario(posture="standing", terrain=PRESETS["dry"])


@pytest.fixture
def standing_pec():
    return LinkScenario(posture="standing", terrain=PRESETS["wet"])


@pytest.fixture
def lying_wet():
    return LinkScenario(posture="lying", terrain=PRESETS["wet"])


def pytest_terminal_summary(terminalreporter):
    # one verdict line per acceptance criterion, whatever the capture mode
    reports = [r for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
               if r.when == "call" and "acceptance" in r.keywords]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: dict(r.user_properties).get("criterion", r.nodeid)):
        props = dict(r.user_properties)
        verdict = "PASS" if r.passed else "FAIL"
        terminalreporter.write_line(f"{verdict}  {props.get('criterion', r.nodeid)}  {props.get('detail', '')}")
