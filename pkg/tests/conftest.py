from pathlib import Path

import pytest

from uavsizing.ingest import load_traffic_profile, parse_weather_csv
from uavsizing.sizing import Scenario

DATA = Path(__file__).parent / "data"

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def year_trace():
    return parse_weather_csv(DATA / "weather_2015.csv")


@pytest.fixture(scope="session")
def traffic():
    return load_traffic_profile(DATA / "traffic.csv")


@pytest.fixture(scope="session")
def two_weeks(year_trace):
    return year_trace.window(0, 336)


@pytest.fixture(scope="session")
def small_scenario(two_weeks, traffic):
    return Scenario(two_weeks, traffic)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
