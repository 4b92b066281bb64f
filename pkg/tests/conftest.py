import csv
import io

import pytest

from composite_casimir.cli import main
from composite_casimir.dielectric import Drude
from composite_casimir.ingestion import DATA_DIR, load_material

SCENARIOS = DATA_DIR / "scenarios"

# lines recorded by test_acceptance.py, echoed once at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def sio2():
    return load_material(DATA_DIR / "sio2_oscillator.ini")


@pytest.fixture(scope="session")
def au():
    return load_material(DATA_DIR / "au_drude_tab.ini")


@pytest.fixture(scope="session")
def au_drude():
    return Drude(9.0, 0.035)


def read_rows(text):
    """CSV body of a CLI output as a list of dicts, ``#`` lines skipped."""
    body = "".join(line for line in io.StringIO(text) if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def invoke(verb, scenario, out, *extra):
    args = [verb, *extra, "--scenario", str(scenario)]
    if out is not None:
        args += ["--out", str(out)]
    return main(args)


@pytest.fixture(scope="session")
def golden(tmp_path_factory):
    """Run a CLI verb on a bundled scenario once per session; returns the CSV text."""
    cache = {}

    def run(verb, name, *extra):
        key = (verb, name, extra)
        if key not in cache:
            out = tmp_path_factory.mktemp("golden") / "out.csv"
            code = invoke(verb, SCENARIOS / f"{name}.ini", out, *extra)
            assert code == 0
            cache[key] = out.read_text()
        return cache[key]

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
