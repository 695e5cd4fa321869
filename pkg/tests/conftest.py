import shlex
import sys
from pathlib import Path

import pytest

from ipa.abstraction import Scope, SubstitutionSet, generate_instantiations
from ipa.engine import Engine
from ipa.frontend import load_model

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
PYCOSAT_CMD = f"{shlex.quote(sys.executable)} {shlex.quote(str(Path(__file__).parent / 'tools' / 'pycosat_solver.py'))}"

RUNNING_SCOPE = Scope(-2, 3, ranges={"i": (-2, 2)})
GERMAN_SCOPE = Scope(0, 3, ranges={n: (1, 2) for n in ("i", "cid", "client0", "granted0")} | {"act": (1, 11)},
                     domain=(1, 2))


@pytest.fixture(scope="session")
def running():
    return load_model(str(MODELS / "running.ipa"))


@pytest.fixture(scope="session")
def running_subs(running):
    return generate_instantiations(running.model, running.bank)


@pytest.fixture(scope="session")
def running_reach(running, running_subs):
    return Engine(running.model, running.bank, running_subs).reach()


@pytest.fixture(scope="session")
def german():
    return load_model(str(MODELS / "german-cache.ipa"))


@pytest.fixture(scope="session")
def german_subs(german):
    return generate_instantiations(german.model, german.bank)


@pytest.fixture(scope="session")
def german_reach(german, german_subs):
    return Engine(german.model, german.bank, german_subs).reach()


@pytest.fixture(scope="session")
def german_identity_reach(german):
    ident = SubstitutionSet.identity(german.bank.index_syms)
    return Engine(german.model, german.bank, ident).reach()


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
