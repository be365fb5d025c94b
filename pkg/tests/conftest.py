from pathlib import Path

import pytest

from gosil.parser import parse_theory
from gosil.semantics import parse_structure

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def running_example_path() -> Path:
    return FIXTURES / "running_example.gos"


@pytest.fixture(scope="session")
def sounds_path() -> Path:
    return FIXTURES / "sounds.gos"


@pytest.fixture(scope="session")
def s0_path() -> Path:
    return FIXTURES / "s0.str"


@pytest.fixture(scope="session")
def running_example(running_example_path):
    return parse_theory(running_example_path.read_text())


@pytest.fixture(scope="session")
def vocab(running_example):
    return running_example.vocabulary


@pytest.fixture(scope="session")
def axioms(running_example):
    return {a.label: a.formula for a in running_example.axioms}


@pytest.fixture(scope="session")
def s0(running_example, s0_path):
    return parse_structure(s0_path.read_text(), running_example.vocabulary)
