import json
import pathlib

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

import builders

SCHEMAS = pathlib.Path(__file__).resolve().parent.parent / "schemas"
DATA = pathlib.Path(__file__).resolve().parent.parent / "demos" / "data"

ACCEPTANCE_LINES: dict = {}


def _registry():
    resources = []
    for path in sorted(SCHEMAS.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


@pytest.fixture(scope="session")
def schema_validator():
    registry = _registry()

    def check(name: str, obj):
        schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
        errors = sorted(Draft202012Validator(schema, registry=registry).iter_errors(obj), key=str)
        assert not errors, "\n".join(e.message for e in errors[:5])

    return check


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture
def p2():
    return builders.p2()


@pytest.fixture
def p2_marked():
    return builders.p2_marked()


@pytest.fixture
def ex_cob():
    return builders.ex_cobordism()


@pytest.fixture(scope="session")
def cube():
    return builders.cube_flip()


@pytest.fixture(scope="session")
def triangle():
    return builders.triangle_flip()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
