import json

import pytest

from contract_forge import builtin_scenario


@pytest.fixture
def example1():
    return builtin_scenario("example1")


@pytest.fixture
def example2():
    return builtin_scenario("example2")


@pytest.fixture
def example1_path(tmp_path, example1):
    path = tmp_path / "example1.json"
    path.write_text(json.dumps(example1.to_dict()), encoding="utf-8")
    return path
