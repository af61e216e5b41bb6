from __future__ import annotations

import json
from pathlib import Path

import pytest

from loopforge import formats

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture(name: str):
    with open(FIXTURES / f"{name}.json", "r", encoding="utf-8") as f:
        return json.load(f)


def fixture_puzzle(name: str):
    return formats.puzzle_from_json(load_fixture(name))


def fixture_solution(name: str):
    return formats.solution_from_json(load_fixture(f"{name}_solution"))
