import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from renderworker import create_app

TESTS_DIR = Path(__file__).resolve().parent
GOLDEN_DIR = TESTS_DIR / "golden"
WIRE_DIR = TESTS_DIR.parents[1] / "wire"


def load_golden(name: str) -> dict:
    return json.loads((GOLDEN_DIR / name).read_text())


def load_schema(name: str) -> dict:
    return json.loads((WIRE_DIR / name).read_text())


@pytest.fixture()
def client() -> TestClient:
    return TestClient(create_app())
