"""
Pytest configuration and shared fixtures for the QuotaMatch test suite.
"""
import json
import sys
from pathlib import Path

import pytest

# Add parent directory to path for imports (app and cli are at project root)
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.fixtures import load_fixture  # noqa: E402
from app.market import parse_instance  # noqa: E402
from tests.generators import linear_document  # noqa: E402


@pytest.fixture
def make_instance():
    """
    Factory for linear instances from compact tables.

    Why: Most tests need a small market; writing the full document each
    time hides what the test is about.
    """
    def factory(values, constraints=None, worker_values=None):
        return parse_instance(json.dumps(linear_document(values, constraints, worker_values)))
    return factory


@pytest.fixture
def fixture_instance():
    """Instance of a registered fixture by name."""
    def factory(name):
        return load_fixture(name).instance
    return factory


@pytest.fixture
def write_json(tmp_path):
    """Writes a JSON document under tmp_path and returns its path as text."""
    def writer(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding='utf-8')
        return str(path)
    return writer
