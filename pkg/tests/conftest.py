from __future__ import annotations

import json
from pathlib import Path

import pytest

from bodymap.atlas import load_atlas
from bodymap.data import e2e_fixture_path
from bodymap.documents import load_few_shot
from bodymap.metadata import load_kb
from bodymap.prompts import load_prompts

GOLDEN_DIR = Path(__file__).parent / "golden"


class ZeroRng:
    """Random source contributing no jitter at all."""

    def randint(self, a: int, b: int) -> int:
        assert a <= 0 <= b
        return 0

    def uniform(self, a: float, b: float) -> float:
        assert a <= 0.0 <= b
        return 0.0

    def random(self) -> float:
        return 0.0

    def choice(self, seq):
        return seq[0]


@pytest.fixture(scope="session")
def atlas():
    return load_atlas()


@pytest.fixture(scope="session")
def kb():
    return load_kb()


@pytest.fixture(scope="session")
def templates():
    return load_prompts()


@pytest.fixture(scope="session")
def few_shot():
    return load_few_shot()


@pytest.fixture(scope="session")
def atlas_raw():
    """The shipped atlas file as a mutable dict, for mutation tests."""
    from bodymap.data import default_atlas_path

    return json.loads(default_atlas_path().read_text())


@pytest.fixture(scope="session")
def e2e_fixture():
    return e2e_fixture_path()


@pytest.fixture(scope="session")
def e2e_golden():
    return json.loads((GOLDEN_DIR / "e2e_expected.json").read_text())


@pytest.fixture()
def zero_rng():
    return ZeroRng()
