"""
Pytest configuration and shared fixtures for Groupoid Lab tests.

Provides the named tables, fixture file paths, seeded generators and
settings overrides.
"""

import os
from pathlib import Path
from typing import Generator

import numpy as np
import pytest
from loguru import logger

from gpdlab import corpus
from gpdlab.config import Settings, reload_settings
from gpdlab.core import GroupoidTable
from gpdlab.pact import PartialActionTable

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def quiet_logging() -> Generator[None, None, None]:
    """
    Drop sinks added by CLI invocations once a test ends.
    """
    yield
    logger.remove()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def test_settings(tmp_path: Path) -> Generator[Settings, None, None]:
    """
    Override settings for testing.
    """
    os.environ["GPDLAB_LOG_LEVEL"] = "DEBUG"
    os.environ["GPDLAB_LOG_FILE"] = str(tmp_path / "logs" / "gpdlab.log")

    settings = reload_settings()

    yield settings

    for key in ["GPDLAB_LOG_LEVEL", "GPDLAB_LOG_FILE"]:
        if key in os.environ:
            del os.environ[key]
    reload_settings()


@pytest.fixture
def rng() -> np.random.Generator:
    return corpus.make_rng()


@pytest.fixture
def z2() -> GroupoidTable:
    return corpus.z2()


@pytest.fixture
def pair_xy() -> GroupoidTable:
    return corpus.pair_xy()


@pytest.fixture
def e8() -> GroupoidTable:
    return corpus.e8()


@pytest.fixture
def e7() -> GroupoidTable:
    return corpus.e8_printed()


@pytest.fixture
def s3() -> GroupoidTable:
    return corpus.symmetric_group_s3()


@pytest.fixture
def h1() -> frozenset:
    return corpus.E8_H1


@pytest.fixture
def h2() -> frozenset:
    return corpus.E8_H2


@pytest.fixture
def global_pair(pair_xy: GroupoidTable) -> PartialActionTable:
    """
    pair({x,y}) acting globally on {p, q}: (x|y)·p = q.
    """
    act = {
        ("(x|x)", "p"): "p",
        ("(y|y)", "q"): "q",
        ("(x|y)", "p"): "q",
        ("(y|x)", "q"): "p",
    }
    return PartialActionTable("alpha", pair_xy, ("p", "q"), act)


@pytest.fixture
def identity_only(pair_xy: GroupoidTable) -> PartialActionTable:
    """
    Only identities act: x on p, y on q.
    """
    return PartialActionTable("ident", pair_xy, ("p", "q"), {("(x|x)", "p"): "p", ("(y|y)", "q"): "q"})


@pytest.fixture
def e8_star(e8: GroupoidTable) -> PartialActionTable:
    """
    E8 acting on the star of x by left translation (global, strict).
    """
    return corpus.star_action(e8, ["x"], name="star_x")


# Test utilities
def mutate(t: GroupoidTable, **changes) -> GroupoidTable:
    """
    Copy of a table with some maps replaced; used for negative fixtures.
    """
    fields = {
        "name": t.name,
        "elements": t.elements,
        "objects": t.objects,
        "dmap": dict(t.dmap),
        "rmap": dict(t.rmap),
        "inv": dict(t.inv),
        "comp": dict(t.comp),
    }
    fields.update(changes)
    return GroupoidTable(**fields)
