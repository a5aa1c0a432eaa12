"""Shared fixtures and counter presets for the test suite."""

import pytest

from sketchbench.counters import CounterSemantics, Mode

LINEAR32 = CounterSemantics(Mode.LINEAR, 0.0, 32)
LOG8 = CounterSemantics(Mode.LOGARITHMIC, 1.08, 8)
LOG16 = CounterSemantics(Mode.LOGARITHMIC, 1.00025, 16)


@pytest.fixture
def linear32():
    return LINEAR32


@pytest.fixture
def log8():
    return LOG8


@pytest.fixture
def log16():
    return LOG16
