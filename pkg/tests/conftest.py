# this_file: tests/conftest.py

"""
Shared fixtures: the named probe codes and a seeded random generator.
"""

import numpy as np
import pytest

from robmetro.codes.builtin import repetition_code, steane_code, trivial_code
from robmetro.codes.linear_code import BinaryCode


@pytest.fixture
def ghz3() -> BinaryCode:
    """Repetition code of length 3 (3-qubit GHZ probe)."""
    return repetition_code(3)


@pytest.fixture
def ghz7() -> BinaryCode:
    """Repetition code of length 7 (7-qubit GHZ probe)."""
    return repetition_code(7)


@pytest.fixture
def steane() -> BinaryCode:
    """Steane X-stabilizer code [7, 3]."""
    return steane_code()


@pytest.fixture
def trivial3() -> BinaryCode:
    """Trivial code holding only 000."""
    return trivial_code(3)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so property checks are repeatable."""
    return np.random.default_rng(20240611)
