"""Shared fixtures for the Preproj-Verify test suite."""

import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from PreprojConstants import DEFAULT_SEED, TEST_PRIME  # noqa: E402
from QuiverModel import generate_quiver, parse_quiver  # noqa: E402
from ScalarField import ScalarField  # noqa: E402


@pytest.fixture
def qq():
    return ScalarField()


@pytest.fixture
def fp():
    return ScalarField(TEST_PRIME)


@pytest.fixture(params=["q", "fp"])
def any_field(request):
    """Run a test over the rationals and over F_p."""
    return ScalarField() if request.param == "q" else ScalarField(TEST_PRIME)


@pytest.fixture
def rng():
    return random.Random(DEFAULT_SEED)


@pytest.fixture
def a1():
    return generate_quiver("A", 1)


@pytest.fixture
def a2():
    return generate_quiver("A", 2)


@pytest.fixture
def a3():
    return generate_quiver("A", 3)


@pytest.fixture
def d4():
    return generate_quiver("D", 4, "inward")


@pytest.fixture
def cycle3():
    return parse_quiver("quiver C3\nvertex 1\nvertex 2\nvertex 3\n"
                        "arrow a : 1 -> 2\narrow b : 2 -> 3\narrow c : 3 -> 1\n")


@pytest.fixture
def kronecker():
    return parse_quiver("quiver K2; vertex 1; vertex 2; arrow a : 1 -> 2; arrow b : 1 -> 2")


@pytest.fixture
def write_quiver(tmp_path):
    """Write quiver text to a file and return its path."""
    def write(text, name="input.q"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
