import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra import field_for_q  # noqa: E402


@pytest.fixture
def f2():
    return field_for_q(2)


@pytest.fixture
def f3():
    return field_for_q(3)


@pytest.fixture
def f4():
    return field_for_q(4)


@pytest.fixture
def f5():
    return field_for_q(5)
