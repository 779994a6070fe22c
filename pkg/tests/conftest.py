import pytest

import support


@pytest.fixture
def p1():
    return support.p1()
