import pytest

from coalearn.io import load_system
from coalearn.teacher import Teacher


@pytest.fixture
def mod3():
    return load_system("mod3.json")


@pytest.fixture
def paper_lts():
    return load_system("paper_lts.json")


@pytest.fixture
def mod3_teacher(mod3):
    return Teacher(mod3)


@pytest.fixture
def lts_teacher(paper_lts):
    return Teacher(paper_lts)
