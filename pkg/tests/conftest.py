import pytest

from app.arcs.arcpres import ArcPresentation
from app.braid.word import BraidWord


@pytest.fixture
def t2() -> ArcPresentation:
    """The round unknot with two arcs"""
    return ArcPresentation(((0, 1), (1, 0)))


@pytest.fixture
def t3() -> ArcPresentation:
    """The unknot with one redundant arc"""
    return ArcPresentation(((0, 1), (1, 2), (2, 0)))


@pytest.fixture
def two_circles() -> ArcPresentation:
    """Two round unknots on levels 0, 1 and 2, 3"""
    return ArcPresentation(((0, 1), (1, 0), (2, 3), (3, 2)))


@pytest.fixture
def sigma1() -> BraidWord:
    return BraidWord.from_ints(2, [1])


@pytest.fixture
def trefoil() -> BraidWord:
    return BraidWord.from_ints(2, [1, 1, 1])
