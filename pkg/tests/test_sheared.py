import pytest

from app.arcs.arcpres import ArcParseError, ArcPresentation, canonical_form
from app.arcs.transit import braid_to_arc
from app.braid.word import BraidWord
from app.moves.sheared import (CLOSE, OPEN, TAG_EDGE, TAG_NONE, TAG_RESERVED_1, V, IntervalSpec,
                               InvalidIntervalSpec, ShearedPresentation, complexity, doubled_complexity,
                               format_sheared, parse_sheared, shear, unshear, validate_sheared)


def test_interval_spec_bounds() -> None:
    with pytest.raises(InvalidIntervalSpec):
        IntervalSpec(())
    with pytest.raises(InvalidIntervalSpec):
        IntervalSpec((0, 0))
    with pytest.raises(InvalidIntervalSpec):
        IntervalSpec((0, 1, 2, 3))
    with pytest.raises(InvalidIntervalSpec):
        IntervalSpec((5,)).check(3)


def test_shear_keeps_complexity(t2: ArcPresentation, t3: ArcPresentation) -> None:
    state = shear(t3, IntervalSpec((0,)))
    assert state.layout == (V, OPEN, CLOSE, V, V)
    assert state.row_crossings(0) == [1, 2]
    assert state.is_exterior(1) and state.is_exterior(2)
    assert doubled_complexity(state) == 6
    assert complexity(state) == 3
    for gap in range(2):
        assert doubled_complexity(shear(t2, IntervalSpec((gap,)))) == 4


def test_regions(t3: ArcPresentation) -> None:
    state = shear(t3, IntervalSpec((0,)))
    assert state.cell_region == (-1, 1, -1, -1, -1)
    assert state.angle_region == (-1, -1, -1)
    assert state.row_region(0) is None
    assert state.row_region(1) == -1
    assert state.interval_count == 1


def test_plain_state(t3: ArcPresentation) -> None:
    state = ShearedPresentation.plain(t3)
    assert state.interval_count == 0
    assert doubled_complexity(state) == 6
    assert state.to_presentation() == t3
    assert validate_sheared(state) == []


def test_unshear_restores(t3: ArcPresentation) -> None:
    state = shear(t3, IntervalSpec((0, 2)), {0: TAG_EDGE})
    assert canonical_form(unshear(state)) == canonical_form(t3)


def test_unshear_absorbs_interior_arcs() -> None:
    # an arc inside the interval from angle 1 to angle 2 merges away
    state = ShearedPresentation(((0, 1), (1, 2), (2, 0)), (V, OPEN, V, V, CLOSE), (TAG_NONE,) * 3)
    assert validate_sheared(state) == []
    assert unshear(state).k == 2


def test_tags_travel_in_the_key(t3: ArcPresentation) -> None:
    plain_key = shear(t3, IntervalSpec((0,))).key()
    tagged = shear(t3, IntervalSpec((0,)), {1: TAG_RESERVED_1})
    assert tagged.tags == (TAG_NONE, TAG_RESERVED_1, TAG_NONE)
    assert tagged.key() != plain_key


def test_key_ignores_rotation() -> None:
    state = shear(braid_to_arc(BraidWord.from_ints(2, [1])), IntervalSpec((2,)))
    rotated = shear(ArcPresentation(((0, 2), (1, 0), (2, 1))), IntervalSpec((1,)))
    assert state.key() == rotated.key()


def test_validate_sheared() -> None:
    state = ShearedPresentation(((0, 1), (1, 0)), (V, CLOSE, OPEN, V), (TAG_NONE, TAG_NONE))
    assert "unbalanced interval brackets" in validate_sheared(state)
    state = ShearedPresentation(((0, 1), (1, 0)), (V, V, V), (TAG_NONE, TAG_NONE))
    assert validate_sheared(state) == ["layout holds 3 vertical arcs for complexity 2"]


def test_format(t3: ArcPresentation) -> None:
    state = shear(t3, IntervalSpec((0,)), {0: TAG_EDGE})
    assert format_sheared(state) == "arcs 3\n0 1 E\n1 2\n2 0\nintervals: 0\ninterior 0:\n"
    assert format_sheared(ShearedPresentation.plain(t3)) == "arcs 3\n0 1\n1 2\n2 0\n"


def test_parse_round_trip(t3: ArcPresentation) -> None:
    states = [
        shear(t3, IntervalSpec((0,)), {0: TAG_EDGE}),
        shear(t3, IntervalSpec((0, 1, 2)), {1: TAG_RESERVED_1}),
        ShearedPresentation(((0, 1), (1, 2), (2, 0)), (V, OPEN, V, V, CLOSE), (TAG_NONE,) * 3),
        ShearedPresentation.plain(t3),
    ]
    for state in states:
        assert parse_sheared(format_sheared(state)) == state


def test_parse_errors() -> None:
    with pytest.raises(ArcParseError):
        parse_sheared("arcs 2\n0 1 X\n1 0\n")
    with pytest.raises(ArcParseError):
        parse_sheared("arcs 2\n0 1\n1 0\nintervals: 0\n")
    with pytest.raises(ArcParseError):
        parse_sheared("arcs 2\n0 1\n1 0\nintervals: 0\ninterior 0: 0\n")
