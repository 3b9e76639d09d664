import math

import pytest

from app.arcs.arcpres import (ArcParseError, ArcPresentation, InvalidPresentation, ResourceLimitExceeded,
                              canonical_form, complexity, components, decode_key, enumerate_presentations,
                              format_arc_presentation, parse_arc_presentation, rotate, rotation_orbit, validate,
                              winding_number, winding_profile)


def _derangements(k: int) -> int:
    return round(math.factorial(k) * sum((-1) ** i / math.factorial(i) for i in range(k + 1)))


def test_validate_accepts(t2: ArcPresentation, t3: ArcPresentation) -> None:
    assert validate(t2) == []
    assert validate(t3) == []
    assert ArcPresentation.checked(t3.rows) == t3


def test_validate_rejects() -> None:
    assert validate(ArcPresentation(((0, 1),))) == ["complexity must be at least 2, got 1"]
    violations = validate(ArcPresentation(((0, 0), (1, 1))))
    assert "level 0: degenerate arc, start equals end" in violations
    violations = validate(ArcPresentation(((0, 1), (0, 1))))
    assert "angle 0 starts 2 arcs" in violations
    assert "angle 1 starts 0 arcs" in violations
    assert "level 1: angle 5 out of range" in validate(ArcPresentation(((0, 1), (5, 0))))
    with pytest.raises(InvalidPresentation):
        ArcPresentation.checked(((0, 1), (0, 1)))


def test_complexity(t2: ArcPresentation, t3: ArcPresentation) -> None:
    assert complexity(t2) == 2
    assert complexity(t3) == 3


def test_canonical_form(t2: ArcPresentation, t3: ArcPresentation) -> None:
    assert canonical_form(t2) == b"2,0,1,1,0"
    assert canonical_form(ArcPresentation(((1, 0), (0, 1)))) == canonical_form(t2)
    assert canonical_form(t2) != canonical_form(t3)
    assert decode_key(canonical_form(t2)) == t2


def test_canonical_form_is_rotation_invariant(t3: ArcPresentation) -> None:
    keys = {canonical_form(rotate(t3, r, t)) for r in range(3) for t in range(3)}
    assert keys == {canonical_form(t3)}
    assert canonical_form(decode_key(canonical_form(t3))) == canonical_form(t3)


def test_components(t2: ArcPresentation, t3: ArcPresentation, two_circles: ArcPresentation) -> None:
    assert components(t2) == [[0, 1]]
    assert len(components(t3)) == 1
    assert components(two_circles) == [[0, 1], [2, 3]]


def test_winding(t2: ArcPresentation, t3: ArcPresentation, two_circles: ArcPresentation) -> None:
    assert winding_number(t2) == 1
    assert winding_number(t3) == 1
    assert winding_profile(t3) == [1, 1, 1]
    assert winding_number(two_circles) == 2
    assert winding_number(two_circles, levels=[2, 3]) == 1


def test_enumerate_small() -> None:
    assert len(enumerate_presentations(2)) == 1
    assert len(enumerate_presentations(3)) == 4
    assert len(enumerate_presentations(4)) == 19


@pytest.mark.parametrize("k", [3, 4])
def test_enumeration_covers_every_presentation(k: int) -> None:
    keys = enumerate_presentations(k)
    assert all(canonical_form(decode_key(key)) == key for key in keys)
    labelled = sum(len(rotation_orbit(decode_key(key))) for key in keys)
    assert labelled == _derangements(k) * math.factorial(k)


def test_enumerate_bounds() -> None:
    with pytest.raises(ResourceLimitExceeded):
        enumerate_presentations(7)
    with pytest.raises(ResourceLimitExceeded):
        enumerate_presentations(4, max_k=3)
    with pytest.raises(InvalidPresentation):
        enumerate_presentations(1)


def test_parse_and_format(t2: ArcPresentation) -> None:
    text = "# the round unknot\narcs 2\n0 1\n1 0  # top\n"
    assert parse_arc_presentation(text) == t2
    assert format_arc_presentation(t2) == "arcs 2\n0 1\n1 0\n"
    assert parse_arc_presentation(format_arc_presentation(t2)) == t2


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("arcs 2\n0 1\n", 1),
    ("arcs 2\n0 x\n1 0\n", 2),
    ("arcs 2\n0 1 2\n1 0\n", 2),
    ("rows 2\n0 1\n1 0\n", 1),
    ("arcs 2\n0 1\n0 1\n", 1),
])
def test_parse_errors(text: str, line: int) -> None:
    with pytest.raises(ArcParseError) as info:
        parse_arc_presentation(text)
    assert info.value.line_number == line
