# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, List, Optional, Set, Tuple

logger = logging.getLogger(__name__)

# the leading keyword of the arc presentation text format
_arcs_keyword = 'arcs'
# the comment marker of the text formats
_comment_marker = '#'
# enumeration walks k!^2 candidates, beyond this it is refused
_default_max_enumeration_size = 6

Row = Tuple[int, int]


class InvalidPresentation(Exception):
    """The rows do not describe a valid arc presentation"""
    pass


class ArcParseError(Exception):
    """The arc presentation text could not be parsed"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ResourceLimitExceeded(Exception):
    """A computation was refused or stopped because it outgrew its bound"""
    pass


@dataclass(frozen=True)
class ArcPresentation:
    """An arc presentation of complexity k

    rows[level] = (start, end) gives the angular slots of the endpoints
    of the horizontal arc at that level. The horizontal arc runs from
    start in increasing angle, cyclically, up to end. The vertical arc
    at angle a joins the level ending at a to the level starting at a,
    and it passes over every horizontal arc it meets.

    The constructor does not check the rows, use checked() or
    validate() for that.
    """
    rows: Tuple[Row, ...]

    @classmethod
    def checked(cls, rows: Iterable[Row]) -> ArcPresentation:
        """Builds a presentation and raises InvalidPresentation if it is not valid"""
        presentation = cls(tuple((int(s), int(e)) for s, e in rows))
        violations = validate(presentation)
        if violations:
            raise InvalidPresentation("; ".join(violations))
        return presentation

    @property
    def k(self) -> int:
        return len(self.rows)

    @cached_property
    def start_level(self) -> Tuple[int, ...]:
        """Gets, for each angle, the level whose horizontal arc starts there"""
        levels = [0] * self.k
        for level, (start, _) in enumerate(self.rows):
            levels[start] = level
        return tuple(levels)

    @cached_property
    def end_level(self) -> Tuple[int, ...]:
        """Gets, for each angle, the level whose horizontal arc ends there"""
        levels = [0] * self.k
        for level, (_, end) in enumerate(self.rows):
            levels[end] = level
        return tuple(levels)

    def vertical(self, angle: int) -> Tuple[int, int]:
        """Gets the (from level, to level) pair of the vertical arc at angle"""
        return self.end_level[angle], self.start_level[angle]

    def covers(self, level: int, gap: int) -> bool:
        """Checks whether the horizontal arc at level passes gap

        Gap g lies between angle g and angle g + 1 (mod k).
        """
        return covers(self.rows[level], gap, self.k)

    def __str__(self):
        return format_arc_presentation(self)


def covers(row: Row, gap: int, k: int) -> bool:
    start, end = row
    return (gap - start) % k < (end - start) % k


def validate(presentation: ArcPresentation) -> List[str]:
    """Lists every way the rows fail to be an arc presentation

    Parameters
    ----------
    presentation:
        the presentation to check

    Returns
    -------
    violations:
        human readable violations, empty when the presentation is valid
    """
    k = presentation.k
    if k < 2:
        return [f"complexity must be at least 2, got {k}"]
    violations = []
    starts = [0] * k
    ends = [0] * k
    for level, (start, end) in enumerate(presentation.rows):
        in_range = True
        for angle in (start, end):
            if not 0 <= angle < k:
                violations.append(f"level {level}: angle {angle} out of range")
                in_range = False
        if not in_range:
            continue
        if start == end:
            violations.append(f"level {level}: degenerate arc, start equals end")
        starts[start] += 1
        ends[end] += 1
    for angle in range(k):
        if starts[angle] != 1:
            violations.append(f"angle {angle} starts {starts[angle]} arcs")
        if ends[angle] != 1:
            violations.append(f"angle {angle} ends {ends[angle]} arcs")
    return violations


def complexity(presentation: ArcPresentation) -> int:
    return presentation.k


def rotate(presentation: ArcPresentation, level_shift: int = 0, angle_shift: int = 0) -> ArcPresentation:
    """Rotates the presentation in levels and in angles

    The arc at level i moves to level i + level_shift and every angle a
    becomes a + angle_shift, both mod k. The result presents the same
    link.
    """
    k = presentation.k
    rows = [(0, 0)] * k
    for level, (start, end) in enumerate(presentation.rows):
        rows[(level + level_shift) % k] = ((start + angle_shift) % k, (end + angle_shift) % k)
    return ArcPresentation(tuple(rows))


def rotation_orbit(presentation: ArcPresentation) -> Set[Tuple[Row, ...]]:
    """Gets the distinct row tuples of all k*k rotations"""
    k = presentation.k
    return {rotate(presentation, r, t).rows for r in range(k) for t in range(k)}


def _encode_key(values: Iterable[int]) -> bytes:
    return ",".join(str(v) for v in values).encode('ascii')


def canonical_form(presentation: ArcPresentation) -> bytes:
    """Gets the key shared by exactly the rotations of the presentation

    Parameters
    ----------
    presentation:
        a valid presentation

    Returns
    -------
    key:
        the encoding of the lexicographically smallest rotated row tuple
    """
    k = presentation.k
    # the smallest rotation puts the arc starting at angle 0 on level 0
    smallest = min(rotate(presentation, -presentation.start_level[-t % k], t).rows for t in range(k))
    return _encode_key([presentation.k] + [v for row in smallest for v in row])


def decode_key(key: bytes) -> ArcPresentation:
    """Rebuilds the representative presentation of a canonical key"""
    values = [int(v) for v in key.decode('ascii').split(",")]
    k, flat = values[0], values[1:]
    return ArcPresentation(tuple((flat[2 * i], flat[2 * i + 1]) for i in range(k)))


def components(presentation: ArcPresentation) -> List[List[int]]:
    """Gets the link components as lists of levels in traversal order

    The traversal leaves a horizontal arc at its end and climbs the
    vertical arc there to the level starting at the same angle.
    """
    seen = [False] * presentation.k
    result = []
    for first in range(presentation.k):
        if seen[first]:
            continue
        component = []
        level = first
        while not seen[level]:
            seen[level] = True
            component.append(level)
            level = presentation.start_level[presentation.rows[level][1]]
        result.append(component)
    return result


def winding_profile(presentation: ArcPresentation) -> List[int]:
    """Gets the number of horizontal arcs passing each gap"""
    k = presentation.k
    return [sum(1 for row in presentation.rows if covers(row, gap, k)) for gap in range(k)]


def winding_number(presentation: ArcPresentation, levels: Optional[Iterable[int]] = None) -> int:
    """Gets the winding number around the binding circle

    Parameters
    ----------
    presentation:
        a valid presentation
    levels:
        restricts the count to these levels, e.g. one component

    Returns
    -------
    winding number:
        the number of the horizontal arcs passing the gap after angle k - 1
    """
    k = presentation.k
    chosen = range(k) if levels is None else levels
    return sum(1 for level in chosen if covers(presentation.rows[level], k - 1, k))


def enumerate_presentations(k: int, max_k: int = _default_max_enumeration_size) -> Set[bytes]:
    """Enumerates all arc presentations of complexity k up to rotation

    Parameters
    ----------
    k:
        the complexity
    max_k:
        the largest complexity accepted

    Returns
    -------
    keys:
        the canonical keys of the rotation classes
    """
    if k < 2:
        raise InvalidPresentation(f"complexity must be at least 2, got {k}")
    if k > max_k:
        raise ResourceLimitExceeded(
            f"enumeration walks {math.factorial(k) ** 2} candidates for k = {k}, the bound is k <= {max_k}")
    keys = set()
    for starts in permutations(range(k)):
        for ends in permutations(range(k)):
            if any(s == e for s, e in zip(starts, ends)):
                continue
            keys.add(canonical_form(ArcPresentation(tuple(zip(starts, ends)))))
    logger.info("k = %d: %d rotation classes", k, len(keys))
    return keys


def parse_arc_presentation(text: str) -> ArcPresentation:
    """Parses the arc presentation text format

    The format is a line `arcs <k>` followed by k lines `<start> <end>`,
    one per level from level 0 upwards. Text after # is a comment.
    """
    lines = content_lines(text)
    if not lines:
        raise ArcParseError("empty input", 1)
    header_number, header = lines[0]
    k = parse_header(header, header_number)
    body = lines[1:]
    if len(body) != k:
        raise ArcParseError(f"expected {k} rows, found {len(body)}", header_number)
    rows = []
    for line_number, line in body:
        tokens = line.split()
        if len(tokens) != 2:
            raise ArcParseError("expected '<start> <end>'", line_number)
        rows.append(parse_ints(tokens, line_number))
    try:
        return ArcPresentation.checked(rows)
    except InvalidPresentation as e:
        raise ArcParseError(str(e), header_number) from None


def content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(_comment_marker, 1)[0].strip()
        if line:
            lines.append((line_number, line))
    return lines


def parse_header(line: str, line_number: int) -> int:
    tokens = line.split()
    if len(tokens) != 2 or tokens[0] != _arcs_keyword:
        raise ArcParseError("expected 'arcs <k>'", line_number)
    k = parse_ints(tokens[1:], line_number)[0]
    if k < 2:
        raise ArcParseError("complexity must be at least 2", line_number)
    return k


def parse_ints(tokens: List[str], line_number: int) -> Tuple[int, ...]:
    try:
        return tuple(int(token) for token in tokens)
    except ValueError:
        raise ArcParseError("malformed integer token", line_number) from None


def format_arc_presentation(presentation: ArcPresentation) -> str:
    lines = [f"{_arcs_keyword} {presentation.k}"]
    lines.extend(f"{start} {end}" for start, end in presentation.rows)
    return "\n".join(lines) + "\n"
