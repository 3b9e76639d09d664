# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple, Union

from app.arcs.arcpres import (ArcParseError, ArcPresentation, InvalidPresentation, Row, content_lines,
                              parse_header, parse_ints, validate)

logger = logging.getLogger(__name__)

V = 'V'
OPEN = '['
CLOSE = ']'

TAG_NONE = 0
TAG_EDGE = 1
TAG_RESERVED_1 = 2
TAG_RESERVED_2 = 3
TAG_NAMES = {TAG_EDGE: 'E', TAG_RESERVED_1: 'R1', TAG_RESERVED_2: 'R2'}

# the most intervals a decision procedure ever needs
_default_max_intervals = 3
_intervals_keyword = 'intervals:'
_interior_keyword = 'interior'

# a draft token is an angle label or a bracket tagged with its interval
Token = Union[int, Tuple[str, int]]


class InvalidIntervalSpec(Exception):
    """The interval placement cannot be applied to the presentation"""
    pass


@dataclass(frozen=True)
class IntervalSpec:
    """Where to cut the binding circle open for the intervals

    Each gap g places one initially empty interval between angle g and
    angle g + 1 of a plain presentation.
    """
    gaps: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= len(self.gaps) <= _default_max_intervals:
            raise InvalidIntervalSpec(f"expected 1 to {_default_max_intervals} intervals, got {len(self.gaps)}")
        if len(set(self.gaps)) != len(self.gaps):
            raise InvalidIntervalSpec(f"intervals must sit in distinct gaps: {self.gaps}")

    def check(self, k: int):
        for gap in self.gaps:
            if not 0 <= gap < k:
                raise InvalidIntervalSpec(f"gap {gap} out of range for complexity {k}")


@dataclass(frozen=True)
class ShearedPresentation:
    """An arc presentation whose binding circle carries disjoint intervals

    The layout lists, in angular order, a 'V' for every angular slot of
    a vertical arc and a '[' and ']' for the ends of every interval.
    Angle a is the a-th 'V' of the layout. The layout never starts
    inside an interval. tags marks the horizontal arcs a decision
    procedure must keep track of.

    A state without intervals is a plain arc presentation.
    """
    rows: Tuple[Row, ...]
    layout: Tuple[str, ...]
    tags: Tuple[int, ...]

    @classmethod
    def plain(cls, presentation: ArcPresentation) -> ShearedPresentation:
        return cls(presentation.rows, (V,) * presentation.k, (TAG_NONE,) * presentation.k)

    @property
    def k(self) -> int:
        return len(self.rows)

    @cached_property
    def interval_count(self) -> int:
        return self.layout.count(OPEN)

    @cached_property
    def angle_token(self) -> Tuple[int, ...]:
        return tuple(position for position, token in enumerate(self.layout) if token == V)

    @cached_property
    def token_angle(self) -> Tuple[int, ...]:
        """Gets the angle of every token, -1 for the brackets"""
        angles = [-1] * len(self.layout)
        for angle, position in enumerate(self.angle_token):
            angles[position] = angle
        return tuple(angles)

    @cached_property
    def cell_region(self) -> Tuple[int, ...]:
        """Gets the region of the cell after every token

        Interval t is region t + 1 and the exterior component following
        the t-th ']' is region -(t + 1). Without intervals the whole
        circle is region -1.
        """
        count = self.interval_count
        regions = []
        opens = closes = 0
        inside = False
        for token in self.layout:
            if token == OPEN:
                opens += 1
                inside = True
            elif token == CLOSE:
                closes += 1
                inside = False
            if inside:
                regions.append(opens)
            else:
                regions.append(-((closes - 1) % count + 1) if count else -1)
        return tuple(regions)

    @cached_property
    def angle_region(self) -> Tuple[int, ...]:
        """Gets the region each vertical arc lies in"""
        return tuple(self.cell_region[position] for position in self.angle_token)

    @cached_property
    def start_level(self) -> Tuple[int, ...]:
        levels = [0] * self.k
        for level, (start, _) in enumerate(self.rows):
            levels[start] = level
        return tuple(levels)

    @cached_property
    def end_level(self) -> Tuple[int, ...]:
        levels = [0] * self.k
        for level, (_, end) in enumerate(self.rows):
            levels[end] = level
        return tuple(levels)

    def vertical(self, angle: int) -> Tuple[int, int]:
        return self.end_level[angle], self.start_level[angle]

    def row_cells(self, level: int) -> List[int]:
        """Gets the cells covered by the horizontal arc at level"""
        start, end = self.rows[level]
        first, last = self.angle_token[start], self.angle_token[end]
        count = len(self.layout)
        return [(first + i) % count for i in range((last - first) % count)]

    def row_crossings(self, level: int) -> List[int]:
        """Gets the positions of the brackets passed by the horizontal arc at level"""
        count = len(self.layout)
        return [(cell + 1) % count for cell in self.row_cells(level)[:-1]
                if self.layout[(cell + 1) % count] != V]

    def row_region(self, level: int) -> Optional[int]:
        """Gets the single region holding the horizontal arc, None if it crosses a bracket"""
        if self.row_crossings(level):
            return None
        return self.cell_region[self.angle_token[self.rows[level][0]]]

    def is_exterior(self, level: int) -> bool:
        region = self.row_region(level)
        return region is not None and region < 0

    def is_protected(self, level: int, protected: Iterable[int]) -> bool:
        return self.tags[level] != TAG_NONE and self.tags[level] in protected

    def levels_adjacent(self, first: int, second: int) -> bool:
        return (first + 1) % self.k == second or (second + 1) % self.k == first

    def to_presentation(self) -> ArcPresentation:
        """Forgets the intervals, only meaningful for a state without intervals"""
        return ArcPresentation(self.rows)

    def key(self) -> bytes:
        return canonical_form(self)

    def __str__(self):
        return format_sheared(self)


class DraftPresentation:
    """A mutable working copy of a sheared presentation

    Angles are stable integer labels while the draft is edited, and
    levels are positions in the rows list. freeze() renumbers
    everything back into a ShearedPresentation.
    """

    def __init__(self, state: ShearedPresentation):
        self.rows: List[List[int]] = [[start, end] for start, end in state.rows]
        self.tags: List[int] = list(state.tags)
        self.tokens: List[Token] = []
        interval = 0
        for position, token in enumerate(state.layout):
            if token == V:
                self.tokens.append(state.token_angle[position])
            elif token == OPEN:
                self.tokens.append((OPEN, interval))
            else:
                self.tokens.append((CLOSE, interval))
                interval += 1
        self._next_label = state.k

    @property
    def k(self) -> int:
        return len(self.rows)

    def new_label(self) -> int:
        self._next_label += 1
        return self._next_label - 1

    def level_starting(self, label: int) -> int:
        return next(level for level, row in enumerate(self.rows) if row[0] == label)

    def level_ending(self, label: int) -> int:
        return next(level for level, row in enumerate(self.rows) if row[1] == label)

    def angle_labels(self) -> List[int]:
        return [token for token in self.tokens if isinstance(token, int)]

    def length(self, level: int) -> int:
        """Gets the number of gaps passed by the horizontal arc at level"""
        order = {label: i for i, label in enumerate(self.angle_labels())}
        start, end = self.rows[level]
        return (order[end] - order[start]) % self.k

    def merge_at(self, label: int) -> bool:
        """Merges the two horizontal arcs meeting at a vertical arc if that is legal

        The arcs must sit on adjacent levels and the merged arc must not
        go all the way around. The merged arc keeps the level of the arc
        ending at label.
        """
        first, second = self.level_ending(label), self.level_starting(label)
        k = self.k
        if (first + 1) % k != second and (second + 1) % k != first:
            return False
        if self.tags[first] and self.tags[second]:
            return False
        if self.length(first) + self.length(second) >= k:
            return False
        self.rows[first][1] = self.rows[second][1]
        self.tags[first] = self.tags[first] or self.tags[second]
        del self.rows[second]
        del self.tags[second]
        self.tokens.remove(label)
        return True

    def interior_labels(self, interval: Optional[int] = None) -> List[int]:
        labels = []
        inside = None
        for token in self.tokens:
            if isinstance(token, tuple):
                inside = token[1] if token[0] == OPEN else None
            elif inside is not None and (interval is None or inside == interval):
                labels.append(token)
        # an interval may wrap past the end of the token list
        if inside is not None:
            for token in self.tokens:
                if isinstance(token, tuple):
                    break
                if interval is None or inside == interval:
                    labels.append(token)
        return labels

    def freeze(self) -> ShearedPresentation:
        tokens = self.tokens
        brackets = [i for i, token in enumerate(tokens) if isinstance(token, tuple)]
        if brackets and tokens[brackets[0]][0] == CLOSE:
            first_open = next(i for i in brackets if tokens[i][0] == OPEN)
            tokens = tokens[first_open:] + tokens[:first_open]
        relabel: Dict[int, int] = {}
        layout = []
        for token in tokens:
            if isinstance(token, int):
                relabel[token] = len(relabel)
                layout.append(V)
            else:
                layout.append(token[0])
        rows = tuple((relabel[start], relabel[end]) for start, end in self.rows)
        return ShearedPresentation(rows, tuple(layout), tuple(self.tags))


def shear(presentation: ArcPresentation, intervals: IntervalSpec,
          tags: Optional[Dict[int, int]] = None) -> ShearedPresentation:
    """Places empty intervals into a plain presentation

    Parameters
    ----------
    presentation:
        a valid plain presentation
    intervals:
        the gaps receiving an interval each
    tags:
        optional tags by level

    Returns
    -------
    state:
        the sheared presentation, its horizontal arcs passing a chosen
        gap now pass the interval placed there
    """
    intervals.check(presentation.k)
    layout = []
    for angle in range(presentation.k):
        layout.append(V)
        if angle in intervals.gaps:
            layout.extend((OPEN, CLOSE))
    row_tags = [TAG_NONE] * presentation.k
    for level, tag in (tags or {}).items():
        row_tags[level] = tag
    return ShearedPresentation(presentation.rows, tuple(layout), tuple(row_tags))


def unshear(state: ShearedPresentation) -> ArcPresentation:
    """Absorbs the intervals back into a plain presentation

    The brackets are dropped, then horizontal arcs meeting at a vertical
    arc from an interval are merged while that is legal.
    """
    draft = DraftPresentation(state)
    interior = draft.interior_labels()
    draft.tokens = draft.angle_labels()
    draft.tags = [TAG_NONE] * draft.k
    merged = True
    while merged:
        merged = False
        for label in interior:
            if label in draft.tokens and draft.merge_at(label):
                merged = True
    frozen = draft.freeze()
    return ArcPresentation.checked(frozen.rows)


def doubled_complexity(state: ShearedPresentation) -> int:
    """Gets 2C = 2k' + k''

    k' counts the horizontal arcs lying in the exterior and k'' counts
    the pairs of a horizontal arc and an interval end it passes.
    """
    exterior = sum(1 for level in range(state.k) if state.is_exterior(level))
    crossings = sum(len(state.row_crossings(level)) for level in range(state.k))
    return 2 * exterior + crossings


def complexity(state: ShearedPresentation) -> float:
    return doubled_complexity(state) / 2


def validate_sheared(state: ShearedPresentation) -> List[str]:
    """Lists the violations of the rows and of the layout"""
    violations = validate(ArcPresentation(state.rows))
    if state.layout.count(V) != state.k:
        violations.append(f"layout holds {state.layout.count(V)} vertical arcs for complexity {state.k}")
    if len(state.tags) != state.k:
        violations.append(f"expected {state.k} tags, got {len(state.tags)}")
    expected = OPEN
    for token in state.layout:
        if token in (OPEN, CLOSE):
            if token != expected:
                violations.append("unbalanced interval brackets")
                break
            expected = CLOSE if token == OPEN else OPEN
    if expected == CLOSE:
        violations.append("unbalanced interval brackets")
    return violations


def canonical_form(state: ShearedPresentation) -> bytes:
    """Gets the key shared by exactly the rotations of the state

    Levels rotate freely, the layout rotates to any position outside
    the intervals, and the tags travel with their arcs.
    """
    k = state.k
    count = len(state.layout)
    starts = [position for position in range(count)
              if state.layout[position] == OPEN or
              (state.layout[position] == V and state.cell_region[position - 1] < 0)]
    best = None
    for position in starts:
        layout = state.layout[position:] + state.layout[:position]
        shift = sum(1 for token in state.layout[:position] if token == V)
        # the arc starting at the new angle 0 goes to level 0
        level_shift = -state.start_level[shift % k]
        rows: List[Row] = [(0, 0)] * k
        tags = [TAG_NONE] * k
        for level, (start, end) in enumerate(state.rows):
            rows[(level + level_shift) % k] = ((start - shift) % k, (end - shift) % k)
            tags[(level + level_shift) % k] = state.tags[level]
        candidate = (layout, tuple(rows), tuple(tags))
        if best is None or candidate < best:
            best = candidate
    layout, rows, tags = best
    spans = ",".join(f"{s}-{e}" for s, e in rows)
    text = f"{''.join(layout)}|{spans}|{','.join(str(tag) for tag in tags)}"
    return text.encode('ascii')


def format_sheared(state: ShearedPresentation) -> str:
    """Formats a state in the arc presentation text format

    Tagged rows carry their tag name as a third token. A state with
    intervals adds a line `intervals: g1 g2 ...` where gi is the angle
    just before the i-th interval, -1 if there is none, and one line
    `interior i: a b ...` listing the vertical arcs inside interval i.
    """
    lines = [f"arcs {state.k}"]
    for (start, end), tag in zip(state.rows, state.tags):
        lines.append(f"{start} {end} {TAG_NAMES[tag]}" if tag else f"{start} {end}")
    if state.interval_count:
        gaps = []
        interiors = []
        seen = -1
        inside = None
        for position, token in enumerate(state.layout):
            if token == OPEN:
                gaps.append(seen)
                inside = []
            elif token == CLOSE:
                interiors.append(inside)
                inside = None
            else:
                seen = state.token_angle[position]
                if inside is not None:
                    inside.append(seen)
        lines.append(_intervals_keyword + " " + " ".join(str(g) for g in gaps))
        for t, interior in enumerate(interiors):
            lines.append(" ".join([f"{_interior_keyword} {t}:"] + [str(a) for a in interior]))
    return "\n".join(lines) + "\n"


def parse_sheared(text: str) -> ShearedPresentation:
    """Parses the text written by format_sheared, plain arc presentations included"""
    lines = content_lines(text)
    if not lines:
        raise ArcParseError("empty input", 1)
    header_number, header = lines[0]
    k = parse_header(header, header_number)
    if len(lines) < k + 1:
        raise ArcParseError(f"expected {k} rows, found {len(lines) - 1}", header_number)
    tag_values = {name: tag for tag, name in TAG_NAMES.items()}
    rows = []
    tags = []
    for line_number, line in lines[1:k + 1]:
        tokens = line.split()
        if len(tokens) not in (2, 3) or (len(tokens) == 3 and tokens[2] not in tag_values):
            raise ArcParseError("expected '<start> <end> [E|R1|R2]'", line_number)
        rows.append(parse_ints(tokens[:2], line_number))
        tags.append(tag_values[tokens[2]] if len(tokens) == 3 else TAG_NONE)
    violations = validate(ArcPresentation(tuple(rows)))
    if violations:
        raise ArcParseError("; ".join(violations), header_number)
    rest = lines[k + 1:]
    layout: List[str] = []
    angle = 0
    if rest:
        line_number, line = rest[0]
        tokens = line.split()
        if not tokens or tokens[0] != _intervals_keyword:
            raise ArcParseError(f"expected '{_intervals_keyword} <gaps>'", line_number)
        gaps = parse_ints(tokens[1:], line_number)
        if not 1 <= len(gaps) <= _default_max_intervals or len(rest) != len(gaps) + 1:
            raise ArcParseError("expected one interior line per interval", line_number)
        for t, (gap, (interior_number, interior_line)) in enumerate(zip(gaps, rest[1:])):
            head, _, tail = interior_line.partition(':')
            if head.split() != [_interior_keyword, str(t)]:
                raise ArcParseError(f"expected '{_interior_keyword} {t}: <angles>'", interior_number)
            if gap < angle - 1 or gap >= k:
                raise ArcParseError(f"interval {t} is out of order", line_number)
            while angle <= gap:
                layout.append(V)
                angle += 1
            interior = parse_ints(tail.split(), interior_number)
            if list(interior) != list(range(angle, angle + len(interior))) or angle + len(interior) > k:
                raise ArcParseError("interior angles must follow the interval position", interior_number)
            layout.extend([OPEN] + [V] * len(interior) + [CLOSE])
            angle += len(interior)
    layout.extend([V] * (k - angle))
    return ShearedPresentation(tuple(tuple(row) for row in rows), tuple(layout), tuple(tags))
