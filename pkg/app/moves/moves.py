# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from app.moves.sheared import (CLOSE, OPEN, TAG_NONE, DraftPresentation, ShearedPresentation,
                               doubled_complexity)

logger = logging.getLogger(__name__)


class MoveKind(str, Enum):
    HX = 'HX'
    VX = 'VX'
    HS = 'HS'
    VS = 'VS'
    SHX = 'SHX'
    SVS = 'SVS'
    INVERSE_HS = 'InverseHS'
    INVERSE_VS = 'InverseVS'


# the moves the monotonic search may take, in enumeration order
SEARCH_KINDS = (MoveKind.HX, MoveKind.VX, MoveKind.HS, MoveKind.VS, MoveKind.SHX, MoveKind.SVS)
EXCHANGE_KINDS = (MoveKind.HX, MoveKind.VX)


class InapplicableMove(Exception):
    """The move does not apply to the state with the given parameters"""
    pass


class InvalidInsertionSite(Exception):
    """The requested stabilization does not fit into the state"""
    pass


@dataclass(frozen=True)
class MoveRecord:
    """One elementary move with the parameters locating it

    -- HX, HS: (lower or first level, second level)
    -- VX, VS: (first angle, second angle)
    -- SHX: (lower level, upper level, exterior region index)
    -- SVS: (angle, +1 to push into the interval after it, -1 before it)
    -- InverseHS: (level, angle after which the arc is cut, +1 new piece above / -1 below)
    -- InverseVS: (angle, level index of the new arc, +1 new angle after / -1 before)
    """
    kind: MoveKind
    params: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {'kind': self.kind.value, 'params': list(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> MoveRecord:
        return cls(MoveKind(data['kind']), tuple(int(p) for p in data['params']))

    def __str__(self):
        return f"{self.kind.value}({','.join(str(p) for p in self.params)})"


def _swap_levels(state: ShearedPresentation, first: int, second: int) -> ShearedPresentation:
    rows = list(state.rows)
    tags = list(state.tags)
    rows[first], rows[second] = rows[second], rows[first]
    tags[first], tags[second] = tags[second], tags[first]
    return ShearedPresentation(tuple(rows), state.layout, tuple(tags))


def _nested(first: Set[int], second: Set[int]) -> bool:
    return first <= second or second <= first or first.isdisjoint(second)


def _horizontal_exchange(state: ShearedPresentation, params: Tuple[int, ...],
                         protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    lower, upper = params
    k = state.k
    if not 0 <= lower < k or k < 3 and lower != 0 or upper != (lower + 1) % k:
        return None
    region = state.row_region(lower)
    if region is None or region != state.row_region(upper):
        return None
    if not _nested(set(state.row_cells(lower)), set(state.row_cells(upper))):
        return None
    return reduce_interiors(_swap_levels(state, lower, upper))


def _interleaved(first: Tuple[int, int], second: Tuple[int, int]) -> bool:
    a, b = sorted(first)
    c, d = sorted(second)
    return a < c < b < d or c < a < d < b


def _vertical_exchange(state: ShearedPresentation, params: Tuple[int, ...],
                       protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    first, second = params
    k = state.k
    if not 0 <= first < k or k < 3 and first != 0 or second != (first + 1) % k:
        return None
    count = len(state.layout)
    if (state.angle_token[second] - state.angle_token[first]) % count != 1:
        return None
    one, other = state.vertical(first), state.vertical(second)
    if set(one) & set(other) or _interleaved(one, other):
        return None
    swap = {first: second, second: first}
    rows = tuple((swap.get(start, start), swap.get(end, end)) for start, end in state.rows)
    return reduce_interiors(ShearedPresentation(rows, state.layout, state.tags))


def _horizontal_simplification(state: ShearedPresentation, params: Tuple[int, ...],
                               protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    first, second = params
    k = state.k
    if k < 3 or not 0 <= first < k or not 0 <= second < k or not state.levels_adjacent(first, second):
        return None
    if state.rows[first][1] != state.rows[second][0]:
        return None
    if not state.is_exterior(first) or state.row_region(first) != state.row_region(second):
        return None
    if state.is_protected(first, protected) and state.is_protected(second, protected):
        return None
    draft = DraftPresentation(state)
    if not draft.merge_at(state.rows[first][1]):
        return None
    return reduce_interiors(draft.freeze())


def _remove_short_arc(draft: DraftPresentation, first: int, second: int) -> bool:
    """Removes the horizontal arc from angle label first to the adjacent label second

    The vertical arcs at both angles merge into one at first.
    """
    short = draft.level_starting(first)
    if draft.rows[short] != [first, second] or draft.tags[short]:
        return False
    before, after = draft.level_ending(first), draft.level_starting(second)
    if before == after:
        return False
    draft.rows[after][0] = first
    del draft.rows[short]
    del draft.tags[short]
    draft.tokens.remove(second)
    return True


def _vertical_simplification(state: ShearedPresentation, params: Tuple[int, ...],
                             protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    first, second = params
    k = state.k
    if k < 3 or not 0 <= first < k or second != (first + 1) % k:
        return None
    count = len(state.layout)
    if (state.angle_token[second] - state.angle_token[first]) % count != 1 or state.angle_region[first] >= 0:
        return None
    if state.is_protected(state.start_level[first], protected):
        return None
    draft = DraftPresentation(state)
    if not _remove_short_arc(draft, first, second):
        return None
    return reduce_interiors(draft.freeze())


def _region_boundaries(state: ShearedPresentation, region: int) -> Tuple[int, int]:
    """Gets the positions of the ']' opening and the '[' closing an exterior region"""
    closes = [p for p, token in enumerate(state.layout) if token == CLOSE]
    opens = [p for p, token in enumerate(state.layout) if token == OPEN]
    left = closes[region]
    right = next((p for p in opens if p > left), opens[0])
    return left, right


def _draft_cells(draft: DraftPresentation, row: List[int]) -> Set[int]:
    position = {token: p for p, token in enumerate(draft.tokens) if isinstance(token, int)}
    count = len(draft.tokens)
    first, last = position[row[0]], position[row[1]]
    return {(first + i) % count for i in range((last - first) % count)}


def _shear_exchange(state: ShearedPresentation, params: Tuple[int, ...],
                    protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    """Exchanges the parts inside one exterior region of two adjacent horizontal arcs

    Every passage of the arcs through an end of the region is cut by a
    new vertical arc just inside the neighbouring interval, the pieces
    inside the region are stacked next to each other and exchanged.
    """
    lower, upper, region = params
    k = state.k
    count = state.interval_count
    if count == 0 or not 0 <= region < count or not 0 <= lower < k or upper != (lower + 1) % k:
        return None
    if state.tags[lower] or state.tags[upper]:
        return None
    region_id = -(region + 1)
    inside = {cell for cell, r in enumerate(state.cell_region) if r == region_id}
    restricted = {level: set(state.row_cells(level)) & inside for level in (lower, upper)}
    if not restricted[lower] or not restricted[upper] or not _nested(restricted[lower], restricted[upper]):
        return None
    boundaries = _region_boundaries(state, region)
    crossings = {}
    for level in (lower, upper):
        cells = state.row_cells(level)
        passed = set(state.row_crossings(level)) & set(boundaries)
        crossings[level] = sorted(passed, key=lambda p: cells.index((p - 1) % len(state.layout)))
    if not crossings[lower] and not crossings[upper]:
        return None

    draft = DraftPresentation(state)
    draft.rows = draft.rows[lower:] + draft.rows[:lower]
    draft.tags = draft.tags[lower:] + draft.tags[:lower]
    bracket = {p: draft.tokens[p] for p in boundaries}
    pieces = {0: [(draft.rows[0], not crossings[lower] or state.layout[crossings[lower][0]] == OPEN)],
              1: [(draft.rows[1], not crossings[upper] or state.layout[crossings[upper][0]] == OPEN)]}
    contained_last = sorted((lower, upper), key=lambda level: (
        len(restricted[level]), len(state.row_cells(level))), reverse=True)
    for level in contained_last:
        side = 0 if level == lower else 1
        for p in crossings[level]:
            token = bracket[p]
            current, _ = pieces[side][-1]
            label = draft.new_label()
            at = draft.tokens.index(token)
            draft.tokens.insert(at if token[0] == CLOSE else at + 1, label)
            piece = [label, current[1]]
            current[1] = label
            entering = token[0] == CLOSE
            index = next(i for i, row in enumerate(draft.rows) if row is current)
            above = entering if side == 0 else not entering
            draft.rows.insert(index + 1 if above else index, piece)
            draft.tags.insert(index + 1 if above else index, TAG_NONE)
            pieces[side].append((piece, entering))
    lower_inner = [row for row, inner in pieces[0] if inner]
    upper_inner = [row for row, inner in pieces[1] if inner]
    for a in lower_inner:
        for b in upper_inner:
            if not _nested(_draft_cells(draft, a), _draft_cells(draft, b)):
                return None
    lower_outer = [row for row, inner in pieces[0] if not inner]
    upper_outer = [row for row, inner in pieces[1] if not inner]
    block = len(pieces[0]) + len(pieces[1])
    order = sorted(lower_outer, key=lambda row: _level_of(draft, row)) + \
        sorted(upper_inner, key=lambda row: _level_of(draft, row)) + \
        sorted(lower_inner, key=lambda row: _level_of(draft, row)) + \
        sorted(upper_outer, key=lambda row: _level_of(draft, row))
    draft.rows = order + draft.rows[block:]
    result = reduce_interiors(draft.freeze())
    if not _within_interior_cap(result):
        return None
    return result


def _level_of(draft: DraftPresentation, row: List[int]) -> int:
    return next(i for i, candidate in enumerate(draft.rows) if candidate is row)


def _within_interior_cap(state: ShearedPresentation) -> bool:
    """Checks that no interval holds more vertical arcs than the horizontal arcs reaching into it"""
    reaching = [0] * state.interval_count
    for level in range(state.k):
        for p in state.row_crossings(level):
            reaching[_interval_of_bracket(state, p)] += 1
    holding = [0] * state.interval_count
    for region in state.angle_region:
        if region > 0:
            holding[region - 1] += 1
    return all(h <= r for h, r in zip(holding, reaching))


def _interval_of_bracket(state: ShearedPresentation, position: int) -> int:
    return state.layout[:position + 1].count(OPEN) - 1 if state.layout[position] == OPEN else \
        state.layout[:position + 1].count(CLOSE) - 1


def _shear_simplification(state: ShearedPresentation, params: Tuple[int, ...],
                          protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    """Pushes an exterior vertical arc into the interval next to it"""
    angle, direction = params
    if not 0 <= angle < state.k or direction not in (1, -1) or state.angle_region[angle] >= 0:
        return None
    count = len(state.layout)
    position = state.angle_token[angle]
    neighbour = (position + direction) % count
    if state.layout[neighbour] != (OPEN if direction > 0 else CLOSE):
        return None
    far, near = (state.end_level[angle], state.start_level[angle]) if direction > 0 else \
        (state.start_level[angle], state.end_level[angle])
    if not state.is_exterior(far) or state.is_protected(near, protected):
        return None
    draft = DraftPresentation(state)
    draft.tokens[position], draft.tokens[neighbour] = draft.tokens[neighbour], draft.tokens[position]
    return reduce_interiors(draft.freeze())


def _inverse_horizontal(state: ShearedPresentation, params: Tuple[int, ...],
                        protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    level, after, side = params
    k = state.k
    if not 0 <= level < k or not 0 <= after < k or side not in (1, -1) or not state.is_exterior(level):
        return None
    start, end = state.rows[level]
    if not (after - start) % k < (end - start) % k:
        return None
    draft = DraftPresentation(state)
    label = draft.new_label()
    draft.tokens.insert(draft.tokens.index(after) + 1, label)
    piece = [label, end]
    draft.rows[level][1] = label
    index = level + 1 if side > 0 else level
    draft.rows.insert(index, piece)
    draft.tags.insert(index, TAG_NONE)
    return draft.freeze()


def _inverse_vertical(state: ShearedPresentation, params: Tuple[int, ...],
                      protected: FrozenSet[int]) -> Optional[ShearedPresentation]:
    angle, index, side = params
    k = state.k
    if not 0 <= angle < k or not 0 <= index <= k or side not in (1, -1) or state.angle_region[angle] >= 0:
        return None
    before, after = state.vertical(angle)
    draft = DraftPresentation(state)
    label = draft.new_label()
    at = draft.tokens.index(angle)
    if side > 0:
        draft.tokens.insert(at + 1, label)
        piece = [angle, label]
        draft.rows[after][0] = label
    else:
        draft.tokens.insert(at, label)
        piece = [label, angle]
        draft.rows[before][1] = label
    draft.rows.insert(index, piece)
    draft.tags.insert(index, TAG_NONE)
    return draft.freeze()


_APPLY: Dict[MoveKind, Callable[[ShearedPresentation, Tuple[int, ...], FrozenSet[int]],
                                Optional[ShearedPresentation]]] = {
    MoveKind.HX: _horizontal_exchange,
    MoveKind.VX: _vertical_exchange,
    MoveKind.HS: _horizontal_simplification,
    MoveKind.VS: _vertical_simplification,
    MoveKind.SHX: _shear_exchange,
    MoveKind.SVS: _shear_simplification,
    MoveKind.INVERSE_HS: _inverse_horizontal,
    MoveKind.INVERSE_VS: _inverse_vertical,
}


def _candidates(state: ShearedPresentation, kind: MoveKind) -> Iterable[Tuple[int, ...]]:
    k = state.k
    if kind in (MoveKind.HX, MoveKind.VX):
        return [(i, (i + 1) % k) for i in range(1 if k == 2 else k)]
    if kind == MoveKind.HS:
        return [(level, state.start_level[state.rows[level][1]]) for level in range(k)]
    if kind == MoveKind.VS:
        return [(angle, (angle + 1) % k) for angle in range(k)]
    if kind == MoveKind.SHX:
        return [(level, (level + 1) % k, region) for level in range(k) for region in range(state.interval_count)]
    if kind == MoveKind.SVS:
        return [(angle, direction) for angle in range(k) for direction in (1, -1)]
    raise ValueError(f"{kind.value} is not enumerated")


def successors(state: ShearedPresentation, protected: Iterable[int] = frozenset(),
               kinds: Iterable[MoveKind] = SEARCH_KINDS) -> List[Tuple[MoveRecord, ShearedPresentation]]:
    """Applies every applicable move of the given kinds

    Parameters
    ----------
    state:
        the state to move from
    protected:
        tags of the horizontal arcs that must never be cut or merged away
    kinds:
        the move kinds to try, in order

    Returns
    -------
    successors:
        (move, resulting state) pairs in a deterministic order
    """
    protected = frozenset(protected)
    result = []
    for kind in kinds:
        for params in _candidates(state, kind):
            after = _APPLY[kind](state, params, protected)
            if after is not None:
                result.append((MoveRecord(kind, params), after))
    return result


def enumerate_moves(state: ShearedPresentation, protected: Iterable[int] = frozenset(),
                    kinds: Iterable[MoveKind] = SEARCH_KINDS) -> List[MoveRecord]:
    """Lists the applicable moves, none of them increases the complexity"""
    return [move for move, _ in successors(state, protected, kinds)]


def apply_move(state: ShearedPresentation, move: MoveRecord,
               protected: Iterable[int] = frozenset()) -> ShearedPresentation:
    """Applies one move

    Raises
    ------
    InapplicableMove:
        when the move does not apply to the state
    """
    after = _APPLY[move.kind](state, move.params, frozenset(protected))
    if after is None:
        raise InapplicableMove(f"{move} does not apply")
    return after


def insert_arc(state: ShearedPresentation, move: MoveRecord) -> ShearedPresentation:
    """Stabilizes the state by one, splitting a horizontal or a vertical arc

    Raises
    ------
    InvalidInsertionSite:
        when the move is not a stabilization or does not fit the state
    """
    if move.kind not in (MoveKind.INVERSE_HS, MoveKind.INVERSE_VS):
        raise InvalidInsertionSite(f"{move.kind.value} is not a stabilization")
    after = _APPLY[move.kind](state, move.params, frozenset())
    if after is None:
        raise InvalidInsertionSite(f"{move} does not fit a state of complexity {state.k}")
    return after


def complexity_delta(before: ShearedPresentation, after: ShearedPresentation) -> int:
    """Gets the change of 2C"""
    return doubled_complexity(after) - doubled_complexity(before)


def reduce_interiors(state: ShearedPresentation) -> ShearedPresentation:
    """Simplifies inside the intervals until nothing applies

    Horizontal arcs meeting at a vertical arc inside an interval are
    merged, and a horizontal arc joining two neighbouring vertical arcs
    of one interval is removed. Neither changes the complexity.
    """
    if not state.interval_count:
        return state
    draft = DraftPresentation(state)
    changed = True
    while changed:
        changed = False
        for label in draft.interior_labels():
            if draft.k > 2 and draft.merge_at(label):
                changed = True
                break
        if changed:
            continue
        for interval in range(state.interval_count):
            labels = draft.interior_labels(interval)
            for first, second in zip(labels, labels[1:]):
                if draft.k > 2 and _remove_short_arc(draft, first, second):
                    changed = True
                    break
            if changed:
                break
    return draft.freeze()


def _insertion_sites(state: ShearedPresentation) -> List[MoveRecord]:
    k = state.k
    sites = []
    for level, (start, end) in enumerate(state.rows):
        if not state.is_exterior(level):
            continue
        for offset in range((end - start) % k):
            for side in (1, -1):
                sites.append(MoveRecord(MoveKind.INVERSE_HS, (level, (start + offset) % k, side)))
    for angle in range(k):
        if state.angle_region[angle] >= 0:
            continue
        for index in range(k + 1):
            for side in (1, -1):
                sites.append(MoveRecord(MoveKind.INVERSE_VS, (angle, index, side)))
    return sites


def scramble(state: ShearedPresentation, seed: int, insertions: int = 10,
             exchanges: int = 20) -> Tuple[ShearedPresentation, List[MoveRecord]]:
    """Hides a state behind random stabilizations and exchange moves

    The stabilizations and the exchanges are interleaved in an order
    drawn from the seed, so equal seeds give equal results.

    Parameters
    ----------
    state:
        the state to scramble
    seed:
        the seed of the random choices
    insertions:
        the number of InverseHS / InverseVS moves
    exchanges:
        the number of HX / VX moves tried, a state without exchange
        moves skips its turn

    Returns
    -------
    scrambled:
        the scrambled state and the moves applied to reach it
    """
    rng = random.Random(seed)
    steps = [True] * insertions + [False] * exchanges
    rng.shuffle(steps)
    moves = []
    for inserting in steps:
        if inserting:
            kind = rng.choice((MoveKind.INVERSE_HS, MoveKind.INVERSE_VS))
            sites = [site for site in _insertion_sites(state) if site.kind == kind]
            if not sites:
                continue
            move = rng.choice(sites)
            state = insert_arc(state, move)
        else:
            options = successors(state, frozenset(), EXCHANGE_KINDS)
            if not options:
                continue
            move, state = rng.choice(options)
        moves.append(move)
    logger.debug("scrambled with %d moves to complexity %d", len(moves), state.k)
    return state, moves
