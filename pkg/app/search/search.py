# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import heapq
import logging
import os
import time
from dataclasses import dataclass, field
from itertools import count
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from app.arcs.arcpres import ArcPresentation, ResourceLimitExceeded, canonical_form, rotate
from app.arcs.transit import arc_to_braid
from app.braid.word import FORM_KINDS, BraidWord, FormDecomposition, detect_form
from app.moves.moves import (EXCHANGE_KINDS, SEARCH_KINDS, MoveRecord, apply_move, successors)
from app.moves.sheared import ShearedPresentation, doubled_complexity, format_sheared, unshear

logger = logging.getLogger(__name__)

GOAL_NONE = 'none'
FOUND = 'found'
EXHAUSTED = 'exhausted'
LIMIT = 'limit'

# the state cap can be raised from the environment for long runs
_max_states_variable = 'BRAIDTOOL_MAX_STATES'
_builtin_max_states = 200000
_default_max_millis = 60000


class InvalidConstraints(Exception):
    """The search constraints do not fit the initial state"""
    pass


def default_max_states() -> int:
    """Gets the state cap of a search, BRAIDTOOL_MAX_STATES overrides the built-in one

    Raises
    ------
    InvalidConstraints:
        when the environment variable does not hold an integer
    """
    value = os.environ.get(_max_states_variable)
    if value is None:
        return _builtin_max_states
    try:
        return int(value)
    except ValueError:
        raise InvalidConstraints(f"{_max_states_variable} must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class SearchConstraints:
    """Bounds and goal of one monotonic search

    protected lists the tags of the horizontal arcs no move may cut or
    merge away. goal is 'none' or a form kind, the search then stops at
    the first state whose extracted braid word has that form. max_states
    left at None takes the value of default_max_states.
    """
    protected: FrozenSet[int] = frozenset()
    goal: str = GOAL_NONE
    max_states: Optional[int] = None
    max_millis: int = _default_max_millis

    def __post_init__(self):
        if self.goal != GOAL_NONE and self.goal not in FORM_KINDS:
            raise InvalidConstraints(f"unknown goal {self.goal}")
        if self.max_states is None:
            object.__setattr__(self, 'max_states', default_max_states())
        if self.max_states < 1 or self.max_millis < 1:
            raise InvalidConstraints("the resource bounds must be positive")


@dataclass(frozen=True)
class Witness:
    """A braid word read off a state together with its form decomposition"""
    word: BraidWord
    decomposition: FormDecomposition
    level_shift: int


@dataclass(frozen=True)
class TraceStep:
    move: MoveRecord
    doubled_complexity: int


@dataclass(frozen=True)
class Trace:
    """A replayable sequence of moves with the complexity after each"""
    initial: ShearedPresentation
    steps: Tuple[TraceStep, ...]
    final: ShearedPresentation

    def is_monotone(self) -> bool:
        values = [doubled_complexity(self.initial)] + [step.doubled_complexity for step in self.steps]
        return all(after <= before for before, after in zip(values, values[1:]))

    def to_dict(self, verdict: str) -> dict:
        """Gets the JSON form, each move carries the doubled complexity after it as c2

        Parameters
        ----------
        verdict:
            the outcome of the search the trace comes from
        """
        return {
            'initial': format_sheared(self.initial),
            'moves': [dict(step.move.to_dict(), c2=step.doubled_complexity) for step in self.steps],
            'final': format_sheared(self.final),
            'verdict': verdict,
        }


@dataclass
class SearchResult:
    """The outcome of a search

    best is the first state reached at the lowest complexity seen and
    best_trace leads to it. keys holds the canonical keys of every
    visited state.
    """
    outcome: str
    trace: Optional[Trace]
    best: ShearedPresentation
    visited: int
    keys: Set[bytes] = field(default_factory=set)
    witness: Optional[Witness] = None
    best_trace: Optional[Trace] = None


def replay(trace: Trace, protected: FrozenSet[int] = frozenset()) -> ShearedPresentation:
    """Applies the moves of a trace to its initial state"""
    state = trace.initial
    for step in trace.steps:
        state = apply_move(state, step.move, protected)
    return state


def extract_witness(state: ShearedPresentation, kind: str) -> Optional[Witness]:
    """Reads the braid word of the state in every level rotation and looks for the form

    Parameters
    ----------
    state:
        a sheared or plain state
    kind:
        the form kind

    Returns
    -------
    witness:
        the first level rotation whose braid word has the form, or None
    """
    presentation = unshear(state)
    for level_shift in range(presentation.k):
        word = arc_to_braid(rotate(presentation, level_shift))
        decomposition = detect_form(word, kind)
        if decomposition is not None:
            return Witness(word, decomposition, level_shift)
    return None


def _trace_to(key: bytes, parents: Dict[bytes, Tuple[Optional[bytes], Optional[MoveRecord]]],
              states: Dict[bytes, ShearedPresentation]) -> Trace:
    steps = []
    current = key
    while parents[current][0] is not None:
        parent, move = parents[current]
        steps.append(TraceStep(move, doubled_complexity(states[current])))
        current = parent
    steps.reverse()
    return Trace(states[current], tuple(steps), states[key])


def simplify_monotonic(initial: ShearedPresentation, constraints: SearchConstraints) -> SearchResult:
    """Explores the states reachable without raising the complexity

    States are expanded lowest complexity first, ties broken by
    discovery order, and every state is visited once up to rotation.
    The goal is checked when a state is discovered.

    Parameters
    ----------
    initial:
        the state to start from
    constraints:
        goal, protected tags and resource bounds

    Returns
    -------
    result:
        'found' with the trace to the goal, 'exhausted' when the
        reachable space holds no goal, or 'limit' when a bound stopped
        the search
    """
    missing = set(constraints.protected) - set(initial.tags)
    if missing:
        raise InvalidConstraints(f"protected tags {sorted(missing)} are not in the initial state")
    deadline = time.monotonic() + constraints.max_millis / 1000
    key = initial.key()
    states: Dict[bytes, ShearedPresentation] = {key: initial}
    parents: Dict[bytes, Tuple[Optional[bytes], Optional[MoveRecord]]] = {key: (None, None)}
    best, best_key = initial, key
    best_value = doubled_complexity(initial)

    def result(outcome: str, at: Optional[bytes] = None, witness: Optional[Witness] = None) -> SearchResult:
        trace = _trace_to(at, parents, states) if at is not None else None
        return SearchResult(outcome, trace, best, len(states), set(states), witness,
                            _trace_to(best_key, parents, states))

    if constraints.goal != GOAL_NONE:
        witness = extract_witness(initial, constraints.goal)
        if witness is not None:
            return result(FOUND, key, witness)
    order = count()
    frontier = [(best_value, next(order), key)]
    while frontier:
        if time.monotonic() > deadline:
            logger.info("search stopped by the time bound after %d states", len(states))
            return result(LIMIT)
        value, _, current = heapq.heappop(frontier)
        for move, after in successors(states[current], constraints.protected, SEARCH_KINDS):
            after_key = after.key()
            if after_key in states:
                continue
            states[after_key] = after
            parents[after_key] = (current, move)
            after_value = doubled_complexity(after)
            if after_value < best_value:
                best, best_key, best_value = after, after_key, after_value
            if constraints.goal != GOAL_NONE:
                witness = extract_witness(after, constraints.goal)
                if witness is not None:
                    logger.info("goal %s reached after %d states", constraints.goal, len(states))
                    return result(FOUND, after_key, witness)
            if len(states) > constraints.max_states:
                logger.info("search stopped by the state bound %d", constraints.max_states)
                return result(LIMIT)
            heapq.heappush(frontier, (after_value, next(order), after_key))
    logger.info("search exhausted %d states, lowest 2C = %d", len(states), best_value)
    return result(EXHAUSTED)


def exchange_orbit(presentation: ArcPresentation, max_states: Optional[int] = None) -> Set[bytes]:
    """Gets the canonical keys of everything reachable by exchange moves

    Raises
    ------
    ResourceLimitExceeded:
        when the orbit grows past max_states
    """
    if max_states is None:
        max_states = default_max_states()
    start = ShearedPresentation.plain(presentation)
    seen = {canonical_form(presentation)}
    queue: List[ShearedPresentation] = [start]
    while queue:
        state = queue.pop()
        for _, after in successors(state, frozenset(), EXCHANGE_KINDS):
            key = canonical_form(after.to_presentation())
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_states:
                raise ResourceLimitExceeded(f"the exchange orbit outgrew {max_states} states")
            queue.append(after)
    return seen
