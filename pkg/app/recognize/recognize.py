# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from app.arcs.arcpres import ArcPresentation, components, covers, rotate
from app.arcs.transit import arc_to_braid, braid_to_arc
from app.braid.word import DESTAB, EXCHANGE, FLYPE, FORM_KINDS, BraidWord, detect_form
from app.moves.sheared import (CLOSE, OPEN, TAG_EDGE, TAG_NAMES, TAG_RESERVED_1, TAG_RESERVED_2,
                               IntervalSpec, ShearedPresentation, format_sheared, shear, unshear)
from app.search.search import (EXHAUSTED, FOUND, LIMIT, SearchConstraints, SearchResult, Trace, Witness,
                               extract_witness, replay,
                               simplify_monotonic)
from app.task import search_choice

logger = logging.getLogger(__name__)

YES = 'yes'
NO = 'no'
INCONCLUSIVE = 'inconclusive'

# the number of interval placements tried in the second stage
_default_max_choices = 5000
_interval_counts = {DESTAB: 1, EXCHANGE: 2, FLYPE: 3}
_reserved_tags = (TAG_RESERVED_1, TAG_RESERVED_2)


class RecognizerError(Exception):
    """The braid or the form kind cannot be handled by the recognizer"""
    pass


@dataclass(frozen=True)
class RecognizerChoice:
    """One placement of intervals, edge path and reserved arcs

    edge_path lists the levels of consecutive horizontal arcs of one
    component, its first arc is protected during the search. reserved
    lists the levels of the arcs that must keep passing the intervals.
    All levels refer to the presentation the choice was made on.
    """
    intervals: IntervalSpec
    edge_path: Tuple[int, ...]
    reserved: Tuple[int, ...] = ()

    def tags(self) -> Dict[int, int]:
        tags = {level: tag for level, tag in zip(self.reserved, _reserved_tags)}
        tags[self.edge_path[0]] = TAG_EDGE
        return tags

    def to_dict(self) -> dict:
        return {'intervals': list(self.intervals.gaps), 'edge_path': list(self.edge_path),
                'reserved': list(self.reserved)}


@dataclass(frozen=True)
class Certificate:
    """Evidence for a positive answer

    The trace replays from its initial state to its final state, and the
    witness word read off the final state rotated by the witness level
    shift has the requested form. choice is None when no intervals were
    needed.
    """
    kind: str
    choice: Optional[RecognizerChoice]
    trace: Trace
    witness: Witness
    obvious: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'choice': self.choice.to_dict() if self.choice else None,
            'trace': self.trace.to_dict(FOUND),
            'witness': {'word': [letter.to_int() for letter in self.witness.word.letters],
                        'n': self.witness.word.n,
                        'level_shift': self.witness.level_shift,
                        'decomposition': self.witness.decomposition.to_dict()},
            'obvious': list(self.obvious) if self.obvious else None,
        }


@dataclass(frozen=True)
class ChoiceReport:
    choice: Optional[RecognizerChoice]
    outcome: str
    visited: int


@dataclass
class RecognitionResult:
    """The verdict with one report per search run

    complete is False when the interval placements were cut off at the
    choice cap, the reports then cover only part of the choice set.
    """
    verdict: str
    certificate: Optional[Certificate] = None
    reports: List[ChoiceReport] = field(default_factory=list)
    complete: bool = True

    def to_dict(self) -> dict:
        return {
            'verdict': self.verdict,
            'certificate': self.certificate.to_dict() if self.certificate else None,
            'choices': [{'choice': report.choice.to_dict() if report.choice else None,
                         'outcome': report.outcome, 'visited': report.visited} for report in self.reports],
            'complete': self.complete,
        }


def verify_certificate(certificate: Certificate) -> bool:
    """Checks a certificate independently of the search that produced it"""
    protected = frozenset(tag for tag in certificate.trace.initial.tags if tag)
    final = replay(certificate.trace, protected)
    if final.key() != certificate.trace.final.key() or not certificate.trace.is_monotone():
        return False
    word = arc_to_braid(rotate(unshear(final), certificate.witness.level_shift))
    if word != certificate.witness.word:
        return False
    return detect_form(word, certificate.kind) == certificate.witness.decomposition


def _next_level(presentation: ArcPresentation, level: int) -> int:
    return presentation.start_level[presentation.rows[level][1]]


def _edge_path(presentation: ArcPresentation, first: int, gaps: Tuple[int, ...],
               avoid: Tuple[int, ...]) -> Optional[Tuple[int, ...]]:
    """Follows the component from first to the next arc passing one of the gaps"""
    k = presentation.k
    path = [first]
    level = _next_level(presentation, first)
    while not any(covers(presentation.rows[level], gap, k) for gap in gaps):
        path.append(level)
        level = _next_level(presentation, level)
    if level == first or level in avoid or any(step in avoid for step in path):
        return None
    path.append(level)
    return tuple(path)


def enumerate_choices(presentation: ArcPresentation, kind: str,
                      max_choices: int = _default_max_choices) -> Tuple[List[RecognizerChoice], bool]:
    """Lists the interval placements for the second stage, one per rotation class

    Parameters
    ----------
    presentation:
        the plain presentation the intervals are placed into
    kind:
        the form kind, fixing the number of intervals
    max_choices:
        the number of choices kept

    Returns
    -------
    choices:
        choices in a deterministic order, distinct up to rotation of
        the tagged sheared state
    complete:
        False when further distinct choices were left out by max_choices
    """
    k = presentation.k
    rows = presentation.rows
    winding = {}
    for component in components(presentation):
        for level in component:
            winding[level] = sum(1 for member in component if covers(rows[member], k - 1, k))

    def passes(level: int, gaps: Tuple[int, ...]) -> int:
        return sum(1 for gap in gaps if covers(rows[level], gap, k))

    candidates = []
    for gaps in combinations(range(k), _interval_counts[kind]):
        if kind == DESTAB:
            for first in range(k):
                if passes(first, gaps) and winding[first] >= 2:
                    path = _edge_path(presentation, first, gaps, ())
                    if path:
                        candidates.append(RecognizerChoice(IntervalSpec(gaps), path))
        elif kind == EXCHANGE:
            for reserved in (level for level in range(k) if passes(level, gaps) == 2):
                for first in range(k):
                    if first != reserved and passes(first, gaps):
                        path = _edge_path(presentation, first, gaps, (reserved,))
                        if path:
                            candidates.append(RecognizerChoice(IntervalSpec(gaps), path, (reserved,)))
        else:
            spanning = [level for level in range(k) if passes(level, gaps) >= 2]
            ends = (gaps[2], gaps[0])
            for pair in combinations(spanning, 2):
                for first in range(k):
                    if first not in pair and passes(first, ends):
                        path = _edge_path(presentation, first, gaps, pair)
                        if path:
                            candidates.append(RecognizerChoice(IntervalSpec(gaps), path, pair))
    choices = []
    seen = set()
    for choice in candidates:
        key = shear(presentation, choice.intervals, choice.tags()).key()
        if key in seen:
            continue
        if len(choices) >= max_choices:
            logger.warning("keeping the first %d interval placements only", max_choices)
            return choices, False
        seen.add(key)
        choices.append(choice)
    return choices, True


def _interval_brackets(state: ShearedPresentation, interval: int) -> Tuple[int, int]:
    opens = [p for p, token in enumerate(state.layout) if token == OPEN]
    closes = [p for p, token in enumerate(state.layout) if token == CLOSE]
    return opens[interval], closes[interval]


def _spans(state: ShearedPresentation, level: int, interval: int) -> bool:
    return set(_interval_brackets(state, interval)) <= set(state.row_crossings(level))


def _meets(state: ShearedPresentation, level: int, interval: int) -> bool:
    if set(_interval_brackets(state, interval)) & set(state.row_crossings(level)):
        return True
    return any(state.angle_region[angle] == interval + 1 for angle in state.rows[level])


def _tagged(state: ShearedPresentation, tag: int) -> Optional[int]:
    return next((level for level, value in enumerate(state.tags) if value == tag), None)


def detect_obvious(state: ShearedPresentation, kind: str) -> Optional[Tuple[int, ...]]:
    """Finds the configuration in which the move can be seen directly

    -- destab: two horizontal arcs on adjacent levels joined by a
       vertical arc, both meeting the first interval
    -- exchange: the edge arc and a reserved arc both passing over the
       first two intervals
    -- flype: the edge arc passing the last and the first interval, and
       two reserved arcs each passing two intervals

    Returns
    -------
    levels:
        the levels of the arcs forming the configuration, or None
    """
    k = state.k
    intervals = state.interval_count
    if intervals < _interval_counts[kind]:
        return None
    if kind == DESTAB:
        for level in range(k):
            other = (level + 1) % k
            joined = state.rows[level][1] == state.rows[other][0] or state.rows[other][1] == state.rows[level][0]
            if joined and _meets(state, level, 0) and _meets(state, other, 0):
                return level, other
        return None
    edge = _tagged(state, TAG_EDGE)
    edges = [edge] if edge is not None else list(range(k))
    if kind == EXCHANGE:
        reserved = _tagged(state, TAG_RESERVED_1)
        candidates = [reserved] if reserved is not None else list(range(k))
        for first in edges:
            for second in candidates:
                if first != second and all(_spans(state, level, t) for level in (first, second) for t in (0, 1)):
                    return first, second
        return None
    pairs = [(_tagged(state, TAG_RESERVED_1), _tagged(state, TAG_RESERVED_2))]
    if None in pairs[0]:
        pairs = list(combinations(range(k), 2))
    for first in edges:
        if not (_spans(state, first, 2) and _spans(state, first, 0)):
            continue
        for one, other in pairs:
            if first in (one, other):
                continue
            if all(sum(1 for t in range(3) if _spans(state, level, t)) >= 2 for level in (one, other)):
                return first, one, other
    return None


def recognize(word: BraidWord, kind: str, max_states: Optional[int] = None,
              max_millis: Optional[int] = None, threads: int = 1,
              max_choices: int = _default_max_choices, progress: bool = False) -> RecognitionResult:
    """Decides whether the closed braid admits the move of kind

    The word is first checked for the form directly, then its arc
    presentation is simplified without intervals, and finally every
    placement of intervals on the simplest presentation found is
    searched. 'no' is only answered when every placement was searched
    and every search exhausted its state space.

    Parameters
    ----------
    word:
        the braid word, on at least 2 strands
    kind:
        one of 'destab', 'exchange', 'flype'
    max_states, max_millis:
        the bounds of every single search
    threads:
        the number of worker processes for the second stage
    max_choices:
        the number of interval placements tried
    progress:
        shows a progress bar over the placements

    Returns
    -------
    result:
        the verdict, a certificate when it is 'yes', and one report per
        search run
    """
    if kind not in FORM_KINDS:
        raise RecognizerError(f"unknown form kind {kind}")
    if word.n < 2:
        raise RecognizerError(f"the braid index must be at least 2, got {word.n}")
    start = ShearedPresentation.plain(braid_to_arc(word))
    if detect_form(word, kind) is not None:
        witness = extract_witness(start, kind)
        if witness is not None:
            certificate = Certificate(kind, None, Trace(start, (), start), witness)
            return RecognitionResult(YES, certificate)

    reports = []
    plain = simplify_monotonic(start, _constraints(kind, frozenset(), max_states, max_millis))
    reports.append(ChoiceReport(None, plain.outcome, plain.visited))
    if plain.outcome == FOUND:
        return RecognitionResult(YES, Certificate(kind, None, plain.trace, plain.witness), reports)

    presentation = unshear(plain.best)
    choices, complete = enumerate_choices(presentation, kind, max_choices)
    logger.info("second stage: %d placements on complexity %d", len(choices), presentation.k)
    jobs = []
    for choice in choices:
        tags = choice.tags()
        jobs.append((shear(presentation, choice.intervals, tags),
                     _constraints(kind, frozenset(tags.values()), max_states, max_millis)))
    results = _run_searches(jobs, threads, progress)
    for choice, result in zip(choices, results):
        reports.append(ChoiceReport(choice, result.outcome, result.visited))
        if result.outcome == FOUND:
            obvious = detect_obvious(result.trace.final, kind)
            certificate = Certificate(kind, choice, result.trace, result.witness, obvious)
            return RecognitionResult(YES, certificate, reports, complete)
    limited = any(report.outcome == LIMIT for report in reports[1:])
    verdict = INCONCLUSIVE if limited or not complete else NO
    return RecognitionResult(verdict, None, reports, complete)


def _constraints(kind: str, protected: frozenset, max_states: Optional[int],
                 max_millis: Optional[int]) -> SearchConstraints:
    bounds = {}
    if max_states is not None:
        bounds["max_states"] = max_states
    if max_millis is not None:
        bounds["max_millis"] = max_millis
    return SearchConstraints(protected=protected, goal=kind, **bounds)


def _run_searches(jobs: List[Tuple[ShearedPresentation, SearchConstraints]], threads: int,
                  progress: bool) -> List[SearchResult]:
    """Runs the searches in order, sequentially stopping at the first success"""
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            return list(tqdm(executor.map(search_choice, jobs), total=len(jobs), disable=not progress))
    results = []
    for job in tqdm(jobs, disable=not progress):
        results.append(search_choice(job))
        if results[-1].outcome == FOUND:
            break
    return results


def describe(result: RecognitionResult) -> str:
    """Summarizes a result for the terminal"""
    lines = [f"verdict: {result.verdict}"]
    certificate = result.certificate
    if certificate is not None:
        if certificate.choice is not None:
            gaps = " ".join(str(g) for g in certificate.choice.intervals.gaps)
            lines.append(f"intervals after angles: {gaps}")
            tagged = ", ".join(f"{TAG_NAMES[tag]} at level {level}"
                               for level, tag in sorted(certificate.choice.tags().items()))
            lines.append(f"tagged arcs: {tagged}")
        moves = " ".join(str(step.move) for step in certificate.trace.steps) or "none"
        lines.append(f"moves: {moves}")
        lines.append(f"witness: {certificate.witness.word}")
        if certificate.obvious is not None:
            levels = " ".join(str(v) for v in certificate.obvious)
            lines.append(f"configuration at levels: {levels}")
        lines.append("final state:")
        lines.append(format_sheared(certificate.trace.final).rstrip())
    searched = sum(1 for report in result.reports if report.outcome in (FOUND, EXHAUSTED, LIMIT))
    lines.append(f"searches run: {searched}")
    if not result.complete:
        lines.append("interval placements cut off by the placement cap")
    return "\n".join(lines)
