"""Conversions between closed braids and arc presentations

braid_to_arc builds the presentation by moving one strand at a time
to a fresh level, so that reading the vertical arcs back with
arc_to_braid gives the very same word.
"""
# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import bisect
import logging
from fractions import Fraction
from typing import List, Optional, Set, Tuple

from app.arcs.arcpres import ArcPresentation, covers, winding_number
from app.braid.word import BraidWord, Letter

logger = logging.getLogger(__name__)


def _fresh_level(low: Optional[Fraction], high: Optional[Fraction], used: Set[Fraction]) -> Fraction:
    """Picks an unused level strictly between low and high

    A missing bound means the level goes past every used level on that side.
    """
    if high is None:
        return max(used) + 1
    if low is None:
        return min(used) - 1
    candidate = (low + high) / 2
    while candidate in used:
        high = candidate
        candidate = (low + high) / 2
    return candidate


def braid_to_arc(word: BraidWord) -> ArcPresentation:
    """Builds an arc presentation of the closure of a braid word

    Every letter becomes one vertical arc moving a strand past its
    neighbour. Strands that never left their starting level get a short
    detour, then every strand returns to its starting level. The result
    has winding number n and complexity at most 2n + len(word).

    Parameters
    ----------
    word:
        the braid word

    Returns
    -------
    presentation:
        an arc presentation of the same link
    """
    n = word.n
    home = [Fraction(j) for j in range(n)]
    used = set(home)
    current = list(home)
    moves: List[Tuple[Fraction, Fraction]] = []

    def move(position: int, target: Fraction):
        moves.append((current[position], target))
        used.add(target)
        current[position] = target

    for letter in word.letters:
        i = letter.index - 1
        if letter.sign > 0:
            # the lower strand climbs just above its upper neighbour
            ceiling = current[i + 2] if i + 2 < n else None
            lower, upper = current[i], current[i + 1]
            target = _fresh_level(upper, ceiling, used)
            moves.append((lower, target))
            used.add(target)
            current[i], current[i + 1] = upper, target
        else:
            floor = current[i - 1] if i >= 1 else None
            lower, upper = current[i], current[i + 1]
            target = _fresh_level(floor, lower, used)
            moves.append((upper, target))
            used.add(target)
            current[i], current[i + 1] = target, lower
    for j in range(n):
        if current[j] == home[j]:
            ceiling = current[j + 1] if j + 1 < n else None
            move(j, _fresh_level(current[j], ceiling, used))
    down = [j for j in range(n) if current[j] > home[j]]
    up = [j for j in reversed(range(n)) if current[j] < home[j]]
    for j in down + up:
        move(j, home[j])

    ranks = {level: rank for rank, level in enumerate(sorted(used))}
    rows = [[0, 0] for _ in ranks]
    for angle, (source, target) in enumerate(moves):
        rows[ranks[source]][1] = angle
        rows[ranks[target]][0] = angle
    presentation = ArcPresentation.checked(tuple(rows))
    logger.debug("braid of length %d on %d strands gives complexity %d", len(word), n, presentation.k)
    return presentation


def arc_to_braid(presentation: ArcPresentation) -> BraidWord:
    """Reads a braid word off a presentation

    The levels are read linearly and the strands are the horizontal arcs
    passing the gap after angle k - 1. Sweeping the angles in increasing
    order, each vertical arc moves one strand from rank p to rank q and
    contributes σp...σ(q-1) when moving up or σ(p-1)^-1...σq^-1 when
    moving down.

    Parameters
    ----------
    presentation:
        a valid presentation

    Returns
    -------
    word:
        a braid word on winding_number strands with the same closure
    """
    k = presentation.k
    n = winding_number(presentation)
    present = sorted(level for level in range(k) if covers(presentation.rows[level], k - 1, k))
    letters = []
    for angle in range(k):
        source, target = presentation.vertical(angle)
        p = present.index(source)
        present.remove(source)
        bisect.insort(present, target)
        q = present.index(target)
        if p < q:
            letters.extend(Letter(i + 1, 1) for i in range(p, q))
        elif p > q:
            letters.extend(Letter(i, -1) for i in range(p, q, -1))
    return BraidWord(n, tuple(letters))
