# This import fixes the problem that specifying the type of an object
# in its module definition raises error
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

logger = logging.getLogger(__name__)

# the leading keyword of the braid text format
_braid_keyword = 'braid'
# the token separating the braid index from the letters
_separator = '/'
# the comment marker of the text formats
_comment_marker = '#'
# the default length cap for words reached by inserting cancelling pairs
_default_max_word_length = 12
# the default number of words explored by the bounded isotopy oracle
_default_max_words = 20000

DESTAB = 'destab'
EXCHANGE = 'exchange'
FLYPE = 'flype'
FORM_KINDS = (DESTAB, EXCHANGE, FLYPE)


class InvalidBraidWord(Exception):
    """The braid word violates its braid index or uses a malformed letter"""
    pass


class BraidParseError(Exception):
    """The braid text could not be parsed

    The line number of the offending line is kept so that callers
    can point the user at it.
    """

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True, order=True)
class Letter:
    """A single Artin generator σ_index raised to the power sign"""
    index: int
    sign: int

    def inverse(self) -> Letter:
        return Letter(self.index, -self.sign)

    def to_int(self) -> int:
        """Gets the signed integer encoding, e.g. -2 for σ2^-1"""
        return self.index * self.sign

    @classmethod
    def from_int(cls, value: int) -> Letter:
        if value == 0:
            raise InvalidBraidWord("0 does not encode a generator")
        return cls(abs(value), 1 if value > 0 else -1)

    def __str__(self):
        return str(self.to_int())


@dataclass(frozen=True)
class BraidWord:
    """A braid word on n strands, read as a cyclic word

    Two braid words are the same value when their braid index and
    letter sequence agree. Use canonical() to compare words up to
    cyclic rotation.
    """
    n: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidBraidWord(f"the braid index must be at least 1, got {self.n}")
        for position, letter in enumerate(self.letters):
            if letter.sign not in (1, -1):
                raise InvalidBraidWord(f"letter {position} has sign {letter.sign}")
            if not 1 <= letter.index <= self.n - 1:
                raise InvalidBraidWord(f"letter {position} uses σ{letter.index} on {self.n} strand(s)")

    @classmethod
    def from_ints(cls, n: int, values: Iterable[int]) -> BraidWord:
        """Builds a braid word from signed generator indices

        Parameters
        ----------
        n:
            the braid index
        values:
            signed indices, +i for σi and -i for σi^-1

        Returns
        -------
        word:
            the braid word
        """
        return cls(n, tuple(Letter.from_int(v) for v in values))

    def to_ints(self) -> Tuple[int, ...]:
        return tuple(letter.to_int() for letter in self.letters)

    def rotate(self, shift: int) -> BraidWord:
        """Cyclically rotates the word so that it starts at letter shift"""
        if not self.letters:
            return self
        shift %= len(self.letters)
        return BraidWord(self.n, self.letters[shift:] + self.letters[:shift])

    def canonical(self) -> BraidWord:
        """Gets the lexicographically smallest rotation of the word"""
        if not self.letters:
            return self
        return min((self.rotate(r) for r in range(len(self.letters))), key=BraidWord.to_ints)

    def inverse(self) -> BraidWord:
        return BraidWord(self.n, tuple(letter.inverse() for letter in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_braid_word(self)


@dataclass(frozen=True)
class FormDecomposition:
    """Witness that a braid word has one of the syntactic forms

    The rotated word letters[rotation:] + letters[:rotation] is the
    concatenation of parts, in order:
    -- destab: (W, (σ_{n-1}^±1,))
    -- exchange: (W, U)
    -- flype: (W1, σ_{n-1}^power, W2, (σ_{n-1}^±1,))
    """
    kind: str
    rotation: int
    parts: Tuple[Tuple[Letter, ...], ...]
    power: int = 0

    def reassemble(self) -> Tuple[Letter, ...]:
        return tuple(letter for part in self.parts for letter in part)

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'rotation': self.rotation,
            'parts': [[letter.to_int() for letter in part] for part in self.parts],
            'power': self.power,
        }


def parse_braid_words(text: str) -> List[BraidWord]:
    """Parses every braid word in a text

    Each non-blank line holds one word written as
    `braid <n> / <t1> <t2> ...` where ti = +i for σi and -i for σi^-1.
    Text after # is a comment.

    Parameters
    ----------
    text:
        the text to parse

    Returns
    -------
    words:
        the braid words, in the order they appear
    """
    words = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(_comment_marker, 1)[0].strip()
        if line:
            words.append(_parse_line(line, line_number))
    return words


def parse_braid_word(text: str) -> BraidWord:
    """Parses a text holding exactly one braid word"""
    words = parse_braid_words(text)
    if len(words) != 1:
        raise BraidParseError(f"expected exactly one braid word, found {len(words)}", 1)
    return words[0]


def _parse_line(line: str, line_number: int) -> BraidWord:
    tokens = line.split()
    if len(tokens) < 3 or tokens[0] != _braid_keyword or tokens[2] != _separator:
        raise BraidParseError("expected 'braid <n> / <letters>'", line_number)
    try:
        n = int(tokens[1])
        values = [int(token) for token in tokens[3:]]
    except ValueError:
        raise BraidParseError("malformed integer token", line_number) from None
    if n < 1:
        raise BraidParseError("the braid index must be at least 1", line_number)
    for value in values:
        if value == 0 or abs(value) >= n:
            raise BraidParseError(f"letter {value} is not a generator of B{n}", line_number)
    return BraidWord.from_ints(n, values)


def format_braid_word(word: BraidWord) -> str:
    """Formats a braid word in the text format, e.g. 'braid 3 / 1 -2'"""
    text = f"{_braid_keyword} {word.n} {_separator}"
    if word.letters:
        text += " " + " ".join(str(letter) for letter in word.letters)
    return text


def permutation(word: BraidWord) -> Tuple[int, ...]:
    """Gets the permutation induced by the word on strand positions

    Returns
    -------
    permutation:
        entry s is the final position of the strand starting at position s
    """
    strand_at = np.arange(word.n)
    for letter in word.letters:
        i = letter.index - 1
        strand_at[[i, i + 1]] = strand_at[[i + 1, i]]
    image = np.empty(word.n, dtype=int)
    image[strand_at] = np.arange(word.n)
    return tuple(int(v) for v in image)


def cycle_type(perm: Tuple[int, ...]) -> Tuple[int, ...]:
    """Gets the sorted cycle lengths of a permutation"""
    seen = [False] * len(perm)
    lengths = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        current = start
        while not seen[current]:
            seen[current] = True
            current = perm[current]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


def component_count(word: BraidWord) -> int:
    """Gets the number of components of the closure of the word"""
    return len(cycle_type(permutation(word)))


def exponent_sum(word: BraidWord) -> int:
    return sum(letter.sign for letter in word.letters)


def detect_form(word: BraidWord, kind: str) -> Optional[FormDecomposition]:
    """Detects whether a rotation of the word has the syntactic form of kind

    Parameters
    ----------
    word:
        the braid word
    kind:
        one of 'destab', 'exchange', 'flype'

    Returns
    -------
    decomposition:
        the decomposition for the smallest rotation having the form,
        or None if there is none
    """
    if kind not in FORM_KINDS:
        raise ValueError(f"unknown form kind {kind}")
    if word.n < 2:
        return None
    if kind == DESTAB:
        return _detect_destab(word)
    if kind == EXCHANGE:
        return _detect_exchange(word)
    return _detect_flype(word)


def _rotated(letters: Tuple[Letter, ...], rotation: int) -> Tuple[Letter, ...]:
    return letters[rotation:] + letters[:rotation]


def _detect_destab(word: BraidWord) -> Optional[FormDecomposition]:
    top = word.n - 1
    positions = [p for p, letter in enumerate(word.letters) if letter.index == top]
    if len(positions) != 1:
        return None
    rotation = (positions[0] + 1) % len(word.letters)
    rotated = _rotated(word.letters, rotation)
    return FormDecomposition(DESTAB, rotation, (rotated[:-1], rotated[-1:]))


def _detect_exchange(word: BraidWord) -> Optional[FormDecomposition]:
    n = word.n
    if n == 2:
        # W runs over no generator at all, so U takes the whole word
        return FormDecomposition(EXCHANGE, 0, ((), word.letters))
    length = len(word.letters)
    for rotation in range(max(length, 1)):
        rotated = _rotated(word.letters, rotation)
        split = next((p for p, letter in enumerate(rotated) if letter.index == n - 1), length)
        if all(letter.index <= n - 2 for letter in rotated[:split]) and \
                all(letter.index >= 2 for letter in rotated[split:]):
            return FormDecomposition(EXCHANGE, rotation, (rotated[:split], rotated[split:]))
    return None


def _syllables(letters: Tuple[Letter, ...], top: int) -> Optional[List[Tuple[int, int]]]:
    """Splits the top generator letters of a cyclic word into maximal syllables

    Returns (start, length) pairs in the original indexing, or None
    when the whole word is a single syllable without a boundary.
    """
    length = len(letters)

    def continues(p: int) -> bool:
        previous = letters[p - 1]
        return previous.index == top and letters[p].index == top and previous.sign == letters[p].sign

    origin = next((p for p in range(length) if not continues(p)), None)
    if origin is None:
        return None
    syllables = []
    for step in range(length):
        p = (origin + step) % length
        if letters[p].index != top:
            continue
        if continues(p) and syllables:
            start, count = syllables[-1]
            syllables[-1] = (start, count + 1)
        else:
            syllables.append((p, 1))
    return syllables


def _detect_flype(word: BraidWord) -> Optional[FormDecomposition]:
    top = word.n - 1
    letters = word.letters
    syllables = _syllables(letters, top)
    if syllables is None or len(syllables) != 2:
        return None
    length = len(letters)
    candidates = []
    for final, other in ((0, 1), (1, 0)):
        final_start, final_count = syllables[final]
        if final_count != 1:
            continue
        rotation = (final_start + 1) % length
        rotated = _rotated(letters, rotation)
        other_start, other_count = syllables[other]
        offset = (other_start - rotation) % length
        parts = (rotated[:offset], rotated[offset:offset + other_count],
                 rotated[offset + other_count:-1], rotated[-1:])
        power = other_count * letters[other_start].sign
        candidates.append(FormDecomposition(FLYPE, rotation, parts, power))
    if not candidates:
        return None
    return min(candidates, key=lambda decomposition: decomposition.rotation)


def isotopy_neighbors(word: BraidWord, max_length: int = _default_max_word_length) -> Set[BraidWord]:
    """Gets the words one braid relation or cyclic rotation away

    Cancelling pairs are inserted only while the result stays within
    max_length letters.

    Parameters
    ----------
    word:
        the braid word
    max_length:
        the length cap for insertions

    Returns
    -------
    neighbors:
        the neighbouring words, all with the same exponent sum and
        closure component count as word
    """
    n = word.n
    letters = word.letters
    length = len(letters)
    neighbors = set()
    if length > 1:
        neighbors.add(word.rotate(1))
    # cancel a pair, the last letter and the first are adjacent as well
    for p in range(length - 1):
        if letters[p + 1] == letters[p].inverse():
            neighbors.add(BraidWord(n, letters[:p] + letters[p + 2:]))
    if length >= 2 and letters[0] == letters[-1].inverse():
        neighbors.add(BraidWord(n, letters[1:-1]))
    # insert a cancelling pair
    if length + 2 <= max_length:
        for p in range(length + 1):
            for index in range(1, n):
                for sign in (1, -1):
                    pair = (Letter(index, sign), Letter(index, -sign))
                    neighbors.add(BraidWord(n, letters[:p] + pair + letters[p:]))
    # commute far generators
    for p in range(length - 1):
        a, b = letters[p], letters[p + 1]
        if abs(a.index - b.index) >= 2:
            neighbors.add(BraidWord(n, letters[:p] + (b, a) + letters[p + 2:]))
    # braid relation, the variant x y^-e x with e equal to the sign of x does not hold
    for p in range(length - 2):
        a, b, c = letters[p], letters[p + 1], letters[p + 2]
        if a.index != c.index or abs(a.index - b.index) != 1:
            continue
        if a.sign == c.sign and b.sign == -a.sign:
            continue
        replaced = (Letter(b.index, c.sign), Letter(a.index, b.sign), Letter(b.index, a.sign))
        neighbors.add(BraidWord(n, letters[:p] + replaced + letters[p + 3:]))
    neighbors.discard(word)
    return neighbors


def isotopic_within(first: BraidWord, second: BraidWord,
                    max_length: int = _default_max_word_length,
                    max_words: int = _default_max_words) -> bool:
    """Searches for a chain of braid relations between two words

    This is a bounded oracle: True proves the closures are isotopic,
    False only means no chain was found within the bounds.
    """
    if first.n != second.n:
        return False
    if exponent_sum(first) != exponent_sum(second) or \
            cycle_type(permutation(first)) != cycle_type(permutation(second)):
        return False
    target = second.canonical()
    seen: Dict[BraidWord, None] = {first: None}
    queue = deque([first])
    while queue and len(seen) < max_words:
        current = queue.popleft()
        if current.canonical() == target:
            return True
        for neighbor in isotopy_neighbors(current, max_length):
            if neighbor not in seen:
                seen[neighbor] = None
                queue.append(neighbor)
    logger.debug("bounded isotopy search stopped after %d words", len(seen))
    return any(word.canonical() == target for word in queue)
