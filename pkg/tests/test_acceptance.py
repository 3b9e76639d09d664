import random

import pytest

from app.arcs.arcpres import components, decode_key, enumerate_presentations
from app.arcs.transit import arc_to_braid, braid_to_arc
from app.braid.word import (DESTAB, EXCHANGE, FLYPE, BraidWord, component_count, cycle_type, detect_form,
                            exponent_sum, permutation)
from app.moves.moves import EXCHANGE_KINDS, MoveKind, complexity_delta, scramble, successors
from app.moves.sheared import IntervalSpec, ShearedPresentation, doubled_complexity, shear, unshear, validate_sheared
from app.recognize.recognize import INCONCLUSIVE, NO, YES, recognize, verify_certificate
from app.search.search import FOUND, SearchConstraints, exchange_orbit, replay, simplify_monotonic
from app.stats.stats import EnumerationStatsGenerator

pytestmark = pytest.mark.slow

_expected_delta = {MoveKind.HX: 0, MoveKind.VX: 0, MoveKind.SHX: 0,
                   MoveKind.HS: -2, MoveKind.VS: -2, MoveKind.SVS: -2}
_flat_kinds = (MoveKind.HX, MoveKind.VX, MoveKind.SHX)


def _random_word(rng: random.Random, max_n: int = 4, max_length: int = 8) -> BraidWord:
    n = rng.randint(2, max_n)
    length = rng.randint(0, max_length)
    return BraidWord.from_ints(n, [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)])


def test_move_laws_at_complexity_five() -> None:
    for key in sorted(enumerate_presentations(5)):
        presentation = decode_key(key)
        linked = len(components(presentation))
        for state in (ShearedPresentation.plain(presentation), shear(presentation, IntervalSpec((0, 2)))):
            for move, after in successors(state):
                assert validate_sheared(after) == []
                assert complexity_delta(state, after) == _expected_delta[move.kind], move
                assert len(components(unshear(after))) == linked, move


def test_round_trips() -> None:
    rng = random.Random(7)
    for _ in range(500):
        word = _random_word(rng, max_n=5, max_length=12)
        presentation = braid_to_arc(word)
        back = arc_to_braid(presentation)
        assert back == word
        assert exponent_sum(back) == exponent_sum(word)
        assert cycle_type(permutation(back)) == cycle_type(permutation(word))
        assert len(components(presentation)) == component_count(word)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_scrambled_destabilization_is_recovered(seed: int) -> None:
    start = ShearedPresentation.plain(braid_to_arc(BraidWord.from_ints(3, [1, -1, 2])))
    scrambled, _ = scramble(start, seed, insertions=3, exchanges=5)
    assert doubled_complexity(scrambled) == doubled_complexity(start) + 6
    result = simplify_monotonic(scrambled, SearchConstraints(goal=DESTAB))
    assert result.outcome == FOUND
    assert result.trace.is_monotone()
    assert replay(result.trace).key() == result.trace.final.key()
    assert detect_form(result.witness.word, DESTAB) == result.witness.decomposition


def test_scrambled_words_are_recognized(sigma1: BraidWord) -> None:
    start = ShearedPresentation.plain(braid_to_arc(sigma1))
    for seed in range(100):
        scrambled, _ = scramble(start, seed, insertions=10, exchanges=20)
        word = arc_to_braid(unshear(scrambled))
        result = recognize(word, DESTAB)
        assert result.verdict == YES, seed
        certificate = result.certificate
        assert verify_certificate(certificate), seed
        assert certificate.trace.is_monotone()
        before = doubled_complexity(certificate.trace.initial)
        for step in certificate.trace.steps:
            if step.move.kind in _flat_kinds:
                assert step.doubled_complexity == before, (seed, step.move)
            before = step.doubled_complexity


def test_fast_path_agrees_with_detection() -> None:
    rng = random.Random(11)
    for _ in range(1000):
        word = _random_word(rng)
        for kind in (DESTAB, EXCHANGE, FLYPE):
            if detect_form(word, kind) is not None:
                result = recognize(word, kind, max_states=200)
                assert result.verdict == YES
                assert result.certificate.choice is None
                assert verify_certificate(result.certificate)


def test_trefoil_answers(trefoil: BraidWord) -> None:
    assert recognize(trefoil, DESTAB).verdict == NO
    assert recognize(trefoil, EXCHANGE).verdict == YES


def test_answers_are_sound(trefoil: BraidWord) -> None:
    words = [trefoil, BraidWord.from_ints(3, [1, 2, 1, 2]), BraidWord.from_ints(3, [1, -2, 1, -2])]
    for word in words:
        for kind in (DESTAB, EXCHANGE):
            result = recognize(word, kind, max_states=2000, max_choices=50)
            assert result.verdict in (YES, NO, INCONCLUSIVE)
            if result.verdict == YES:
                assert verify_certificate(result.certificate)
                assert result.certificate.trace.is_monotone()
            else:
                assert result.certificate is None


def test_two_strand_exchange_is_always_possible() -> None:
    rng = random.Random(5)
    for _ in range(20):
        word = BraidWord.from_ints(2, [rng.choice([1, -1]) for _ in range(rng.randint(0, 6))])
        assert recognize(word, EXCHANGE).verdict == YES


@pytest.mark.parametrize("k", [2, 3, 4])
def test_exchange_orbits_partition_the_classes(k: int) -> None:
    classes = enumerate_presentations(k)
    remaining = set(classes)
    while remaining:
        key = min(remaining)
        orbit = exchange_orbit(decode_key(key))
        assert orbit <= classes
        assert orbit <= remaining
        remaining -= orbit
    for key in sorted(classes):
        state = ShearedPresentation.plain(decode_key(key))
        assert all(after.k == k for _, after in successors(state, kinds=EXCHANGE_KINDS))


def test_exchange_orbit_table() -> None:
    generator = EnumerationStatsGenerator([2, 3, 4], with_orbits=True)
    table = {k: generator.orbit_sizes(k) for k in (2, 3, 4)}
    assert table == {2: [1], 3: [2, 1, 1], 4: [5, 3, 3, 3, 1, 1, 1, 1, 1]}
    assert len(enumerate_presentations(4)) == 19


def test_recognition_is_deterministic(trefoil: BraidWord) -> None:
    word = BraidWord.from_ints(3, [1, 2, 1, 2])
    first = recognize(word, EXCHANGE, max_states=500, max_choices=20)
    second = recognize(word, EXCHANGE, max_states=500, max_choices=20)
    assert first.to_dict() == second.to_dict()
    assert recognize(trefoil, DESTAB).to_dict() == recognize(trefoil, DESTAB).to_dict()


def test_worker_processes_give_the_same_verdict(trefoil: BraidWord) -> None:
    sequential = recognize(trefoil, DESTAB, threads=1)
    parallel = recognize(trefoil, DESTAB, threads=2)
    assert parallel.verdict == sequential.verdict == NO
    assert parallel.to_dict() == sequential.to_dict()
