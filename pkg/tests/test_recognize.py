import pytest

from app.arcs.arcpres import ArcPresentation
from app.arcs.transit import braid_to_arc
from app.braid.word import DESTAB, EXCHANGE, FLYPE, BraidWord
from app.moves.sheared import TAG_EDGE, TAG_RESERVED_1, IntervalSpec, ShearedPresentation, shear
from app.recognize.recognize import (INCONCLUSIVE, NO, YES, RecognizerError, describe, detect_obvious,
                                     enumerate_choices, recognize, verify_certificate)


def test_destabilizable_word(sigma1: BraidWord) -> None:
    result = recognize(sigma1, DESTAB)
    assert result.verdict == YES
    assert result.certificate.choice is None
    assert result.certificate.trace.steps == ()
    assert verify_certificate(result.certificate)
    assert describe(result).startswith("verdict: yes\n")


def test_two_strands_always_exchange(trefoil: BraidWord) -> None:
    result = recognize(trefoil, EXCHANGE)
    assert result.verdict == YES
    assert result.certificate.witness.word == trefoil
    assert verify_certificate(result.certificate)


def test_rejected_requests(sigma1: BraidWord) -> None:
    with pytest.raises(RecognizerError):
        recognize(BraidWord(1), DESTAB)
    with pytest.raises(RecognizerError):
        recognize(sigma1, 'twist')


def test_result_is_deterministic(sigma1: BraidWord) -> None:
    assert recognize(sigma1, DESTAB).to_dict() == recognize(sigma1, DESTAB).to_dict()


def test_obvious_destabilization(sigma1: BraidWord, t3: ArcPresentation) -> None:
    assert detect_obvious(shear(braid_to_arc(sigma1), IntervalSpec((2,))), DESTAB) == (0, 1)
    assert detect_obvious(shear(t3, IntervalSpec((0,))), DESTAB) is None
    assert detect_obvious(ShearedPresentation.plain(t3), DESTAB) is None


def test_obvious_exchange() -> None:
    presentation = ArcPresentation(((3, 2), (0, 3), (1, 0), (2, 1)))
    state = shear(presentation, IntervalSpec((0, 1)), {0: TAG_EDGE, 1: TAG_RESERVED_1})
    assert detect_obvious(state, EXCHANGE) == (0, 1)
    assert detect_obvious(state, FLYPE) is None


@pytest.mark.parametrize("kind, intervals", [(DESTAB, 1), (EXCHANGE, 2), (FLYPE, 3)])
def test_choices(trefoil: BraidWord, kind: str, intervals: int) -> None:
    presentation = braid_to_arc(trefoil)
    choices, complete = enumerate_choices(presentation, kind)
    assert complete
    assert all(len(choice.intervals.gaps) == intervals for choice in choices)
    assert all(len(choice.reserved) == intervals - 1 for choice in choices)
    assert all(choice.edge_path[0] not in choice.reserved for choice in choices)
    keys = [shear(presentation, choice.intervals, choice.tags()).key() for choice in choices]
    assert len(keys) == len(set(keys))
    assert enumerate_choices(presentation, kind) == (choices, True)


def test_choices_are_capped(trefoil: BraidWord) -> None:
    presentation = braid_to_arc(trefoil)
    choices, complete = enumerate_choices(presentation, DESTAB, max_choices=1)
    assert len(choices) == 1
    assert not complete


def test_trefoil_does_not_destabilize(trefoil: BraidWord) -> None:
    result = recognize(trefoil, DESTAB)
    assert result.verdict == NO
    assert result.complete
    assert result.certificate is None
    assert len(result.reports) == 1 + len(enumerate_choices(braid_to_arc(trefoil), DESTAB)[0])


def test_cut_off_placements_are_inconclusive(trefoil: BraidWord) -> None:
    result = recognize(trefoil, DESTAB, max_choices=1)
    assert result.verdict == INCONCLUSIVE
    assert not result.complete
    assert result.to_dict()['complete'] is False
    assert describe(result).endswith("interval placements cut off by the placement cap")
