import pytest

from app.arcs.arcpres import ArcPresentation, components, decode_key, enumerate_presentations, winding_number
from app.arcs.transit import braid_to_arc
from app.braid.word import BraidWord
from app.moves.moves import (EXCHANGE_KINDS, InapplicableMove, InvalidInsertionSite, MoveKind, MoveRecord,
                             apply_move, complexity_delta, enumerate_moves, insert_arc, reduce_interiors, scramble,
                             successors)
from app.moves.sheared import (CLOSE, OPEN, TAG_EDGE, TAG_NONE, V, IntervalSpec, ShearedPresentation,
                               doubled_complexity, shear, unshear, validate_sheared)

# the change of 2C every move kind must make
_expected_delta = {MoveKind.HX: 0, MoveKind.VX: 0, MoveKind.SHX: 0,
                   MoveKind.HS: -2, MoveKind.VS: -2, MoveKind.SVS: -2}


def _check_move_laws(state: ShearedPresentation):
    link_components = len(components(unshear(state)))
    for move, after in successors(state):
        assert validate_sheared(after) == [], move
        assert complexity_delta(state, after) == _expected_delta[move.kind], move
        assert len(components(unshear(after))) == link_components, move
        if not state.interval_count:
            assert winding_number(after.to_presentation()) == winding_number(state.to_presentation()), move


def test_move_record() -> None:
    move = MoveRecord(MoveKind.HX, (0, 1))
    assert str(move) == "HX(0,1)"
    assert MoveRecord.from_dict(move.to_dict()) == move
    assert MoveRecord.from_dict({'kind': 'InverseHS', 'params': [1, 2, -1]}).kind == MoveKind.INVERSE_HS


def test_horizontal_exchange_on_t2(t2: ArcPresentation) -> None:
    state = ShearedPresentation.plain(t2)
    after = apply_move(state, MoveRecord(MoveKind.HX, (0, 1)))
    assert after.rows == ((1, 0), (0, 1))
    assert after.key() == state.key()
    assert MoveRecord(MoveKind.VX, (0, 1)) not in enumerate_moves(state)


def test_horizontal_simplification_on_t3(t2: ArcPresentation, t3: ArcPresentation) -> None:
    state = ShearedPresentation.plain(t3)
    moves = enumerate_moves(state)
    for params in ((0, 1), (1, 2), (2, 0)):
        assert MoveRecord(MoveKind.HS, params) in moves
    after = apply_move(state, MoveRecord(MoveKind.HS, (0, 1)))
    assert after.rows == t2.rows
    assert complexity_delta(state, after) == -2


def test_horizontal_simplification_in_sheared_state(t2: ArcPresentation, t3: ArcPresentation) -> None:
    state = shear(t3, IntervalSpec((0,)))
    after = apply_move(state, MoveRecord(MoveKind.HS, (1, 2)))
    assert after.key() == shear(t2, IntervalSpec((0,))).key()
    with pytest.raises(InapplicableMove):
        apply_move(state, MoveRecord(MoveKind.HS, (0, 1)))


def test_protected_arcs_are_kept(t3: ArcPresentation) -> None:
    state = shear(t3, IntervalSpec((0,)), {1: TAG_EDGE, 2: TAG_EDGE})
    with pytest.raises(InapplicableMove):
        apply_move(state, MoveRecord(MoveKind.HS, (1, 2)), protected={TAG_EDGE})


def test_vertical_exchange_needs_unlinked_arcs(trefoil: BraidWord) -> None:
    state = ShearedPresentation.plain(braid_to_arc(trefoil))
    assert successors(state) == []


def test_inverse_horizontal_is_undone(t2: ArcPresentation, t3: ArcPresentation) -> None:
    state = ShearedPresentation.plain(t2)
    grown = insert_arc(state, MoveRecord(MoveKind.INVERSE_HS, (0, 0, 1)))
    assert grown.rows == t3.rows
    assert complexity_delta(state, grown) == 2
    assert apply_move(grown, MoveRecord(MoveKind.HS, (0, 1))).key() == state.key()


def test_inverse_vertical_is_undone(sigma1: BraidWord) -> None:
    state = ShearedPresentation.plain(braid_to_arc(sigma1))
    for side in (1, -1):
        for index in range(state.k + 1):
            grown = insert_arc(state, MoveRecord(MoveKind.INVERSE_VS, (1, index, side)))
            assert grown.k == state.k + 1
            assert validate_sheared(grown) == []
            shrunk = [after for move, after in successors(grown) if move.kind == MoveKind.VS]
            assert state.key() in {after.key() for after in shrunk}


def test_insert_arc_rejects(t2: ArcPresentation) -> None:
    state = ShearedPresentation.plain(t2)
    with pytest.raises(InvalidInsertionSite):
        insert_arc(state, MoveRecord(MoveKind.HX, (0, 1)))
    with pytest.raises(InvalidInsertionSite):
        insert_arc(state, MoveRecord(MoveKind.INVERSE_HS, (5, 0, 1)))


def test_five_insertions(t2: ArcPresentation) -> None:
    state = ShearedPresentation.plain(t2)
    for _ in range(5):
        state = insert_arc(state, MoveRecord(MoveKind.INVERSE_HS, (0, state.rows[0][0], 1)))
    assert state.k == 7
    assert doubled_complexity(state) == 14


def test_exchange_moves_are_involutions() -> None:
    for key in sorted(enumerate_presentations(4)):
        state = ShearedPresentation.plain(decode_key(key))
        for move, after in successors(state, kinds=EXCHANGE_KINDS):
            assert apply_move(after, move).key() == state.key()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_move_laws_on_plain_states(k: int) -> None:
    for key in sorted(enumerate_presentations(k)):
        _check_move_laws(ShearedPresentation.plain(decode_key(key)))


@pytest.mark.parametrize("k", [3, 4])
def test_move_laws_on_sheared_states(k: int) -> None:
    for key in sorted(enumerate_presentations(k)):
        presentation = decode_key(key)
        for gap in range(k):
            _check_move_laws(shear(presentation, IntervalSpec((gap,))))
        _check_move_laws(shear(presentation, IntervalSpec((0, 2))))


def test_reduce_interiors(t2: ArcPresentation) -> None:
    state = ShearedPresentation(((0, 1), (1, 2), (2, 0)), (V, OPEN, V, V, CLOSE), (TAG_NONE,) * 3)
    reduced = reduce_interiors(state)
    assert reduced.k < state.k
    assert doubled_complexity(reduced) == doubled_complexity(state)
    plain = ShearedPresentation.plain(t2)
    assert reduce_interiors(plain) is plain


def test_scramble_is_deterministic(sigma1: BraidWord) -> None:
    state = ShearedPresentation.plain(braid_to_arc(sigma1))
    first, moves = scramble(state, seed=3, insertions=4, exchanges=6)
    second, _ = scramble(state, seed=3, insertions=4, exchanges=6)
    assert first == second
    assert first.k == state.k + 4
    assert sum(1 for move in moves if move.kind in (MoveKind.INVERSE_HS, MoveKind.INVERSE_VS)) == 4
    assert validate_sheared(first) == []
