import pytest

from qchess.bounds import RuntimeGuard
from qchess.errors import CorruptLogError
from qchess.game import Game, GameStatus
from qchess.state import square_index as sq

from helpers import fen_from_pieces, key_of

SQ2 = 2**-0.5


def test_new_game_default():
    game = Game()
    assert len(game.state) == 1
    assert sum(1 for v in game.layer.values if v != "0") == 32
    assert game.status == GameStatus.ONGOING
    assert game.layer.flags.turn == "w"


def test_custom_position_loads():
    game = Game(fen_from_pieces({"a1": "K", "h8": "k"}))
    assert game.status == GameStatus.ONGOING
    assert game.layer.values[sq("a1")] == "K"


def test_split_gives_half_marginals():
    game = Game()
    outcome = game.submit_move("b1^a3c3")
    assert outcome.accepted
    assert game.state.marginal_occupancy(sq("a3")) == pytest.approx(0.5)
    assert game.state.marginal_occupancy(sq("c3")) == pytest.approx(0.5)
    assert game.layer.flags.turn == "b"
    snapshot = game.snapshot()
    assert snapshot["squares"][sq("a3")]["probability"] == pytest.approx(0.5)
    assert snapshot["squares"][sq("a3")]["piece"] == "N"
    assert snapshot["term_count"] == 2


def test_wrong_color_rejected():
    game = Game()
    outcome = game.submit_move("a7a6")
    assert not outcome.accepted and outcome.reason == "wrong_color"
    assert game.layer.flags.turn == "w"


def test_castle_attempt_on_fresh_board_repeats_turn():
    game = Game()
    outcome = game.submit_move("e1g1")
    assert not outcome.accepted and outcome.reason == "no_effect"
    assert game.layer.flags.turn == "w"
    assert game.rng.counter == 0  # certain-outcome measurement rolled back
    assert game.log == []


def test_parse_and_impossible_codes():
    game = Game()
    assert game.submit_move("zz").reason == "parse_error"
    assert game.submit_move("a2b3").reason == "pawn_diagonal"
    assert game.submit_move("e1e3").reason == "pattern"
    assert game.submit_move("e3e4").reason == "empty_source"
    assert game.submit_move("a1a2.m1").reason == "recorded_outcome"


def test_illegal_attempts_leave_no_trace():
    game = Game(seed=5)
    before = (dict(game.state.terms), game.layer, game.rng.counter, list(game.log))
    game.submit_move("e1g1")  # certain no-effect measuring move
    game.submit_move("a1a2")  # blocked slide attempt: target own pawn -> blocked, p(M1)=0
    after = (dict(game.state.terms), game.layer, game.rng.counter, list(game.log))
    assert before == after


def test_king_capture_ends_game():
    game = Game(fen_from_pieces({"a1": "K", "a3": "k", "b1": "r"}, turn="b"))
    outcome = game.submit_move("b1a1")
    assert outcome.accepted and outcome.outcome == 1
    assert game.status == GameStatus.BLACK_WINS
    assert game.submit_move("a3a2").reason == "game_over"


def test_half_captured_king_keeps_playing():
    game = Game(fen_from_pieces({"d1": "K", "d3": "k", "a1": "r"}, turn="w", castling="-"))
    assert game.submit_move("d1^c1e1").accepted
    result = game.submit_move("a1c1")  # capture slide onto half a king
    assert result.accepted and result.outcome == 1
    assert game.king_presence("w") == pytest.approx(0.5)
    assert game.status == GameStatus.ONGOING


def _entangled_kings_doc(seed: int) -> str:
    """Both kings alive in one branch and captured (in ancillas) in the
    other; a black knight sits on a3 only in the alive branch."""
    import json

    amp = SQ2
    alive = key_of("a1", "h8", "a3", "a2")
    gone = key_of("a2") | (1 << 64) | (1 << 65)
    values = ["0"] * 64
    values[sq("a1")] = "K"
    values[sq("h8")] = "k"
    values[sq("a3")] = "n"
    values[sq("a2")] = "P"
    return json.dumps(
        {
            "version": 1,
            "rng": "splitmix64",
            "v": "".join(values),
            "flags": "w - -",
            "amplitudes": [
                [format(alive, "x"), amp, 0.0],
                [format(gone, "x"), amp, 0.0],
            ],
            "ancillas": [[64, "K", "a1", 1, "captured"], [65, "k", "h8", 2, "captured"]],
            "seed": seed,
            "move_log": [],
        }
    )


def test_status_draw_when_both_kings_vanish():
    # a2a3 is a blocked pawn step; outcome 1 projects onto the branch
    # where both kings were already captured -> draw in one move.
    for seed in range(64):
        game = Game(_entangled_kings_doc(seed))
        result = game.submit_move("a2a3")
        assert result.accepted
        if result.outcome == 1:
            assert game.king_presence("w") == 0.0
            assert game.king_presence("b") == 0.0
            assert game.status == GameStatus.DRAW
            return
        assert game.status == GameStatus.ONGOING
    raise AssertionError("no seed produced outcome 1 in 64 tries")


def test_replay_reproduces_state_bit_exactly():
    game = Game(seed=11)
    for text in ("b1^a3c3", "d7d5", "c3d5", "e7e5", "g1f3", "e5e4"):
        result = game.submit_move(text)
        assert result.accepted, text
    log = list(game.log)
    replayed = Game.replay(log, seed=11)
    assert replayed.state.terms == game.state.terms
    assert replayed.layer == game.layer
    assert replayed.state_fingerprint() == game.state_fingerprint()
    assert replayed.rng.counter == game.rng.counter


def test_same_seed_same_future():
    a = Game(seed=42)
    b = Game(seed=42)
    moves = ("b1^a3c3", "d7d5", "c3d5", "d8d5")
    for text in moves:
        ra = a.submit_move(text)
        rb = b.submit_move(text)
        assert ra.accepted == rb.accepted and ra.outcome == rb.outcome
    assert a.state.terms == b.state.terms


def test_replay_detects_tampered_outcome():
    # a definite-source pawn capture measures outcome 1 with certainty;
    # flipping the suffix to .m0 is a zero-probability record
    game = Game(seed=11)
    for text in ("e2e4", "d7d5", "e4d5"):
        assert game.submit_move(text).accepted
    assert game.log[-1] == "e4d5.m1"
    tampered = list(game.log[:-1]) + ["e4d5.m0"]
    with pytest.raises(CorruptLogError):
        Game.replay(tampered, seed=11)


def test_replay_flipped_uncertain_outcome_is_valid_other_branch():
    # an outcome with probability 0.5 can be flipped into a legitimate
    # alternative history; only zero-probability records are corrupt
    game = Game(seed=11)
    game.submit_move("b1^a3c3")
    game.submit_move("d7d5")
    result = game.submit_move("c3d5")
    assert result.accepted and result.outcome is not None
    flipped = "c3d5.m" + ("0" if result.outcome == 1 else "1")
    other = Game.replay(list(game.log[:-1]) + [flipped], seed=11)
    assert other.log[-1] == flipped
    assert other.state.terms != game.state.terms


def test_save_load_round_trip_mid_game():
    game = Game(seed=3)
    for text in ("b1^a3c3", "g8f6", "a3b5", "f6d5"):
        assert game.submit_move(text).accepted
    saved = game.save()
    loaded = Game.load(saved)
    assert loaded.state.terms == game.state.terms
    assert loaded.layer == game.layer
    assert loaded.rng.counter == game.rng.counter
    assert loaded.save() == saved
    # and the loaded game continues identically
    ga = game.submit_move("e2e4")
    gb = loaded.submit_move("e2e4")
    assert ga.accepted and gb.accepted
    assert game.state.terms == loaded.state.terms


def test_guard_deny_refuses_risky_split():
    game = Game(guard=RuntimeGuard(ceiling=3, mode="deny"))
    assert game.submit_move("b1^a3c3").accepted  # 1 -> 2 terms, within ceiling
    out = game.submit_move("b8^a6c6")  # could reach 4 > 3
    assert not out.accepted and out.reason == "guard"


def test_guard_warn_reports_breach():
    game = Game(guard=RuntimeGuard(ceiling=1, mode="warn"))
    out = game.submit_move("b1^a3c3")
    assert out.accepted and out.warnings


def test_no_legal_moves_surfaced():
    game = Game(fen_from_pieces({"a1": "K", "h8": "r"}, turn="b"))
    assert game.legal_moves() != []
    game2 = Game(fen_from_pieces({"a1": "K"}, turn="b"))
    assert game2.legal_moves() == []
