"""Secondary-component conformance: the browser client and the engine
share one QCAN corpus and one snapshot schema.

- every move string the UI may emit parses under the engine grammar and
  is already canonical;
- the snapshot fixtures the UI tests render from are exactly what the
  engine produces (probabilities shown are the snapshot's, verbatim);
- split click order survives into the emitted string and the engine
  preserves it through parse/format.
"""

import json
from pathlib import Path

from qchess.game import Game
from qchess.notation import format_move, parse_move

FRONTEND = Path(__file__).parent.parent / "frontend"
CORPUS = FRONTEND / "tests" / "fixtures" / "qcan_corpus.json"


def test_corpus_parses_and_is_canonical():
    corpus = json.loads(CORPUS.read_text())
    assert len(corpus) >= 20
    for text in corpus:
        move = parse_move(text)  # must not raise
        assert format_move(move) == text


def test_corpus_covers_every_shape():
    corpus = json.loads(CORPUS.read_text())
    assert any("^" in t and t.index("^") == 2 for t in corpus)  # splits
    assert any("^" in t and t.index("^") == 4 for t in corpus)  # merges
    assert any(len(t) == 5 and "^" not in t for t in corpus)  # promotions
    # both orders of at least one split pair
    assert "b1^a3c3" in corpus and "b1^c3a3" in corpus
    assert parse_move("b1^a3c3") != parse_move("b1^c3a3")


def test_snapshot_fixtures_match_engine_output():
    split_fixture = json.loads(
        (FRONTEND / "tests" / "fixtures" / "snapshot_split.json").read_text()
    )
    game = Game(seed=5)
    assert game.submit_move("b1^a3c3").accepted
    assert game.snapshot() == split_fixture

    capture_fixture = json.loads(
        (FRONTEND / "tests" / "fixtures" / "snapshot_capture.json").read_text()
    )
    game2 = Game(seed=5)
    for text in ("e2e4", "d7d5", "e4d5"):
        assert game2.submit_move(text).accepted
    assert game2.snapshot() == capture_fixture


def test_snapshot_probabilities_are_engine_marginals():
    game = Game(seed=5)
    game.submit_move("b1^a3c3")
    snapshot = game.snapshot()
    margs = game.state.marginals()
    for index, cell in enumerate(snapshot["squares"]):
        assert cell["probability"] == margs[index]  # bitwise identical
