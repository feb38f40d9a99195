import json
import subprocess
import sys

import pytest

from qchess.cli import EXIT_IO, EXIT_PARSE, EXIT_RULE, main
from qchess.game import Game


def run_cli(args, stdin: str = ""):
    return subprocess.run(
        [sys.executable, "-m", "qchess.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=120,
    )


@pytest.mark.parametrize(
    "name",
    ["bell-psi+", "bell-psi-", "bell-phi-", "bell-phi+", "interference", "interference-swapped"],
)
def test_demo_commands_pass(name, capsys):
    assert main(["demo", name]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_bounds_naive_and_heatmap(capsys):
    assert main(["bounds", "--naive"]) == 0
    out = capsys.readouterr().out
    assert "10139684107326071075" in out
    assert main(["bounds", "--heatmap", "1:1", "1:1"]) == 0
    out = capsys.readouterr().out
    assert "m,s,log10_bound" in out
    assert "1,1,0.301030" in out


def test_bounds_bad_ranges(capsys):
    assert main(["bounds", "--heatmap", "nope", "1:2"]) == EXIT_PARSE
    assert main(["bounds"]) == EXIT_PARSE


def test_play_scripted_session():
    result = run_cli(
        ["play", "--seed", "7"],
        stdin="b1^a3c3\nmoves\nzz\nd7d5\nquit\n",
    )
    assert result.returncode == 0
    assert "played b1^a3c3" in result.stdout
    assert "rejected (parse_error)" in result.stdout
    assert "N50" in result.stdout  # split knight rendered at 50%


def test_play_interference_script_matches_reference_values():
    script = "a1^a2b1\na2^a1b2\nb1^a1b2\nquit\n"
    result = run_cli(
        ["play", "--position", "8/8/8/8/8/8/8/K7 w - -", "--free-play"],
        stdin=script,
    )
    assert result.returncode == 0
    assert "K73" in result.stdout  # constructive square at 73%
    assert "K25" in result.stdout


def test_replay_round_trip(tmp_path):
    game = Game(seed=21)
    for text in ("b1^a3c3", "d7d5", "c3d5", "d8d5"):
        assert game.submit_move(text).accepted
    log_file = tmp_path / "game.qcan"
    log_file.write_text("\n".join(game.log) + "\n")
    result = run_cli(["replay", str(log_file), "--seed", "21"])
    assert result.returncode == 0
    assert game.state_fingerprint() in result.stdout


def test_replay_corrupt_log(tmp_path):
    game = Game(seed=21)
    for text in ("e2e4", "d7d5", "e4d5"):
        assert game.submit_move(text).accepted
    tampered = list(game.log[:-1]) + [game.log[-1].replace(".m1", ".m0")]
    log_file = tmp_path / "bad.qcan"
    log_file.write_text("\n".join(tampered) + "\n")
    result = run_cli(["replay", str(log_file), "--seed", "21"])
    assert result.returncode == EXIT_RULE
    assert "corrupt" in result.stderr.lower()


def test_replay_missing_file():
    result = run_cli(["replay", "/nonexistent/game.qcan"])
    assert result.returncode == EXIT_IO


def test_replay_empty_log_is_start_position(tmp_path):
    log_file = tmp_path / "empty.qcan"
    log_file.write_text("")
    result = run_cli(["replay", str(log_file)])
    assert result.returncode == 0
    assert "moves replayed: 0" in result.stdout


def test_save_and_reload_through_play(tmp_path):
    save_path = tmp_path / "session.json"
    first = run_cli(
        ["play", "--seed", "3"],
        stdin=f"b1^a3c3\nsave {save_path}\nquit\n",
    )
    assert first.returncode == 0 and save_path.exists()
    doc = json.loads(save_path.read_text())
    assert doc["move_log"] == ["b1^a3c3"]
    second = run_cli(
        ["play", "--position", f"@{save_path}"],
        stdin="d7d5\nquit\n",
    )
    assert second.returncode == 0
    assert "played d7d5" in second.stdout
