import json

import numpy as np
import pytest

from agt.cli import main
from agt.fileformat import SpecDocument, parse_path, write_path
from agt.generators import grid_object
from agt.selection import argmax_sel
from conftest import EXAMPLES


@pytest.fixture
def small_doc(tmp_path):
    path = tmp_path / "argmax.agt"
    write_path(path, SpecDocument.wrap(argmax_sel(grid_object(2, 3))))
    return path


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


class TestSolve:
    def test_selection_listing(self, capsys, small_doc):
        rc, out, _ = run(capsys, "--format", "records", "solve", str(small_doc))
        assert rc == 0
        lines = out.splitlines()
        assert len(lines) == 9
        first = json.loads(lines[0])
        assert first == {"k": [0, 0], "selected": ["a", "b"]}

    def test_text_mode(self, capsys, small_doc):
        rc, out, _ = run(capsys, "solve", str(small_doc))
        assert rc == 0
        assert out.splitlines()[0] == "k=[0,0] -> {a, b}"

    def test_open_game_listing(self, capsys):
        rc, out, _ = run(
            capsys, "--format", "records", "solve", str(EXAMPLES / "open_game.agt")
        )
        assert rc == 0
        assert [json.loads(l) for l in out.splitlines()] == [
            {"k": [0], "strategy": "((D,D),pay)", "x": "*"}
        ]

    def test_wrong_kind(self, capsys):
        rc, _, err = run(capsys, "solve", str(EXAMPLES / "metric_space.agt"))
        assert rc == 2
        assert "selection or open-game" in err

    def test_malformed_document(self, capsys, tmp_path):
        bad = tmp_path / "bad.agt"
        bad.write_text("{\n  broken\n}")
        rc, _, err = run(capsys, "solve", str(bad))
        assert rc == 2
        assert "line" in err

    def test_missing_file(self, capsys, tmp_path):
        rc, _, err = run(capsys, "solve", str(tmp_path / "absent.agt"))
        assert rc == 2


class TestApprox:
    def test_zero_radius_matches_solve_plus_empty_diff(self, capsys, small_doc):
        rc, solve_out, _ = run(capsys, "--format", "records", "solve", str(small_doc))
        rc2, approx_out, _ = run(
            capsys, "--format", "records", "approx", str(small_doc), "--eps", "0"
        )
        assert rc == rc2 == 0
        body, sep, diff = approx_out.partition("# added relative to eps=0\n")
        assert sep and body == solve_out and diff == ""

    def test_zero_radius_matches_solve_for_games(self, capsys):
        game = str(EXAMPLES / "open_game.agt")
        for fmt in ("text", "records"):
            _, solve_out, _ = run(capsys, "--format", fmt, "solve", game)
            _, approx_out, _ = run(
                capsys, "--format", fmt, "approx", game, "--eps", "0"
            )
            body, sep, diff = approx_out.partition("# added relative to eps=0\n")
            assert sep and body == solve_out and diff == ""

    def test_radius_one_adds_contexts(self, capsys, small_doc):
        rc, out, _ = run(
            capsys, "--format", "records", "approx", str(small_doc), "--eps", "1"
        )
        assert rc == 0
        body, _, diff = out.partition("# added relative to eps=0\n")
        added = [json.loads(l) for l in diff.splitlines()]
        assert added and all(rec["added"] for rec in added)
        # k=(a:2, b:0) gains b at radius one
        assert {"added": True, "k": [2, 0], "selected": ["b"]} in added

    def test_infinite_radius(self, capsys, small_doc):
        rc, out, _ = run(
            capsys, "--format", "records", "approx", str(small_doc), "--eps", "inf"
        )
        assert rc == 0
        body, _, _ = out.partition("# added relative to eps=0\n")
        rows = [json.loads(l) for l in body.splitlines()]
        assert all(rec["selected"] == ["a", "b"] for rec in rows)

    def test_bad_eps(self, capsys, small_doc):
        rc, _, err = run(capsys, "approx", str(small_doc), "--eps", "-3")
        assert rc == 2


class TestDistance:
    def test_identical_documents(self, capsys, small_doc):
        rc, out, _ = run(
            capsys, "--format", "records", "distance", str(small_doc), str(small_doc)
        )
        assert rc == 0
        assert json.loads(out) == {"display": "0", "units": 0, "witnessed": True}

    def test_known_distance_with_unit(self, capsys, tmp_path):
        obj = grid_object(2, 3)
        a = tmp_path / "a.agt"
        b = tmp_path / "b.agt"
        from agt.selection import eps_argmax_sel

        write_path(a, SpecDocument.wrap(argmax_sel(obj), unit="0.5"))
        write_path(b, SpecDocument.wrap(eps_argmax_sel(obj, 1), unit="0.5"))
        rc, out, _ = run(capsys, "--format", "records", "distance", str(a), str(b))
        assert rc == 0
        assert json.loads(out) == {"display": "0.5", "units": 1, "witnessed": True}

    def test_object_mismatch(self, capsys, tmp_path):
        a = tmp_path / "a.agt"
        b = tmp_path / "b.agt"
        write_path(a, SpecDocument.wrap(argmax_sel(grid_object(2, 3))))
        write_path(b, SpecDocument.wrap(argmax_sel(grid_object(2, 2))))
        rc, _, err = run(capsys, "distance", str(a), str(b))
        assert rc == 2
        assert "different objects" in err

    def test_non_selection_rejected(self, capsys):
        rc, _, err = run(
            capsys,
            "distance",
            str(EXAMPLES / "metric_space.agt"),
            str(EXAMPLES / "metric_space.agt"),
        )
        assert rc == 2


class TestCompose:
    def test_tensor_selections_round_trip(self, capsys, tmp_path, small_doc):
        out_path = tmp_path / "prod.agt"
        rc, _, _ = run(
            capsys, "compose", "tensor", str(small_doc), str(small_doc), str(out_path)
        )
        assert rc == 0
        first = out_path.read_bytes()
        rc, _, _ = run(
            capsys, "compose", "tensor", str(small_doc), str(small_doc), str(out_path)
        )
        assert rc == 0 and out_path.read_bytes() == first
        doc = parse_path(out_path)
        assert doc.kind == "selection"
        assert doc.payload.obj.fwd.n == 4

    def test_seq_needs_games(self, capsys, tmp_path, small_doc):
        rc, _, err = run(
            capsys,
            "compose",
            "seq",
            str(small_doc),
            str(small_doc),
            str(tmp_path / "x.agt"),
        )
        assert rc == 2
        assert "open-game" in err

    def test_seq_boundary_mismatch(self, capsys, tmp_path):
        from agt.generators import random_game

        rng = np.random.default_rng(0)
        a = tmp_path / "a.agt"
        b = tmp_path / "b.agt"
        write_path(a, SpecDocument.wrap(random_game(grid_object(2, 2), grid_object(2, 2), 1, rng)))
        write_path(
            b,
            SpecDocument.wrap(
                random_game(grid_object(2, 3), grid_object(1, 2), 1, rng)
            ),
        )
        rc, _, err = run(capsys, "compose", "seq", str(a), str(b), str(tmp_path / "c.agt"))
        assert rc == 2
        assert "not composable" in err

    def test_unit_mismatch(self, capsys, tmp_path, small_doc):
        other = tmp_path / "other.agt"
        write_path(other, SpecDocument.wrap(argmax_sel(grid_object(2, 3)), unit="0.5"))
        rc, _, err = run(
            capsys, "compose", "tensor", str(small_doc), str(other), str(tmp_path / "x.agt")
        )
        assert rc == 2
        assert "unit" in err


class TestLaws:
    def test_unknown_suite_exits_2(self, capsys):
        rc, _, err = run(capsys, "laws", "nonesuch")
        assert rc == 2
        assert "unknown suite" in err

    def test_records_mode(self, capsys):
        rc, out, _ = run(
            capsys,
            "--format",
            "records",
            "laws",
            "graded",
            "--n-random",
            "3",
        )
        assert rc == 0
        rec = json.loads(out)
        assert rec["suite"] == "graded" and rec["passed"]

    def test_text_mode(self, capsys):
        rc, out, _ = run(capsys, "laws", "argmax-sandwich", "--max-x", "2", "--max-v", "3")
        assert rc == 0
        assert out.startswith("suite=argmax-sandwich")

    def test_budget_exit_code(self, capsys):
        rc, _, err = run(capsys, "laws", "seq-approx", "--budget-secs", "0.000001")
        assert rc == 3
        assert "budget" in err
