#!/usr/bin/env python3
"""Regenerate the committed example documents and golden files.

Run from the repository root:  python tools/gen_artifacts.py
Outputs are canonical, so a clean checkout regenerates identical bytes.
"""

import io
import contextlib
import pathlib
import sys

from agt.cli import main as cli_main
from agt.fileformat import SpecDocument, write_path
from agt.generators import grid_object
from agt.lens import LensMap
from agt.metric import FinMetricSpace, FnTable
from agt.opengame import costate_game, seq_compose, sel_to_game
from agt.selection import argmax_sel, nash_product

ROOT = pathlib.Path(__file__).resolve().parent.parent
EXAMPLES = ROOT / "docs" / "examples"
GOLDEN = ROOT / "tests" / "golden"

# the canonical two-player dilemma: both players pick C or D, payoffs in
# grid units 0..3, profile order (C,C),(C,D),(D,C),(D,D)
PD_PAYOFFS = {"(C,C)": (2, 2), "(C,D)": (0, 3), "(D,C)": (3, 0), "(D,D)": (1, 1)}


def pd_documents():
    player = grid_object(2, 4, labels=("C", "D"))
    factor = argmax_sel(player)
    nash = nash_product(factor, factor)
    k_entries = [p0 * 4 + p1 for p0, p1 in PD_PAYOFFS.values()]
    payoff = FnTable(nash.obj.fwd, nash.obj.bwd, k_entries)
    closed = seq_compose(costate_game(payoff, nash.obj), sel_to_game(nash))
    return factor, payoff, closed


def run():
    EXAMPLES.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    factor, payoff, closed = pd_documents()

    write_path(EXAMPLES / "metric_space.agt", SpecDocument.wrap(FinMetricSpace.grid(3)))
    demo_obj = grid_object(2, 2)
    demo_lens = LensMap(demo_obj, demo_obj, [1, 0], [[0, 1], [1, 1]])
    write_path(EXAMPLES / "lens.agt", SpecDocument.wrap(demo_lens))
    write_path(EXAMPLES / "selection.agt", SpecDocument.wrap(factor))
    write_path(EXAMPLES / "open_game.agt", SpecDocument.wrap(closed))

    factor_path = GOLDEN / "pd_argmax.agt"
    write_path(factor_path, SpecDocument.wrap(factor))
    rc = cli_main(
        ["compose", "tensor", str(factor_path), str(factor_path), str(GOLDEN / "pd_nash.agt")]
    )
    assert rc == 0
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        rc = cli_main(["--format", "records", "solve", str(GOLDEN / "pd_nash.agt")])
    assert rc == 0
    (GOLDEN / "pd_solve.records").write_text(buf.getvalue(), encoding="utf-8")
    print(f"payoff row key: k={[int(v) for v in payoff.entries]}")
    for path in sorted(EXAMPLES.glob("*.agt")) + sorted(GOLDEN.iterdir()):
        print(f"{path.relative_to(ROOT)}: {path.stat().st_size} bytes")


if __name__ == "__main__":
    sys.exit(run())
