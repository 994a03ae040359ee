"""Command-line front end: solve stored games, apply the approximation
operator, measure distances, compose documents, and run law suites.

Exit codes: 0 success, 1 internal error, 2 bad input, 3 law-suite budget
exceeded.  All output is deterministic given (document bytes, flags,
seed).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .distance import sel_distance
from .errors import AgtError, BudgetExceeded, InputError
from .fileformat import SpecDocument, parse_path, serialize, write_path
from .laws import SUITE_NAMES, ScaleCaps, run_suite
from .metric import INF, ExtReal, table_matrix
from .opengame import OpenGame, nash_tensor_game, seq_compose, t_eps_game
from .selection import SelectionFunction, approximate, nash_product


def _parse_eps(text):
    if text == "inf":
        return INF
    try:
        return ExtReal(int(text))
    except (ValueError, InputError):
        raise InputError(f"--eps takes a non-negative integer or 'inf', got {text!r}")


def _emit(records, fmt, out):
    if fmt == "records":
        lines = [
            json.dumps(rec, sort_keys=True, separators=(",", ":")) for rec in records
        ]
    else:
        lines = [rec_text(rec) for rec in records]
    if lines:
        out.write("\n".join(lines) + "\n")


def _k_text(k):
    return "k=[" + ",".join(str(v) for v in k) + "]"


def rec_text(rec):
    prefix = "+ " if rec.get("added") else ""
    if "selected" in rec:
        return f"{prefix}{_k_text(rec['k'])} -> {{{', '.join(rec['selected'])}}}"
    if "strategy" in rec:
        return f"{prefix}sigma={rec['strategy']} x={rec['x']} {_k_text(rec['k'])}"
    if "units" in rec:
        return (
            f"distance: units={rec['units']} display={rec['display']} "
            f"witnessed={'yes' if rec['witnessed'] else 'no'}"
        )
    return json.dumps(rec, sort_keys=True)


def _selection_records(sel, baseline=None, diff_only=False):
    mat = table_matrix(sel.obj.fwd.n, sel.obj.bwd.n).tolist()
    labels = sel.obj.fwd.carrier
    if diff_only:
        rows = (sel.table & ~baseline.table).tolist()
    else:
        rows = sel.table.tolist()
    for rank, row in enumerate(rows):
        chosen = [labels[x] for x, hit in enumerate(row) if hit]
        if diff_only:
            if chosen:
                yield {"added": True, "k": mat[rank], "selected": chosen}
        else:
            yield {"k": mat[rank], "selected": chosen}


def _game_records(game, baseline=None, diff_only=False):
    mat = table_matrix(game.codomain.fwd.n, game.codomain.bwd.n)
    for si, s in enumerate(game.strategies):
        table = game.eq[si]
        ref = baseline.eq[si] if baseline is not None else None
        target = (table & ~ref) if diff_only and ref is not None else table
        for x, rank in np.argwhere(target):
            rec = {
                "k": [int(v) for v in mat[int(rank)]],
                "strategy": s,
                "x": game.domain.fwd.carrier[int(x)],
            }
            if diff_only:
                rec["added"] = True
            yield rec


def cmd_solve(args, out):
    doc = parse_path(args.game)
    if doc.kind == "selection":
        _emit(_selection_records(doc.payload), args.format, out)
    elif doc.kind == "open-game":
        _emit(_game_records(doc.payload), args.format, out)
    else:
        raise InputError(f"solve expects a selection or open-game document, got {doc.kind}")
    return 0


def cmd_approx(args, out):
    doc = parse_path(args.game)
    eps = _parse_eps(args.eps)
    if doc.kind == "selection":
        grown = approximate(doc.payload, eps)
        _emit(_selection_records(grown), args.format, out)
        out.write("# added relative to eps=0\n")
        _emit(
            _selection_records(grown, baseline=doc.payload, diff_only=True),
            args.format,
            out,
        )
    elif doc.kind == "open-game":
        grown = t_eps_game(eps, doc.payload)
        _emit(_game_records(grown), args.format, out)
        out.write("# added relative to eps=0\n")
        _emit(
            _game_records(grown, baseline=doc.payload, diff_only=True),
            args.format,
            out,
        )
    else:
        raise InputError(f"approx expects a selection or open-game document, got {doc.kind}")
    return 0


def cmd_distance(args, out):
    doc_a = parse_path(args.a)
    doc_b = parse_path(args.b)
    if doc_a.kind != "selection" or doc_b.kind != "selection":
        raise InputError("distance expects two selection documents")
    if doc_a.payload.obj != doc_b.payload.obj:
        raise InputError("selection functions live over different objects")
    if doc_a.unit != doc_b.unit:
        raise InputError(
            f"documents disagree on the display unit ({doc_a.unit} vs {doc_b.unit})"
        )
    d = sel_distance(doc_a.payload, doc_b.payload)
    units = "inf" if d.value.is_infinite else d.value.units
    rec = {
        "display": doc_a.display_value(d.value),
        "units": units,
        "witnessed": d.witnessed,
    }
    _emit([rec], args.format, out)
    return 0


def cmd_laws(args, out):
    caps = ScaleCaps(
        max_x=args.max_x,
        max_v=args.max_v,
        max_sigma=args.max_sigma,
        eps_steps=args.eps_steps,
        n_random=args.n_random,
        seed=args.seed,
        budget_secs=args.budget_secs,
    )
    reports = run_suite(args.suite, caps)
    all_passed = True
    for report in reports:
        all_passed &= report.passed
        if args.format == "records":
            _emit([report.record()], "records", out)
        else:
            out.write("\n".join(report.lines()) + "\n")
    return 0 if all_passed else 1


def _compose_payloads(mode, a, b):
    if mode == "tensor":
        if isinstance(a, SelectionFunction) and isinstance(b, SelectionFunction):
            return nash_product(a, b)
        if isinstance(a, OpenGame) and isinstance(b, OpenGame):
            return nash_tensor_game(a, b)
        raise InputError("tensor expects two selection or two open-game documents")
    if isinstance(a, OpenGame) and isinstance(b, OpenGame):
        return seq_compose(b, a)  # a feeds b
    raise InputError("sequential composition expects two open-game documents")


def cmd_compose(args, out):
    doc_a = parse_path(args.a)
    doc_b = parse_path(args.b)
    if doc_a.unit != doc_b.unit:
        raise InputError(
            f"documents disagree on the display unit ({doc_a.unit} vs {doc_b.unit})"
        )
    composed = _compose_payloads(args.mode, doc_a.payload, doc_b.payload)
    write_path(args.out, SpecDocument.wrap(composed, unit=doc_a.unit))
    out.write(f"wrote {args.out}\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="agt",
        description="Finite-model engine for approximate compositional game theory.",
    )
    parser.add_argument(
        "--format",
        choices=("text", "records"),
        default="text",
        help="text tables or one JSON record per line",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="list stored equilibria / selections")
    p.add_argument("game")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("approx", help="list equilibria after enlargement by eps")
    p.add_argument("game")
    p.add_argument("--eps", default="0", help="radius in grid units, or 'inf'")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("distance", help="pseudometric distance between two selection documents")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("laws", help="run a law suite")
    p.add_argument("suite", help=f"one of {', '.join(SUITE_NAMES)}, or all")
    p.add_argument("--max-x", type=int, default=None)
    p.add_argument("--max-v", type=int, default=None)
    p.add_argument("--max-sigma", type=int, default=None)
    p.add_argument("--eps-steps", type=int, default=None)
    p.add_argument("--n-random", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-secs", type=float, default=None)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("compose", help="compose two documents and write the result")
    p.add_argument("mode", choices=("seq", "tensor"))
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("out")
    p.set_defaults(func=cmd_compose)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except AgtError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # pragma: no cover - internal failure path
        print(f"internal error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
