"""The ``agt/1`` document format: canonical, line-oriented JSON for
metric spaces, lenses, selection functions, and open games.

Integers on the wire are always grid units or carrier indices; the
``unit`` field is display metadata only.  Serialization is canonical
(sorted keys, fixed layout), so equal values produce identical bytes.
The full grammar with one example per kind lives in docs/format.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

import numpy as np

from .errors import FormatError, InputError
from .lens import LensMap, LensObject
from .metric import RAW_INF, FinMetricSpace, validate_metric
from .opengame import OpenGame
from .selection import SelectionFunction

VERSION = "agt/1"

KINDS = ("metric-space", "lens", "selection", "open-game")


@dataclass
class SpecDocument:
    kind: str
    payload: object
    unit: str = "1"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown document kind {self.kind!r}")

    @classmethod
    def wrap(cls, payload, unit="1"):
        for kind, t in _KIND_TYPES.items():
            if isinstance(payload, t):
                return cls(kind, payload, unit)
        raise InputError(f"cannot serialize a {type(payload).__name__}")

    def display_value(self, ext):
        """Scale a grid-unit value by the document's display unit."""
        if ext.is_infinite:
            return "inf"
        return str(Decimal(self.unit) * ext.units)


_KIND_TYPES = {
    "metric-space": FinMetricSpace,
    "lens": LensMap,
    "selection": SelectionFunction,
    "open-game": OpenGame,
}


# ---------------------------------------------------------------------------
# canonical writer

def _is_scalar(v):
    return isinstance(v, (str, int, bool)) or v is None


def _emit(value, indent):
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        lines = ["{"]
        items = sorted(value.items())
        for i, (key, sub) in enumerate(items):
            comma = "," if i + 1 < len(items) else ""
            lines.append(f"{pad}  {json.dumps(key)}: {_emit(sub, indent + 1)}{comma}")
        lines.append(pad + "}")
        return "\n".join(lines)
    if isinstance(value, list):
        if all(_is_scalar(v) for v in value):
            return json.dumps(value)
        lines = ["["]
        for i, sub in enumerate(value):
            comma = "," if i + 1 < len(value) else ""
            lines.append(f"{pad}  {_emit(sub, indent + 1)}{comma}")
        lines.append(pad + "]")
        return "\n".join(lines)
    return json.dumps(value)


def _space_obj(space):
    dist = [
        [("inf" if v >= RAW_INF else int(v)) for v in row] for row in space.raw
    ]
    return {"carrier": list(space.carrier), "dist": dist, "grid": space.is_grid}


def _lens_obj(lens):
    src, tgt = lens.source, lens.target
    return {
        "f0": [tgt.fwd.carrier[i] for i in lens.f0],
        "f1": [[src.bwd.carrier[v] for v in row] for row in lens.f1],
    }


def _table_key(entries):
    return "k=[" + ",".join(str(int(v)) for v in entries) + "]"


def _body(doc):
    payload = doc.payload
    if doc.kind == "metric-space":
        return _space_obj(payload)
    if doc.kind == "lens":
        body = {
            "source": {"fwd": _space_obj(payload.source.fwd), "bwd": _space_obj(payload.source.bwd)},
            "target": {"fwd": _space_obj(payload.target.fwd), "bwd": _space_obj(payload.target.bwd)},
        }
        body.update(_lens_obj(payload))
        return body
    if doc.kind == "selection":
        from .metric import table_matrix

        obj = payload.obj
        mat = table_matrix(obj.fwd.n, obj.bwd.n)
        table = {}
        for rank, row in enumerate(mat):
            chosen = [
                obj.fwd.carrier[x]
                for x in range(obj.fwd.n)
                if payload.table[rank, x]
            ]
            table[_table_key(row)] = chosen
        return {
            "object": {"fwd": _space_obj(obj.fwd), "bwd": _space_obj(obj.bwd)},
            "table": table,
        }
    # open-game
    game = payload
    lenses = {s: _lens_obj(lens) for s, lens in zip(game.strategies, game.lenses)}
    from .metric import table_matrix

    mat = table_matrix(game.codomain.fwd.n, game.codomain.bwd.n)
    equilibrium = {}
    for s, table in zip(game.strategies, game.eq):
        entries = []
        for x in range(game.domain.fwd.n):
            for rank in np.flatnonzero(table[x]):
                entries.append(
                    {
                        "k": [int(v) for v in mat[rank]],
                        "x": game.domain.fwd.carrier[x],
                    }
                )
        equilibrium[s] = entries
    return {
        "domain": {"fwd": _space_obj(game.domain.fwd), "bwd": _space_obj(game.domain.bwd)},
        "codomain": {"fwd": _space_obj(game.codomain.fwd), "bwd": _space_obj(game.codomain.bwd)},
        "strategies": list(game.strategies),
        "lenses": lenses,
        "equilibrium": equilibrium,
    }


def serialize(doc):
    """Canonical text of a document; byte-identical for equal values."""
    obj = {
        "version": VERSION,
        "kind": doc.kind,
        "unit": doc.unit,
        "body": _body(doc),
    }
    return _emit(obj, 0) + "\n"


# ---------------------------------------------------------------------------
# parser / validator

def _need(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"missing field {key!r}", path)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise FormatError(
            f"field {key!r} must be {kind.__name__}", path + (key,)
        )
    return value


def _parse_space(obj, path):
    carrier = _need(obj, "carrier", path, list)
    rows = _need(obj, "dist", path, list)
    grid = obj.get("grid", False)
    if not carrier or not all(isinstance(c, str) for c in carrier):
        raise FormatError("carrier must be a non-empty list of strings", path + ("carrier",))
    n = len(carrier)
    if len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise FormatError(f"dist must be a {n}x{n} table", path + ("dist",))
    raw = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v == "inf":
                raw[i, j] = RAW_INF
            elif isinstance(v, int) and not isinstance(v, bool) and v >= 0:
                raw[i, j] = v
            else:
                raise FormatError(
                    "distances are non-negative integers or \"inf\"",
                    path + ("dist", i, j),
                )
    try:
        space = FinMetricSpace(carrier, raw, is_grid=bool(grid))
    except InputError as e:
        raise FormatError(str(e), path) from None
    violation = validate_metric(space)
    if violation is not None:
        raise FormatError(
            f"metric axiom {violation.axiom} fails at {violation.elements}", path
        )
    if space.is_grid:
        expected = FinMetricSpace.grid(n)
        if space != expected:
            raise FormatError(
                "grid flag set but carrier/dist is not the interval grid", path
            )
    return space


def _parse_object(obj, path):
    return LensObject(
        _parse_space(_need(obj, "fwd", path, dict), path + ("fwd",)),
        _parse_space(_need(obj, "bwd", path, dict), path + ("bwd",)),
    )


def _label_index(space, label, path):
    if not isinstance(label, str) or str(label) not in space.carrier:
        raise FormatError(f"label {label!r} not in carrier", path)
    return space.index(label)


def _parse_lens(obj, source, target, path):
    f0_labels = _need(obj, "f0", path, list)
    f1_labels = _need(obj, "f1", path, list)
    if len(f0_labels) != source.fwd.n:
        raise FormatError("f0 must list one move per state", path + ("f0",))
    f0 = [
        _label_index(target.fwd, v, path + ("f0", i))
        for i, v in enumerate(f0_labels)
    ]
    if len(f1_labels) != source.fwd.n:
        raise FormatError("f1 must have one row per state", path + ("f1",))
    f1 = []
    for x, row in enumerate(f1_labels):
        if not isinstance(row, list) or len(row) != target.bwd.n:
            raise FormatError(
                "f1 rows list one coutility per target utility",
                path + ("f1", x),
            )
        f1.append(
            [_label_index(source.bwd, v, path + ("f1", x, j)) for j, v in enumerate(row)]
        )
    return LensMap(source, target, f0, f1)


def _parse_k(value, codomain_fwd_n, codomain_bwd_n, path):
    if (
        not isinstance(value, list)
        or len(value) != codomain_fwd_n
        or any(
            not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < codomain_bwd_n
            for v in value
        )
    ):
        raise FormatError(
            f"k must list {codomain_fwd_n} indices below {codomain_bwd_n}", path
        )
    return value


def _parse_body(kind, body, path):
    if kind == "metric-space":
        return _parse_space(body, path)
    if kind == "lens":
        source = _parse_object(_need(body, "source", path, dict), path + ("source",))
        target = _parse_object(_need(body, "target", path, dict), path + ("target",))
        return _parse_lens(body, source, target, path)
    if kind == "selection":
        obj = _parse_object(_need(body, "object", path, dict), path + ("object",))
        table = _need(body, "table", path, dict)
        expected = obj.bwd.n**obj.fwd.n
        from .metric import table_matrix

        mat = table_matrix(obj.fwd.n, obj.bwd.n)
        rows = np.zeros((expected, obj.fwd.n), dtype=np.bool_)
        seen = set()
        for key, chosen in table.items():
            kpath = path + ("table", key)
            if not key.startswith("k=["):
                raise FormatError("table keys look like k=[..]", kpath)
            try:
                entries = json.loads(key[2:])
            except json.JSONDecodeError:
                raise FormatError("unparseable table key", kpath) from None
            entries = _parse_k(entries, obj.fwd.n, obj.bwd.n, kpath)
            rank = 0
            for v in entries:
                rank = rank * obj.bwd.n + v
            seen.add(rank)
            if not isinstance(chosen, list):
                raise FormatError("selected actions must be a list", kpath)
            for label in chosen:
                rows[rank, _label_index(obj.fwd, label, kpath)] = True
        if len(seen) != expected:
            raise FormatError(
                f"table must cover all {expected} utility functions "
                f"(got {len(seen)})",
                path + ("table",),
            )
        del mat
        return SelectionFunction(obj, rows)
    # open-game
    domain = _parse_object(_need(body, "domain", path, dict), path + ("domain",))
    codomain = _parse_object(_need(body, "codomain", path, dict), path + ("codomain",))
    strategies = _need(body, "strategies", path, list)
    if not all(isinstance(s, str) for s in strategies):
        raise FormatError("strategies must be strings", path + ("strategies",))
    lens_docs = _need(body, "lenses", path, dict)
    eq_docs = _need(body, "equilibrium", path, dict)
    lenses = []
    eq = []
    n_ctx = codomain.bwd.n**codomain.fwd.n
    for s in strategies:
        if s not in lens_docs:
            raise FormatError(f"missing lens for strategy {s!r}", path + ("lenses",))
        if s not in eq_docs:
            raise FormatError(
                f"missing equilibrium for strategy {s!r}", path + ("equilibrium",)
            )
        lens = _parse_lens(lens_docs[s], domain, codomain, path + ("lenses", s))
        from .lens import is_short_lens

        violation = is_short_lens(lens)
        if violation is not None:
            raise FormatError(
                f"lens is not short at (state, utility, utility) = {violation}",
                path + ("lenses", s),
            )
        lenses.append(lens)
        table = np.zeros((domain.fwd.n, n_ctx), dtype=np.bool_)
        entries = eq_docs[s]
        if not isinstance(entries, list):
            raise FormatError("equilibrium must be a list of contexts", path + ("equilibrium", s))
        for i, entry in enumerate(entries):
            epath = path + ("equilibrium", s, i)
            x = _label_index(domain.fwd, _need(entry, "x", epath), epath + ("x",))
            kvals = _parse_k(
                _need(entry, "k", epath), codomain.fwd.n, codomain.bwd.n, epath + ("k",)
            )
            rank = 0
            for v in kvals:
                rank = rank * codomain.bwd.n + v
            table[x, rank] = True
        eq.append(table)
    extra = set(lens_docs) | set(eq_docs)
    extra -= set(strategies)
    if extra:
        raise FormatError(
            f"entries for unknown strategies: {sorted(extra)}", path
        )
    try:
        return OpenGame(domain, codomain, strategies, lenses, eq)
    except InputError as e:
        raise FormatError(str(e), path) from None


def parse(text):
    """Parse and fully validate a document; raises FormatError with a
    field path (or line number for syntax errors)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e.msg}", line=e.lineno) from None
    if not isinstance(obj, dict):
        raise FormatError("document must be an object")
    version = _need(obj, "version", ())
    if version != VERSION:
        raise FormatError(f"unsupported version {version!r} (expected {VERSION})", ("version",))
    kind = _need(obj, "kind", ())
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind!r}", ("kind",))
    unit = obj.get("unit", "1")
    try:
        if not isinstance(unit, str) or Decimal(unit) <= 0:
            raise FormatError("unit must be a positive decimal string", ("unit",))
    except InvalidOperation:
        raise FormatError("unit must be a positive decimal string", ("unit",)) from None
    body = _need(obj, "body", (), dict)
    payload = _parse_body(kind, body, ("body",))
    return SpecDocument(kind, payload, unit)


def parse_path(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    return parse(text)


def write_path(path, doc):
    text = serialize(doc)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e}") from None
    return text
