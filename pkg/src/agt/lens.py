"""Lenses over finite metric carriers: objects, maps, composition,
tensor, and the shortness check on backward passes."""

from __future__ import annotations

import numpy as np

from ._kernels import pull_ranks
from .errors import InputError
from .metric import FinMetricSpace, FnTable, rank_powers, table_matrix, tensor_metric


class LensObject:
    """A pair of finite metric spaces: forward carrier (states / moves)
    and backward carrier (utilities / coutilities)."""

    __slots__ = ("fwd", "bwd")

    def __init__(self, fwd, bwd):
        self.fwd = fwd
        self.bwd = bwd

    def __eq__(self, other):
        if not isinstance(other, LensObject):
            return NotImplemented
        return self.fwd == other.fwd and self.bwd == other.bwd

    def __hash__(self):
        return hash((self.fwd.key, self.bwd.key))

    @property
    def key(self):
        return (self.fwd.key, self.bwd.key)

    def __repr__(self):
        return f"LensObject(|X|={self.fwd.n}, |V|={self.bwd.n})"


UNIT_SPACE = FinMetricSpace(("*",), [[0]])
UNIT = LensObject(UNIT_SPACE, UNIT_SPACE)


class LensMap:
    """A forward map on states plus a state-indexed backward map on
    utilities.

    ``f0`` holds target forward indices, one per source forward element;
    ``f1[x, v']`` holds the source backward index produced at state x
    for target utility v'.  Full tables keep validation exhaustive and
    serialization byte-stable.
    """

    __slots__ = ("source", "target", "f0", "f1")

    def __init__(self, source, target, f0, f1):
        f0 = np.asarray(f0, dtype=np.int64)
        f1 = np.asarray(f1, dtype=np.int64)
        if f0.shape != (source.fwd.n,):
            raise InputError("forward table does not cover the source states")
        if f0.size and (f0.min() < 0 or f0.max() >= target.fwd.n):
            raise InputError("forward table entry out of range")
        if f1.shape != (source.fwd.n, target.bwd.n):
            raise InputError("backward table must be states x target-utilities")
        if f1.size and (f1.min() < 0 or f1.max() >= source.bwd.n):
            raise InputError("backward table entry out of range")
        f0 = f0.copy()
        f1 = f1.copy()
        f0.setflags(write=False)
        f1.setflags(write=False)
        self.source = source
        self.target = target
        self.f0 = f0
        self.f1 = f1

    def forward(self, label):
        return self.target.fwd.carrier[self.f0[self.source.fwd.index(label)]]

    def backward(self, x_label, v_label):
        x = self.source.fwd.index(x_label)
        v = self.target.bwd.index(v_label)
        return self.source.bwd.carrier[self.f1[x, v]]

    def __eq__(self, other):
        if not isinstance(other, LensMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.f0, other.f0)
            and np.array_equal(self.f1, other.f1)
        )

    def __hash__(self):
        return hash(
            (self.source.key, self.target.key, self.f0.tobytes(), self.f1.tobytes())
        )

    def __repr__(self):
        return f"LensMap({self.source!r} -> {self.target!r})"


def identity_lens(obj):
    n = obj.fwd.n
    f1 = np.tile(np.arange(obj.bwd.n, dtype=np.int64), (n, 1))
    return LensMap(obj, obj, np.arange(n, dtype=np.int64), f1)


def compose_lens(g, f):
    """Composite g after f: forward composes forwards, backward threads
    the target utility back through g then f."""
    if f.target != g.source:
        raise InputError("lens boundary mismatch: target of inner != source of outer")
    f0 = g.f0[f.f0]
    # (g.f)1[x, t] = f1[x, g1[f0 x, t]]
    nx = f.source.fwd.n
    f1 = f.f1[np.arange(nx)[:, None], g.f1[f.f0]]
    return LensMap(f.source, g.target, f0, f1)


def tensor_object(a, b):
    return LensObject(tensor_metric(a.fwd, b.fwd), tensor_metric(a.bwd, b.bwd))


def tensor_lens(f, g):
    """Componentwise product; objects combine under the max metric."""
    source = tensor_object(f.source, g.source)
    target = tensor_object(f.target, g.target)
    ny2 = g.target.fwd.n
    f0 = (f.f0[:, None] * ny2 + g.f0[None, :]).reshape(-1)
    nv2 = g.source.bwd.n
    # f1[(x,x'), (v,v')] = pair(f.f1[x, v], g.f1[x', v'])
    left = np.repeat(np.repeat(f.f1, g.source.fwd.n, axis=0), g.target.bwd.n, axis=1)
    right = np.tile(g.f1, (f.source.fwd.n, f.target.bwd.n))
    return LensMap(source, target, f0, left * nv2 + right)


def is_short_lens(m):
    """None if every backward slice is non-expanding, else the first
    violating (state, utility, utility) triple in enumeration order."""
    d_src = m.source.bwd.raw
    d_tgt = m.target.bwd.raw
    nv = m.target.bwd.n
    for x in range(m.source.fwd.n):
        row = m.f1[x]
        for a in range(nv):
            for b in range(nv):
                if d_src[row[a], row[b]] > d_tgt[a, b]:
                    return (
                        m.source.fwd.carrier[x],
                        m.target.bwd.carrier[a],
                        m.target.bwd.carrier[b],
                    )
    return None


def point_of(x, obj):
    """The lens from the unit object that plays x."""
    idx = obj.fwd.index(x)
    return LensMap(UNIT, obj, [idx], np.zeros((1, obj.bwd.n), dtype=np.int64))


def costate_of(k, obj):
    """The lens into the unit object whose backward pass evaluates k."""
    if k.domain != obj.fwd or k.codomain != obj.bwd:
        raise InputError("utility table does not match the lens object")
    return LensMap(obj, UNIT, np.zeros(obj.fwd.n, dtype=np.int64), k.entries[:, None])


def costate_table(m):
    """Recover the utility table of a lens into the unit object."""
    if m.target != UNIT:
        raise InputError("not a costate: target is not the unit object")
    return FnTable(m.source.fwd, m.source.bwd, m.f1[:, 0])


def scalar_of(costate, point):
    """Evaluate a costate against a point: the utility value that flows
    across the middle boundary of costate . point."""
    if point.source != UNIT or costate.target != UNIT:
        raise InputError("need a point (unit source) and a costate (unit target)")
    if point.target != costate.source:
        raise InputError("point and costate boundaries do not meet")
    return costate.source.bwd.carrier[costate.f1[point.f0[0], 0]]


def pull_table(alpha, k):
    """The composite utility table obtained by running k after alpha
    (costate_of(k) composed after alpha, read back as a table)."""
    if k.domain != alpha.target.fwd or k.codomain != alpha.target.bwd:
        raise InputError("utility table does not match the lens target")
    entries = alpha.f1[np.arange(alpha.source.fwd.n), k.entries[alpha.f0]]
    return FnTable(alpha.source.fwd, alpha.source.bwd, entries)


def pull_rank_map(alpha):
    """Rank of the pulled table for every utility table on the target.

    Entry r is the rank (in the source function space) of the pull of the
    rank-r table on the target; vectorizes pull_table over a whole
    function space.
    """
    tables = table_matrix(alpha.target.fwd.n, alpha.target.bwd.n)
    powers = rank_powers(alpha.source.fwd.n, alpha.source.bwd.n)
    return pull_ranks(tables, alpha.f0, alpha.f1, powers)
