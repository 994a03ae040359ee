"""Deterministic enumeration and seeded random generation of spaces,
lenses, selection functions, and open games at desk scale."""

from __future__ import annotations

import string

import numpy as np

from .errors import InputError
from .lens import LensMap, LensObject
from .metric import FinMetricSpace, table_matrix
from .opengame import OpenGame
from .selection import SelectionFunction

_LETTERS = string.ascii_lowercase

MAX_SELECTION_ENUM = 1 << 16


def action_labels(n):
    if n > len(_LETTERS):
        raise InputError(f"at most {len(_LETTERS)} enumerated actions supported")
    return tuple(_LETTERS[:n])


def grid_object(n_actions, grid_size, labels=None):
    """Discrete action space with grid utilities: the workhorse object of
    every exhaustive suite."""
    labels = tuple(labels) if labels is not None else action_labels(n_actions)
    return LensObject(FinMetricSpace.discrete(labels), FinMetricSpace.grid(grid_size))


def selection_count(obj):
    return 1 << (obj.bwd.n**obj.fwd.n * obj.fwd.n)


def all_selection_functions(obj):
    """Every selection table over obj, enumerated lexicographically over
    the flattened boolean table (row-major, most significant bit first)."""
    k = obj.bwd.n**obj.fwd.n
    bits = k * obj.fwd.n
    count = 1 << bits
    if count > MAX_SELECTION_ENUM:
        raise InputError(f"2^{bits} selection tables exceed the enumeration cap")
    codes = np.arange(count, dtype=np.int64)
    table = (codes[:, None] >> np.arange(bits - 1, -1, -1)[None, :]) & 1
    table = table.astype(np.bool_).reshape(count, k, obj.fwd.n)
    return [SelectionFunction(obj, t) for t in table]


def random_selection(obj, rng):
    k = obj.bwd.n**obj.fwd.n
    return SelectionFunction(obj, rng.random((k, obj.fwd.n)) < 0.5)


def short_backward_rows(src_bwd, tgt_bwd):
    """All non-expanding maps from the target utility space into the
    source utility space, as rows of source indices in rank order."""
    rows = table_matrix(tgt_bwd.n, src_bwd.n)
    pair_dist = src_bwd.raw[rows[:, :, None], rows[:, None, :]]
    ok = (pair_dist <= tgt_bwd.raw[None, :, :]).all(axis=(1, 2))
    return rows[ok]


def all_short_lenses(source, target):
    """Every short lens map source -> target, ordered by forward-table
    rank then per-state backward-row ranks."""
    nx = source.fwd.n
    f0_choices = table_matrix(nx, target.fwd.n)
    rows = short_backward_rows(source.bwd, target.bwd)
    out = []
    row_picks = table_matrix(nx, len(rows))
    for f0 in f0_choices:
        for pick in row_picks:
            out.append(LensMap(source, target, f0, rows[pick]))
    return out


def random_short_lens(source, target, rng):
    rows = short_backward_rows(source.bwd, target.bwd)
    nx = source.fwd.n
    f0 = rng.integers(0, target.fwd.n, size=nx)
    f1 = rows[rng.integers(0, len(rows), size=nx)]
    return LensMap(source, target, f0, f1)


def random_fn_table(domain, codomain, rng):
    from .metric import FnTable

    return FnTable(domain, codomain, rng.integers(0, codomain.n, size=domain.n))


def random_game(domain, codomain, n_strategies, rng):
    """Random open game: independent short lenses and equilibrium tables."""
    n_ctx = codomain.bwd.n**codomain.fwd.n
    strategies = [f"s{i}" for i in range(n_strategies)]
    lenses = [random_short_lens(domain, codomain, rng) for _ in strategies]
    eq = [rng.random((domain.fwd.n, n_ctx)) < 0.5 for _ in strategies]
    return OpenGame(domain, codomain, strategies, lenses, eq)


def singleton_strategy_game(domain, codomain, lens):
    """One strategy per possible singleton equilibrium context, all
    sharing one lens.

    Equilibrium relations distribute over unions on both sides of every
    containment checked in the suites, so checking all singletons (plus
    the vacuous empty relation) covers every equilibrium table over the
    same lens.
    """
    n_ctx = codomain.bwd.n**codomain.fwd.n
    nx = domain.fwd.n
    strategies = []
    eq = []
    for x in range(nx):
        for r in range(n_ctx):
            strategies.append(f"e{x}_{r}")
            table = np.zeros((nx, n_ctx), dtype=np.bool_)
            table[x, r] = True
            eq.append(table)
    return OpenGame(domain, codomain, strategies, [lens] * len(strategies), eq)


def random_metric_space(rng, max_n=4, max_unit=3, allow_inf=True):
    """Random valid finite metric space (shortest-path closure of a
    random symmetric pre-table, with optional disconnected components)."""
    n = int(rng.integers(1, max_n + 1))
    labels = [f"p{i}" for i in range(n)]
    big = 10**6
    raw = rng.integers(1, max_unit + 1, size=(n, n)).astype(np.int64)
    raw = np.minimum(raw, raw.T)
    if allow_inf and n > 1 and rng.random() < 0.25:
        cut = int(rng.integers(1, n))
        raw[:cut, cut:] = big
        raw[cut:, :cut] = big
    np.fill_diagonal(raw, 0)
    # Floyd-Warshall closure restores the triangle inequality
    for m in range(n):
        raw = np.minimum(raw, raw[:, m][:, None] + raw[m, :][None, :])
    raw = raw.astype(object)
    rows = [[("inf" if v >= big else int(v)) for v in row] for row in raw]
    return FinMetricSpace.from_rows(labels, rows)


def random_object(rng, max_x=3, max_grid=3):
    nx = int(rng.integers(1, max_x + 1))
    nv = int(rng.integers(1, max_grid + 1))
    return grid_object(nx, nv)
