"""Finite open games: per-strategy lenses with per-strategy equilibrium
relations over (state, continuation) contexts, plus the approximation
operator, sequential composition, the parallel (Nash) tensor, and the
single-instance law checkers for all of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, PreconditionError
from .lens import (
    LensMap,
    UNIT,
    compose_lens,
    is_short_lens,
    pull_rank_map,
    tensor_lens,
    tensor_object,
)
from .metric import FnTable, as_extreal, ball_dilate, product_label, slice_ranks
from .selection import SelectionFunction


class OpenGame:
    """Strategies, one short lens per strategy, and one equilibrium
    relation per strategy over contexts (state, continuation table).

    ``eq[s][x, r]`` says whether state x with the rank-r continuation is
    an equilibrium context for strategy s.  Every lens is checked short
    at construction: the approximation laws assume it, so games that
    break it are unrepresentable.
    """

    __slots__ = ("domain", "codomain", "strategies", "lenses", "eq")

    def __init__(self, domain, codomain, strategies, lenses, eq):
        strategies = tuple(str(s) for s in strategies)
        if len(set(strategies)) != len(strategies):
            raise InputError("strategy labels must be distinct")
        lenses = tuple(lenses)
        eq = tuple(np.asarray(e, dtype=np.bool_) for e in eq)
        if len(lenses) != len(strategies) or len(eq) != len(strategies):
            raise InputError("need one lens and one equilibrium table per strategy")
        n_ctx = codomain.bwd.n**codomain.fwd.n
        for label, lens, table in zip(strategies, lenses, eq):
            if lens.source != domain or lens.target != codomain:
                raise InputError(f"lens for strategy {label!r} has wrong boundaries")
            violation = is_short_lens(lens)
            if violation is not None:
                raise InputError(
                    f"lens for strategy {label!r} is not short at {violation}"
                )
            if table.shape != (domain.fwd.n, n_ctx):
                raise InputError(
                    f"equilibrium table for {label!r} must be "
                    f"{domain.fwd.n} x {n_ctx}, got {table.shape}"
                )
        eq = tuple(e.copy() for e in eq)
        for e in eq:
            e.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.strategies = strategies
        self.lenses = lenses
        self.eq = eq

    @property
    def n_contexts(self):
        return self.codomain.bwd.n**self.codomain.fwd.n

    def continuation(self, rank):
        return FnTable.from_rank(self.codomain.fwd, self.codomain.bwd, rank)

    def members(self):
        """All equilibrium contexts as (strategy, state, rank) triples in
        enumeration order."""
        for s, table in zip(self.strategies, self.eq):
            for x, r in np.argwhere(table):
                yield s, self.domain.fwd.carrier[int(x)], int(r)

    def __eq__(self, other):
        if not isinstance(other, OpenGame):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.strategies == other.strategies
            and all(a == b for a, b in zip(self.lenses, other.lenses))
            and all(np.array_equal(a, b) for a, b in zip(self.eq, other.eq))
        )

    def __repr__(self):
        return (
            f"OpenGame({len(self.strategies)} strategies, "
            f"{self.domain!r} -> {self.codomain!r})"
        )


def t_eps_game(eps, game):
    """Enlarge every equilibrium relation by the eps-ball on
    continuations; strategies and lenses are untouched."""
    eps = as_extreal(eps)
    new_eq = [
        ball_dilate(e.T, game.codomain.fwd.n, game.codomain.bwd, eps).T
        for e in game.eq
    ]
    return OpenGame(game.domain, game.codomain, game.strategies, game.lenses, new_eq)


@dataclass
class GameMorphism:
    """A candidate map of open games: a strategy reassignment plus lenses
    on both boundaries."""

    strategy_map: dict
    alpha: LensMap
    beta: LensMap
    source: OpenGame
    target: OpenGame


def is_game_morphism(m):
    """None if the morphism condition holds, else the first violating
    (strategy, state, continuation) in enumeration order.

    Boundary mismatches raise InputError; non-short alpha or beta raise
    PreconditionError so they are never conflated with a counterexample.
    """
    if m.alpha.source != m.source.domain or m.alpha.target != m.target.domain:
        raise InputError("alpha does not match the domain boundaries")
    if m.beta.source != m.source.codomain or m.beta.target != m.target.codomain:
        raise InputError("beta does not match the codomain boundaries")
    for name, lens in (("alpha", m.alpha), ("beta", m.beta)):
        violation = is_short_lens(lens)
        if violation is not None:
            raise PreconditionError(f"{name} is not short at {violation}")
    mapped = []
    for s in m.source.strategies:
        label = m.strategy_map.get(s)
        if label is None or label not in m.target.strategies:
            raise InputError(f"strategy map misses {s!r} or hits an unknown strategy")
        mapped.append(m.target.strategies.index(label))
    pull = pull_rank_map(m.beta)
    for si, s in enumerate(m.source.strategies):
        holds_up = m.target.eq[mapped[si]][m.alpha.f0, :]  # [x, k']
        holds_down = m.source.eq[si][:, pull]  # [x, k']
        bad = holds_up & ~holds_down
        if bad.any():
            x, r = np.argwhere(bad)[0]
            k = FnTable.from_rank(
                m.target.codomain.fwd, m.target.codomain.bwd, int(r)
            )
            return s, m.source.domain.fwd.carrier[int(x)], k
    return None


def check_game_morphism_lift(m, eps):
    """Check the morphism survives approximating both games."""
    if is_game_morphism(m) is not None:
        raise PreconditionError("not a morphism of open games")
    lifted = GameMorphism(
        m.strategy_map,
        m.alpha,
        m.beta,
        t_eps_game(eps, m.source),
        t_eps_game(eps, m.target),
    )
    return is_game_morphism(lifted)


def seq_compose(second, first):
    """Pipeline composition: ``first`` feeds ``second``.

    A context is an equilibrium for a strategy pair when the pulled-back
    continuation is one for ``first`` and the played-forward state is one
    for ``second``.
    """
    if first.codomain != second.domain:
        raise InputError("games are not composable: inner codomain != outer domain")
    strategies = []
    lenses = []
    eq = []
    for si, s in enumerate(first.strategies):
        for ti, t in enumerate(second.strategies):
            strategies.append(product_label(s, t))
            lenses.append(compose_lens(second.lenses[ti], first.lenses[si]))
            pulled = pull_rank_map(second.lenses[ti])
            eq.append(
                first.eq[si][:, pulled] & second.eq[ti][first.lenses[si].f0, :]
            )
    return OpenGame(first.domain, second.codomain, strategies, lenses, eq)


def nash_tensor_game(g, h):
    """Parallel composition: each factor must be in equilibrium against
    the other's play slotted into the joint continuation."""
    domain = tensor_object(g.domain, h.domain)
    codomain = tensor_object(g.codomain, h.codomain)
    left_at, right_at = slice_ranks(
        g.codomain.fwd.n, g.codomain.bwd.n, h.codomain.fwd.n, h.codomain.bwd.n
    )
    strategies = []
    lenses = []
    eq = []
    for si, s in enumerate(g.strategies):
        for ti, t in enumerate(h.strategies):
            strategies.append(product_label(s, t))
            lenses.append(tensor_lens(g.lenses[si], h.lenses[ti]))
            left = g.eq[si][:, left_at[:, h.lenses[ti].f0]]  # (|X|, K, |X'|)
            right = h.eq[ti][:, right_at[:, g.lenses[si].f0]]  # (|X'|, K, |X|)
            both = left.transpose(0, 2, 1) & right.transpose(2, 0, 1)
            eq.append(both.reshape(-1, both.shape[2]))
    return OpenGame(domain, codomain, strategies, lenses, eq)


def sel_to_game(s):
    """Embed a selection function as a one-state open game whose
    strategies are the actions: strategy x plays x, and a context is an
    equilibrium for x exactly when x is selected for its continuation."""
    obj = s.obj
    lenses = [
        LensMap(UNIT, obj, [x], np.zeros((1, obj.bwd.n), dtype=np.int64))
        for x in range(obj.fwd.n)
    ]
    eq = [s.table[:, x][None, :] for x in range(obj.fwd.n)]
    return OpenGame(UNIT, obj, obj.fwd.carrier, lenses, eq)


def costate_game(k, obj, strategy="pay"):
    """The one-strategy game into the unit object that pays out a fixed
    utility table and accepts every context; composing after a game
    closes it against that table."""
    from .lens import costate_of

    eq = np.ones((obj.fwd.n, 1), dtype=np.bool_)
    return OpenGame(obj, UNIT, (strategy,), (costate_of(k, obj),), (eq,))


def game_to_sel(game):
    """Inverse of sel_to_game for one-state games over the unit object."""
    if game.domain != UNIT:
        raise InputError("only one-state games over the unit object embed back")
    table = np.stack([e[0] for e in game.eq], axis=1)
    return SelectionFunction(game.codomain, table)


def _first_excess(a, b):
    """First (strategy, state, rank) present in a's equilibria but not b's."""
    for si, s in enumerate(a.strategies):
        bad = a.eq[si] & ~b.eq[si]
        if bad.any():
            x, r = np.argwhere(bad)[0]
            return s, a.domain.fwd.carrier[int(x)], a.continuation(int(r))
    return None


@dataclass
class SeqExchangeReport:
    ok: bool
    witness: tuple | None
    reverse_ok: bool
    reverse_witness: tuple | None
    contexts: int


def check_seq_exchange(first, second, eps):
    """Approximating a pipeline is contained in the pipeline of
    approximations (asserted).  The reverse containment is only searched:
    the outcome is recorded either way and never treated as a failure.
    """
    eps = as_extreal(eps)
    composite = seq_compose(second, first)
    lhs = t_eps_game(eps, composite)
    rhs = seq_compose(t_eps_game(eps, second), t_eps_game(eps, first))
    witness = _first_excess(lhs, rhs)
    reverse_witness = _first_excess(rhs, lhs)
    return SeqExchangeReport(
        ok=witness is None,
        witness=witness,
        reverse_ok=reverse_witness is None,
        reverse_witness=reverse_witness,
        contexts=sum(int(e.size) for e in composite.eq),
    )


@dataclass
class GameTensorReport:
    ok: bool
    direction: str | None
    witness: tuple | None
    contexts: int


def check_game_tensor_exchange(g, h, eps):
    """On finite carriers the approximation of a Nash tensor must equal
    the Nash tensor of the approximations; check both containments."""
    eps = as_extreal(eps)
    lhs = t_eps_game(eps, nash_tensor_game(g, h))
    rhs = nash_tensor_game(t_eps_game(eps, g), t_eps_game(eps, h))
    witness = _first_excess(lhs, rhs)
    if witness is not None:
        return GameTensorReport(False, "split", witness, 0)
    witness = _first_excess(rhs, lhs)
    if witness is not None:
        return GameTensorReport(False, "join", witness, 0)
    return GameTensorReport(True, None, None, sum(int(e.size) for e in lhs.eq))
