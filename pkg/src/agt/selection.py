"""Selection functions over finite carriers.

A selection function is stored extensionally: one boolean row per
utility table (in rank order), one column per action.  That makes the
existential in the approximation operator a finite ball enumeration and
every law in sight exhaustively checkable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, PreconditionError
from .lens import is_short_lens, pull_rank_map, tensor_object
from .metric import FnTable, as_extreal, ball_dilate, slice_ranks, table_matrix


class SelectionFunction:
    """Maps every utility table on an object to a set of actions.

    ``table[r, x]`` says whether action x is selected for the rank-r
    utility table.  Rows cover the whole function space, so the table is
    total by construction; empty selections are allowed.
    """

    __slots__ = ("obj", "table")

    def __init__(self, obj, table):
        table = np.asarray(table, dtype=np.bool_)
        expected = obj.bwd.n**obj.fwd.n
        if table.shape != (expected, obj.fwd.n):
            raise InputError(
                f"selection table must be {expected} x {obj.fwd.n}, got {table.shape}"
            )
        table = table.copy()
        table.setflags(write=False)
        self.obj = obj
        self.table = table

    @classmethod
    def from_sets(cls, obj, sets_by_rank):
        """Build from an iterable of per-rank action-label collections."""
        expected = obj.bwd.n**obj.fwd.n
        sets_by_rank = list(sets_by_rank)
        if len(sets_by_rank) != expected:
            raise InputError(f"need {expected} rows, got {len(sets_by_rank)}")
        table = np.zeros((expected, obj.fwd.n), dtype=np.bool_)
        for r, labels in enumerate(sets_by_rank):
            for label in labels:
                table[r, obj.fwd.index(label)] = True
        return cls(obj, table)

    @property
    def n_tables(self):
        return self.table.shape[0]

    def utility_table(self, rank):
        return FnTable.from_rank(self.obj.fwd, self.obj.bwd, rank)

    def selects(self, k):
        """Selected action labels for a utility table, in carrier order."""
        if k.domain != self.obj.fwd or k.codomain != self.obj.bwd:
            raise InputError("utility table does not match the selection object")
        row = self.table[k.rank]
        return tuple(
            label for label, hit in zip(self.obj.fwd.carrier, row) if hit
        )

    def __eq__(self, other):
        if not isinstance(other, SelectionFunction):
            return NotImplemented
        return self.obj == other.obj and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.obj.key, self.table.tobytes()))

    def __repr__(self):
        return f"SelectionFunction({self.obj!r}, {self.n_tables} tables)"


def _require_order(obj):
    if not obj.bwd.is_grid:
        raise InputError(
            "utilities carry no total order; argmax needs a grid utility space"
        )


def argmax_sel(obj):
    """Selects exactly the maximizing actions; never empty."""
    _require_order(obj)
    values = table_matrix(obj.fwd.n, obj.bwd.n)
    return SelectionFunction(obj, values == values.max(axis=1, keepdims=True))


def eps_argmax_sel(obj, eps):
    """Selects actions within eps grid units of the best utility."""
    _require_order(obj)
    eps = as_extreal(eps)
    values = table_matrix(obj.fwd.n, obj.bwd.n)
    if eps.is_infinite:
        table = np.ones_like(values, dtype=np.bool_)
    else:
        table = values + eps.units >= values.max(axis=1, keepdims=True)
    return SelectionFunction(obj, table)


def approximate(s, eps):
    """The eps-approximation: select x for k iff x is selected for some
    utility table at sup-distance <= eps from k."""
    table = ball_dilate(s.table, s.obj.fwd.n, s.obj.bwd, as_extreal(eps))
    return SelectionFunction(s.obj, table)


def sel_leq(s, t):
    """Pointwise containment; None if it holds, else the first
    (utility table, action) selected by s but not by t."""
    if s.obj != t.obj:
        raise InputError("selection functions live over different objects")
    excess = s.table & ~t.table
    if not excess.any():
        return None
    rank, x = np.argwhere(excess)[0]
    return s.utility_table(int(rank)), s.obj.fwd.carrier[int(x)]


def nash_product(s, t):
    """Parallel (Nash) product: a joint action is selected when each
    component is selected against the other's play slotted into the
    joint utility table."""
    obj = tensor_object(s.obj, t.obj)
    left_ranks, right_ranks = slice_ranks(
        s.obj.fwd.n, s.obj.bwd.n, t.obj.fwd.n, t.obj.bwd.n
    )
    left_sel = s.table[left_ranks].transpose(0, 2, 1)  # (Kf, nxs, nxt)
    right_sel = t.table[right_ranks]  # (Kf, nxs, nxt)
    return SelectionFunction(obj, (left_sel & right_sel).reshape(left_ranks.shape[0], -1))


@dataclass
class SelMorphism:
    """A candidate map of selection functions: a lens between the two
    objects, with ``source`` over its source and ``target`` over its
    target.  Shortness is only needed when lifting through the
    approximation operator, so it is not enforced here."""

    lens: object
    source: SelectionFunction
    target: SelectionFunction

    def _check_boundaries(self):
        if self.source.obj != self.lens.source or self.target.obj != self.lens.target:
            raise InputError("selection functions do not match the lens boundaries")


def _morphism_scan(m, covariant):
    m._check_boundaries()
    pull = pull_rank_map(m.lens)
    via_target = m.target.table[:, m.lens.f0]  # [k', x] = target selects (alpha x) at k'
    via_source = m.source.table[pull]  # [k', x] = source selects x at pull(k')
    if covariant:
        bad = via_source & ~via_target
    else:
        bad = via_target & ~via_source
    if not bad.any():
        return None
    rank, x = np.argwhere(bad)[0]
    k = FnTable.from_rank(m.lens.target.fwd, m.lens.target.bwd, int(rank))
    return k, m.lens.source.fwd.carrier[int(x)]


def is_sel_morphism(m):
    """None if the map condition holds (target selections pull back into
    the source), else the first violating (utility table, action)."""
    return _morphism_scan(m, covariant=False)


def is_sel_morphism_covariant(m):
    """The covariant variant (source selections push forward); provided
    for counterexample exploration only."""
    return _morphism_scan(m, covariant=True)


def check_morphism_lift(m, eps):
    """Check that a morphism is still a morphism after approximating both
    sides.  Requires a short lens and a valid morphism to start from."""
    if is_short_lens(m.lens) is not None:
        raise PreconditionError("lens is not short; the lift is only claimed for short maps")
    if is_sel_morphism(m) is not None:
        raise PreconditionError("not a morphism of selection functions")
    lifted = SelMorphism(
        m.lens, approximate(m.source, eps), approximate(m.target, eps)
    )
    return is_sel_morphism(lifted)


@dataclass
class GradingReport:
    ok: bool
    law: str | None = None
    witness: tuple | None = None


def check_grading(s, eps, delta):
    """Verify the three grading laws on one selection function:
    zero-eps is the identity, enlargement is monotone in eps, and
    composing enlargements is bounded by their sum."""
    eps, delta = as_extreal(eps), as_extreal(delta)
    if approximate(s, 0) != s:
        diff = sel_leq(approximate(s, 0), s) or sel_leq(s, approximate(s, 0))
        return GradingReport(False, "zero", diff)
    lo, hi = (eps, delta) if eps <= delta else (delta, eps)
    w = sel_leq(approximate(s, lo), approximate(s, hi))
    if w is not None:
        return GradingReport(False, "monotone", w)
    w = sel_leq(approximate(approximate(s, delta), eps), approximate(s, eps + delta))
    if w is not None:
        return GradingReport(False, "compose", w)
    return GradingReport(True)


@dataclass
class TensorExchangeReport:
    ok: bool
    direction: str | None = None
    witness: tuple | None = None


def check_tensor_exchange(s, t, eps):
    """Compare approximating a Nash product against the Nash product of
    the approximations.  On finite carriers the two must be table-equal,
    so both containments are checked."""
    eps = as_extreal(eps)
    joint_then_approx = approximate(nash_product(s, t), eps)
    approx_then_joint = nash_product(approximate(s, eps), approximate(t, eps))
    w = sel_leq(joint_then_approx, approx_then_joint)
    if w is not None:
        return TensorExchangeReport(False, "split", w)
    w = sel_leq(approx_then_joint, joint_then_approx)
    if w is not None:
        return TensorExchangeReport(False, "join", w)
    return TensorExchangeReport(True)


@dataclass
class SandwichReport:
    ok: bool
    upper_witness: tuple | None
    lower_witness: tuple | None
    skipped: list
    boundary_failures: list
    checked: int


def check_argmax_sandwich(obj, eps):
    """Bracket the approximate argmax between slack argmaxes.

    Upper bound: every approximately-optimal action is 2*eps-optimal
    (asserted unconditionally).  Lower bound: every eps-optimal action is
    approximately optimal, asserted only where the canonical raised-value
    witness stays on the grid; utility tables with no such headroom are
    reported as skipped, and their containment is still probed by ball
    enumeration and recorded (never asserted).
    """
    _require_order(obj)
    eps = as_extreal(eps)
    best = argmax_sel(obj)
    enlarged = approximate(best, eps).table
    upper = eps_argmax_sel(obj, eps * 2).table
    lower = eps_argmax_sel(obj, eps).table

    upper_witness = None
    bad = enlarged & ~upper
    if bad.any():
        rank, x = np.argwhere(bad)[0]
        upper_witness = (best.utility_table(int(rank)), obj.fwd.carrier[int(x)])

    values = table_matrix(obj.fwd.n, obj.bwd.n)
    if eps.is_infinite:
        headroom = np.zeros_like(lower)
    else:
        headroom = values + eps.units <= obj.bwd.n - 1

    lower_witness = None
    bad = lower & ~enlarged & headroom
    if bad.any():
        rank, x = np.argwhere(bad)[0]
        lower_witness = (best.utility_table(int(rank)), obj.fwd.carrier[int(x)])

    skipped_mask = (lower & ~headroom).any(axis=1)
    skipped = [int(r) for r in np.flatnonzero(skipped_mask)]
    boundary_bad = lower & ~enlarged & ~headroom
    boundary_failures = [
        (int(r), obj.fwd.carrier[int(x)]) for r, x in np.argwhere(boundary_bad)
    ]
    return SandwichReport(
        ok=upper_witness is None and lower_witness is None,
        upper_witness=upper_witness,
        lower_witness=lower_witness,
        skipped=skipped,
        boundary_failures=boundary_failures,
        checked=int(lower.shape[0]),
    )
