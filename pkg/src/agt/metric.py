"""Exact extended non-negative reals, finite metric spaces, and finite
function tables with the sup-metric.

All distances are integer counts of an abstract grid unit, plus a
distinguished infinity.  Nothing in this package ever touches a float on
a semantic path, so every law check is exactly reproducible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._kernels import pairwise_sup
from .errors import InputError

# Sentinel for infinity in raw int64 tables.  Finite values stay tiny at
# the scales this engine targets, so saturation never overflows.
RAW_INF = np.int64(1) << 62

# Refuse to enumerate function spaces past this many tables.
MAX_TABLE_SPACE = 1 << 20


class ExtReal:
    """A non-negative integer number of grid units, or infinity.

    Addition saturates at infinity; comparisons are total.
    """

    __slots__ = ("_units",)

    def __init__(self, units):
        if units is None:
            self._units = None
            return
        if isinstance(units, ExtReal):
            self._units = units._units
            return
        units = int(units)
        if units < 0:
            raise InputError(f"extended reals are non-negative, got {units}")
        self._units = units

    @property
    def is_infinite(self):
        return self._units is None

    @property
    def units(self):
        if self._units is None:
            raise InputError("infinity has no finite unit count")
        return self._units

    @classmethod
    def from_raw(cls, raw):
        raw = int(raw)
        return INF if raw >= RAW_INF else cls(raw)

    def to_raw(self):
        return RAW_INF if self._units is None else np.int64(self._units)

    def __add__(self, other):
        other = as_extreal(other)
        if self._units is None or other._units is None:
            return INF
        return ExtReal(self._units + other._units)

    __radd__ = __add__

    def __mul__(self, factor):
        factor = int(factor)
        if factor < 0:
            raise InputError("cannot scale a distance by a negative factor")
        if self._units is None:
            return INF
        return ExtReal(self._units * factor)

    __rmul__ = __mul__

    def _cmp_key(self):
        return (1, 0) if self._units is None else (0, self._units)

    def __eq__(self, other):
        if not isinstance(other, (ExtReal, int)):
            return NotImplemented
        return self._cmp_key() == as_extreal(other)._cmp_key()

    def __le__(self, other):
        return self._cmp_key() <= as_extreal(other)._cmp_key()

    def __lt__(self, other):
        return self._cmp_key() < as_extreal(other)._cmp_key()

    def __ge__(self, other):
        return as_extreal(other) <= self

    def __gt__(self, other):
        return as_extreal(other) < self

    def __hash__(self):
        return hash(self._cmp_key())

    def __repr__(self):
        return "INF" if self._units is None else f"ExtReal({self._units})"

    def __str__(self):
        return "inf" if self._units is None else str(self._units)


INF = ExtReal(None)


def as_extreal(value):
    """Coerce an int, ``"inf"``, or ExtReal to an ExtReal."""
    if isinstance(value, ExtReal):
        return value
    if value == "inf":
        return INF
    return ExtReal(value)


def ext_add(a, b):
    """Saturating addition; infinity absorbs."""
    return as_extreal(a) + as_extreal(b)


def _raw_add(a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return np.where((a >= RAW_INF) | (b >= RAW_INF), RAW_INF, a + b)


class MetricViolation:
    """First metric-axiom violation, in carrier order."""

    __slots__ = ("axiom", "elements")

    def __init__(self, axiom, elements):
        self.axiom = axiom
        self.elements = tuple(elements)

    def __repr__(self):
        return f"MetricViolation({self.axiom}, {self.elements})"

    def __eq__(self, other):
        return (
            isinstance(other, MetricViolation)
            and (self.axiom, self.elements) == (other.axiom, other.elements)
        )


class FinMetricSpace:
    """A finite carrier with a full distance table in raw grid units.

    The constructor checks only dimensions; run ``validate_metric`` to
    check the axioms (invalid tables must stay representable so the
    validator itself can be exercised).
    """

    __slots__ = ("carrier", "raw", "is_grid", "_index")

    def __init__(self, carrier, raw, is_grid=False):
        carrier = tuple(str(c) for c in carrier)
        if not carrier:
            raise InputError("carrier must be non-empty")
        if len(set(carrier)) != len(carrier):
            raise InputError("carrier labels must be distinct")
        raw = np.asarray(raw, dtype=np.int64)
        n = len(carrier)
        if raw.shape != (n, n):
            raise InputError(
                f"distance table shape {raw.shape} does not match carrier size {n}"
            )
        if (raw < 0).any():
            raise InputError("distances must be non-negative")
        raw = raw.copy()
        raw[raw >= RAW_INF] = RAW_INF
        raw.setflags(write=False)
        self.carrier = carrier
        self.raw = raw
        self.is_grid = bool(is_grid)
        self._index = {label: i for i, label in enumerate(carrier)}

    @classmethod
    def discrete(cls, carrier):
        """Distance 1 between distinct points."""
        n = len(tuple(carrier))
        raw = np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)
        return cls(carrier, raw)

    @classmethod
    def grid(cls, size):
        """The interval grid {0, .., size-1} with absolute-difference
        distances; the one kind of space that carries a total order."""
        if size < 1:
            raise InputError("grid needs at least one point")
        idx = np.arange(size, dtype=np.int64)
        raw = np.abs(idx[:, None] - idx[None, :])
        return cls([str(i) for i in range(size)], raw, is_grid=True)

    @classmethod
    def from_rows(cls, carrier, rows, is_grid=False):
        """Build from nested lists of ints / ``"inf"`` / ExtReal."""
        raw = [[as_extreal(v).to_raw() for v in row] for row in rows]
        return cls(carrier, np.array(raw, dtype=np.int64), is_grid=is_grid)

    @property
    def n(self):
        return len(self.carrier)

    def index(self, label):
        try:
            return self._index[str(label)]
        except KeyError:
            raise InputError(f"label {label!r} not in carrier {self.carrier}") from None

    def dist(self, a, b):
        return ExtReal.from_raw(self.raw[self.index(a), self.index(b)])

    def diameter(self):
        return ExtReal.from_raw(self.raw.max())

    @property
    def key(self):
        """Hashable identity used by internal caches."""
        return (self.carrier, self.raw.tobytes(), self.is_grid)

    def __eq__(self, other):
        if not isinstance(other, FinMetricSpace):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        kind = "grid" if self.is_grid else "space"
        return f"FinMetricSpace({kind}, n={self.n})"


def validate_metric(space):
    """Check the three metric axioms; return None if they hold, else the
    first violation in carrier enumeration order."""
    raw = space.raw
    n = space.n
    labels = space.carrier
    for i in range(n):
        for j in range(n):
            zero = raw[i, j] == 0
            if zero != (i == j):
                return MetricViolation("identity", (labels[i], labels[j]))
    for i in range(n):
        for j in range(i + 1, n):
            if raw[i, j] != raw[j, i]:
                return MetricViolation("symmetry", (labels[i], labels[j]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if raw[i, k] > _raw_add(raw[i, j], raw[j, k]):
                    return MetricViolation("triangle", (labels[i], labels[j], labels[k]))
    return None


def product_label(a, b):
    return f"({a},{b})"


def tensor_metric(a, b):
    """Product space under the max metric; carrier in lexicographic
    (left-major) order."""
    carrier = [product_label(x, y) for x in a.carrier for y in b.carrier]
    raw = np.maximum(
        np.repeat(np.repeat(a.raw, b.n, axis=0), b.n, axis=1),
        np.tile(b.raw, (a.n, a.n)),
    )
    return FinMetricSpace(carrier, raw)


@lru_cache(maxsize=256)
def rank_powers(nx, nv):
    """Big-endian place values for ranking tables: nv**(nx-1-i)."""
    return np.array([nv ** (nx - 1 - i) for i in range(nx)], dtype=np.int64)


@lru_cache(maxsize=128)
def table_matrix(nx, nv):
    """All functions from an nx-element domain to an nv-element codomain,
    one row per table, enumerated lexicographically by value tuple."""
    count = nv**nx
    if count > MAX_TABLE_SPACE:
        raise InputError(
            f"function space {nv}^{nx} = {count} exceeds the enumeration cap"
        )
    ranks = np.arange(count, dtype=np.int64)
    out = (ranks[:, None] // rank_powers(nx, nv)[None, :]) % nv
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def slice_ranks(n1, m1, n2, m2):
    """Slice ranks for a product function space.

    For tables on an (n1*n2)-element domain into an (m1*m2)-element paired
    codomain, returns ``(left, right)`` where ``left[r, j]`` is the rank
    (in the m1^n1 space) of the first-component slice at second-domain
    position j, and ``right[r, i]`` the rank (in m2^n2) of the
    second-component slice at first-domain position i.
    """
    joint = table_matrix(n1 * n2, m1 * m2).reshape(-1, n1, n2)
    left = np.tensordot(joint // m2, rank_powers(n1, m1), axes=([1], [0]))
    right = (joint % m2) @ rank_powers(n2, m2)
    left.setflags(write=False)
    right.setflags(write=False)
    return left, right


class FnTable:
    """A total function between two finite carriers, stored as codomain
    indices in domain order.

    ``rank`` is the table's position in the lexicographic enumeration of
    the whole function space, which fixes every "first witness" order and
    the on-disk encoding.
    """

    __slots__ = ("domain", "codomain", "entries")

    def __init__(self, domain, codomain, entries):
        entries = np.asarray(entries, dtype=np.int64)
        if entries.shape != (domain.n,):
            raise InputError(
                f"table has {entries.shape} entries for a domain of size {domain.n}"
            )
        if entries.size and (entries.min() < 0 or entries.max() >= codomain.n):
            raise InputError("table entry out of codomain range")
        entries = entries.copy()
        entries.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.entries = entries

    @classmethod
    def from_labels(cls, domain, codomain, mapping):
        """Build from ``{domain label: codomain label}``."""
        entries = [codomain.index(mapping[label]) for label in domain.carrier]
        return cls(domain, codomain, entries)

    @classmethod
    def from_rank(cls, domain, codomain, rank):
        powers = rank_powers(domain.n, codomain.n)
        return cls(domain, codomain, (rank // powers) % codomain.n)

    @property
    def rank(self):
        return int(self.entries @ rank_powers(self.domain.n, self.codomain.n))

    def __call__(self, label):
        return self.codomain.carrier[self.entries[self.domain.index(label)]]

    def __eq__(self, other):
        if not isinstance(other, FnTable):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.domain.key, self.codomain.key, self.entries.tobytes()))

    def __repr__(self):
        return f"k={list(map(int, self.entries))}"


def all_tables(domain, codomain):
    """All FnTables domain -> codomain in rank order."""
    mat = table_matrix(domain.n, codomain.n)
    return [FnTable(domain, codomain, row) for row in mat]


def _check_same_signature(f, g, dcod):
    if f.domain != g.domain or f.codomain != g.codomain:
        raise InputError("tables must share domain and codomain")
    if dcod is not None and dcod != f.codomain:
        raise InputError("supplied codomain metric does not match the tables")


def sup_metric(f, g, dcod=None):
    """Largest pointwise codomain distance between two tables."""
    _check_same_signature(f, g, dcod)
    raw = f.codomain.raw[f.entries, g.entries].max()
    return ExtReal.from_raw(raw)


def within_ball(f, eps, dcod=None):
    """All tables at sup-distance <= eps from f, in rank order.

    The result always contains f itself.
    """
    if dcod is not None and dcod != f.codomain:
        raise InputError("supplied codomain metric does not match the table")
    eps_raw = as_extreal(eps).to_raw()
    mat = table_matrix(f.domain.n, f.codomain.n)
    dists = f.codomain.raw[f.entries[None, :], mat].max(axis=1)
    keep = np.flatnonzero(dists <= eps_raw)
    return [FnTable(f.domain, f.codomain, mat[i]) for i in keep]


def value_ball(space, eps):
    """Boolean (n, n) matrix: within-eps relation on a carrier."""
    return space.raw <= as_extreal(eps).to_raw()


def pairwise_table_dists(domain_size, codomain):
    """Raw (K, K) sup-distance matrix over a whole function space."""
    mat = table_matrix(domain_size, codomain.n)
    return pairwise_sup(mat, codomain.raw)


def sup_ball_matrix(domain, codomain, eps):
    """Boolean (K, K) within-eps relation on the whole function space.

    Only materialized for small spaces; the enlargement operator itself
    uses the separable per-position form instead.
    """
    return pairwise_table_dists(domain.n, codomain) <= as_extreal(eps).to_raw()


def ball_dilate(table, domain_size, codomain, eps):
    """OR each row of ``table`` over its sup-metric eps-ball.

    ``table`` is boolean (K, rest) with rows indexed by tables
    domain -> codomain in rank order.  A sup-metric ball is the product
    of per-position codomain balls, so the dilation runs one position at
    a time and never materializes the (K, K) relation.
    """
    from ._kernels import reach

    nv = codomain.n
    k = nv**domain_size
    table = np.asarray(table, dtype=np.bool_)
    if table.shape[0] != k:
        raise InputError(f"expected {k} rows, got {table.shape[0]}")
    nbr = value_ball(codomain, eps)
    if (nbr == np.eye(nv, dtype=np.bool_)).all():
        return table.copy()
    rest = table.shape[1:]
    cur = table.reshape((nv,) * domain_size + rest)
    for axis in range(domain_size):
        moved = np.moveaxis(cur, axis, 0)
        shape = moved.shape
        hit = reach(nbr, moved.reshape(nv, -1))
        cur = np.moveaxis(hit.reshape(shape), 0, axis)
    return cur.reshape(table.shape)
