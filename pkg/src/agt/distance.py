"""A pseudometric on selection functions over a common object: the least
enlargement radius at which each function contains the other."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .metric import INF, RAW_INF, ExtReal, as_extreal, ball_dilate
from .selection import SelectionFunction, approximate, nash_product, sel_leq


@dataclass(frozen=True)
class GameDistance:
    """A distance value; ``witnessed`` records whether some finite radius
    attained it (False means the value is infinity)."""

    value: ExtReal
    witnessed: bool

    def __repr__(self):
        return f"GameDistance({self.value}, witnessed={self.witnessed})"


def distance_candidates(space):
    """Ascending finite radii that can change an enlargement ball: the
    realized values of the utility metric."""
    vals = sorted({int(v) for v in space.raw.reshape(-1) if v < RAW_INF})
    return [ExtReal(v) for v in vals]


def sel_distance(s, t):
    """Least radius with mutual containment under enlargement.

    On a finite utility space only the realized metric values can matter,
    so the infimum is attained whenever it is finite.
    """
    if s.obj != t.obj:
        raise InputError("selection functions live over different objects")
    for eps in distance_candidates(s.obj.bwd):
        if (
            sel_leq(s, approximate(t, eps)) is None
            and sel_leq(t, approximate(s, eps)) is None
        ):
            return GameDistance(eps, witnessed=True)
    return GameDistance(INF, witnessed=False)


def distance_matrix(sels):
    """All pairwise distances within a list of selection functions over a
    common object, as a raw int64 matrix (RAW_INF for infinity)."""
    if not sels:
        return np.zeros((0, 0), dtype=np.int64)
    obj = sels[0].obj
    if any(s.obj != obj for s in sels):
        raise InputError("selection functions live over different objects")
    n = len(sels)
    flat = np.stack([s.table.reshape(-1) for s in sels])  # (n, K*nx)
    out = np.full((n, n), RAW_INF, dtype=np.int64)
    remaining = np.ones((n, n), dtype=np.bool_)
    stacked = np.stack([s.table for s in sels], axis=2)  # (K, nx, n)
    k = stacked.shape[0]
    for eps in distance_candidates(obj.bwd):
        grown = ball_dilate(stacked.reshape(k, -1), obj.fwd.n, obj.bwd, eps)
        grown = grown.reshape(k, obj.fwd.n, n)
        gflat = grown.transpose(2, 0, 1).reshape(n, -1)
        # contained[i, j]: sels[i] <= enlarged sels[j]
        contained = (flat.astype(np.int64) @ (~gflat).astype(np.int64).T) == 0
        mutual = contained & contained.T & remaining
        out[mutual] = eps.to_raw()
        remaining &= ~mutual
        if not remaining.any():
            break
    return out


@dataclass
class MetricScale:
    """Coverage knobs for the pseudometric law checker."""

    max_x: int = 2
    grid: int = 2
    eps_values: tuple = (0, 1)
    quad_cap: int = 2_000_000
    samples: int = 20_000
    seed: int = 0


@dataclass
class MetricPropsReport:
    ok: bool
    violations: list = field(default_factory=list)
    zero_distance_pairs: list = field(default_factory=list)
    checked: int = 0
    sampled_blocks: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def _paired_within(lhs, rhs, obj, eps):
    """Row-paired containment: lhs[i] <= enlarge(rhs[i], eps) for stacks
    of selection tables (m, K, nx) over obj."""
    m, k, nx = lhs.shape
    grown = ball_dilate(
        rhs.transpose(1, 0, 2).reshape(k, -1), obj.fwd.n, obj.bwd, eps
    ).reshape(k, m, nx)
    return ~(lhs & ~grown.transpose(1, 0, 2)).any(axis=(1, 2))


def _mutual_within(tensors, obj, eps):
    """Boolean (P, P) matrix of mutual containment at radius eps for a
    stack of selection tables (P, K, nx) over obj."""
    p, k, nx = tensors.shape
    flat = tensors.reshape(p, -1)
    grown = ball_dilate(
        tensors.transpose(1, 2, 0).reshape(k, -1), obj.fwd.n, obj.bwd, eps
    )
    gflat = grown.reshape(k, nx, p).transpose(2, 0, 1).reshape(p, -1)
    contained = (flat.astype(np.float32) @ (~gflat).astype(np.float32).T) == 0
    return contained & contained.T


def check_metric_props(scale=None):
    """Exhaustively verify the pseudometric laws at desk scale.

    Checked per object: symmetry, zero self-distance, the triangle
    inequality, and the enlargement bound d(s, enlarge(s, eps)) <= eps.
    Checked per object pair: the substitution bound for Nash products.
    Blocks whose quadruple space exceeds ``quad_cap`` are covered by a
    seeded sample instead and reported as such.  Distinct functions at
    distance zero are searched for and recorded, never asserted.
    """
    from .generators import all_selection_functions, grid_object

    scale = scale or MetricScale()
    rng = np.random.default_rng(scale.seed)
    report = MetricPropsReport(ok=True)
    objects = [
        grid_object(nx, scale.grid) for nx in range(1, scale.max_x + 1)
    ]
    pools = {}
    mats = {}
    for obj in objects:
        pool = all_selection_functions(obj)
        pools[obj.key] = pool
        mat = distance_matrix(pool)
        mats[obj.key] = mat
        n = len(pool)
        report.checked += n * n
        if not np.array_equal(mat, mat.T):
            report.ok = False
            report.violations.append(f"symmetry broken at |X|={obj.fwd.n}")
        if (np.diag(mat) != 0).any():
            report.ok = False
            report.violations.append(f"nonzero self-distance at |X|={obj.fwd.n}")
        zero_off = np.argwhere((mat == 0) & ~np.eye(n, dtype=bool))
        for i, j in zero_off[:4]:
            report.zero_distance_pairs.append((obj.fwd.n, int(i), int(j)))
        # triangle, chunked over the first index to bound memory
        for i in range(n):
            left = mat[i][:, None]
            summed = np.where(
                (left >= RAW_INF) | (mat >= RAW_INF), RAW_INF, left + mat
            )
            if (mat[i][None, :] > summed).any():
                t, u = np.argwhere(mat[i][None, :] > summed)[0]
                report.ok = False
                report.violations.append(
                    f"triangle broken at |X|={obj.fwd.n}: ({i},{t},{u})"
                )
                break
        # enlargement bound
        for eps in scale.eps_values:
            eps = as_extreal(eps)
            for idx, s in enumerate(pool):
                d = sel_distance(s, approximate(s, eps))
                if not d.value <= eps:
                    report.ok = False
                    report.violations.append(
                        f"enlargement bound broken at |X|={obj.fwd.n}, "
                        f"eps={eps}, sel#{idx}"
                    )
                    break
    # substitution bound over object pairs
    for obj_a in objects:
        for obj_b in objects:
            pool_a, pool_b = pools[obj_a.key], pools[obj_b.key]
            mat_a, mat_b = mats[obj_a.key], mats[obj_b.key]
            n_a, n_b = len(pool_a), len(pool_b)
            joint_obj = nash_product(pool_a[0], pool_b[0]).obj
            for eps in scale.eps_values:
                eps = as_extreal(eps)
                pairs_a = np.argwhere(mat_a <= eps.to_raw())
                pairs_b = np.argwhere(mat_b <= eps.to_raw())
                total = len(pairs_a) * len(pairs_b)
                if total <= scale.quad_cap and n_a * n_b <= 4096:
                    # exhaustive: one mutual-containment matrix over all
                    # product selections, then pure index lookups
                    tensors = np.stack(
                        [
                            nash_product(sa, sb).table
                            for sa in pool_a
                            for sb in pool_b
                        ]
                    )
                    mutual = _mutual_within(tensors, joint_obj, eps)
                    rows = (pairs_a[:, 0][:, None] * n_b + pairs_b[:, 0][None, :]).ravel()
                    cols = (pairs_a[:, 1][:, None] * n_b + pairs_b[:, 1][None, :]).ravel()
                    bad = np.flatnonzero(~mutual[rows, cols])
                    report.checked += total
                    if bad.size:
                        qa, qb = divmod(int(bad[0]), len(pairs_b))
                        report.ok = False
                        report.violations.append(
                            "substitution bound broken: "
                            f"|X|=({obj_a.fwd.n},{obj_b.fwd.n}) eps={eps} "
                            f"pairs=({pairs_a[qa]},{pairs_b[qb]})"
                        )
                else:
                    if total <= scale.quad_cap:
                        sel_a = np.repeat(pairs_a, len(pairs_b), axis=0)
                        sel_b = np.tile(pairs_b, (len(pairs_a), 1))
                    else:
                        sel_a = pairs_a[rng.integers(0, len(pairs_a), scale.samples)]
                        sel_b = pairs_b[rng.integers(0, len(pairs_b), scale.samples)]
                        report.sampled_blocks.append(
                            f"|X|=({obj_a.fwd.n},{obj_b.fwd.n}) eps={eps}: "
                            f"{total} quadruples sampled down to {scale.samples}"
                        )
                    cache = {}

                    def tensor_table(ia, ib):
                        key = (int(ia), int(ib))
                        if key not in cache:
                            cache[key] = nash_product(
                                pool_a[key[0]], pool_b[key[1]]
                            ).table
                        return cache[key]

                    chunk = 4096
                    for lo in range(0, len(sel_a), chunk):
                        quads = list(
                            zip(sel_a[lo : lo + chunk], sel_b[lo : lo + chunk])
                        )
                        lhs = np.stack(
                            [tensor_table(ia, ib) for (ia, _), (ib, _) in quads]
                        )
                        rhs = np.stack(
                            [tensor_table(ja, jb) for (_, ja), (_, jb) in quads]
                        )
                        bad = ~(
                            _paired_within(lhs, rhs, joint_obj, eps)
                            & _paired_within(rhs, lhs, joint_obj, eps)
                        )
                        report.checked += len(quads)
                        if bad.any():
                            q = int(np.flatnonzero(bad)[0])
                            report.ok = False
                            report.violations.append(
                                "substitution bound broken: "
                                f"|X|=({obj_a.fwd.n},{obj_b.fwd.n}) eps={eps} "
                                f"pairs=({quads[q][0]},{quads[q][1]})"
                            )
                            break
    if not report.zero_distance_pairs:
        report.notes.append(
            "no distinct pair at distance zero exists at this scale: a zero "
            "distance forces mutual containment at radius zero, hence equality"
        )
    return report
