"""Hot integer-array kernels with a numba fast path and a pure-numpy fallback.

Everything downstream funnels its inner loops through three primitives:

* ``pairwise_sup`` -- all-pairs sup-distance between utility tables,
* ``reach``        -- one boolean relation step (the epsilon-enlargement),
* ``pull_ranks``   -- re-rank utility tables pulled back through a lens.

Backend selection: the ``AGT_KERNELS`` environment variable may be set to
``numba`` or ``numpy``; unset (or ``auto``) tries numba and silently falls
back to numpy when it is unavailable.  ``set_backend`` switches at runtime,
which the benchmark and the cross-check tests use to compare both paths.
"""

from __future__ import annotations

import os

import numpy as np

_BACKENDS = ("numba", "numpy")
_active = None


def _numpy_pairwise_sup(tables, dist):
    # out[i, j] = max_p dist[tables[i, p], tables[j, p]]
    k = tables.shape[0]
    out = np.empty((k, k), dtype=np.int64)
    # row-chunked to keep the (chunk, k, n) broadcast in cache
    chunk = max(1, (1 << 22) // max(1, k * tables.shape[1]))
    for lo in range(0, k, chunk):
        hi = min(k, lo + chunk)
        out[lo:hi] = dist[tables[lo:hi, None, :], tables[None, :, :]].max(axis=2)
    return out


def _numpy_reach(adj, tab):
    # out[i, r] = any_j adj[i, j] and tab[j, r]
    return (adj.astype(np.float32) @ tab.astype(np.float32)) > 0.0


def _numpy_pull_ranks(tables, f0, f1, powers):
    # out[t] = sum_x f1[x, tables[t, f0[x]]] * powers[x]
    nx = f0.shape[0]
    gathered = f1[np.arange(nx)[None, :], tables[:, f0]]
    return gathered @ powers


_NUMPY_IMPL = {
    "pairwise_sup": _numpy_pairwise_sup,
    "reach": _numpy_reach,
    "pull_ranks": _numpy_pull_ranks,
}


def _build_numba_impl():
    from numba import njit

    @njit(cache=True)
    def nb_pairwise_sup(tables, dist):
        k, n = tables.shape
        out = np.empty((k, k), dtype=np.int64)
        for i in range(k):
            out[i, i] = 0
            for j in range(i + 1, k):
                best = np.int64(0)
                for p in range(n):
                    d = dist[tables[i, p], tables[j, p]]
                    if d > best:
                        best = d
                out[i, j] = best
                out[j, i] = best
        return out

    @njit(cache=True)
    def nb_reach_packed(adj, packed):
        # rows of tab are packed into uint64 words; OR-in whole words
        m_out, m_in = adj.shape
        w = packed.shape[1]
        out = np.zeros((m_out, w), dtype=np.uint64)
        for i in range(m_out):
            for j in range(m_in):
                if adj[i, j]:
                    for k in range(w):
                        out[i, k] |= packed[j, k]
        return out

    def nb_reach(adj, tab):
        rest = tab.shape[1]
        packed8 = np.packbits(tab, axis=1)
        pad = (-packed8.shape[1]) % 8
        if pad:
            packed8 = np.pad(packed8, ((0, 0), (0, pad)))
        packed = np.ascontiguousarray(packed8).view(np.uint64)
        out = nb_reach_packed(adj, packed)
        bits = np.unpackbits(out.view(np.uint8), axis=1, count=rest)
        return bits.astype(np.bool_)

    @njit(cache=True)
    def nb_pull_ranks(tables, f0, f1, powers):
        k = tables.shape[0]
        nx = f0.shape[0]
        out = np.empty(k, dtype=np.int64)
        for t in range(k):
            acc = np.int64(0)
            for x in range(nx):
                acc += f1[x, tables[t, f0[x]]] * powers[x]
            out[t] = acc
        return out

    return {
        "pairwise_sup": nb_pairwise_sup,
        "reach": nb_reach,
        "pull_ranks": nb_pull_ranks,
    }


def set_backend(name):
    """Select the kernel backend (``numba`` or ``numpy``).  Returns the
    name actually in effect."""
    global _active
    if name in (None, "", "auto"):
        try:
            _active = ("numba", _build_numba_impl())
        except ImportError:
            _active = ("numpy", _NUMPY_IMPL)
        return _active[0]
    if name == "numpy":
        _active = ("numpy", _NUMPY_IMPL)
    elif name == "numba":
        _active = ("numba", _build_numba_impl())
    else:
        raise ValueError(f"unknown kernel backend {name!r}; expected one of {_BACKENDS}")
    return _active[0]


def active_backend():
    return _active[0]


set_backend(os.environ.get("AGT_KERNELS", "auto"))


def pairwise_sup(tables, dist):
    """All-pairs sup-distance matrix between value tables.

    ``tables`` is (K, n) of codomain indices, ``dist`` the (m, m) raw
    codomain distance table; returns (K, K) raw distances.
    """
    tables = np.ascontiguousarray(tables, dtype=np.int64)
    dist = np.ascontiguousarray(dist, dtype=np.int64)
    if tables.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return _active[1]["pairwise_sup"](tables, dist)


def reach(adj, tab):
    """Boolean relation step: out[i, r] iff some j has adj[i, j] and tab[j, r]."""
    adj = np.ascontiguousarray(adj, dtype=np.bool_)
    tab = np.ascontiguousarray(tab, dtype=np.bool_)
    return _active[1]["reach"](adj, tab)


def pull_ranks(tables, f0, f1, powers):
    """Rank of each table pulled back through a lens.

    For target tables ``tables`` (K, nx') and a lens with forward map
    ``f0`` (nx,) and backward table ``f1`` (nx, nv'), the pulled table at
    row t is x -> f1[x, tables[t, f0[x]]]; its rank is the big-endian
    mixed-radix number with place values ``powers``.
    """
    tables = np.ascontiguousarray(tables, dtype=np.int64)
    f0 = np.ascontiguousarray(f0, dtype=np.int64)
    f1 = np.ascontiguousarray(f1, dtype=np.int64)
    powers = np.ascontiguousarray(powers, dtype=np.int64)
    return _active[1]["pull_ranks"](tables, f0, f1, powers)
