import numpy as np
import pytest

from agt import _kernels


@pytest.fixture
def restore_backend():
    current = _kernels.active_backend()
    yield
    _kernels.set_backend(current)


def _case(rng, k=64, n=3, m=4):
    tables = rng.integers(0, m, size=(k, n))
    dist = np.abs(np.arange(m)[:, None] - np.arange(m)[None, :]).astype(np.int64)
    adj = rng.random((k, k)) < 0.15
    tab = rng.random((k, 5)) < 0.4
    f0 = rng.integers(0, n, size=2)
    f1 = rng.integers(0, 2, size=(2, m))
    powers = np.array([2, 1], dtype=np.int64)
    return tables, dist, adj, tab, f0, f1, powers


def test_backends_agree(restore_backend, rng):
    for seed in range(5):
        tables, dist, adj, tab, f0, f1, powers = _case(np.random.default_rng(seed))
        results = {}
        for backend in ("numpy", "numba"):
            _kernels.set_backend(backend)
            results[backend] = (
                _kernels.pairwise_sup(tables, dist),
                _kernels.reach(adj, tab),
                _kernels.pull_ranks(tables, f0, f1, powers),
            )
        for a, b in zip(results["numpy"], results["numba"]):
            assert np.array_equal(a, b)


def test_reach_definition(restore_backend, rng):
    adj = rng.random((20, 30)) < 0.2
    tab = rng.random((30, 4)) < 0.3
    for backend in ("numpy", "numba"):
        _kernels.set_backend(backend)
        got = _kernels.reach(adj, tab)
        expected = np.zeros((20, 4), dtype=bool)
        for i in range(20):
            for j in range(30):
                if adj[i, j]:
                    expected[i] |= tab[j]
        assert np.array_equal(got, expected)


def test_pairwise_sup_with_infinities(restore_backend):
    from agt.metric import RAW_INF

    tables = np.array([[0, 1], [1, 0], [1, 1]], dtype=np.int64)
    dist = np.array([[0, RAW_INF], [RAW_INF, 0]], dtype=np.int64)
    for backend in ("numpy", "numba"):
        _kernels.set_backend(backend)
        out = _kernels.pairwise_sup(tables, dist)
        assert out[0, 1] == RAW_INF
        assert out[2, 2] == 0
        assert (out == out.T).all()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _kernels.set_backend("cuda")


def test_empty_tables(restore_backend):
    for backend in ("numpy", "numba"):
        _kernels.set_backend(backend)
        out = _kernels.pairwise_sup(
            np.zeros((0, 2), dtype=np.int64), np.zeros((2, 2), dtype=np.int64)
        )
        assert out.shape == (0, 0)
