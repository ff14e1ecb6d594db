import numpy as np
import pytest
from hypothesis import given, strategies as st

from su11ep import _accel, _kernels

BACKENDS = [True, False] if _accel.NUMBA_AVAILABLE else [False]


def random_complex(n, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@pytest.mark.parametrize("use_numba", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 3, 7, 40])
def test_hessenberg_is_unitary_similarity(use_numba, n):
    a = random_complex(n, n)
    h, q = _kernels.kernels(use_numba)["hessenberg"](a.copy())
    assert np.allclose(q.conj().T @ q, np.eye(n), atol=1e-13)
    assert np.allclose(q @ h @ q.conj().T, a, atol=1e-12)
    assert np.all(np.tril(h, -2) == 0)


@pytest.mark.parametrize("use_numba", BACKENDS)
@pytest.mark.parametrize("n", [2, 5, 40, 100])
def test_schur_matches_lapack_eigenvalues(use_numba, n):
    a = random_complex(n, 100 + n)
    ks = _kernels.kernels(use_numba)
    h, q = ks["hessenberg"](a.copy())
    assert ks["schur"](h, q, 30 * n)
    assert np.allclose(np.tril(h, -1), 0, atol=0)
    assert np.allclose(q @ h @ q.conj().T, a, atol=1e-11)
    mine = np.sort_complex(np.diag(h))
    ref = np.sort_complex(np.linalg.eigvals(a))
    assert np.max(np.abs(mine - ref)) < 1e-11


@pytest.mark.parametrize("use_numba", BACKENDS)
def test_triangular_eigvecs(use_numba):
    rng = np.random.default_rng(3)
    t = np.triu(rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12)))
    y = _kernels.kernels(use_numba)["triangular_eigvecs"](t)
    assert np.allclose(t @ y, y * np.diag(t), atol=1e-10)
    assert np.all(np.tril(y, -1) == 0)


def test_backends_agree():
    if not _accel.NUMBA_AVAILABLE:
        pytest.skip("numba not installed")
    a = random_complex(30, 7)
    out = []
    for flag in (True, False):
        ks = _kernels.kernels(flag)
        h, q = ks["hessenberg"](a.copy())
        ks["schur"](h, q, 900)
        out.append(np.sort_complex(np.diag(h)))
    assert np.max(np.abs(out[0] - out[1])) < 1e-12


@pytest.mark.parametrize("use_numba", BACKENDS)
@given(dt=st.floats(1e-4, 0.1), steps=st.integers(1, 50))
def test_rk4_matches_degree_four_taylor_step(use_numba, dt, steps):
    a = np.array([[-0.6j, 1.0], [1.0, 0.6j]])
    y0 = np.array([1.0 + 0.5j, -0.25j])
    out = _kernels.kernels(use_numba)["rk4_linear"](a, y0, dt, steps)
    m = dt * a
    step = np.eye(2) + m + m @ m / 2 + m @ m @ m / 6 + m @ m @ m @ m / 24
    ref = np.linalg.matrix_power(step, steps) @ y0
    assert np.allclose(out[-1], ref, rtol=1e-12, atol=1e-14)
    assert np.array_equal(out[0], y0)


def test_env_flag_parsing(monkeypatch):
    for value, expected in [("", False), ("0", False), ("no", False), ("1", True), ("yes", True)]:
        monkeypatch.setenv(_accel.ENV_FLAG, value)
        assert _accel._flag_set() is expected
