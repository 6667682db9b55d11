import numpy as np
import pytest

from qudit_rac.eigen import eigh, polar_unitary, psd_power, top_eigenvector


def random_hermitian(rng, shape):
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z + np.conj(np.swapaxes(z, -1, -2))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 16, 64])
def test_matches_lapack(n):
    rng = np.random.default_rng(n)
    H = random_hermitian(rng, (3, n, n))
    w, v = eigh(H)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(H), atol=1e-11 * n)
    np.testing.assert_allclose(H @ v, v * w[..., None, :], atol=1e-10 * n)
    eye = np.eye(n)
    np.testing.assert_allclose(np.conj(np.swapaxes(v, -1, -2)) @ v, np.broadcast_to(eye, v.shape), atol=1e-12 * n)


def test_already_diagonal_and_degenerate():
    w, v = eigh(np.diag([2.0, 1.0, 1.0]))
    assert w.tolist() == [1.0, 1.0, 2.0]
    assert np.allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])


def test_real_symmetric_input():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    w, _ = eigh(a)
    np.testing.assert_allclose(w, [1.0, 3.0], atol=1e-14)


def test_top_eigenvector_batch():
    rng = np.random.default_rng(1)
    H = random_hermitian(rng, (5, 4, 4))
    lam, vec = top_eigenvector(H)
    np.testing.assert_allclose(lam, np.linalg.eigvalsh(H)[:, -1], atol=1e-11)
    np.testing.assert_allclose(np.linalg.norm(vec, axis=1), 1.0, atol=1e-13)


def test_psd_power_inverse_sqrt_and_kernel():
    rng = np.random.default_rng(2)
    g = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    T = g @ np.conj(g.T)  # rank 2
    inv_sqrt, kernel = psd_power(T, -0.5)
    support = inv_sqrt @ T @ inv_sqrt
    np.testing.assert_allclose(support + kernel, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(kernel @ kernel, kernel, atol=1e-10)


def test_polar_matches_svd():
    rng = np.random.default_rng(3)
    g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    W, _, Vh = np.linalg.svd(g)
    np.testing.assert_allclose(polar_unitary(g), W @ Vh, atol=1e-11)


def test_polar_rank_deficient_is_unitary():
    rng = np.random.default_rng(4)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    g[:, 1] = 0
    g[:, 3] = 0
    u = polar_unitary(g)
    np.testing.assert_allclose(np.conj(u.T) @ u, np.eye(4), atol=1e-10)
    # still maximizes Re tr(g^H U): equals the nuclear norm
    assert np.isclose(np.trace(np.conj(g.T) @ u).real, np.linalg.svd(g, compute_uv=False).sum())
