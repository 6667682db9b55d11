"""Cyclic Jacobi eigensolver for small dense Hermitian matrices.

The solver works on a whole stack of matrices at once: every rotation is
applied to all matrices in the batch with the same ``(p, q)`` sweep order,
so a seesaw step that needs the top eigenvector of dozens of ``d x d``
operators costs one vectorized pass instead of dozens of Python loops.

Built on top of :func:`eigh` are the matrix functions the rest of the
package needs: fractional powers of positive semidefinite matrices with a
pseudo-inverse cutoff, and the unitary polar factor.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalFailure

JACOBI_TOL = 1e-12
EIG_CUTOFF = 1e-12
MAX_SWEEPS = 64


def eigh(a, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """Eigen-decomposition of Hermitian matrices by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like, shape (..., n, n)
        Hermitian matrix or stack of matrices. Only the Hermitian part is used.
    tol : float
        Sweeps stop once the off-diagonal Frobenius mass of every matrix is
        below ``tol * max(1, ||a||_F)``.
    max_sweeps : int
        Upper bound on full sweeps before :class:`NumericalFailure` is raised.

    Returns
    -------
    w : ndarray, shape (..., n)
        Eigenvalues in ascending order.
    v : ndarray, shape (..., n, n)
        Unitary matrices whose columns are the matching eigenvectors.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError("eigh expects square matrices")
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    A = a.reshape(-1, n, n).copy()
    A = 0.5 * (A + np.conj(np.swapaxes(A, -1, -2)))
    V = np.broadcast_to(np.eye(n, dtype=complex), A.shape).copy()

    scale = np.maximum(1.0, np.linalg.norm(A, axis=(-2, -1)))
    offmask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=-1))
        if np.all(off <= tol * scale):
            break
        for p, q in pairs:
            apq = A[:, p, q]
            mag = np.abs(apq)
            live = mag > 1e-300
            safe = np.where(live, mag, 1.0)
            phase = np.where(live, apq / safe, 1.0)
            app = A[:, p, p].real
            aqq = A[:, q, q].real
            theta = (aqq - app) / (2.0 * safe)
            sgn = np.where(theta >= 0.0, 1.0, -1.0)
            t = sgn / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on columns p, q
            ph = np.conj(phase)
            cp, cq = A[:, :, p].copy(), A[:, :, q].copy()
            A[:, :, p] = c[:, None] * cp - (s * ph)[:, None] * cq
            A[:, :, q] = s[:, None] * cp + (c * ph)[:, None] * cq
            rp, rq = A[:, p, :].copy(), A[:, q, :].copy()
            A[:, p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
            A[:, q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
            A[:, p, q] = 0.0
            A[:, q, p] = 0.0
            vp, vq = V[:, :, p].copy(), V[:, :, q].copy()
            V[:, :, p] = c[:, None] * vp - (s * ph)[:, None] * vq
            V[:, :, q] = s[:, None] * vp + (c * ph)[:, None] * vq
    else:
        raise NumericalFailure(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.real(np.diagonal(A, axis1=-2, axis2=-1))
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    V = np.take_along_axis(V, order[:, None, :], axis=-1)
    return w.reshape(*batch_shape, n), V.reshape(*batch_shape, n, n)


def top_eigenvector(a):
    """Unit eigenvector(s) for the largest eigenvalue of Hermitian ``a``."""
    w, v = eigh(a)
    return w[..., -1], v[..., :, -1]


def psd_power(a, power, cutoff=EIG_CUTOFF):
    """Fractional power of a PSD matrix restricted to its support.

    Eigenvalues below ``cutoff`` are treated as zero, so negative powers act
    as a pseudo-inverse. Returns the power together with the projector onto
    the discarded kernel.
    """
    w, v = eigh(a)
    keep = w > cutoff
    wp = np.where(keep, np.where(keep, w, 1.0) ** power, 0.0)
    vh = np.conj(np.swapaxes(v, -1, -2))
    powered = (v * wp[..., None, :]) @ vh
    kernel = (v * (~keep)[..., None, :]) @ vh
    return powered, kernel


def polar_unitary(g, cutoff=EIG_CUTOFF):
    """Unitary factor ``U`` of the polar decomposition ``g = U P``.

    ``U`` maximizes ``Re tr(g^dagger U)`` over unitaries. Accepts a stack of
    matrices. For rank-deficient ``g`` the partial isometry on the support
    is completed by pairing the kernel of ``g^dagger g`` with the orthogonal
    complement of the range; with eigenvalues in ascending order both
    kernels occupy the leading columns.
    """
    g = np.asarray(g, dtype=complex)
    gh = np.conj(np.swapaxes(g, -1, -2))
    w, v = eigh(gh @ g)
    vh = np.conj(np.swapaxes(v, -1, -2))
    keep = w > cutoff * np.maximum(1.0, w[..., -1:])
    inv_sqrt = np.where(keep, 1.0 / np.sqrt(np.where(keep, w, 1.0)), 0.0)
    u = g @ (v * inv_sqrt[..., None, :]) @ vh
    if not np.all(keep):
        _, vr = eigh(g @ gh)
        u = u + (vr * (~keep)[..., None, :]) @ vh
    return u
