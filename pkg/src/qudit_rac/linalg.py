"""Qudit kernel: bases, Weyl operators and outcome probabilities.

Kets are 1-D complex arrays. A basis is a ``(d, d)`` complex array whose
*rows* are the basis kets, so ``basis[l]`` is ``|b_l>``. Operators are plain
``(d, d)`` complex arrays.

Phase convention: ``omega = exp(+2 pi i / d)``. The half-integer exponent of
the third basis is evaluated as ``exp(+pi i k^2 (1 + delta_d) / d)``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, InvalidArgument, InvalidDimension

ORTHO_TOL = 1e-10
UNITARY_TOL = 1e-12
NORM_TOL = 1e-12
MAX_DIM = 64


def check_dim(d, max_dim=None):
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise InvalidDimension(f"dimension must be an integer >= 2, got {d!r}")
    if max_dim is not None and d > max_dim:
        raise InvalidDimension(f"dimension {d} exceeds the supported maximum {max_dim}")
    return int(d)


def check_symbol(value, d, name="symbol"):
    if isinstance(value, bool) or int(value) != value or not 0 <= value < d:
        raise InvalidArgument(f"{name} must lie in 0..{d - 1}, got {value!r}")
    return int(value)


def is_odd_prime(d):
    if d < 3 or d % 2 == 0:
        return False
    return all(d % p for p in range(3, math.isqrt(d) + 1, 2))


def delta(d):
    """1 when ``d`` is an odd prime, else 0."""
    return 1 if is_odd_prime(d) else 0


def omega(d):
    return np.exp(2j * np.pi / d)


def computational_basis(d):
    d = check_dim(d)
    return np.eye(d, dtype=complex)


def fourier_basis(d):
    """Rows ``|e_l>`` with amplitudes ``omega^{kl} / sqrt(d)``."""
    d = check_dim(d)
    k = np.arange(d)
    # reduce kl mod d before exponentiating to keep phases accurate at large d
    return np.exp(2j * np.pi * (np.outer(k, k) % d) / d) / math.sqrt(d)


def third_mub(d):
    """Rows ``|f_l>`` with amplitudes ``omega^{kl + k^2 (1 + delta_d) / 2} / sqrt(d)``.

    Unbiased with respect to the Fourier basis for prime and even ``d``; for
    odd composite ``d`` it is not, which :func:`mub_overlap_check` reports.
    """
    d = check_dim(d)
    k = np.arange(d)
    c = 1 + delta(d)
    # exponent in units of pi i / d; 2kl is reduced mod 2d, k^2 c is kept exact
    quad = (k * k * c) % (2 * d)
    expo = (2 * np.outer(k, k) + quad[None, :]) % (2 * d)
    return np.exp(1j * np.pi * expo / d) / math.sqrt(d)


def weyl_x(d):
    """Cyclic shift ``X|k> = |k+1 mod d>``."""
    d = check_dim(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def weyl_z(d):
    """Clock ``Z|k> = omega^k |k>``."""
    d = check_dim(d)
    k = np.arange(d)
    return np.diag(np.exp(2j * np.pi * k / d))


def weyl(d, alpha, beta):
    """``X^alpha Z^beta`` with exponents reduced modulo ``d``."""
    d = check_dim(d)
    return np.linalg.matrix_power(weyl_x(d), alpha % d) @ np.linalg.matrix_power(
        weyl_z(d), beta % d
    )


def normalize(ket):
    ket = np.asarray(ket, dtype=complex)
    nrm = np.linalg.norm(ket)
    if nrm <= NORM_TOL:
        raise InvalidArgument("cannot normalize a zero vector")
    return ket / nrm


def _check_pair(state, basis):
    state = np.asarray(state, dtype=complex)
    basis = np.asarray(basis, dtype=complex)
    if state.ndim != 1 or basis.shape != (state.shape[0], state.shape[0]):
        raise DimensionMismatch(
            f"state of shape {state.shape} does not match basis of shape {basis.shape}"
        )
    return state, basis


def outcome_probs(state, basis):
    """Born probabilities ``|<b_l|state>|^2`` for every outcome ``l``."""
    state, basis = _check_pair(state, basis)
    return np.abs(np.conj(basis) @ state) ** 2


def outcome_prob(state, basis, l):
    state, basis = _check_pair(state, basis)
    l = check_symbol(l, basis.shape[0], "outcome")
    return float(abs(np.vdot(basis[l], state)) ** 2)


def mub_overlap_check(b1, b2):
    """Largest deviation of ``|<b1_i|b2_j>|^2`` from ``1/d``."""
    b1 = np.asarray(b1, dtype=complex)
    b2 = np.asarray(b2, dtype=complex)
    if b1.shape != b2.shape or b1.ndim != 2 or b1.shape[0] != b1.shape[1]:
        raise DimensionMismatch(f"bases of shape {b1.shape} and {b2.shape} differ")
    d = b1.shape[0]
    overlaps = np.abs(np.conj(b1) @ b2.T) ** 2
    return float(np.max(np.abs(overlaps - 1.0 / d)))


def orthonormality_error(basis):
    basis = np.asarray(basis, dtype=complex)
    gram = np.conj(basis) @ basis.T
    return float(np.max(np.abs(gram - np.eye(basis.shape[0]))))


def fidelity(phi, psi):
    """Global-phase-insensitive overlap ``|<phi|psi>|^2`` of unit kets."""
    return float(abs(np.vdot(phi, psi)) ** 2)
