"""Two-symbol quantum random access code on a single qudit.

Alice encodes ``(x0, x1)`` as ``X^x0 Z^x1 (|0> + |e_0>) / N`` with
``N = sqrt(2 + 2/sqrt(d))``. Bob measures the computational basis to learn
``x0`` and the Fourier basis to learn ``x1``. Every encoding and question
succeeds with probability ``(1 + 1/sqrt(d)) / 2``.
"""

from __future__ import annotations

import math

import numpy as np

from .classical import classical_success
from .linalg import (
    MAX_DIM,
    check_dim,
    check_symbol,
    computational_basis,
    fourier_basis,
    outcome_probs,
    weyl,
)


def norm2(d):
    return math.sqrt(2.0 + 2.0 / math.sqrt(d))


def encode2(d, x0, x1):
    d = check_dim(d, MAX_DIM)
    x0 = check_symbol(x0, d, "x0")
    x1 = check_symbol(x1, d, "x1")
    base = (computational_basis(d)[0] + fourier_basis(d)[0]) / norm2(d)
    return weyl(d, x0, x1) @ base


def measurement_bases2(d):
    """Bases for the questions ``y = 0`` and ``y = 1``."""
    return computational_basis(d), fourier_basis(d)


def computational_distribution(d, x0, x1):
    """Closed-form outcome distribution of a computational-basis measurement."""
    l = np.arange(d)
    w = np.exp(2j * np.pi * ((x1 * (l - x0)) % d) / d)
    return np.abs((l == x0) + w / math.sqrt(d)) ** 2 / norm2(d) ** 2


def success2_closed(d):
    d = check_dim(d)
    return 0.5 * (1.0 + 1.0 / math.sqrt(d))


def success2_simulated(d):
    """Average and worst-case success over all ``d^2`` encodings and both questions."""
    d = check_dim(d, MAX_DIM)
    bases = measurement_bases2(d)
    values = []
    for x0 in range(d):
        for x1 in range(d):
            psi = encode2(d, x0, x1)
            for y, target in enumerate((x0, x1)):
                values.append(outcome_probs(psi, bases[y])[target])
    return float(np.mean(values)), float(np.min(values))


def advantage2(d):
    """Ratio of quantum to classical success for two symbols."""
    return success2_closed(d) / float(classical_success(2, d))
