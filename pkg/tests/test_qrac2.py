import math

import numpy as np
import pytest

from qudit_rac.errors import InvalidArgument, InvalidDimension
from qudit_rac.linalg import computational_basis, fidelity, fourier_basis, outcome_probs, weyl
from qudit_rac.qrac2 import (
    advantage2,
    computational_distribution,
    encode2,
    norm2,
    success2_closed,
    success2_simulated,
)


def test_qubit_code():
    psi = encode2(2, 0, 0)
    c = math.cos(math.pi / 8)
    s = math.sin(math.pi / 8)
    np.testing.assert_allclose(psi, [c, s], atol=1e-15)
    assert success2_closed(2) == pytest.approx(math.cos(math.pi / 8) ** 2, abs=1e-15)


def test_ququart_amplitudes():
    psi = encode2(4, 0, 0)
    np.testing.assert_allclose(psi, [math.sqrt(3) / 2] + [1 / (2 * math.sqrt(3))] * 3, atol=1e-12)


def test_norm():
    for d in range(2, 10):
        raw = computational_basis(d)[0] + fourier_basis(d)[0]
        assert np.linalg.norm(raw) == pytest.approx(norm2(d), abs=1e-14)


@pytest.mark.parametrize("d", range(2, 9))
def test_distribution_closed_form(d):
    for x0 in range(d):
        for x1 in range(d):
            direct = outcome_probs(encode2(d, x0, x1), computational_basis(d))
            np.testing.assert_allclose(computational_distribution(d, x0, x1), direct, atol=1e-13)
            assert direct.sum() == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("d", range(2, 33))
def test_every_encoding_succeeds_equally(d):
    avg, worst = success2_simulated(d)
    assert abs(avg - success2_closed(d)) < 1e-10
    assert abs(worst - avg) < 1e-10


def test_advantage_peaks_at_six():
    ratios = [advantage2(d) for d in range(2, 40)]
    assert int(np.argmax(ratios)) + 2 == 6
    assert advantage2(2) == pytest.approx(1.13807, abs=1e-5)
    assert advantage2(6) == pytest.approx(1.20707, abs=1e-5)


def test_encoding_is_weyl_orbit_up_to_phase():
    d = 5
    base = encode2(d, 0, 0)
    for x0 in range(d):
        for x1 in range(d):
            assert fidelity(encode2(d, x0, x1), weyl(d, x0, x1) @ base) == pytest.approx(1.0, abs=1e-12)


def test_distinct_encodings():
    d = 4
    states = [encode2(d, x0, x1) for x0 in range(d) for x1 in range(d)]
    overlaps = [fidelity(states[i], states[j]) for i in range(len(states)) for j in range(i)]
    assert max(overlaps) < 1 - 1e-9


def test_input_validation():
    with pytest.raises(InvalidArgument):
        encode2(3, 3, 0)
    with pytest.raises(InvalidDimension):
        encode2(1, 0, 0)
