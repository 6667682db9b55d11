"""Seesaw lower bounds on the optimal quantum random access code.

A strategy is one pure state per input string and one ``d``-outcome POVM per
question. The loop alternates two steps, each of which can only raise the
average success:

* state step: with measurements fixed, the best state for string ``x`` is
  the top eigenvector of ``(1/n) sum_y M^y_{x_y}``;
* measurement step: with states fixed, candidate POVMs are proposed per
  question and kept only when they do not lower that question's score.

Every reported value is the objective of a stored, validated strategy, so
it is a genuine lower bound up to the validation tolerances.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .eigen import eigh, polar_unitary, psd_power, top_eigenvector
from .errors import InvalidArgument, NumericalFailure
from .linalg import MAX_DIM, check_dim

log = logging.getLogger(__name__)

HERM_TOL = 1e-10
PSD_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
STATE_NORM_TOL = 1e-10
CONVERGENCE_TOL = 1e-10
POLAR_STEPS = 5
MAX_STRINGS = 4096


def input_strings(n, d):
    """All ``d^n`` strings as an ``(d^n, n)`` array in lexicographic order."""
    return np.array(list(itertools.product(range(d), repeat=n)), dtype=np.int64).reshape(-1, n)


@dataclass
class StrategyQ:
    """States ``states[i]`` for the ``i``-th string and POVMs ``measurements[y, b]``."""

    n: int
    d: int
    states: np.ndarray
    measurements: np.ndarray
    strings: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=complex)
        self.measurements = np.asarray(self.measurements, dtype=complex)
        n, d = self.n, self.d
        if self.states.shape != (d**n, d):
            raise InvalidArgument(f"states must have shape {(d**n, d)}, got {self.states.shape}")
        if self.measurements.shape != (n, d, d, d):
            raise InvalidArgument(
                f"measurements must have shape {(n, d, d, d)}, got {self.measurements.shape}"
            )
        self.strings = input_strings(n, d)

    def selected(self):
        """``M^y_{x_y}`` for every string and question, shape ``(d^n, n, d, d)``."""
        return self.measurements[np.arange(self.n)[None, :], self.strings]

    def validate(self):
        """Raise :class:`InvalidArgument` unless every constraint holds."""
        M = self.measurements
        herm = np.max(np.abs(M - np.conj(np.swapaxes(M, -1, -2))))
        if herm > HERM_TOL:
            raise InvalidArgument(f"POVM element not Hermitian (deviation {herm:.2e})")
        w, _ = eigh(M)
        if w.min() < -PSD_TOL:
            raise InvalidArgument(f"POVM element has eigenvalue {w.min():.2e}")
        completeness = np.max(np.abs(M.sum(axis=1) - np.eye(self.d)))
        if completeness > COMPLETENESS_TOL:
            raise InvalidArgument(f"POVM elements do not sum to identity ({completeness:.2e})")
        norms = np.abs(np.linalg.norm(self.states, axis=1) - 1.0)
        if norms.max() > STATE_NORM_TOL:
            raise InvalidArgument(f"state norm deviates by {norms.max():.2e}")
        return self


def strategy_from_bases(n, d, states, bases):
    """Strategy measuring projectively in ``bases[y]`` (rows are the basis kets)."""
    bases = np.asarray(bases, dtype=complex)
    projectors = np.einsum("ybi,ybj->ybij", bases, np.conj(bases))
    return StrategyQ(n=n, d=d, states=np.asarray(states), measurements=projectors)


def _selected(measurements, strings):
    """``M^y_{x_y}`` for a batch: ``(..., n, d, d, d) -> (..., d^n, n, d, d)``."""
    n = strings.shape[1]
    return measurements[..., np.arange(n)[None, :], strings, :, :]


def _values(states, measurements, strings):
    """``<psi_x| M^y_{x_y} |psi_x>``, shape ``(..., d^n, n)``."""
    sel = _selected(measurements, strings)
    return np.einsum("...xi,...xyij,...xj->...xy", np.conj(states), sel, states).real


def _objectives(states, measurements, strings):
    return _values(states, measurements, strings).mean(axis=(-2, -1))


def objective(s):
    """Average success over uniform strings and questions."""
    return float(_objectives(s.states, s.measurements, s.strings))


def _state_step(states, measurements, strings):
    R = _selected(measurements, strings).mean(axis=-3)
    _, top = top_eigenvector(R)
    old = np.einsum("...xi,...xij,...xj->...x", np.conj(states), R, states).real
    new = np.einsum("...xi,...xij,...xj->...x", np.conj(top), R, top).real
    return np.where((new >= old)[..., None], top, states)


def state_update(s):
    """Replace every state by the top eigenvector of its average effect.

    A state is kept when the eigenvector would not improve it, which makes
    the step non-decreasing even under eigensolver round-off.
    """
    states = _state_step(s.states, s.measurements, s.strings)
    return StrategyQ(n=s.n, d=s.d, states=states, measurements=s.measurements)


def _score_ops(states, strings, d):
    """``S^y_b = sum_{x : x_y = b} |psi_x><psi_x| / (n d^n)``, shape ``(..., n, d, d, d)``."""
    size, n = strings.shape
    hot = (strings[:, :, None] == np.arange(d)).astype(float) / (n * size)
    return np.einsum("xyb,...xi,...xj->...ybij", hot, states, np.conj(states))


def score_operators(s, y):
    return _score_ops(s.states, s.strings, s.d)[y]


def _scores(S, povm):
    return np.einsum("...bij,...bji->...", S, povm).real


def helstrom_povm(S):
    """Optimal two-outcome measurement: projector onto the non-negative part of ``S_0 - S_1``."""
    S = np.asarray(S)
    w, v = eigh(S[..., 0, :, :] - S[..., 1, :, :])
    pos = (v * (w >= 0)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return np.stack([pos, np.eye(S.shape[-1]) - pos], axis=-3)


def square_root_povm(S):
    """Pretty-good measurement ``T^{-1/2} S_b T^{-1/2}``; the kernel of ``T`` goes to outcome 0."""
    S = np.asarray(S)
    T = S.sum(axis=-3)
    inv_sqrt, kernel = psd_power(T, -0.5)
    M = inv_sqrt[..., None, :, :] @ S @ inv_sqrt[..., None, :, :]
    M[..., 0, :, :] += kernel
    return 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))


def polar_ascent_povm(S, povm, steps=POLAR_STEPS):
    """Projective measurement improved by polar-decomposition ascent.

    For fixed ``S`` the score ``sum_b <u_b|S_b|u_b>`` is convex in the basis
    ``U``, so replacing ``U`` by the unitary polar factor of
    ``[S_0 u_0, ..., S_{d-1} u_{d-1}]`` never decreases it. The starting
    basis is the orthonormalized set of top eigenvectors of ``povm``.
    """
    _, tops = top_eigenvector(povm)
    U = polar_unitary(np.swapaxes(tops, -1, -2))
    for _ in range(steps):
        U = polar_unitary(np.einsum("...bij,...jb->...ib", S, U))
    return np.einsum("...ib,...jb->...bij", U, np.conj(U))


def _measurement_step(states, measurements, strings, d, polar_steps=POLAR_STEPS):
    S = _score_ops(states, strings, d)
    best = measurements.copy()
    best_score = _scores(S, best)
    proposals = [helstrom_povm if d == 2 else square_root_povm]
    proposals.append(lambda S_: polar_ascent_povm(S_, measurements, polar_steps))
    for propose in proposals:
        try:
            cand = propose(S)
        except NumericalFailure as exc:
            log.warning("measurement proposal skipped: %s", exc)
            continue
        value = _scores(S, cand)
        take = value >= best_score
        best = np.where(take[..., None, None, None], cand, best)
        best_score = np.where(take, value, best_score)
    return best


def measurement_update(s, polar_steps=POLAR_STEPS):
    """Guarded measurement step applied to every question.

    Candidates are the Helstrom measurement (``d = 2``) or the square-root
    measurement (``d > 2``), and a polar-ascent refinement of the current
    POVM. For each question the best candidate replaces the current POVM
    only if it scores at least as well; a candidate whose construction fails
    numerically is skipped and logged.
    """
    measurements = _measurement_step(s.states, s.measurements, s.strings, s.d, polar_steps)
    return StrategyQ(n=s.n, d=s.d, states=s.states, measurements=measurements)


def random_strategy(n, d, rng):
    """Haar-random states and randomly rotated computational projective measurements."""
    size = d**n
    z = rng.standard_normal((size, d)) + 1j * rng.standard_normal((size, d))
    states = z / np.linalg.norm(z, axis=1, keepdims=True)
    bases = []
    for _ in range(n):
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        q, r = np.linalg.qr(g)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        bases.append(q.T)
    return strategy_from_bases(n, d, states, np.array(bases))


@dataclass
class SeesawReport:
    best: float
    iterations: int
    restarts: int
    trace: list
    seed: int
    restart_objectives: list
    strategy: StrategyQ = field(repr=False)

    def as_dict(self):
        return {
            "best": self.best,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "seed": self.seed,
            "trace": list(self.trace),
            "restart_objectives": list(self.restart_objectives),
        }


def seesaw_run(n, d, restarts=10, max_iters=1000, seed=0, tol=CONVERGENCE_TOL):
    """Best seesaw objective over independent restarts.

    Restart ``k`` draws its starting point from ``numpy.random.default_rng(seed + k)``
    (PCG64). All restarts advance together as one batch; a restart stops
    once an iteration changes its objective by less than ``tol``.
    ``max_iters = 0`` reports the random starting strategies themselves.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    d = check_dim(d, MAX_DIM)
    if restarts < 1:
        raise InvalidArgument(f"restarts must be >= 1, got {restarts}")
    if max_iters < 0:
        raise InvalidArgument(f"max_iters must be >= 0, got {max_iters}")
    if d**n > MAX_STRINGS:
        raise InvalidArgument(f"{d}^{n} input strings exceeds {MAX_STRINGS}")

    starts = [random_strategy(n, d, np.random.default_rng(seed + k)) for k in range(restarts)]
    strings = starts[0].strings
    states = np.stack([s.states for s in starts])
    meas = np.stack([s.measurements for s in starts])
    traces = [[v] for v in _objectives(states, meas, strings).tolist()]
    active = np.arange(restarts)

    for _ in range(max_iters):
        if active.size == 0:
            break
        st = _state_step(states[active], meas[active], strings)
        ms = _measurement_step(st, meas[active], strings, d)
        states[active], meas[active] = st, ms
        values = _objectives(st, ms, strings)
        still = []
        for k, v in zip(active.tolist(), values.tolist()):
            traces[k].append(v)
            if abs(traces[k][-1] - traces[k][-2]) >= tol:
                still.append(k)
        active = np.array(still, dtype=int)

    finals = [t[-1] for t in traces]
    k = int(np.argmax(finals))
    strategy = StrategyQ(n=n, d=d, states=states[k], measurements=meas[k]).validate()
    return SeesawReport(
        best=objective(strategy),
        iterations=len(traces[k]) - 1,
        restarts=restarts,
        trace=traces[k],
        seed=seed,
        restart_objectives=finals,
        strategy=strategy,
    )
