"""Three-symbol quantum random access code on a single qudit.

Bob measures the computational basis, the Fourier basis ``{|e_l>}`` or the
third basis ``{|f_l>}`` depending on which of ``x0, x1, x2`` he wants.
Alice's ``d`` base states are

    |psi_00a> = (|0> + (r + it)|e_0> + (r - it)|f_a>) / N

which succeed equally on the Fourier and third-basis questions for every
``(r, t)``. Requiring the computational question to succeed equally as well
gives a quadratic in ``t``; the remaining free parameter ``r`` is optimized
numerically. All ``d^3`` encodings come from the base states by Weyl
operators ``X^x0 Z^x1`` and a relabeling of the third symbol.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .classical import classical_success
from .errors import Infeasible, InvalidArgument
from .linalg import (
    MAX_DIM,
    check_dim,
    check_symbol,
    computational_basis,
    delta,
    fourier_basis,
    mub_overlap_check,
    outcome_probs,
    third_mub,
    weyl,
)

R_MIN, R_MAX = -3.0, 3.0
R_STEP = 1e-3
R_TOL = 1e-10
LINEAR_A_TOL = 1e-14
NORM_SQ_TOL = 1e-12

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def xi(d, a):
    """Overlap ``<e_0|f_a>``: ``(1/d) sum_k omega^{ak + k^2 (1 + delta_d) / 2}``."""
    d = check_dim(d)
    a = check_symbol(a, d, "a")
    k = np.arange(d)
    expo = (2 * a * k + k * k * (1 + delta(d))) % (2 * d)
    return complex(np.sum(np.exp(1j * np.pi * expo / d)) / d)


def normalization_sq(d, a, r, t):
    """Squared norm of the unnormalized ansatz vector, from its closed form."""
    x = xi(d, a)
    s = 1.0 / math.sqrt(d)
    return 1 + 4 * r * s + 2 * r * r + 2 * t * t + 2 * x.real * (r * r - t * t) + 4 * r * t * x.imag


def raw_base_vector(d, a, r, t):
    return (
        computational_basis(d)[0]
        + complex(r, t) * fourier_basis(d)[0]
        + complex(r, -t) * third_mub(d)[a]
    )


def base_state(d, a, r, t):
    d = check_dim(d, MAX_DIM)
    a = check_symbol(a, d, "a")
    raw = raw_base_vector(d, a, r, t)
    n2 = float(np.vdot(raw, raw).real)
    if n2 <= NORM_SQ_TOL:
        raise InvalidArgument(f"degenerate normalization N^2 = {n2:.3g} at r={r}, t={t}")
    return raw / math.sqrt(n2)


def quadratic_coeffs(d, a, r):
    """Coefficients of ``A t^2 + B t + C = 0`` equating the computational and Fourier successes."""
    x = xi(d, a)
    s = 1.0 / math.sqrt(d)
    mod2 = abs(x) ** 2
    A = 1 + mod2 - 2 * x.real
    B = 2 * x.imag * (2 * r + s)
    C = r * r * (mod2 + 2 * x.real + 1 - 4.0 / d) + 2 * r * s * (x.real - 1) + 1.0 / d - 1
    return A, B, C


def t_solutions(d, a, r):
    """Real roots ``(t_+, t_-)`` of the constraint quadratic, possibly empty.

    Falls back to the linear root when ``A`` vanishes, which can only happen
    when the Fourier and third bases fail to be unbiased.
    """
    A, B, C = quadratic_coeffs(d, a, r)
    if abs(A) < LINEAR_A_TOL:
        if abs(B) < LINEAR_A_TOL:
            raise Infeasible(f"constraint degenerates at d={d}, a={a}, r={r}")
        return (-C / B,)
    disc = B * B - 4 * A * C
    if disc < 0:
        return ()
    root = math.sqrt(disc)
    return ((-B + root) / (2 * A), (-B - root) / (2 * A))


def success_objective(d, a, r, t):
    """Computational-question success of the base state, via the closed form."""
    return (1 + 2 * r / math.sqrt(d)) ** 2 / normalization_sq(d, a, r, t)


def question_bases(d):
    return computational_basis(d), fourier_basis(d), third_mub(d)


def question_probs(state, d, targets):
    """Success probability of each of the three questions for target symbols ``targets``."""
    return tuple(
        float(outcome_probs(state, basis)[target])
        for basis, target in zip(question_bases(d), targets)
    )


@dataclass(frozen=True)
class Ansatz3:
    d: int
    a: int
    r: float
    t: float
    branch: str

    def state(self):
        return base_state(self.d, self.a, self.r, self.t)

    def probabilities(self):
        """Direct ``(P_0, P_1, P_2)`` for targets ``(0, 0, a)``."""
        return question_probs(self.state(), self.d, (0, 0, self.a))

    def objective(self):
        return success_objective(self.d, self.a, self.r, self.t)


def _branch_values(d, a, r):
    """Objective on each real branch; ``-inf`` where infeasible or degenerate.

    The success is read off the unnormalized vector itself. The closed-form
    ratio ``(1 + 2r/sqrt(d))^2 / N^2`` loses about half its digits where the
    ansatz vector nearly vanishes, which happens e.g. at ``d = 3, a = 0``.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    A, B, C = quadratic_coeffs(d, a, r)
    if abs(A) < LINEAR_A_TOL:
        if np.all(np.abs(B) < LINEAR_A_TOL):
            raise Infeasible(f"constraint degenerates at d={d}, a={a}")
        ts = [-C / B]
        feasible = [np.ones_like(r, dtype=bool)]
    else:
        disc = B * B - 4 * A * C
        root = np.sqrt(np.where(disc >= 0, disc, 0.0))
        ts = [(-B + root) / (2 * A), (-B - root) / (2 * A)]
        feasible = [disc >= 0, disc >= 0]
    e0 = fourier_basis(d)[0]
    fa = third_mub(d)[a]
    out = []
    for t, ok in zip(ts, feasible):
        z = r + 1j * t
        raw = z[:, None] * e0[None, :] + np.conj(z)[:, None] * fa[None, :]
        raw[:, 0] += 1.0
        n2 = np.sum(np.abs(raw) ** 2, axis=1)
        ok = ok & (n2 > NORM_SQ_TOL)
        val = np.abs(raw[:, 0]) ** 2 / np.where(ok, n2, 1.0)
        out.append((np.where(ok, val, -np.inf), t))
    return out


def _best_at(d, a, r):
    """Best ``(value, t, branch)`` at a single ``r``; ``t_+`` wins exact ties."""
    best = (-math.inf, math.nan, "+")
    for (val, t), branch in zip(_branch_values(d, a, r), "+-"):
        if float(val[0]) > best[0]:
            best = (float(val[0]), float(t[0]), branch)
    return best


def _golden_max(f, lo, hi, tol=R_TOL):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    e = a + _GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    while b - a > tol:
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _GOLDEN * (b - a)
            fe = f(e)
    return (c, fc) if fc >= fe else (e, fe)


def success_for_a(d, a, r_min=R_MIN, r_max=R_MAX, r_step=R_STEP):
    """Optimize ``r`` for base state ``a``: grid scan then golden-section refinement.

    Returns the optimal success probability and the maximizing :class:`Ansatz3`.
    """
    d = check_dim(d, MAX_DIM)
    a = check_symbol(a, d, "a")
    npts = int(round((r_max - r_min) / r_step)) + 1
    grid = np.linspace(r_min, r_max, npts)
    stacked = np.stack([val for val, _ in _branch_values(d, a, grid)])
    scan = stacked.max(axis=0)
    i = int(np.argmax(scan))
    if not np.isfinite(scan[i]):
        raise Infeasible(f"no real t for any r in [{r_min}, {r_max}] at d={d}, a={a}")

    lo = max(r_min, grid[i] - r_step)
    hi = min(r_max, grid[i] + r_step)
    r_ref, _ = _golden_max(lambda r: _best_at(d, a, r)[0], lo, hi)
    candidates = [(_best_at(d, a, grid[i]), float(grid[i])), (_best_at(d, a, r_ref), r_ref)]
    (value, t, branch), r = max(candidates, key=lambda c: c[0][0])
    return value, Ansatz3(d=d, a=a, r=float(r), t=t, branch=branch)


@dataclass(frozen=True)
class Qrac3Code:
    """Optimized base states for one ``d`` and the resulting success figures.

    ``mub_deviation`` is the measured deviation of the Fourier and third
    bases from mutual unbiasedness; it is nonzero for odd composite ``d``.
    ``boundary_margin`` is the smallest distance of an optimal ``r`` from the
    edge of the scan range.
    """

    d: int
    base: tuple
    per_a: tuple
    average: float
    worst: float
    mub_deviation: float
    boundary_margin: float

    def encode(self, x0, x1, x2):
        d = self.d
        x0 = check_symbol(x0, d, "x0")
        x1 = check_symbol(x1, d, "x1")
        x2 = check_symbol(x2, d, "x2")
        a = base_index(d, x0, x1, x2)
        return weyl(d, x0, x1) @ self.base[a].state()


def relabel(d, x0, x1, a):
    """Third symbol carried by ``X^x0 Z^x1 |psi_00a>``."""
    return (x1 + a - (1 + delta(d)) * x0) % d


def base_index(d, x0, x1, x2):
    """Base state ``a`` whose orbit element at ``(x0, x1)`` encodes ``x2``."""
    return (x2 - x1 + (1 + delta(d)) * x0) % d


@functools.lru_cache(maxsize=None)
def optimize_qrac3(d):
    d = check_dim(d, MAX_DIM)
    results = [success_for_a(d, a) for a in range(d)]
    per_a = tuple(p for p, _ in results)
    base = tuple(ans for _, ans in results)
    margin = min(min(ans.r - R_MIN, R_MAX - ans.r) for ans in base)
    return Qrac3Code(
        d=d,
        base=base,
        per_a=per_a,
        average=float(np.mean(per_a)),
        worst=float(min(per_a)),
        mub_deviation=mub_overlap_check(fourier_basis(d), third_mub(d)),
        boundary_margin=float(margin),
    )


def success3(d):
    """``(average, worst_case, per_a)`` success of the optimized family."""
    code = optimize_qrac3(d)
    return code.average, code.worst, code.per_a


def encode3(d, x0, x1, x2):
    return optimize_qrac3(d).encode(x0, x1, x2)


def advantage3(d):
    return optimize_qrac3(d).average / float(classical_success(3, d))
