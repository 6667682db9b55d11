"""Classical random access codes over a ``d``-letter alphabet.

The optimal-looking strategy is majority encoding with identity decoding.
Its average success is a sum over integer partitions of ``n``: every string
of length ``n`` has a frequency signature (the multiset of its symbol
counts), all strings with the same signature score ``max(signature) / n``,
and the number of strings with a given signature has a closed form.

Everything here is exact: counts are Python integers and probabilities are
:class:`fractions.Fraction` values, converted to float only by callers.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InstanceTooLarge, InvalidArgument, InvalidDimension, NumericalFailure

MAJORITY_LIMIT = 10**8
BRUTE_FORCE_LIMIT = 2**17


def _check_positive(n, name):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgument(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def _check_alphabet(d, minimum=2):
    if isinstance(d, bool) or int(d) != d or d < minimum:
        raise InvalidDimension(f"alphabet size must be an integer >= {minimum}, got {d!r}")
    return int(d)


def partitions(n):
    """All integer partitions of ``n`` as non-increasing tuples.

    Partitions are produced in reverse lexicographic order, starting with
    ``(n,)`` and ending with ``(1,) * n``.

    >>> partitions(4)
    [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    """
    n = _check_positive(n, "n")
    out = []

    def extend(remaining, largest, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            extend(remaining - part, part, prefix)
            prefix.pop()

    extend(n, n, [])
    return out


def count_strings(parts, d):
    """Number of strings over ``d`` letters whose frequency signature is ``parts``.

    Multinomial coefficient for placing the blocks, divided by the
    permutations among equal-sized blocks, times the falling factorial
    ``d (d-1) ... (d-m+1)`` for assigning distinct letters to the ``m``
    blocks. Zero when the signature has more blocks than letters.
    """
    parts = tuple(parts)
    if not parts or any(isinstance(k, bool) or int(k) != k or k < 1 for k in parts):
        raise InvalidArgument(f"not a partition: {parts!r}")
    d = _check_alphabet(d, minimum=1)
    n = sum(parts)
    m = len(parts)
    if m > d:
        return 0
    arrangements = math.factorial(n)
    for k in parts:
        arrangements //= math.factorial(k)
    for multiplicity in Counter(parts).values():
        arrangements //= math.factorial(multiplicity)
    return arrangements * math.perm(d, m)


def classical_success(n, d):
    """Average success of majority encoding with identity decoding, exactly.

    Returns a :class:`~fractions.Fraction`. As a side check the signature
    counts must add up to ``d**n``.
    """
    n = _check_positive(n, "n")
    d = _check_alphabet(d)
    total = 0
    weighted = 0
    for parts in partitions(n):
        count = count_strings(parts, d)
        total += count
        weighted += parts[0] * count
    if total != d**n:
        raise NumericalFailure(f"signature counts sum to {total}, expected {d**n}")
    return Fraction(weighted, n * d**n)


def closed_form_success(n, d, exact=False):
    """Closed forms of :func:`classical_success` for two and three symbols."""
    d = _check_alphabet(d)
    if n == 2:
        value = Fraction(1, 2) * (1 + Fraction(1, d))
    elif n == 3:
        value = Fraction(1, 3) * (1 + Fraction(3, d) - Fraction(1, d * d))
    else:
        raise InvalidArgument(f"closed form only available for n in {{2, 3}}, got {n!r}")
    return value if exact else float(value)


def _all_strings(n, d, start, stop):
    """Rows ``start..stop-1`` of the lexicographic list of ``d``-ary strings."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((idx.size, n), dtype=np.int64)
    for pos in range(n - 1, -1, -1):
        digits[:, pos] = idx % d
        idx //= d
    return digits


def majority_strategy_success(n, d, chunk=1 << 20):
    """Simulate majority encoding over every string of length ``n``.

    Ties go to the lowest symbol. Bob outputs the received symbol whatever
    the question, so the success count of a string is the number of
    positions that hold the transmitted symbol.
    """
    n = _check_positive(n, "n")
    d = _check_alphabet(d)
    size = d**n
    if size > MAJORITY_LIMIT:
        raise InstanceTooLarge(f"{d}^{n} = {size} strings exceeds {MAJORITY_LIMIT}")
    hits = 0
    for start in range(0, size, chunk):
        strings = _all_strings(n, d, start, min(start + chunk, size))
        counts = np.stack([(strings == s).sum(axis=1) for s in range(d)], axis=1)
        sent = counts.argmax(axis=1)
        hits += int((strings == sent[:, None]).sum())
    return float(Fraction(hits, n * size))


@dataclass(frozen=True)
class ClassicalStrategy:
    """Deterministic strategy: an encoding table and one decoding table per question.

    ``encode[i]`` is the symbol sent for the ``i``-th string in lexicographic
    order; ``decode[y][m]`` is Bob's guess for position ``y`` on receiving ``m``.
    """

    n: int
    d: int
    encode: tuple
    decode: tuple

    def __post_init__(self):
        if len(self.encode) != self.d**self.n:
            raise InvalidArgument("encoding table must cover all d**n strings")
        if len(self.decode) != self.n or any(len(t) != self.d for t in self.decode):
            raise InvalidArgument("need n decoding tables with d entries each")
        values = list(self.encode) + [v for t in self.decode for v in t]
        if any(not 0 <= v < self.d for v in values):
            raise InvalidArgument("table value out of range")

    def success(self):
        """Exact average success over uniform strings and questions."""
        hits = 0
        for i, x in enumerate(itertools.product(range(self.d), repeat=self.n)):
            m = self.encode[i]
            hits += sum(self.decode[y][m] == x[y] for y in range(self.n))
        return Fraction(hits, self.n * self.d**self.n)


def brute_force_optimal(n, d):
    """Exhaustive search for the best deterministic classical strategy.

    Every encoding table is enumerated; for each one the optimal decoding is
    read off directly (plurality of ``x_y`` over the preimage of each
    message, lowest value on ties). Feasible only for tiny instances such as
    ``(2, 2)``, ``(3, 2)`` and ``(2, 3)``.

    Returns
    -------
    (Fraction, ClassicalStrategy)
        The optimum and the first optimal strategy in enumeration order.
    """
    n = _check_positive(n, "n")
    d = _check_alphabet(d)
    size = d**n
    if size > 64 or d**size > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(f"{d}^({d}^{n}) encoding tables exceeds {BRUTE_FORCE_LIMIT}")
    strings = _all_strings(n, d, 0, size)
    # (S, n, d) one-hot of x_y
    symbol_hot = (strings[:, :, None] == np.arange(d)).astype(np.int64)
    encodings = _all_strings(size, d, 0, d**size)
    best_hits = -1
    best = None
    for start in range(0, encodings.shape[0], 4096):
        enc = encodings[start : start + 4096]
        enc_hot = (enc[:, :, None] == np.arange(d)).astype(np.int64)
        # counts[e, y, m, v] = #{x : enc_e(x) = m and x_y = v}
        counts = np.einsum("esm,syv->eymv", enc_hot, symbol_hot)
        hits = counts.max(axis=3).sum(axis=(1, 2))
        i = int(hits.argmax())
        if hits[i] > best_hits:
            best_hits = int(hits[i])
            decode = counts[i].argmax(axis=2)
            best = ClassicalStrategy(
                n=n,
                d=d,
                encode=tuple(int(v) for v in enc[i]),
                decode=tuple(tuple(int(v) for v in row) for row in decode),
            )
    return Fraction(best_hits, n * size), best
