"""Majority-vote product construction for error reduction of LP solutions.

Given a labeled weight family w[(z, K)] over an intersection-closed ground
family (rectangles or subcubes) whose per-point label masses sum to 1, the
t-fold product assigns

    v[(z, K)] = sum over t-tuples ((z_1,K_1),..,(z_t,K_t))
                with majority label z and K_1 cap .. cap K_t = K
                of  prod_i w[(z_i, K_i)]

Tuples with an empty intersection are dropped: they contribute to no
point's constraint, and dropping them only lowers the objective.

The sum is evaluated by dynamic programming over (votes-for-1, running
intersection) states with integer numerators over a common denominator, so
the result is exact and the cost is O(t^2 * closure * support) rather than
support**t.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Hashable, TypeVar

K = TypeVar("K", bound=Hashable)

__all__ = ["majority_product_boost"]


def majority_product_boost(
    weights: dict[tuple[int, K], Fraction],
    t: int,
    intersect: Callable[[K, K], K | None],
    sort_key: Callable[[K], object],
) -> dict[tuple[int, K], Fraction]:
    """t-fold majority product of a labeled weight family; t must be odd.

    ``intersect`` returns None for an empty intersection.  t = 1 returns
    the (nonzero entries of the) input unchanged.
    """
    if t < 1 or t % 2 == 0:
        raise ValueError(f"vote count must be a positive odd integer, got {t}")
    entries = [
        (z, k, Fraction(w))
        for (z, k), w in sorted(weights.items(), key=lambda zw: (zw[0][0], sort_key(zw[0][1])))
        if w != 0
    ]
    if t == 1:
        return {(z, k): w for z, k, w in entries}

    den = 1
    for _, _, w in entries:
        den = den * w.denominator // math.gcd(den, w.denominator)
    int_entries = [(z, k, w.numerator * (den // w.denominator)) for z, k, w in entries]

    state: dict[tuple[int, K], int] = {}
    for z, k, num in int_entries:
        key = (z, k)
        state[key] = state.get(key, 0) + num
    for _ in range(t - 1):
        nxt: dict[tuple[int, K], int] = {}
        for (ones, k), val in state.items():
            for z, k2, num in int_entries:
                merged = intersect(k, k2)
                if merged is None:
                    continue
                key = (ones + z, merged)
                nxt[key] = nxt.get(key, 0) + val * num
        state = nxt

    scale = den**t
    out: dict[tuple[int, K], Fraction] = {}
    for (ones, k), val in state.items():
        z = 1 if 2 * ones > t else 0
        key = (z, k)
        out[key] = out.get(key, Fraction(0)) + Fraction(val, scale)
    return {key: w for key, w in out.items() if w != 0}
