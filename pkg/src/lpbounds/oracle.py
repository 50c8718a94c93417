"""Brute-force ground truth: optimal bounded-depth trees on tiny instances.

``oracle_cc`` minimizes exact distributional error over *all* deterministic
protocol trees of a given depth: at every node either party may speak, and
a speaker's message is an arbitrary bipartition of their active index set.
``oracle_qc`` does the same over decision trees.  Both memoize on the
active state (rectangle masks / subcube restriction, remaining budget) and
return a witness tree that replays to exactly the optimal error.

These searches are exponential and exist to validate synthesized
artifacts, not to scale: caps are enforced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ccsynth import PLeaf, PNode, ProtocolTree
from .errors import CapExceededError
from .model import (
    BitProductDistribution,
    ProductDistribution2P,
    QueryFunction,
    Rectangle,
    Subcube,
    TwoPartyFunction,
    bit_measure,
    measure,
)
from .qcsynth import DecisionTree, DLeaf, DNode

ORACLE_CC_MAX_SIDE = 4
ORACLE_CC_MAX_DEPTH = 4
ORACLE_QC_MAX_BITS = 10


@dataclass(frozen=True)
class OracleResult:
    best_error: Fraction
    witness: ProtocolTree | DecisionTree


def _proper_bipartitions(mask: int):
    """Unordered bipartitions {S, mask\\S} of a mask, canonicalized.

    The side containing the lowest set bit is yielded, so each bipartition
    appears exactly once; masks with fewer than two elements yield nothing.
    """
    k = mask.bit_count()
    if k < 2:
        return
    low = mask & -mask
    rest = mask ^ low
    sub = rest
    # nonempty complements only: skip sub == rest
    while True:
        sub = (sub - 1) & rest
        yield low | sub
        if sub == 0:
            return


def oracle_cc(
    f: TwoPartyFunction, mu: ProductDistribution2P, depth_budget: int
) -> OracleResult:
    """Exact minimum error over protocol trees of depth <= depth_budget."""
    if f.nx > ORACLE_CC_MAX_SIDE or f.ny > ORACLE_CC_MAX_SIDE:
        raise CapExceededError(
            f"protocol search capped at {ORACLE_CC_MAX_SIDE}x{ORACLE_CC_MAX_SIDE}"
        )
    if depth_budget > ORACLE_CC_MAX_DEPTH:
        raise CapExceededError(f"protocol search capped at depth {ORACLE_CC_MAX_DEPTH}")

    memo: dict[tuple[int, int, int], tuple[Fraction, ProtocolTree]] = {}

    def best(rows: int, cols: int, budget: int) -> tuple[Fraction, ProtocolTree]:
        key = (rows, cols, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit
        rect = Rectangle(rows, cols)
        m0 = measure(mu, f, 0, rect)
        m1 = measure(mu, f, 1, rect)
        err, tree = (m1, PLeaf(0)) if m1 <= m0 else (m0, PLeaf(1))
        if budget >= 1:
            for split in _proper_bipartitions(rows):
                e_in, t_in = best(split, cols, budget - 1)
                e_out, t_out = best(rows ^ split, cols, budget - 1)
                if e_in + e_out < err:
                    err = e_in + e_out
                    tree = PNode("A", split, t_in, t_out)
            for split in _proper_bipartitions(cols):
                e_in, t_in = best(rows, split, budget - 1)
                e_out, t_out = best(rows, cols ^ split, budget - 1)
                if e_in + e_out < err:
                    err = e_in + e_out
                    tree = PNode("B", split, t_in, t_out)
        memo[key] = (err, tree)
        return err, tree

    err, tree = best((1 << f.nx) - 1, (1 << f.ny) - 1, depth_budget)
    return OracleResult(err, tree)


def oracle_qc(
    g: QueryFunction, mu: BitProductDistribution, depth_budget: int
) -> OracleResult:
    """Exact minimum error over decision trees of depth <= depth_budget."""
    if g.n > ORACLE_QC_MAX_BITS:
        raise CapExceededError(f"decision search capped at {ORACLE_QC_MAX_BITS} bits")

    memo: dict[tuple[int, int, int], tuple[Fraction, DecisionTree]] = {}

    def best(support: int, values: int, budget: int) -> tuple[Fraction, DecisionTree]:
        key = (support, values, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit
        cube = Subcube(g.n, support, values)
        m0 = bit_measure(mu, g, 0, cube)
        m1 = bit_measure(mu, g, 1, cube)
        err, tree = (m1, DLeaf(0)) if m1 <= m0 else (m0, DLeaf(1))
        if budget >= 1:
            for i in range(g.n):
                if (support >> i) & 1:
                    continue
                e0, t0 = best(support | (1 << i), values, budget - 1)
                e1, t1 = best(support | (1 << i), values | (1 << i), budget - 1)
                if e0 + e1 < err:
                    err = e0 + e1
                    tree = DNode(i, t0, t1)
        memo[key] = (err, tree)
        return err, tree

    err, tree = best(0, 0, depth_budget)
    return OracleResult(err, tree)
