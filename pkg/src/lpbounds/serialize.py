"""Text formats for functions, distributions, trees, and result records.

Truth tables:  ``cc <|X|> <|Y|>`` header then |X| rows of 0/1 characters,
or ``qc <n>`` then a single 2^n character line (index = integer value of
the bit string, coordinate 0 least significant).

Distributions: ``rows:`` / ``cols:`` lines of rationals for the two-party
product measure, or a single ``p:`` line of per-bit marginals.  Rationals
are always written ``num/den`` or as a bare integer.

Trees are one node per line in pre-order after a version header:
``ptree v1`` with ``L <bit>`` / ``I <A|B> <hex split mask>``, and
``dtree v1`` with ``L <bit>`` / ``Q <bit index>``.

Result records are JSON objects, one per line, with sorted keys and a
``v`` version field, so reports diff cleanly and byte-compare across runs.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .ccsynth import PLeaf, PNode, ProtocolTree, leaf_count, tree_depth
from .errors import ParseError
from .model import (
    BitProductDistribution,
    ProductDistribution2P,
    QueryFunction,
    TwoPartyFunction,
)
from .qcsynth import DecisionTree, DLeaf, DNode, dtree_depth
from .rational import format_rational, parse_rational

RECORD_VERSION = 1


# ---------------------------------------------------------------------------
# truth tables


def write_function(fn: TwoPartyFunction | QueryFunction) -> str:
    if isinstance(fn, TwoPartyFunction):
        rows = "\n".join("".join(str(v) for v in row) for row in fn.table)
        return f"cc {fn.nx} {fn.ny}\n{rows}\n"
    bits = "".join(str(v) for v in fn.table)
    return f"qc {fn.n}\n{bits}\n"


def parse_function(text: str) -> TwoPartyFunction | QueryFunction:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty function file")
    head = lines[0].split()
    if head[0] == "cc":
        if len(head) != 3:
            raise ParseError("cc header must be `cc <|X|> <|Y|>`")
        nx, ny = int(head[1]), int(head[2])
        if len(lines) != 1 + nx:
            raise ParseError(f"expected {nx} table rows, found {len(lines) - 1}")
        table = []
        for ln in lines[1:]:
            if len(ln) != ny or any(ch not in "01" for ch in ln):
                raise ParseError(f"bad table row {ln!r}")
            table.append(tuple(int(ch) for ch in ln))
        return TwoPartyFunction(tuple(table))
    if head[0] == "qc":
        if len(head) != 2:
            raise ParseError("qc header must be `qc <n>`")
        n = int(head[1])
        if len(lines) != 2:
            raise ParseError("qc format is a header line plus one table line")
        ln = lines[1]
        if len(ln) != 1 << n or any(ch not in "01" for ch in ln):
            raise ParseError(f"qc table must be 2^{n} bits")
        return QueryFunction(n, tuple(int(ch) for ch in ln))
    raise ParseError(f"unknown function header {head[0]!r}; expected cc or qc")


def function_hash(fn: TwoPartyFunction | QueryFunction) -> str:
    return hashlib.sha256(write_function(fn).encode()).hexdigest()


# ---------------------------------------------------------------------------
# distributions


def write_distribution(mu: ProductDistribution2P | BitProductDistribution) -> str:
    if isinstance(mu, ProductDistribution2P):
        rows = " ".join(format_rational(w) for w in mu.row_weights)
        cols = " ".join(format_rational(w) for w in mu.col_weights)
        return f"rows: {rows}\ncols: {cols}\n"
    return "p: " + " ".join(format_rational(w) for w in mu.p) + "\n"


def parse_distribution(text: str) -> ProductDistribution2P | BitProductDistribution:
    fields: dict[str, tuple[Fraction, ...]] = {}
    for ln in text.strip().splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ":" not in ln:
            raise ParseError(f"bad distribution line {ln!r}")
        key, _, rest = ln.partition(":")
        fields[key.strip()] = tuple(parse_rational(tok) for tok in rest.split())
    if "p" in fields:
        if set(fields) != {"p"}:
            raise ParseError("bit-wise distribution files carry a single `p:` line")
        return BitProductDistribution(fields["p"])
    if set(fields) == {"rows", "cols"}:
        return ProductDistribution2P(fields["rows"], fields["cols"])
    raise ParseError("distribution file needs `rows:`+`cols:` lines or a `p:` line")


def distribution_hash(mu: ProductDistribution2P | BitProductDistribution) -> str:
    return hashlib.sha256(write_distribution(mu).encode()).hexdigest()


# ---------------------------------------------------------------------------
# trees


def write_protocol_tree(tree: ProtocolTree) -> str:
    lines = ["ptree v1"]

    def emit(node: ProtocolTree) -> None:
        if isinstance(node, PLeaf):
            lines.append(f"L {node.label}")
        else:
            lines.append(f"I {node.speaker} {node.split:x}")
            emit(node.inside)
            emit(node.outside)

    emit(tree)
    return "\n".join(lines) + "\n"


def parse_protocol_tree(text: str) -> ProtocolTree:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != "ptree v1":
        raise ParseError("protocol tree files start with `ptree v1`")
    pos = 1

    def read() -> ProtocolTree:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError("truncated protocol tree")
        parts = lines[pos].split()
        pos += 1
        if parts[0] == "L" and len(parts) == 2:
            return PLeaf(int(parts[1]))
        if parts[0] == "I" and len(parts) == 3 and parts[1] in ("A", "B"):
            split = int(parts[2], 16)
            inside = read()
            outside = read()
            return PNode(parts[1], split, inside, outside)
        raise ParseError(f"bad protocol tree line {lines[pos - 1]!r}")

    tree = read()
    if pos != len(lines):
        raise ParseError("trailing lines after the protocol tree")
    return tree


def write_decision_tree(tree: DecisionTree) -> str:
    lines = ["dtree v1"]

    def emit(node: DecisionTree) -> None:
        if isinstance(node, DLeaf):
            lines.append(f"L {node.label}")
        else:
            lines.append(f"Q {node.bit}")
            emit(node.child0)
            emit(node.child1)

    emit(tree)
    return "\n".join(lines) + "\n"


def parse_decision_tree(text: str) -> DecisionTree:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != "dtree v1":
        raise ParseError("decision tree files start with `dtree v1`")
    pos = 1

    def read() -> DecisionTree:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError("truncated decision tree")
        parts = lines[pos].split()
        pos += 1
        if parts[0] == "L" and len(parts) == 2:
            return DLeaf(int(parts[1]))
        if parts[0] == "Q" and len(parts) == 2:
            child0 = read()
            child1 = read()
            return DNode(int(parts[1]), child0, child1)
        raise ParseError(f"bad decision tree line {lines[pos - 1]!r}")

    tree = read()
    if pos != len(lines):
        raise ParseError("trailing lines after the decision tree")
    return tree


# ---------------------------------------------------------------------------
# records


def rat(q: Fraction) -> str:
    return format_rational(q)


def bound_record(kind: str, fn_hash: str, params: dict, result) -> dict:
    rec = {
        "v": RECORD_VERSION,
        "record": "bound",
        "kind": kind,
        "fn_hash": fn_hash,
        "params": params,
        "value": rat(result.value),
        "log2_lo": None if result.log2_lo is None else rat(result.log2_lo),
        "log2_hi": None if result.log2_hi is None else rat(result.log2_hi),
        "support_size": result.support_size,
        "iterations": result.solution.iterations,
        "phase1_iterations": result.solution.phase1_iterations,
    }
    return rec


def protocol_summary_record(tree: ProtocolTree, adv: Fraction) -> dict:
    return {
        "v": RECORD_VERSION,
        "record": "ptree-summary",
        "leaves": leaf_count(tree),
        "depth": tree_depth(tree),
        "advantage": rat(adv),
    }


def decision_summary_record(tree: DecisionTree, error: Fraction, params: dict) -> dict:
    return {
        "v": RECORD_VERSION,
        "record": "dtree-summary",
        "depth": dtree_depth(tree),
        "error": rat(error),
        "params": params,
    }


def qprt_solution_record(sol) -> dict:
    """Labeled subcube weights keyed ``<z> <pattern>`` over ``01*``."""
    return {
        "v": RECORD_VERSION,
        "record": "qprt-solution",
        "n": sol.n,
        "objective": rat(sol.objective),
        "weights": {
            f"{z} {cube.pattern()}": rat(w)
            for (z, cube), w in sorted(
                sol.weights.items(), key=lambda kw: (kw[0][0], kw[0][1].pattern())
            )
        },
    }


def feasible_system_record(system) -> dict:
    return {
        "v": RECORD_VERSION,
        "record": "feasible-system",
        "n": system.n,
        "u": {
            cube.pattern(): rat(w)
            for cube, w in sorted(system.u.items(), key=lambda cw: cw[0].pattern())
        },
        "w": {
            cube.pattern(): rat(w)
            for cube, w in sorted(system.w.items(), key=lambda cw: cw[0].pattern())
        },
        "alpha0": rat(system.alpha0),
        "beta0": rat(system.beta0),
        "alpha1": rat(system.alpha1),
        "beta1": rat(system.beta1),
        "a": system.a,
        "b": system.b,
    }


def dump_records(records: list[dict]) -> str:
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)


def load_records(text: str) -> list[dict]:
    out = []
    for ln in text.strip().splitlines():
        ln = ln.strip()
        if ln:
            out.append(json.loads(ln))
    return out
