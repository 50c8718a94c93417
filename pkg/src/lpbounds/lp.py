"""Exact rational linear programming with certified primal/dual solutions.

The solver is a two-phase revised simplex over ``fractions.Fraction`` with
Bland's pivoting rule: entering variable is the lowest-index column with a
negative reduced cost, leaving row breaks ratio ties by lowest basic column
index.  Bland's rule guarantees termination and makes every solve
deterministic: the same program always produces the same pivot sequence,
hence byte-identical solutions.

Every optimal solve is re-verified before it is returned: the primal point
is checked against all constraints, the dual vector is checked against the
derived dual program, and the two objective values are compared as exact
rationals.  Infeasible programs come with a Farkas certificate, unbounded
ones with an improving ray; both are re-checkable via ``check_farkas`` and
``check_ray``.

Dual conventions (for a minimization program):
  row ``>=``  ->  y_i >= 0;   row ``<=``  ->  y_i <= 0;   row ``=`` -> free
  nonneg var j:  sum_i y_i a_ij <= c_j;   free var j: equality
  optimal dual objective:  sum_i y_i b_i  ==  primal optimum
For maximization the inequalities reverse (y_i >= 0 on ``<=`` rows, and
sum_i y_i a_ij >= c_j on nonneg columns).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LpboundsError
from .rational import format_rational

LE, EQ, GE = "<=", "=", ">="
_RELS = (LE, EQ, GE)

MAX_PIVOTS = 2_000_000


@dataclass(frozen=True)
class Constraint:
    coeffs: dict[str, Fraction]
    rel: str
    rhs: Fraction
    label: str = ""

    def __post_init__(self) -> None:
        if self.rel not in _RELS:
            raise LpboundsError(f"unknown relation {self.rel!r}")
        # sparse rows carry no explicit zeros
        cleaned = {v: Fraction(c) for v, c in self.coeffs.items() if c != 0}
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "rhs", Fraction(self.rhs))


@dataclass(frozen=True)
class LinearProgram:
    name: str
    sense: str  # "min" | "max"
    variables: tuple[str, ...]
    objective: dict[str, Fraction]
    constraints: tuple[Constraint, ...]
    nonneg: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.sense not in ("min", "max"):
            raise LpboundsError(f"sense must be min or max, got {self.sense!r}")
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise LpboundsError("duplicate variable names")
        for v in self.objective:
            if v not in declared:
                raise LpboundsError(f"objective references undeclared variable {v!r}")
        for con in self.constraints:
            for v in con.coeffs:
                if v not in declared:
                    raise LpboundsError(
                        f"constraint {con.label!r} references undeclared variable {v!r}"
                    )
        object.__setattr__(
            self, "objective", {v: Fraction(c) for v, c in self.objective.items() if c != 0}
        )

    def is_nonneg(self, var: str) -> bool:
        return self.nonneg.get(var, True)

    def objective_value(self, assignment: dict[str, Fraction]) -> Fraction:
        return sum(
            (c * assignment.get(v, Fraction(0)) for v, c in self.objective.items()),
            Fraction(0),
        )

    def dump(self) -> str:
        """Fixed-format text rendering for debugging; not a stable interface."""
        lines = [f"{self.sense} " + " + ".join(
            f"{format_rational(c)}*{v}" for v, c in sorted(self.objective.items())
        )]
        lines.append("s.t.")
        for i, con in enumerate(self.constraints):
            terms = " + ".join(
                f"{format_rational(c)}*{v}" for v, c in sorted(con.coeffs.items())
            )
            label = con.label or f"c{i}"
            lines.append(f"  {label}: {terms or '0'} {con.rel} {format_rational(con.rhs)}")
        free = [v for v in self.variables if not self.is_nonneg(v)]
        lines.append(f"  nonneg: all except {free}" if free else "  nonneg: all")
        return "\n".join(lines)


@dataclass(frozen=True)
class Violation:
    kind: str  # "constraint" | "domain" | "dual-sign" | "dual-column"
    index: int
    label: str
    lhs: Fraction
    rel: str
    rhs: Fraction

    @property
    def slack(self) -> Fraction:
        """Magnitude of the violation (always positive for a true violation)."""
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None
    primal: dict[str, Fraction]
    dual: tuple[Fraction, ...]
    iterations: int
    phase1_iterations: int
    certificate: dict | None = None

    def to_record(self) -> dict:
        rec = {
            "status": self.status,
            "value": None if self.value is None else format_rational(self.value),
            "primal": {v: format_rational(c) for v, c in sorted(self.primal.items())},
            "dual": [format_rational(y) for y in self.dual],
            "iterations": self.iterations,
            "phase1_iterations": self.phase1_iterations,
        }
        if self.certificate is not None:
            rec["certificate"] = {
                "kind": self.certificate["kind"],
                "vector": {
                    k: format_rational(v)
                    for k, v in sorted(self.certificate["vector"].items())
                },
            }
        return rec

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.to_record(), sort_keys=True).encode()


def check_feasible(
    lp: LinearProgram, assignment: dict[str, Fraction], include_domain: bool = True
) -> list[Violation]:
    """every violated constraint with its exact slack; [] iff feasible.

    Variables missing from the assignment are treated as 0.
    """
    out: list[Violation] = []
    for i, con in enumerate(lp.constraints):
        lhs = sum(
            (c * assignment.get(v, Fraction(0)) for v, c in con.coeffs.items()),
            Fraction(0),
        )
        ok = (
            lhs <= con.rhs
            if con.rel == LE
            else lhs >= con.rhs
            if con.rel == GE
            else lhs == con.rhs
        )
        if not ok:
            out.append(Violation("constraint", i, con.label, lhs, con.rel, con.rhs))
    if include_domain:
        for j, v in enumerate(lp.variables):
            val = assignment.get(v, Fraction(0))
            if lp.is_nonneg(v) and val < 0:
                out.append(Violation("domain", j, v, val, GE, Fraction(0)))
    return out


def check_dual_feasible(
    lp: LinearProgram, dual: tuple[Fraction, ...] | list[Fraction]
) -> list[Violation]:
    """Violations of the derived dual program for ``dual``; [] iff dual-feasible."""
    if len(dual) != len(lp.constraints):
        raise LpboundsError("dual vector length does not match constraint count")
    minimize = lp.sense == "min"
    out: list[Violation] = []
    for i, con in enumerate(lp.constraints):
        y = dual[i]
        if con.rel == EQ:
            continue
        # min: >= rows need y >= 0, <= rows need y <= 0; max is reversed.
        wants_nonneg = (con.rel == GE) == minimize
        if wants_nonneg and y < 0:
            out.append(Violation("dual-sign", i, con.label, y, GE, Fraction(0)))
        if not wants_nonneg and y > 0:
            out.append(Violation("dual-sign", i, con.label, y, LE, Fraction(0)))
    col_sums: dict[str, Fraction] = {v: Fraction(0) for v in lp.variables}
    for i, con in enumerate(lp.constraints):
        y = dual[i]
        if y == 0:
            continue
        for v, c in con.coeffs.items():
            col_sums[v] += y * c
    for j, v in enumerate(lp.variables):
        s = col_sums[v]
        c = lp.objective.get(v, Fraction(0))
        if lp.is_nonneg(v):
            ok = s <= c if minimize else s >= c
            rel = LE if minimize else GE
        else:
            ok = s == c
            rel = EQ
        if not ok:
            out.append(Violation("dual-column", j, v, s, rel, c))
    return out


def dual_objective(lp: LinearProgram, dual: tuple[Fraction, ...] | list[Fraction]) -> Fraction:
    return sum((y * con.rhs for y, con in zip(dual, lp.constraints)), Fraction(0))


def check_farkas(lp: LinearProgram, vector: dict[int, Fraction]) -> bool:
    """True iff ``vector`` certifies infeasibility of ``lp``'s constraints."""
    y = [vector.get(i, Fraction(0)) for i in range(len(lp.constraints))]
    for i, con in enumerate(lp.constraints):
        if con.rel == GE and y[i] < 0:
            return False
        if con.rel == LE and y[i] > 0:
            return False
    col_sums: dict[str, Fraction] = {v: Fraction(0) for v in lp.variables}
    for i, con in enumerate(lp.constraints):
        if y[i] == 0:
            continue
        for v, c in con.coeffs.items():
            col_sums[v] += y[i] * c
    for v in lp.variables:
        if lp.is_nonneg(v):
            if col_sums[v] > 0:
                return False
        elif col_sums[v] != 0:
            return False
    return sum((y[i] * con.rhs for i, con in enumerate(lp.constraints)), Fraction(0)) > 0


def check_ray(lp: LinearProgram, ray: dict[str, Fraction]) -> bool:
    """True iff ``ray`` is a feasible improving direction (proves unboundedness)."""
    for v, val in ray.items():
        if lp.is_nonneg(v) and val < 0:
            return False
    for con in lp.constraints:
        lhs = sum((c * ray.get(v, Fraction(0)) for v, c in con.coeffs.items()), Fraction(0))
        if con.rel == GE and lhs < 0:
            return False
        if con.rel == LE and lhs > 0:
            return False
        if con.rel == EQ and lhs != 0:
            return False
    rate = lp.objective_value(ray)
    return rate < 0 if lp.sense == "min" else rate > 0


class _Simplex:
    """Standard-form state for one solve; single-threaded, used once."""

    def __init__(self, lp: LinearProgram):
        self.lp = lp
        m = len(lp.constraints)
        self.m = m
        self.flip: list[int] = []
        rows: list[tuple[dict[str, Fraction], str, Fraction]] = []
        for con in lp.constraints:
            coeffs, rel, rhs = con.coeffs, con.rel, con.rhs
            if rhs < 0:
                coeffs = {v: -c for v, c in coeffs.items()}
                rhs = -rhs
                rel = {LE: GE, GE: LE, EQ: EQ}[rel]
                self.flip.append(-1)
            else:
                self.flip.append(1)
            rows.append((coeffs, rel, rhs))
        self.b = [r[2] for r in rows]

        # columns: per-variable (split when free), then slacks, then artificials
        self.cols: list[list[tuple[int, Fraction]]] = []
        self.cost2: list[Fraction] = []  # phase-2 costs in min form
        self.var_cols: dict[str, tuple[int, int | None]] = {}
        sense_sign = 1 if lp.sense == "min" else -1
        for v in lp.variables:
            entries = [
                (i, coeffs[v]) for i, (coeffs, _, _) in enumerate(rows) if v in coeffs
            ]
            c = sense_sign * lp.objective.get(v, Fraction(0))
            plus = len(self.cols)
            self.cols.append(entries)
            self.cost2.append(c)
            minus: int | None = None
            if not lp.is_nonneg(v):
                minus = len(self.cols)
                self.cols.append([(i, -val) for i, val in entries])
                self.cost2.append(-c)
            self.var_cols[v] = (plus, minus)
        self.n_real = len(self.cols)

        zero, one = Fraction(0), Fraction(1)
        self.basis: list[int] = [-1] * m
        self.artificial_start = None
        for i, (_, rel, _) in enumerate(rows):
            if rel == LE:
                j = len(self.cols)
                self.cols.append([(i, one)])
                self.cost2.append(zero)
                self.basis[i] = j
            elif rel == GE:
                j = len(self.cols)
                self.cols.append([(i, -one)])
                self.cost2.append(zero)
        self.n_structural = len(self.cols)
        self.cost1 = [zero] * self.n_structural
        for i in range(m):
            if self.basis[i] == -1:
                j = len(self.cols)
                self.cols.append([(i, one)])
                self.cost2.append(zero)
                self.cost1.append(one)
                self.basis[i] = j
        self.n_total = len(self.cols)

        self.binv: list[list[Fraction]] = [
            [one if i == k else zero for k in range(m)] for i in range(m)
        ]
        self.x_b: list[Fraction] = list(self.b)
        self.iterations = 0

    def _drive_out_artificials(self) -> None:
        """Pivot zero-level artificials out of the basis where possible.

        Rows whose artificial cannot be replaced are linearly dependent on
        the rest; their basic value can never move, so leaving the
        artificial in place is safe.  Without this step a later pivot could
        push a basic artificial positive and silently break feasibility.
        """
        in_basis = set(self.basis)
        for i in range(self.m):
            if self.basis[i] < self.n_structural:
                continue
            row_i = self.binv[i]
            for j in range(self.n_structural):
                if j in in_basis:
                    continue
                u_i = Fraction(0)
                for r, v in self.cols[j]:
                    if row_i[r] != 0:
                        u_i += row_i[r] * v
                if u_i == 0:
                    continue
                u = [Fraction(0)] * self.m
                for r, v in self.cols[j]:
                    for k in range(self.m):
                        bk = self.binv[k][r]
                        if bk != 0:
                            u[k] += bk * v
                row = [a / u_i for a in row_i]
                self.binv[i] = row
                self.x_b[i] /= u_i  # zero stays zero
                for k in range(self.m):
                    if k == i or u[k] == 0:
                        continue
                    f = u[k]
                    rk = self.binv[k]
                    self.binv[k] = [a - f * c for a, c in zip(rk, row)]
                    self.x_b[k] -= f * self.x_b[i]
                in_basis.discard(self.basis[i])
                in_basis.add(j)
                self.basis[i] = j
                break

    def _duals(self, cost: list[Fraction]) -> list[Fraction]:
        m = self.m
        zero = Fraction(0)
        y = [zero] * m
        for k in range(m):
            ck = cost[self.basis[k]]
            if ck == 0:
                continue
            row = self.binv[k]
            for i in range(m):
                if row[i] != 0:
                    y[i] += ck * row[i]
        return y

    def _iterate(self, cost: list[Fraction], limit: int) -> str:
        """Run simplex to optimality; returns "optimal" or "unbounded"."""
        zero = Fraction(0)
        in_basis = set(self.basis)
        while True:
            self.iterations += 1
            if self.iterations > MAX_PIVOTS:
                raise LpboundsError("pivot cap exceeded; possible solver bug")
            y = self._duals(cost)
            enter = -1
            for j in range(limit):
                if j in in_basis:
                    continue
                d = cost[j]
                for r, v in self.cols[j]:
                    yr = y[r]
                    if yr != 0:
                        d -= yr * v
                if d < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            # direction u = B^-1 A_enter
            u = [zero] * self.m
            for r, v in self.cols[enter]:
                for i in range(self.m):
                    bi = self.binv[i][r]
                    if bi != 0:
                        u[i] += bi * v
            leave = -1
            best: Fraction | None = None
            for i in range(self.m):
                if u[i] > 0:
                    ratio = self.x_b[i] / u[i]
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                self._unbounded_enter = enter
                self._unbounded_direction = u
                return "unbounded"
            piv = u[leave]
            row = self.binv[leave]
            if piv != 1:
                self.binv[leave] = row = [a / piv for a in row]
                self.x_b[leave] /= piv
            xl = self.x_b[leave]
            for i in range(self.m):
                if i == leave:
                    continue
                f = u[i]
                if f == 0:
                    continue
                ri = self.binv[i]
                self.binv[i] = [a - f * c for a, c in zip(ri, row)]
                self.x_b[i] -= f * xl
            in_basis.discard(self.basis[leave])
            in_basis.add(enter)
            self.basis[leave] = enter


_cache_dir: str | None = None


def set_cache_dir(path: str | None) -> None:
    """Enable (or disable with None) on-disk caching of LP solutions."""
    global _cache_dir
    _cache_dir = path


def _program_key(lp: LinearProgram) -> str:
    import hashlib

    payload = json.dumps(
        {
            "sense": lp.sense,
            "variables": list(lp.variables),
            "objective": {v: format_rational(c) for v, c in sorted(lp.objective.items())},
            "constraints": [
                {
                    "coeffs": {v: format_rational(c) for v, c in sorted(con.coeffs.items())},
                    "rel": con.rel,
                    "rhs": format_rational(con.rhs),
                }
                for con in lp.constraints
            ],
            "nonneg": {v: lp.is_nonneg(v) for v in lp.variables},
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _cache_load(lp: LinearProgram) -> LPSolution | None:
    import os

    if _cache_dir is None:
        return None
    path = os.path.join(_cache_dir, _program_key(lp) + ".json")
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        rec = json.load(fh)
    from .rational import parse_rational

    sol = LPSolution(
        status=rec["status"],
        value=None if rec["value"] is None else parse_rational(rec["value"]),
        primal={v: parse_rational(c) for v, c in rec["primal"].items()},
        dual=tuple(parse_rational(y) for y in rec["dual"]),
        iterations=rec["iterations"],
        phase1_iterations=rec["phase1_iterations"],
        certificate=None,
    )
    if sol.status != "optimal":
        return None  # only optimal solves are cached
    # never trust the cache blindly: re-verify the certificate pair
    if check_feasible(lp, sol.primal) or check_dual_feasible(lp, sol.dual):
        return None
    if dual_objective(lp, sol.dual) != sol.value or lp.objective_value(sol.primal) != sol.value:
        return None
    return sol


def _cache_store(lp: LinearProgram, sol: LPSolution) -> None:
    import os

    if _cache_dir is None or sol.status != "optimal":
        return
    os.makedirs(_cache_dir, exist_ok=True)
    path = os.path.join(_cache_dir, _program_key(lp) + ".json")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(sol.to_record(), fh, sort_keys=True)
    os.replace(tmp, path)


def solve(lp: LinearProgram) -> LPSolution:
    """Solve exactly; optimal results carry a verified dual certificate.

    Postconditions enforced before returning an ``optimal`` solution:
    the primal passes ``check_feasible``, the dual passes
    ``check_dual_feasible``, and both objective values coincide exactly.
    """
    cached = _cache_load(lp)
    if cached is not None:
        return cached
    sx = _Simplex(lp)
    phase1_needed = any(c != 0 for c in sx.cost1)
    phase1_iterations = 0
    if phase1_needed:
        status = sx._iterate(sx.cost1, sx.n_total)
        phase1_iterations = sx.iterations
        if status != "optimal":
            raise LpboundsError("phase-1 objective is bounded; solver bug")
        infeas = sum(
            (sx.x_b[i] for i in range(sx.m) if sx.basis[i] >= sx.n_structural),
            Fraction(0),
        )
        if infeas > 0:
            y = sx._duals(sx.cost1)
            vector = {i: sx.flip[i] * y[i] for i in range(sx.m) if y[i] != 0}
            if not check_farkas(lp, vector):
                raise LpboundsError("invalid Farkas certificate; solver bug")
            return LPSolution(
                status="infeasible",
                value=None,
                primal={},
                dual=(),
                iterations=sx.iterations,
                phase1_iterations=phase1_iterations,
                certificate={"kind": "farkas", "vector": vector},
            )
        sx._drive_out_artificials()

    status = sx._iterate(sx.cost2, sx.n_structural)
    if status == "unbounded":
        enter = sx._unbounded_enter
        u = sx._unbounded_direction
        ray_std: dict[int, Fraction] = {enter: Fraction(1)}
        for i in range(sx.m):
            if u[i] != 0:
                ray_std[sx.basis[i]] = ray_std.get(sx.basis[i], Fraction(0)) - u[i]
        ray: dict[str, Fraction] = {}
        for v, (plus, minus) in sx.var_cols.items():
            val = ray_std.get(plus, Fraction(0))
            if minus is not None:
                val -= ray_std.get(minus, Fraction(0))
            if val != 0:
                ray[v] = val
        if not check_ray(lp, ray):
            raise LpboundsError("invalid unboundedness ray; solver bug")
        return LPSolution(
            status="unbounded",
            value=None,
            primal={},
            dual=(),
            iterations=sx.iterations,
            phase1_iterations=phase1_iterations,
            certificate={"kind": "ray", "vector": ray},
        )

    primal: dict[str, Fraction] = {}
    x_std: dict[int, Fraction] = {
        sx.basis[i]: sx.x_b[i] for i in range(sx.m) if sx.x_b[i] != 0
    }
    for v, (plus, minus) in sx.var_cols.items():
        val = x_std.get(plus, Fraction(0))
        if minus is not None:
            val -= x_std.get(minus, Fraction(0))
        if val != 0:
            primal[v] = val
    value = lp.objective_value(primal)

    sense_sign = 1 if lp.sense == "min" else -1
    y_std = sx._duals(sx.cost2)
    dual = tuple(sense_sign * sx.flip[i] * y_std[i] for i in range(sx.m))

    bad = check_feasible(lp, primal)
    if bad:
        raise LpboundsError(f"optimal primal failed re-check: {bad[0]}")
    bad = check_dual_feasible(lp, dual)
    if bad:
        raise LpboundsError(f"optimal dual failed re-check: {bad[0]}")
    if dual_objective(lp, dual) != value:
        raise LpboundsError("strong duality certificate failed; solver bug")

    sol = LPSolution(
        status="optimal",
        value=value,
        primal=primal,
        dual=dual,
        iterations=sx.iterations,
        phase1_iterations=phase1_iterations,
    )
    _cache_store(lp, sol)
    return sol
