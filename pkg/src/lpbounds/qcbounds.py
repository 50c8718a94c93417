"""Query-side LP bounds over subcubes.

The query partition bound is the LP

    min  sum_z sum_A w_{z,A} * 2^{|A|}
    sum_{A ni x} w_{g(x),A} >= 1 - eps      for all x        (covering)
    sum_{A ni x} sum_z w_{z,A} = 1          for all x        (total mass)
    w >= 0

where A ranges over subcubes and |A| is the support size.  Its explicit
dual (max (1-eps) sum mu_x + sum phi_x subject to, for every (z, A),
sum_{x in A, g(x)=z} mu_x + sum_{x in A} phi_x <= 2^{|A|}, with mu >= 0 and
phi free) is built alongside so solver duals can be cross-checked against
an independently constructed program.

Error boosting is majority voting over t independent copies; the exact
per-point guarantee is the binomial tail, not a Chernoff estimate.  A
boosted solution splits by label into an inequality system for decision
tree synthesis: the z=0 side becomes the ``u`` family, the z=1 side the
``w`` family, after discarding subcubes with support larger than the
cutoff (Markov: total discarded mass is below gamma because the objective
charges 2^{|A|} per unit weight).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import lp as lpmod
from .boosting import majority_product_boost
from .ccbounds import BoundResult, _finish
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    InfeasibleConstructionError,
)
from .lp import Constraint, LinearProgram
from .model import (
    BitProductDistribution,
    QueryFunction,
    Subcube,
    bit_measure,
    enumerate_subcubes,
)
from .rational import ceil_mul_log2, majority_error

QPRT_VARIABLE_CAP = 1 << 20

LabeledCubeWeights = dict[tuple[int, Subcube], Fraction]


def _cube_var(z: int, cube: Subcube) -> str:
    return f"w{z}_{cube.pattern()}"


def _cube_from_var(name: str) -> tuple[int, Subcube]:
    head, pattern = name.split("_", 1)
    return int(head[1:]), Subcube.from_pattern(pattern)


def _cube_key(cube: Subcube):
    return (cube.size, cube.support, cube.values)


def build_qprt_lp(
    g: QueryFunction, eps: Fraction, max_support: int | None = None
) -> LinearProgram:
    cubes = list(enumerate_subcubes(g.n, max_support))
    if 2 * len(cubes) > QPRT_VARIABLE_CAP:
        raise CapExceededError(f"{2 * len(cubes)} variables exceed the qprt cap")
    names = []
    for cube in cubes:
        names.append(_cube_var(0, cube))
        names.append(_cube_var(1, cube))
    objective = {
        _cube_var(z, cube): Fraction(1 << cube.size)
        for cube in cubes
        for z in (0, 1)
    }
    one = Fraction(1)
    constraints: list[Constraint] = []
    for x in range(1 << g.n):
        cov = {_cube_var(g.value(x), c): one for c in cubes if c.contains(x)}
        constraints.append(Constraint(cov, ">=", 1 - eps, f"cov_{x}"))
    for x in range(1 << g.n):
        mass = {
            _cube_var(z, c): one for c in cubes if c.contains(x) for z in (0, 1)
        }
        constraints.append(Constraint(mass, "=", one, f"mass_{x}"))
    return LinearProgram(
        name="qprt",
        sense="min",
        variables=tuple(names),
        objective=objective,
        constraints=tuple(constraints),
    )


def build_qprt_dual_lp(
    g: QueryFunction, eps: Fraction, max_support: int | None = None
) -> LinearProgram:
    points = range(1 << g.n)
    mu_names = tuple(f"mu_{x}" for x in points)
    phi_names = tuple(f"phi_{x}" for x in points)
    objective: dict[str, Fraction] = {n: 1 - eps for n in mu_names}
    for n in phi_names:
        objective[n] = Fraction(1)
    one = Fraction(1)
    constraints = []
    for cube in enumerate_subcubes(g.n, max_support):
        for z in (0, 1):
            row: dict[str, Fraction] = {}
            for x in cube.members():
                row[f"phi_{x}"] = one
                if g.value(x) == z:
                    row[f"mu_{x}"] = one
            constraints.append(
                Constraint(row, "<=", Fraction(1 << cube.size), f"dual_{z}_{cube.pattern()}")
            )
    nonneg = {n: True for n in mu_names}
    for n in phi_names:
        nonneg[n] = False
    return LinearProgram(
        name="qprt-dual",
        sense="max",
        variables=mu_names + phi_names,
        objective=objective,
        constraints=tuple(constraints),
        nonneg=nonneg,
    )


@dataclass(frozen=True)
class QprtSolution:
    """Labeled subcube weights satisfying exact total mass 1 at every point."""

    n: int
    weights: LabeledCubeWeights

    @property
    def objective(self) -> Fraction:
        return sum(
            (w * (1 << cube.size) for (_, cube), w in self.weights.items()),
            Fraction(0),
        )

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def correct_mass_at(self, g: QueryFunction, x: int) -> Fraction:
        z = g.value(x)
        return sum(
            (w for (wz, c), w in self.weights.items() if wz == z and c.contains(x)),
            Fraction(0),
        )

    def total_mass_at(self, x: int) -> Fraction:
        return sum(
            (w for (_, c), w in self.weights.items() if c.contains(x)), Fraction(0)
        )

    def verify(self, g: QueryFunction, eps: Fraction) -> None:
        """Exact feasibility for the qprt program at error level eps."""
        if g.n != self.n:
            raise DimensionMismatchError("solution and function bit counts differ")
        for x in range(1 << g.n):
            if self.total_mass_at(x) != 1:
                raise InfeasibleConstructionError(f"total mass at {x} is not 1")
            if self.correct_mass_at(g, x) < 1 - eps:
                raise InfeasibleConstructionError(
                    f"covering below 1-eps at point {x}"
                )


def qprt_bound(
    g: QueryFunction, eps: Fraction, max_support: int | None = None
) -> BoundResult:
    return _finish("qprt", lpmod.solve(build_qprt_lp(g, eps, max_support)))


def qprt_solution(g: QueryFunction, result: BoundResult) -> QprtSolution:
    weights: LabeledCubeWeights = {}
    for name, w in result.solution.primal.items():
        z, cube = _cube_from_var(name)
        weights[(z, cube)] = w
    return QprtSolution(g.n, weights)


@dataclass(frozen=True)
class BoostedQprt:
    """Majority-boosted solution with its exact achieved error level."""

    solution: QprtSolution
    votes: int
    achieved_error: Fraction


def boost_qprt(sol: QprtSolution, g: QueryFunction, t: int) -> BoostedQprt:
    """t-fold majority product; all structural guarantees re-verified.

    Verified exactly: per-point total mass stays 1; per-point correct mass
    equals 1 - tail(a_x, t) for the input's correct mass a_x; the boosted
    objective is at most (input objective)**t.
    """
    if t < 1 or t % 2 == 0:
        raise ValueError(f"vote count must be a positive odd integer, got {t}")
    boosted_weights = majority_product_boost(
        sol.weights, t, lambda a, b: a.intersect(b), sort_key=_cube_key
    )
    boosted = QprtSolution(sol.n, boosted_weights)
    if boosted.objective > sol.objective**t:
        raise InfeasibleConstructionError("boosted objective exceeds the product bound")
    worst = Fraction(0)
    for x in range(1 << g.n):
        if boosted.total_mass_at(x) != 1:
            raise InfeasibleConstructionError(f"boosted total mass at {x} is not 1")
        a = sol.correct_mass_at(g, x)
        expected = 1 - majority_error(a, t)
        if boosted.correct_mass_at(g, x) != expected:
            raise InfeasibleConstructionError(
                f"boosted correct mass at {x} differs from the binomial tail"
            )
        worst = max(worst, 1 - expected)
    return BoostedQprt(boosted, t, worst)


@dataclass(frozen=True)
class FeasibleSystem:
    """Two labeled subcube families with margins, for decision tree synthesis.

    The ``u`` family certifies the 0-side pointwise: at least 1 - alpha0 on
    g^-1(0), at most beta0 on g^-1(1).  The ``w`` family is mass-capped at 1
    everywhere and at beta1 on g^-1(0), and must carry at least
    (1 - alpha1) mu_1 of 1-mass against the distribution in use.  Supports
    are bounded by ``a`` (u side) and ``b`` (w side).
    """

    n: int
    u: dict[Subcube, Fraction]
    w: dict[Subcube, Fraction]
    alpha0: Fraction
    beta0: Fraction
    alpha1: Fraction
    beta1: Fraction
    a: int
    b: int

    def u_mass_at(self, x: int) -> Fraction:
        return sum((v for c, v in self.u.items() if c.contains(x)), Fraction(0))

    def w_mass_at(self, x: int) -> Fraction:
        return sum((v for c, v in self.w.items() if c.contains(x)), Fraction(0))

    def verify(
        self, g: QueryFunction, mu: BitProductDistribution | None = None
    ) -> list[str]:
        """All violated inequalities, as messages; [] iff the system verifies.

        Pointwise checks run over the points consistent with the fixed bits
        of ``mu`` (all points when mu is None); fixed bits must not occur in
        any support.
        """
        out: list[str] = []
        for c, v in list(self.u.items()) + list(self.w.items()):
            if v < 0:
                out.append(f"negative weight on {c.pattern()}")
        for c in self.u:
            if c.size > self.a:
                out.append(f"u support {c.pattern()} exceeds a={self.a}")
        for c in self.w:
            if c.size > self.b:
                out.append(f"w support {c.pattern()} exceeds b={self.b}")
        fixed_mask = 0
        fixed_vals = 0
        if mu is not None:
            fixed_mask = mu.fixed_bits()
            for i in range(mu.n):
                if (fixed_mask >> i) & 1 and mu.p[i] == 1:
                    fixed_vals |= 1 << i
            for c in list(self.u) + list(self.w):
                if c.support & fixed_mask:
                    out.append(f"support {c.pattern()} uses a mu-fixed bit")
        consistent = Subcube(self.n, fixed_mask, fixed_vals)
        for x in consistent.members():
            um = self.u_mass_at(x)
            if g.value(x) == 0 and um < 1 - self.alpha0:
                out.append(f"u covering below 1-alpha0 at {x}")
            if g.value(x) == 1 and um > self.beta0:
                out.append(f"u mass above beta0 at {x}")
            wm = self.w_mass_at(x)
            if wm > 1:
                out.append(f"w mass above 1 at {x}")
            if g.value(x) == 0 and wm > self.beta1:
                out.append(f"w mass above beta1 at {x}")
        if mu is not None:
            mu1 = bit_measure(mu, g, 1, Subcube(self.n, 0, 0))
            carried = sum(
                (v * bit_measure(mu, g, 1, c) for c, v in self.w.items()),
                Fraction(0),
            )
            if carried < (1 - self.alpha1) * mu1:
                out.append("w carries less than (1-alpha1) mu_1 of 1-mass")
        return out


def _project_cube(
    cube: Subcube, fixed_mask: int, fixed_vals: int
) -> Subcube | None:
    """Drop fixed coordinates from the support; None when values conflict."""
    overlap = cube.support & fixed_mask
    if (cube.values ^ fixed_vals) & overlap:
        return None
    keep = cube.support & ~fixed_mask
    return Subcube(cube.n, keep, cube.values & keep)


def extract_feasible(
    boosted: BoostedQprt,
    gamma: Fraction,
    g: QueryFunction,
    mu: BitProductDistribution | None = None,
) -> FeasibleSystem:
    """Split a boosted solution into a verified feasible system.

    The support cutoff is d' = ceil(log2 objective) + ceil(log2 1/gamma);
    the discarded mass is verified to be below gamma (each discarded unit
    of weight costs more than objective/gamma in the objective).  Margins
    are alpha0 = beta0 = alpha1 = beta1 = 2*gamma and a = b = d'.  Requires
    the boosted error level to be at most gamma.
    """
    if boosted.achieved_error > gamma:
        raise InfeasibleConstructionError(
            f"boosted error {boosted.achieved_error} exceeds gamma {gamma}"
        )
    sol = boosted.solution
    objective = sol.objective
    d = ceil_mul_log2(1, objective) if objective > 1 else 0
    dprime = d + ceil_mul_log2(1, 1 / gamma)
    removed = Fraction(0)
    kept: LabeledCubeWeights = {}
    for (z, cube), wv in sol.weights.items():
        if cube.size > dprime:
            removed += wv
        else:
            kept[(z, cube)] = wv
    if removed >= gamma:
        raise InfeasibleConstructionError(
            f"discarded mass {removed} is not below gamma {gamma}"
        )
    fixed_mask = 0
    fixed_vals = 0
    if mu is not None:
        fixed_mask = mu.fixed_bits()
        for i in range(mu.n):
            if (fixed_mask >> i) & 1 and mu.p[i] == 1:
                fixed_vals |= 1 << i
    u: dict[Subcube, Fraction] = {}
    w: dict[Subcube, Fraction] = {}
    for (z, cube), wv in kept.items():
        proj = _project_cube(cube, fixed_mask, fixed_vals)
        if proj is None:
            continue
        side = u if z == 0 else w
        side[proj] = side.get(proj, Fraction(0)) + wv
    system = FeasibleSystem(
        n=sol.n,
        u=u,
        w=w,
        alpha0=2 * gamma,
        beta0=2 * gamma,
        alpha1=2 * gamma,
        beta1=2 * gamma,
        a=dprime,
        b=dprime,
    )
    problems = system.verify(g, mu)
    if problems:
        raise InfeasibleConstructionError(
            f"extracted system failed verification: {problems[0]}"
        )
    return system
