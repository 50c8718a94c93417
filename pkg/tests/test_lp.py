from fractions import Fraction as F

import pytest

from lpbounds import families
from lpbounds.ccbounds import SrecInstance, build_srec_lp
from lpbounds.lp import (
    Constraint,
    LinearProgram,
    check_dual_feasible,
    check_farkas,
    check_feasible,
    check_ray,
    dual_objective,
    solve,
)
from lpbounds.model import enumerate_rectangles


def lp_min(variables, objective, constraints, nonneg=None):
    return LinearProgram("t", "min", tuple(variables), objective, tuple(constraints), nonneg or {})


def test_min_x_at_least_one():
    sol = solve(lp_min(["x"], {"x": F(1)}, [Constraint({"x": F(1)}, ">=", F(1))]))
    assert sol.status == "optimal" and sol.value == 1
    assert sol.primal == {"x": F(1)}


def test_zero_solution_feasible():
    # covering level 1 - eps with eps = 1 asks for >= 0: all-zero is optimal
    sol = solve(
        lp_min(["x", "y"], {"x": F(1), "y": F(1)}, [Constraint({"x": F(1), "y": F(1)}, ">=", F(0))])
    )
    assert sol.value == 0 and sol.primal == {}


def test_eq2_zero_error_srec_is_four():
    """The z=1 smooth rectangle LP at eps = delta = 0 for 4x4 equality.

    Independent derivation: the packing rows force weight 0 on every
    rectangle touching an off-diagonal cell, so only the four diagonal
    singletons may carry weight, and covering forces each of them to 1.
    """
    f = families.eq(2)
    diagonal_only = [
        r
        for r in enumerate_rectangles(4, 4)
        if all(x == y for x in range(4) for y in range(4) if r.contains(x, y))
    ]
    assert len(diagonal_only) == 4
    assert all(r.rows == r.cols and r.rows.bit_count() == 1 for r in diagonal_only)

    lp = build_srec_lp(SrecInstance(f, 1, F(0), F(0)))
    sol = solve(lp)
    assert sol.value == 4
    # the solver's optimum is supported exactly on those singletons, each at 1
    assert sol.primal == {f"w_{r.rows:x}_{r.cols:x}": F(1) for r in diagonal_only}


def test_check_feasible_reports_slack():
    lp = lp_min(["x", "y"], {"x": F(1)}, [Constraint({"x": F(1), "y": F(1)}, "=", F(1), "mass")])
    viols = check_feasible(lp, {})
    assert len(viols) == 1
    assert viols[0].label == "mass" and viols[0].slack == 1


def test_solve_primal_passes_recheck():
    f = families.and2p(2)
    lp = build_srec_lp(SrecInstance(f, 0, F(1, 8), F(1, 8)))
    sol = solve(lp)
    assert check_feasible(lp, sol.primal) == []
    assert check_dual_feasible(lp, sol.dual) == []
    assert dual_objective(lp, sol.dual) == sol.value


def test_determinism_byte_identical():
    f = families.xor2p(2)
    lp = build_srec_lp(SrecInstance(f, 0, F(1, 8), F(1, 4)))
    a = solve(lp).canonical_bytes()
    b = solve(lp).canonical_bytes()
    assert a == b


def test_objective_scaling_preserves_basis():
    f = families.and2p(2)
    lp = build_srec_lp(SrecInstance(f, 1, F(1, 8), F(1, 8)))
    sol = solve(lp)
    scaled = LinearProgram(
        lp.name,
        lp.sense,
        lp.variables,
        {v: F(3, 2) * c for v, c in lp.objective.items()},
        lp.constraints,
        lp.nonneg,
    )
    sol2 = solve(scaled)
    assert sol2.value == F(3, 2) * sol.value
    assert sol2.primal == sol.primal
    assert sol2.iterations == sol.iterations


def test_infeasible_with_farkas_certificate():
    lp = lp_min(
        ["x"],
        {"x": F(1)},
        [Constraint({"x": F(1)}, ">=", F(3)), Constraint({"x": F(1)}, "<=", F(1))],
    )
    sol = solve(lp)
    assert sol.status == "infeasible"
    assert sol.certificate is not None and sol.certificate["kind"] == "farkas"
    assert check_farkas(lp, sol.certificate["vector"])


def test_unbounded_with_ray_certificate():
    lp = lp_min(
        ["x", "y"],
        {"x": F(-1), "y": F(0)},
        [Constraint({"x": F(1), "y": F(-1)}, "<=", F(2))],
    )
    sol = solve(lp)
    assert sol.status == "unbounded"
    assert sol.certificate is not None and sol.certificate["kind"] == "ray"
    assert check_ray(lp, sol.certificate["vector"])


def test_free_variables_and_equalities():
    # min y subject to y = -2, y free
    lp = lp_min(["y"], {"y": F(1)}, [Constraint({"y": F(1)}, "=", F(-2))], {"y": False})
    sol = solve(lp)
    assert sol.value == -2 and sol.primal == {"y": F(-2)}
    assert check_dual_feasible(lp, sol.dual) == []


def test_max_sense():
    lp = LinearProgram(
        "m",
        "max",
        ("x", "y"),
        {"x": F(2), "y": F(1)},
        (
            Constraint({"x": F(1), "y": F(1)}, "<=", F(4)),
            Constraint({"x": F(1)}, "<=", F(3)),
        ),
    )
    sol = solve(lp)
    assert sol.value == 7
    assert dual_objective(lp, sol.dual) == 7
    assert check_dual_feasible(lp, sol.dual) == []


def test_negative_rhs_rows_are_handled():
    # x >= -5 is inactive; optimum at x = 0
    lp = lp_min(["x"], {"x": F(1)}, [Constraint({"x": F(1)}, ">=", F(-5))])
    assert solve(lp).value == 0


def test_undeclared_variable_rejected():
    with pytest.raises(Exception):
        lp_min(["x"], {"x": F(1)}, [Constraint({"z": F(1)}, ">=", F(1))])


def test_dump_is_text():
    lp = lp_min(["x"], {"x": F(1)}, [Constraint({"x": F(1)}, ">=", F(1), "cov")])
    text = lp.dump()
    assert "cov" in text and ">=" in text
