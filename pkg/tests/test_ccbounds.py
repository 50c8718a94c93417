from fractions import Fraction as F

import pytest
from conftest import CC_CORPUS, UNIFORM_4x4, chain_cached, srec_cached

from lpbounds import families
from lpbounds.ccbounds import (
    SrecInstance,
    build_prt_dual_lp,
    build_prt_lp,
    build_rprt_dual_lp,
    build_rprt_lp,
    partition_weights,
    prt_bound,
    reduce_prt_error,
    rprt_bound,
    srec_bound,
)
from lpbounds.errors import InfeasibleConstructionError
from lpbounds.lp import check_feasible, dual_objective, solve
from lpbounds.rational import majority_error


def test_constant_function_zero_error_srec_is_one():
    # the full rectangle at weight 1 is feasible; any feasible solution has
    # total weight at least the weight through one covered point, which the
    # covering row pins to at least 1
    f = families.const2p(2, 0)
    res = srec_bound(SrecInstance(f, 0, F(0), F(0)))
    assert res.value == 1


def test_eps_one_gives_zero():
    f = families.eq(2)
    assert srec_bound(SrecInstance(f, 1, F(1), F(0))).value == 0
    assert rprt_bound(f, F(1)).value == 0


def test_eq2_worst_case_value():
    res = srec_cached("eq2", 1, F(0), F(0), False)
    assert res.value == 4  # diagonal-singleton derivation, see test_lp


def test_prt_constant_zero():
    f = families.const2p(2, 0)
    res = prt_bound(f, F(0))
    assert res.value == 1


def test_prt_at_least_rprt_eq2():
    prt = prt_bound(CC_CORPUS["eq2"], F(1, 8))
    rprt = rprt_bound(CC_CORPUS["eq2"], F(1, 8))
    assert prt.value >= rprt.value


def test_chain_trivial_cases():
    # at eps = 1 covering is free: rprt and srec drop to 0, while the
    # exact-mass constraint keeps prt pinned at 1; the chain still holds
    rep = chain_cached("and2", F(1))
    assert rep.values == (1, 0, 0)


def test_chain_constant_zero_is_all_ones():
    from lpbounds.ccbounds import check_chain

    f = families.const2p(2, 0)
    rep = check_chain(f, F(0))
    assert rep.values == (1, 1, 1)


def test_chain_xor2():
    rep = chain_cached("xor2", F(1, 8))
    prt, rprt, srec = rep.values
    assert prt >= rprt >= srec


def test_srec_monotone_in_eps_and_delta():
    # non-increasing in eps and in delta on every corpus function
    grid = [F(0), F(1, 8), F(1, 4), F(1, 2)]
    deltas = [F(0), F(1, 4)]
    for name in CC_CORPUS:
        values = {
            (eps, delta): srec_cached(name, 1, eps, delta, False).value
            for eps in grid
            for delta in deltas
        }
        for delta in deltas:
            column = [values[(eps, delta)] for eps in grid]
            assert all(a >= b for a, b in zip(column, column[1:])), name
        for eps in grid:
            assert values[(eps, F(0))] >= values[(eps, F(1, 4))], name


def test_distributional_at_most_worst_case():
    f = CC_CORPUS["and2"]
    wc = srec_bound(SrecInstance(f, 1, F(1, 8), F(1, 8))).value
    dist = srec_bound(SrecInstance(f, 1, F(1, 8), F(1, 8), UNIFORM_4x4)).value
    assert dist <= wc


def _map_partition_duals(plp, duals, relaxed):
    """Solver row duals -> the explicit dual's (mu, phi) variables.

    The relaxed dual's phi enters negatively with phi >= 0, so the <=-row
    duals (which are nonpositive) flip sign.
    """
    sign = -1 if relaxed else 1
    assign = {}
    for i, con in enumerate(plp.constraints):
        kind, x, y = con.label.split("_")
        if kind == "cov":
            assign[f"mu_{x}_{y}"] = duals[i]
        else:
            assign[f"phi_{x}_{y}"] = sign * duals[i]
    return assign


def test_partition_duals_certify_optimality():
    # weak duality: a feasible point of the explicitly built dual whose
    # objective equals the primal optimum certifies both solves
    f = CC_CORPUS["and2"]
    eps = F(1, 8)
    for build_primal, build_dual, relaxed in [
        (build_prt_lp, build_prt_dual_lp, False),
        (build_rprt_lp, build_rprt_dual_lp, True),
    ]:
        plp = build_primal(f, eps)
        primal = solve(plp)
        dlp = build_dual(f, eps)
        assign = _map_partition_duals(plp, primal.dual, relaxed)
        assert check_feasible(dlp, assign) == []
        assert dlp.objective_value(assign) == primal.value
        assert dual_objective(plp, primal.dual) == primal.value


def test_partition_dual_solves_match_on_2x2():
    f = families.eq(1)
    eps = F(1, 8)
    for build_primal, build_dual in [
        (build_prt_lp, build_prt_dual_lp),
        (build_rprt_lp, build_rprt_dual_lp),
    ]:
        primal = solve(build_primal(f, eps))
        dual = solve(build_dual(f, eps))
        assert primal.value == dual.value


def test_reduce_error_identity_at_one_vote():
    f = CC_CORPUS["and2"]
    w = partition_weights(prt_bound(f, F(1, 4)))
    red = reduce_prt_error(w, f, 1)
    assert red.weights == {k: v for k, v in w.items() if v != 0}
    assert red.achieved_error <= F(1, 4)


def test_reduce_error_three_votes_feasible_at_binomial_level():
    f = CC_CORPUS["and2"]
    base = prt_bound(f, F(1, 4))
    w = partition_weights(base)
    red = reduce_prt_error(w, f, 3)  # re-verifies mass, covering, objective
    assert red.achieved_error <= majority_error(F(3, 4), 3)
    assert red.objective <= base.value**3
    # independent re-check through the LP at the achieved level
    lp = build_prt_lp(f, red.achieved_error)
    assign = {f"w{z}_{r.rows:x}_{r.cols:x}": wt for (z, r), wt in red.weights.items()}
    assert check_feasible(lp, assign) == []


def test_reduce_error_rejects_even_votes():
    f = CC_CORPUS["and2"]
    w = partition_weights(prt_bound(f, F(1, 4)))
    with pytest.raises(ValueError):
        reduce_prt_error(w, f, 2)


def test_reduce_error_rejects_relaxed_solutions():
    f = CC_CORPUS["and2"]
    w = partition_weights(rprt_bound(f, F(1, 3)))
    total_masses = {
        (x, y): sum(wt for (z, r), wt in w.items() if r.contains(x, y))
        for x in range(4)
        for y in range(4)
    }
    if any(m != 1 for m in total_masses.values()):
        with pytest.raises(InfeasibleConstructionError):
            reduce_prt_error(w, f, 3)
    else:
        pytest.skip("relaxed optimum happened to have exact unit mass")


def test_bound_result_log_bracket():
    res = srec_cached("eq2", 1, F(0), F(0), False)
    assert res.log2_lo == res.log2_hi == 2  # value 4
    res2 = srec_bound(SrecInstance(CC_CORPUS["eq2"], 1, F(1), F(0)))
    assert res2.log2_lo is None and res2.log2_hi is None
