import random

import numpy as np
import pytest

from conftest import MP3_PRIORS
from oracles import grid_extremes, random_problem, random_weights, scipy_optimum
from plentail.compress import compress_tableau
from plentail.constraints import Belief, ConstraintSystem, LinearConstraint, build_system
from plentail.errors import InconsistencyError, InfeasibleError
from plentail.sentences import parse
from plentail.solve import (
    INFEASIBLE,
    Interval,
    entail_interval,
    feasible,
    solve_lp,
    target_interval_at,
)
from plentail.worlds import enumerate_worlds


def _rows(system):
    return [(c.coeffs, c.relation, c.rhs) for c in system.constraints]


def test_maximize_single_weight():
    res = solve_lp([1, 0, 0], ConstraintSystem((), 3), "max")
    assert res.optimal
    assert res.objective == pytest.approx(1.0, abs=1e-12)
    assert res.w == pytest.approx((1, 0, 0), abs=1e-12)


def test_min_b_lower_row_over_mp3(schema3, mp3_beliefs):
    system = build_system(schema3, mp3_beliefs)
    res = solve_lp([1, 0, 0, 0, 0], system, "min")
    assert res.objective == pytest.approx(0.0, abs=1e-12)
    # independent check on the 0.01 grid
    lo, _ = grid_extremes([1, 0, 0, 0, 0], [1, 0, 0, 0, 0], _rows(system), 5, 100)
    assert lo == 0.0


def test_contradictory_priors_infeasible():
    c = (1, 0)
    system = ConstraintSystem((LinearConstraint(c, "=", 0.3), LinearConstraint(c, "=", 0.6)), 2)
    assert solve_lp([1, 0], system).status == INFEASIBLE


def test_negative_rhs_row():
    # -w1 >= -0.25 is w1 <= 0.25
    system = ConstraintSystem((LinearConstraint((-1, 0), ">=", -0.25),), 2)
    res = solve_lp([1, 0], system, "max")
    assert res.objective == pytest.approx(0.25)


def test_redundant_rows_are_tolerated():
    row = LinearConstraint((1, 1, 0), "=", 0.5)
    system = ConstraintSystem((row, row, LinearConstraint((0, 0, 1), "=", 0.5)), 3)
    res = solve_lp([1, 0, 0], system, "max")
    assert res.objective == pytest.approx(0.5)
    assert feasible(system, res.w)


def test_objective_width_checked():
    with pytest.raises(ValueError):
        solve_lp([1, 0], ConstraintSystem((), 3))
    with pytest.raises(ValueError):
        solve_lp([1, 0, 0], ConstraintSystem((), 3), "maximise")


def test_mp3_interval(schema3, mp3_beliefs):
    iv = entail_interval(schema3, mp3_beliefs)
    assert iv.lo == pytest.approx(0.0, abs=1e-9)
    assert iv.hi == pytest.approx(0.8, abs=1e-9)


def test_modus_ponens_certain():
    t = enumerate_worlds([parse("Q"), parse("Q -> R"), parse("R")], source_count=2)
    iv = entail_interval(t, [Belief.at(0, 1.0), Belief.at(1, 1.0)])
    assert (iv.lo, iv.hi) == pytest.approx((1.0, 1.0), abs=1e-12)


def test_compressed_and_full_agree(schema3, mp3_full, mp3_beliefs):
    a = entail_interval(schema3, mp3_beliefs)
    b = entail_interval(mp3_full, mp3_beliefs)
    assert abs(a.lo - b.lo) <= 1e-9 and abs(a.hi - b.hi) <= 1e-9


def test_infeasible_beliefs_raise(schema3):
    with pytest.raises(InfeasibleError):
        entail_interval(schema3, [Belief.at(0, 0.9), Belief.at(3, 0.05)])


def test_target_interval_at(schema3, mp3_beliefs):
    system = build_system(schema3, mp3_beliefs)
    iv = target_interval_at(schema3, (0.2,) * 5, 4, system)
    assert (iv.lo, iv.hi) == pytest.approx((0.2, 0.8), abs=1e-12)
    post = (0.25, 0.25, 0.125, 0.1875, 0.1875)
    iv = target_interval_at(schema3, post, 4)
    assert (iv.lo, iv.hi) == pytest.approx((0.25, 0.75), abs=1e-12)
    iv = target_interval_at(schema3, (0.2,) * 5, 0)
    assert iv.lo == iv.hi


def test_target_interval_at_rejects_infeasible(schema3, mp3_beliefs):
    system = build_system(schema3, mp3_beliefs)
    with pytest.raises(InconsistencyError):
        target_interval_at(schema3, (1, 0, 0, 0, 0), 4, system)


def test_feasible(schema3, mp3_beliefs):
    system = build_system(schema3, mp3_beliefs)
    assert feasible(system, (0.2,) * 5)
    assert not feasible(system, (1, 0, 0, 0, 0))
    assert not feasible(ConstraintSystem((), 2), (1.5, -0.5))
    with pytest.raises(ValueError):
        feasible(system, (0.5, 0.5))


def test_interval_invariant():
    with pytest.raises(ValueError):
        Interval(0.6, 0.4)


def test_mp3_grid_oracle(schema3, mp3_beliefs):
    system = build_system(schema3, mp3_beliefs)
    lo, hi = grid_extremes(system.target_lower, system.target_upper, _rows(system), 5, 100)
    iv = entail_interval(schema3, mp3_beliefs)
    assert abs(iv.lo - lo) <= 1e-9 and abs(iv.hi - hi) <= 1e-9


def _random_system(rng, n):
    rows = []
    w = random_weights(rng, n)
    for _ in range(rng.randint(0, 3)):
        coeffs = tuple(rng.randint(0, 1) for _ in range(n))
        v = sum(c * x for c, x in zip(coeffs, w))
        rel = rng.choice(["<=", ">=", "="])
        # snap to the 0.05 grid and loosen so the system stays feasible on it
        rhs = round(v * 20) / 20
        if rel == "=":
            rows.append(LinearConstraint(coeffs, "=", rhs))
        else:
            rows.append(LinearConstraint(coeffs, rel, min(1.0, rhs + 0.05) if rel == "<=" else max(0.0, rhs - 0.05)))
    return ConstraintSystem(tuple(rows), n)


@pytest.mark.parametrize("seed", range(40))
def test_lp_against_grid_and_scipy(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    system = _random_system(rng, n)
    objective = [rng.randint(0, 1) for _ in range(n)]
    lo_res = solve_lp(objective, system, "min")
    hi_res = solve_lp(objective, system, "max")
    ref_lo = scipy_optimum(objective, _rows(system), n)
    if ref_lo is None:
        assert lo_res.status == INFEASIBLE and hi_res.status == INFEASIBLE
        return
    ref_hi = scipy_optimum(objective, _rows(system), n, maximize=True)
    assert lo_res.objective == pytest.approx(ref_lo, abs=1e-8)
    assert hi_res.objective == pytest.approx(ref_hi, abs=1e-8)
    assert feasible(system, lo_res.w) and feasible(system, hi_res.w)
    grid = grid_extremes(objective, objective, _rows(system), n, 20)
    if grid is not None:
        assert lo_res.objective <= grid[0] + 1e-9 and grid[0] - lo_res.objective <= 0.05 + 1e-9
        assert hi_res.objective >= grid[1] - 1e-9 and hi_res.objective - grid[1] <= 0.05 + 1e-9


@pytest.mark.parametrize("seed", range(40))
def test_interval_invariance_and_containment(seed):
    rng = random.Random(1000 + seed)
    sentences = random_problem(rng, max_atoms=4, max_sentences=5, min_sentences=2)
    two = enumerate_worlds(sentences, source_count=len(sentences) - 1)
    comp = compress_tableau(two)
    w = random_weights(rng, two.world_count)
    beliefs = [
        Belief.at(i, sum(x for x, world in zip(w, two.worlds) if world[i] == 1))
        for i in range(two.source_count)
    ]
    a, b = entail_interval(two, beliefs), entail_interval(comp, beliefs)
    assert abs(a.lo - b.lo) <= 1e-9 and abs(a.hi - b.hi) <= 1e-9
    system = build_system(two, beliefs)
    rows = _rows(system)
    assert a.lo == pytest.approx(scipy_optimum(system.target_lower, rows, two.world_count), abs=1e-7)
    assert a.hi == pytest.approx(scipy_optimum(system.target_upper, rows, two.world_count, True), abs=1e-7)
    # the generating distribution is feasible; its target value lies inside
    at = target_interval_at(two, w, two.source_count, system)
    assert a.contains(at.lo) and a.contains(at.hi)
