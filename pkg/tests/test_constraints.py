import random

import numpy as np
import pytest

from oracles import aggregation_matrix, nilsson_rows, projection_contains, random_problem, random_weights
from plentail.compress import compress_tableau
from plentail.constraints import (
    Belief,
    ConstraintSystem,
    LinearConstraint,
    bound_rows,
    build_system,
    dump_system,
    fmt,
    system_size,
)
from plentail.solve import feasible, solve_lp
from plentail.worlds import enumerate_worlds

WORKED_SYSTEM = [
    ((1, 1, 1, 1, 0), "=", 0.8),
    ((1, 1, 1, 0, 0), "<=", 0.7),
    ((1, 1, 1, 0, 1), ">=", 0.7),
    ((1, 1, 0, 0, 0), "<=", 0.6),
    ((1, 1, 0, 1, 1), ">=", 0.6),
    ((1, 0, 1, 1, 1), "=", 0.8),
]


def test_bound_rows(schema3):
    assert bound_rows(schema3, 1) == ((1, 1, 1, 0, 0), (1, 1, 1, 0, 1))
    assert bound_rows(schema3, 4) == ((1, 0, 0, 0, 0), (1, 0, 1, 1, 1))
    lower, upper = bound_rows(schema3, 0)
    assert lower == upper
    with pytest.raises(IndexError):
        bound_rows(schema3, 5)


def test_eight_row_system(schema3, mp3_beliefs):
    s = build_system(schema3, mp3_beliefs)
    assert [(c.coeffs, c.relation, c.rhs) for c in s.constraints] == WORKED_SYSTEM
    assert s.target_lower == (1, 0, 0, 0, 0)
    assert s.target_upper == (1, 0, 1, 1, 1)
    assert len(s.constraints) + len(s.target_rows()) == 8


def test_empty_beliefs(schema3):
    s = build_system(schema3, [])
    assert s.constraints == ()
    assert s.normalization.coeffs == (1,) * 5


def test_interval_belief_rows(schema3):
    s = build_system(schema3, [Belief.between(2, 0.5, 0.7)])
    assert [(c.coeffs, c.relation, c.rhs) for c in s.constraints] == [
        ((1, 1, 0, 0, 0), "<=", 0.7),
        ((1, 1, 0, 1, 1), ">=", 0.5),
    ]


def test_belief_validation(schema3):
    with pytest.raises(ValueError):
        build_system(schema3, [Belief.at(4, 0.5)])
    with pytest.raises(ValueError):
        Belief.between(0, 0.7, 0.5)
    with pytest.raises(ValueError):
        Belief.at(0, 1.5)
    with pytest.raises(TypeError):
        build_system(schema3, [(0, 0.5)])


def test_system_size(schema3, mp3_full, mp3_beliefs):
    compressed = system_size(build_system(schema3, mp3_beliefs))
    full = system_size(build_system(mp3_full, mp3_beliefs))
    assert (compressed, full) == (40, 80)
    assert compressed / full == 0.5
    assert system_size(ConstraintSystem((), 0)) == 0


def test_dc_free_system_is_nilsson(mp3_full, mp3_beliefs):
    s = build_system(mp3_full, mp3_beliefs)
    expected = nilsson_rows(mp3_full.worlds, [(b.sentence_index, b.lo, b.hi, True) for b in mp3_beliefs])
    assert [(list(c.coeffs), c.relation, c.rhs) for c in s.constraints] == expected


def test_lower_never_exceeds_upper(schema3):
    rng = np.random.default_rng(0)
    for i in range(5):
        lower, upper = map(np.array, bound_rows(schema3, i))
        for _ in range(50):
            w = rng.random(5)
            assert lower @ w <= upper @ w


def test_constraint_width_checked():
    with pytest.raises(ValueError):
        ConstraintSystem((LinearConstraint((1, 0), "=", 0.5),), 3)
    with pytest.raises(ValueError):
        LinearConstraint((1,), "<", 0.5)


def test_dump(schema3, mp3_beliefs):
    lines = dump_system(build_system(schema3, mp3_beliefs)).splitlines()
    assert lines[0] == "1 1 1 1 0 = 0.800000"
    assert lines[2] == "1 1 1 0 1 >= 0.700000"
    assert lines[6:] == ["1 0 0 0 0 <= target", "1 0 1 1 1 >= target", "1 1 1 1 1 = 1"]


@pytest.mark.parametrize(
    "x, text",
    [(0.0, "0.000000"), (-0.0, "0.000000"), (0.8, "0.800000"), (0.0000005, "0.000000"),
     (0.0000015, "0.000002"), (0.1875, "0.187500"), (1 / 3, "0.333333"), (-1e-12, "0.000000")],
)
def test_fmt(x, text):
    assert fmt(x) == text


def _vertices(system, rng, count=25):
    out = []
    for _ in range(count):
        c = rng.normal(size=system.world_count)
        res = solve_lp(c, system, "min")
        assert res.optimal
        out.append(res.w)
    return out


def _check_projection(two, comp, beliefs, rng):
    """Compressed feasible set == aggregation image of the two-valued feasible set."""
    M = aggregation_matrix(comp.worlds, two.worlds)
    rows = nilsson_rows(two.worlds, [(b.sentence_index, b.lo, b.hi, b.point) for b in beliefs])
    sys_c = build_system(comp, beliefs)
    sys_2 = build_system(two, beliefs)
    for w in _vertices(sys_c, rng):
        assert projection_contains(w, M, rows)
    for w in _vertices(sys_2, rng):
        assert feasible(sys_c, tuple(M @ np.asarray(w)), tol=1e-7)


def test_interval_belief_projection_oracle(schema3, mp3_full):
    rng = np.random.default_rng(1)
    beliefs = [Belief.between(2, 0.5, 0.7), Belief.at(0, 0.8), Belief.between(3, 0.6, 0.9)]
    _check_projection(mp3_full, schema3, beliefs, rng)


def test_point_belief_projection_oracle(schema3, mp3_full, mp3_beliefs):
    _check_projection(mp3_full, schema3, mp3_beliefs, np.random.default_rng(2))


@pytest.mark.parametrize("seed", range(30))
def test_random_projection_oracle(seed):
    rng = random.Random(seed)
    sentences = random_problem(rng, max_atoms=4, max_sentences=4, min_sentences=2)
    two = enumerate_worlds(sentences, source_count=len(sentences) - 1)
    comp = compress_tableau(two)
    w = random_weights(rng, two.world_count)
    beliefs = []
    for i in range(two.source_count):
        p = sum(x for x, world in zip(w, two.worlds) if world[i] == 1)
        if rng.random() < 0.5:
            beliefs.append(Belief.at(i, p))
        else:
            beliefs.append(Belief.between(i, max(0.0, p - 0.1), min(1.0, p + 0.1)))
    _check_projection(two, comp, beliefs, np.random.default_rng(seed))
