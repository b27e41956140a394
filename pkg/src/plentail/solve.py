"""Linear programs over world weights and entailment intervals.

The solver is a dense two-phase primal simplex with Bland's rule.  Problems
here are small (a handful of worlds after compression), so clarity wins over
speed: no presolve, duplicate rows are kept and handled by phase 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constraints import ConstraintSystem, bound_rows, build_system
from .errors import InconsistencyError, InfeasibleError
from .worlds import Tableau

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-6
OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    objective: float = float("nan")
    w: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi + 1e-9:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, x: float, tol: float = 1e-9) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2


def _standard_form(system: ConstraintSystem):
    """Rows ``A x = b`` with ``b >= 0``; returns A, b and the artificial column mask."""
    n = system.world_count
    rows = [*system.constraints, system.normalization]
    m = len(rows)
    n_slack = sum(1 for r in rows if r.relation != "=")
    A = np.zeros((m, n + n_slack + m))
    b = np.zeros(m)
    slack = n
    for i, r in enumerate(rows):
        A[i, :n] = r.coeffs
        b[i] = r.rhs
        if r.relation == "<=":
            A[i, slack] = 1.0
            slack += 1
        elif r.relation == ">=":
            A[i, slack] = -1.0
            slack += 1
        if b[i] < 0:
            A[i] *= -1
            b[i] *= -1
        A[i, n + n_slack + i] = 1.0  # artificial
    artificial = np.zeros(A.shape[1], dtype=bool)
    artificial[n + n_slack:] = True
    return A, b, artificial


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]
    basis[row] = col


def _run_simplex(T, basis, allowed):
    """Minimize the objective held in the last row of tableau ``T`` (Bland's rule).

    The last row stores reduced costs, with ``-z`` in the last column.
    Returns False if the problem is unbounded.
    """
    m = T.shape[0] - 1
    while True:
        cost = T[-1, :-1]
        entering = next((j for j in range(len(cost)) if allowed[j] and cost[j] < -PIVOT_TOL), None)
        if entering is None:
            return True
        col = T[:m, entering]
        best = None
        for i in range(m):
            if col[i] > PIVOT_TOL:
                ratio = T[i, -1] / col[i]
                key = (ratio, basis[i])
                if best is None or key[0] < best[0] - PIVOT_TOL or (
                    abs(key[0] - best[0]) <= PIVOT_TOL and key[1] < best[1]
                ):
                    best = (ratio, basis[i], i)
        if best is None:
            return False
        _pivot(T, basis, best[2], entering)


def solve_lp(objective: Sequence[float], system: ConstraintSystem, direction: str = "min") -> LPResult:
    """Optimize ``objective . W`` over the feasible weights of ``system``."""
    n = system.world_count
    c = np.asarray(objective, dtype=float)
    if c.shape != (n,):
        raise ValueError(f"objective has width {c.size}, expected {n}")
    if direction not in ("min", "max"):
        raise ValueError(f"direction must be 'min' or 'max', not {direction!r}")
    sign = 1.0 if direction == "min" else -1.0

    A, b, artificial = _standard_form(system)
    m, ncols = A.shape
    T = np.zeros((m + 1, ncols + 1))
    T[:m, :ncols] = A
    T[:m, -1] = b
    basis = [int(np.flatnonzero(artificial)[i]) for i in range(m)]

    # phase 1: minimize the sum of artificials
    T[-1, :ncols] = -A.sum(axis=0)
    T[-1, :ncols][artificial] = 0.0
    T[-1, -1] = -b.sum()
    _run_simplex(T, basis, np.ones(ncols, dtype=bool))
    if -T[-1, -1] > PIVOT_TOL:
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out of the basis; drop rows that are redundant
    keep = []
    for i in range(m):
        if artificial[basis[i]]:
            j = next((j for j in range(ncols) if not artificial[j] and abs(T[i, j]) > PIVOT_TOL), None)
            if j is None:
                continue
            _pivot(T, basis, i, j)
        keep.append(i)
    T = np.vstack([T[keep], T[-1:]])
    basis = [basis[i] for i in keep]
    m = len(keep)

    # phase 2
    cost = np.zeros(ncols)
    cost[:n] = sign * c
    T[-1, :] = 0.0
    T[-1, :ncols] = cost
    for i, j in enumerate(basis):
        if cost[j] != 0.0:
            T[-1] -= cost[j] * T[i]
    if not _run_simplex(T, basis, ~artificial):
        # weights live in the probability simplex, so this means a solver defect
        raise RuntimeError("LP reported unbounded over a bounded feasible region")

    x = np.zeros(ncols)
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    w = np.clip(x[:n], 0.0, None)
    return LPResult(OPTIMAL, float(c @ w), tuple(float(v) for v in w))


def feasible(system: ConstraintSystem, w: Sequence[float], tol: float = FEAS_TOL) -> bool:
    if len(w) != system.world_count:
        raise ValueError(f"weight vector has {len(w)} entries, expected {system.world_count}")
    if any(x < -tol for x in w):
        return False
    if not system.normalization.satisfied(w, tol):
        return False
    return all(c.satisfied(w, tol) for c in system.constraints)


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


def target_extremes(system: ConstraintSystem) -> tuple[LPResult, LPResult]:
    """The two LPs behind the entailment interval: min of the lower row, max of the upper row."""
    if system.target_lower is None:
        raise ValueError("system has no target sentence")
    lo = solve_lp(system.target_lower, system, "min")
    if not lo.optimal:
        raise InfeasibleError("prior beliefs are inconsistent: no distribution over worlds satisfies them")
    hi = solve_lp(system.target_upper, system, "max")
    return lo, hi


def entail_interval(t: Tableau, beliefs, target_index: int | None = None) -> Interval:
    """Tightest interval for the target's probability implied by ``beliefs``."""
    system = build_system(t, beliefs, target_index)
    lo, hi = target_extremes(system)
    return Interval(_clip01(lo.objective), _clip01(hi.objective))


def target_interval_at(
    t: Tableau, w: Sequence[float], target_index: int, system: ConstraintSystem | None = None
) -> Interval:
    """Target probability range at one fixed weight vector.

    ``w`` is checked against ``system`` when given, else only for being a
    distribution.
    """
    if len(w) != t.world_count:
        raise ValueError(f"weight vector has {len(w)} entries, expected {t.world_count}")
    check = system if system is not None else ConstraintSystem((), t.world_count)
    if not feasible(check, w):
        raise InconsistencyError("weight vector is not feasible for the constraint system")
    lower, upper = bound_rows(t, target_index)
    lo = sum(c * x for c, x in zip(lower, w))
    hi = sum(c * x for c, x in zip(upper, w))
    return Interval(lo, hi)
