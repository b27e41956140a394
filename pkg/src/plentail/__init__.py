"""Probabilistic-logic entailment over compressed (three-valued) possible worlds."""

from .compress import compress_tableau, merge_pair, verify_equivalence
from .constraints import Belief, ConstraintSystem, LinearConstraint, bound_rows, build_system, system_size
from .errors import InconsistencyError, InfeasibleError, ParseError, PLogicError
from .revise import (
    Assessment,
    Evidence,
    RevisionResult,
    auto_assess,
    bayes_update,
    check_assessment,
    posterior_target_point,
    select_prior,
    world_conditionals,
    world_ratios,
)
from .sentences import atoms_of, evaluate, parse, to_text
from .solve import Interval, LPResult, entail_interval, feasible, solve_lp, target_interval_at
from .worlds import (
    DC,
    F,
    T,
    Tableau,
    TruthValue,
    conjunctive_mp_tableau,
    enumerate_worlds,
    expand_tableau,
    expand_world,
)

__version__ = "0.1.0"
