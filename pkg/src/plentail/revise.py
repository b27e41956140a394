"""Point-Bayesian revision of a representative prior over compressed worlds.

Evidence E bears on one sentence S.  In a world where S is true the
likelihood of E is ``Pr(E|S)``, where S is false it is ``Pr(E|~S)``, and
where S is DC the two are mixed by the analyst's assessment ``Pr(S|j)``.
Evidence may instead arrive as a posterior ``Pr(S|E)``; the posterior to
prior ratios then stand in for the likelihoods, since they differ from them
only by the common factor ``1 / Pr(E)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .constraints import ConstraintSystem, bound_rows
from .errors import InconsistencyError, InfeasibleError
from .solve import Interval, feasible, solve_lp, target_extremes, target_interval_at
from .worlds import DC, F, T, Tableau

ASSESS_TOL = 1e-6
MASS_TOL = 1e-9


def _q(x: float) -> Fraction:
    # exact value of the shortest decimal repr, so 0.7 - 0.6 is 1/10
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class Assessment:
    """``Pr(sentence true | world)`` at the DC cells of one sentence (0-based world indices)."""

    sentence_index: int
    values: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for j, v in self.values.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"assessment for world {j} is {v}, outside [0, 1]")


@dataclass(frozen=True)
class Evidence:
    sentence_index: int
    kind: str
    p_e_given_s: float | None = None
    p_e_given_not_s: float | None = None
    p_s_given_e: float | None = None

    def __post_init__(self):
        if self.kind == "likelihood":
            probs = (self.p_e_given_s, self.p_e_given_not_s)
        elif self.kind == "posterior":
            probs = (self.p_s_given_e,)
        else:
            raise ValueError(f"unknown evidence form {self.kind!r}")
        for p in probs:
            if p is None or not 0.0 <= p <= 1.0:
                raise ValueError(f"evidence probability {p} outside [0, 1]")

    @classmethod
    def likelihood(cls, sentence_index: int, p_e_given_s: float, p_e_given_not_s: float) -> "Evidence":
        return cls(sentence_index, "likelihood", p_e_given_s=p_e_given_s, p_e_given_not_s=p_e_given_not_s)

    @classmethod
    def posterior(cls, sentence_index: int, p_s_given_e: float) -> "Evidence":
        return cls(sentence_index, "posterior", p_s_given_e=p_s_given_e)


@dataclass(frozen=True)
class RevisionResult:
    world_conditionals: tuple
    posterior: tuple
    prior_interval: Interval | None
    posterior_interval: Interval | None
    posterior_point: float | None = None


def dc_cells(t: Tableau, sentence_index: int) -> list[int]:
    return [j for j, v in enumerate(t.row(sentence_index)) if v == DC]


def validate_assessment(t: Tableau, a: Assessment, complete: bool = True) -> None:
    """Keys must be DC cells of the sentence; with ``complete`` every DC cell must be covered."""
    cells = set(dc_cells(t, a.sentence_index))
    extra = set(a.values) - cells
    if extra:
        raise ValueError(f"assessment given at non-DC worlds {sorted(j + 1 for j in extra)}")
    if complete:
        missing = cells - set(a.values)
        if missing:
            raise ValueError(f"no assessment at DC worlds {sorted(j + 1 for j in missing)}")


def sentence_probability(t: Tableau, w: Sequence[float], sentence_index: int, a: Assessment | None = None) -> float:
    """``Pr(S)`` under weights ``w``, reading DC cells through assessment ``a``."""
    a = a or Assessment(sentence_index)
    validate_assessment(t, a)
    total = 0.0
    for j, v in enumerate(t.row(sentence_index)):
        if v == T:
            total += w[j]
        elif v == DC:
            total += a.values[j] * w[j]
    return total


def select_prior(system: ConstraintSystem, strategy: str = "midpoint", w: Sequence[float] | None = None) -> tuple:
    """Pick a representative feasible prior.

    ``user`` validates ``w``; ``midpoint`` averages the minimizer of the
    target's lower row and the maximizer of its upper row; ``vertex`` returns
    a basic feasible solution.
    """
    if strategy == "user":
        if w is None:
            raise ValueError("user strategy needs a weight vector")
        if not feasible(system, w):
            raise InconsistencyError("prior solution does not satisfy the constraint system")
        return tuple(float(x) for x in w)
    if strategy == "midpoint":
        lo, hi = target_extremes(system)
        return tuple((a + b) / 2 for a, b in zip(lo.w, hi.w))
    if strategy == "vertex":
        res = solve_lp([0.0] * system.world_count, system, "min")
        if not res.optimal:
            raise InfeasibleError("prior beliefs are inconsistent")
        return res.w
    raise ValueError(f"unknown prior strategy {strategy!r}")


def auto_assess(t: Tableau, w: Sequence[float], sentence_index: int, p: float) -> Assessment:
    """Spread the prior mass not accounted for by true cells evenly over the DC cells.

    Every DC cell gets ``c = (p - lower . W) / (DC weight)``.  When the DC
    cells carry no weight, any value is consistent and 0.5 is used.
    """
    cells = dc_cells(t, sentence_index)
    if not cells:
        raise ValueError("sentence has no DC cells to assess")
    lower, _ = bound_rows(t, sentence_index)
    base = sum(_q(x) for c, x in zip(lower, w) if c)
    mass = sum(_q(w[j]) for j in cells)
    if mass <= MASS_TOL:
        if abs(_q(p) - base) > ASSESS_TOL:
            raise InconsistencyError(
                f"prior {p} unreachable: DC worlds carry no weight and true worlds sum to {float(base)}"
            )
        return Assessment(sentence_index, {j: 0.5 for j in cells})
    c = float((_q(p) - base) / mass)
    if c < -MASS_TOL or c > 1 + MASS_TOL:
        raise InconsistencyError(f"prior {p} needs Pr(S|j) = {c:.6g}, outside [0, 1]")
    c = min(1.0, max(0.0, c))
    return Assessment(sentence_index, {j: c for j in cells})


def check_assessment(t: Tableau, w: Sequence[float], sentence_index: int, p: float, a: Assessment) -> bool:
    try:
        got = sentence_probability(t, w, sentence_index, a)
    except ValueError:
        return False
    return abs(got - p) <= ASSESS_TOL


def _per_world(t: Tableau, sentence_index: int, a: Assessment | None, if_true: float, if_false: float) -> tuple:
    a = a or Assessment(sentence_index)
    if a.sentence_index != sentence_index:
        raise ValueError("assessment is for a different sentence than the evidence")
    out = []
    for j, v in enumerate(t.row(sentence_index)):
        if v == T:
            out.append(if_true)
        elif v == F:
            out.append(if_false)
        else:
            if j not in a.values:
                raise ValueError(f"no assessment of Pr(S|j) at DC world {j + 1}")
            s = _q(a.values[j])
            out.append(float(s * _q(if_true) + (1 - s) * _q(if_false)))
    return tuple(out)


def world_conditionals(t: Tableau, evidence: Evidence, assessment: Assessment | None = None) -> tuple:
    """``Pr(E|j)`` for each world from likelihood-form evidence."""
    if evidence.kind != "likelihood":
        raise ValueError("world_conditionals needs likelihood-form evidence")
    return _per_world(t, evidence.sentence_index, assessment, evidence.p_e_given_s, evidence.p_e_given_not_s)


def world_ratios(t: Tableau, evidence: Evidence, p: float, assessment: Assessment | None = None) -> tuple:
    """Posterior-to-prior ratios per world from posterior-form evidence; ``p`` is the prior of S."""
    if evidence.kind != "posterior":
        raise ValueError("world_ratios needs posterior-form evidence")
    if not 0.0 < p < 1.0:
        raise ValueError(f"sentence prior {p} must lie strictly between 0 and 1")
    r_true = evidence.p_s_given_e / p
    r_false = (1.0 - evidence.p_s_given_e) / (1.0 - p)
    return _per_world(t, evidence.sentence_index, assessment, r_true, r_false)


def bayes_update(w: Sequence[float], factors: Sequence[float]) -> tuple:
    if len(w) != len(factors):
        raise ValueError("prior and conditionals differ in length")
    joint = [c * x for c, x in zip(factors, w)]
    total = sum(joint)
    if total <= 1e-12:
        raise InconsistencyError("evidence has zero probability under the chosen prior")
    return tuple(x / total for x in joint)


def posterior_target_point(t: Tableau, posterior: Sequence[float], target_index: int, assessment: Assessment) -> float:
    return sentence_probability(t, posterior, target_index, assessment)


def _branch_factors(t: Tableau, w: Sequence[float], evidence: Evidence, assessment: Assessment | None) -> tuple:
    if evidence.kind == "likelihood":
        return evidence.p_e_given_s, evidence.p_e_given_not_s
    p = sentence_probability(t, w, evidence.sentence_index, assessment)
    if not 0.0 < p < 1.0:
        raise ValueError(f"sentence prior {p} must lie strictly between 0 and 1")
    return evidence.p_s_given_e / p, (1.0 - evidence.p_s_given_e) / (1.0 - p)


def evidence_factors(t: Tableau, w: Sequence[float], evidence: Evidence, assessment: Assessment | None = None) -> tuple:
    """Likelihoods or ratios, whichever the evidence form calls for."""
    if evidence.kind == "likelihood":
        return world_conditionals(t, evidence, assessment)
    p = sentence_probability(t, w, evidence.sentence_index, assessment)
    return world_ratios(t, evidence, p, assessment)


def revise(
    t: Tableau,
    w: Sequence[float],
    evidence: Evidence,
    assessment: Assessment | None = None,
    target_index: int | None = None,
    target_assessment: Assessment | None = None,
) -> RevisionResult:
    factors = evidence_factors(t, w, evidence, assessment)
    post = bayes_update(w, factors)
    prior_iv = post_iv = point = None
    if target_index is not None:
        prior_iv = target_interval_at(t, w, target_index)
        post_iv = target_interval_at(t, post, target_index)
        if target_assessment is not None:
            point = posterior_target_point(t, post, target_index, target_assessment)
    return RevisionResult(factors, post, prior_iv, post_iv, point)


def _condition_assessment(a: Assessment, if_true: float, factors: Sequence[float]) -> Assessment:
    """``Pr(S|j, E) = Pr(S|j) * f(S) / f(j)`` at each assessed DC cell."""
    values = {}
    for j, s in a.values.items():
        values[j] = s if factors[j] <= 0.0 else min(1.0, max(0.0, s * if_true / factors[j]))
    return Assessment(a.sentence_index, values)


def revise_chain(t: Tableau, w: Sequence[float], steps: Sequence[tuple]) -> tuple:
    """Apply several ``(evidence, assessment)`` updates in order.

    After each update the assessment of the evidence sentence is conditioned
    on the evidence.  A later step that supplies a different assessment for
    that sentence triggers a warning, since reusing the pre-evidence values
    would no longer agree with the current distribution.
    """
    current = tuple(w)
    carried: dict[int, Assessment] = {}
    for evidence, assessment in steps:
        idx = evidence.sentence_index
        prev = carried.get(idx)
        if prev is not None:
            if assessment is None:
                assessment = prev
            elif any(abs(assessment.values.get(j, -1.0) - v) > ASSESS_TOL for j, v in prev.values.items()):
                warnings.warn(
                    f"assessment for sentence {idx} differs from its value conditioned on earlier evidence",
                    stacklevel=2,
                )
        if_true, _ = _branch_factors(t, current, evidence, assessment)
        factors = evidence_factors(t, current, evidence, assessment)
        current = bayes_update(current, factors)
        if assessment is not None and assessment.values:
            carried[idx] = _condition_assessment(assessment, if_true, factors)
    return current
