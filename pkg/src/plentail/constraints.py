"""Linear constraint systems over world weights.

A sentence's probability is bracketed by two sums over worlds: the lower sum
counts the worlds where the sentence is true, the upper sum also counts the
worlds where it is DC.  A point prior p on a sentence with DC cells becomes
``lower . W <= p`` and ``upper . W >= p``; without DC cells the pair collapses
to one equality.  An interval prior [lo, hi] becomes ``lower . W <= hi`` and
``upper . W >= lo``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Sequence

from .worlds import DC, T, Tableau

PROB_TOL = 1e-9
RELATIONS = ("<=", "=", ">=")


@dataclass(frozen=True)
class Belief:
    """A prior on one sentence: a point (``lo == hi``) or an interval."""

    sentence_index: int
    lo: float
    hi: float
    point: bool = True

    def __post_init__(self):
        if not (-PROB_TOL <= self.lo <= self.hi + PROB_TOL and self.hi <= 1 + PROB_TOL):
            raise ValueError(f"malformed belief bounds [{self.lo}, {self.hi}]")
        if self.point and self.lo != self.hi:
            raise ValueError("point belief needs lo == hi")

    @classmethod
    def at(cls, sentence_index: int, p: float) -> "Belief":
        return cls(sentence_index, p, p, point=True)

    @classmethod
    def between(cls, sentence_index: int, lo: float, hi: float) -> "Belief":
        return cls(sentence_index, lo, hi, point=False)

    @property
    def p(self) -> float:
        if not self.point:
            raise ValueError("interval belief has no point value")
        return self.lo


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple
    relation: str
    rhs: float
    sentence_index: int | None = None

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    def lhs(self, w: Sequence[float]) -> float:
        return sum(c * x for c, x in zip(self.coeffs, w))

    def satisfied(self, w: Sequence[float], tol: float) -> bool:
        v = self.lhs(w)
        if self.relation == "<=":
            return v <= self.rhs + tol
        if self.relation == ">=":
            return v >= self.rhs - tol
        return abs(v - self.rhs) <= tol


@dataclass(frozen=True)
class ConstraintSystem:
    """Sentence-derived rows plus implicit ``sum(W) == 1`` and ``W >= 0``.

    The target's bound rows travel with the system (they are the LP
    objectives) and count towards :func:`system_size`.
    """

    constraints: tuple
    world_count: int
    target_index: int | None = None
    target_lower: tuple | None = None
    target_upper: tuple | None = None
    beliefs: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for c in self.constraints:
            if len(c.coeffs) != self.world_count:
                raise ValueError("constraint width does not match world count")

    @property
    def normalization(self) -> LinearConstraint:
        return LinearConstraint((1,) * self.world_count, "=", 1.0)

    def target_rows(self) -> list:
        if self.target_lower is None:
            return []
        if self.target_lower == self.target_upper:
            return [self.target_lower]
        return [self.target_lower, self.target_upper]


def bound_rows(t: Tableau, sentence_index: int) -> tuple[tuple, tuple]:
    row = t.row(sentence_index)
    lower = tuple(1 if v == T else 0 for v in row)
    upper = tuple(1 if v in (T, DC) else 0 for v in row)
    return lower, upper


def build_system(t: Tableau, beliefs: Sequence[Belief], target_index: int | None = None) -> ConstraintSystem:
    """Constraint system for ``beliefs`` over the worlds of ``t``.

    ``target_index`` defaults to the tableau's first target sentence, if any.
    """
    rows = []
    for b in beliefs:
        if not isinstance(b, Belief):
            raise TypeError(f"not a belief: {b!r}")
        if not 0 <= b.sentence_index < t.source_count:
            raise ValueError(f"belief on sentence {b.sentence_index}, which is not a source")
        lower, upper = bound_rows(t, b.sentence_index)
        if b.point and lower == upper:
            rows.append(LinearConstraint(lower, "=", b.p, b.sentence_index))
        else:
            rows.append(LinearConstraint(lower, "<=", b.hi, b.sentence_index))
            rows.append(LinearConstraint(upper, ">=", b.lo, b.sentence_index))
    if target_index is None and t.source_count < len(t.sentences):
        target_index = t.source_count
    tl = tu = None
    if target_index is not None:
        tl, tu = bound_rows(t, target_index)
    return ConstraintSystem(tuple(rows), t.world_count, target_index, tl, tu, tuple(beliefs))


def system_size(s: ConstraintSystem) -> int:
    """Sentence-derived rows (target bound rows included) times world count."""
    return (len(s.constraints) + len(s.target_rows())) * s.world_count


def fmt(x: float) -> str:
    """Six-decimal fixed notation, rounding half to even on the shortest repr."""
    d = Decimal(repr(float(x))).quantize(Decimal("0.000001"), rounding=ROUND_HALF_EVEN)
    if d == 0:
        d = abs(d)
    return f"{d:.6f}"


def dump_system(s: ConstraintSystem, target_label: str = "target") -> str:
    """One row per line, ``coeffs... <rel> rhs``; target rows use ``target_label`` as rhs."""
    lines = []
    for c in s.constraints:
        lines.append(f"{' '.join(map(str, c.coeffs))} {c.relation} {fmt(c.rhs)}")
    rows = s.target_rows()
    if rows:
        if len(rows) == 1:
            lines.append(f"{' '.join(map(str, rows[0]))} = {target_label}")
        else:
            lines.append(f"{' '.join(map(str, rows[0]))} <= {target_label}")
            lines.append(f"{' '.join(map(str, rows[1]))} >= {target_label}")
    lines.append(f"{' '.join('1' * s.world_count)} = 1")
    return "\n".join(lines)
