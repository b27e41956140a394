"""Possible worlds and tableaux.

A world is a tuple of truth values, one per sentence of its tableau.  A
tableau stores worlds column-wise; :meth:`Tableau.row` gives the
sentence-major view used when writing constraints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .sentences import And, Atom, Implies, Sentence, atoms_of_all, evaluate, to_text

DEFAULT_ATOMS_CAP = 20


class TruthValue(enum.IntEnum):
    F = 0
    T = 1
    DC = 2

    @property
    def symbol(self) -> str:
        return "*" if self is TruthValue.DC else str(int(self))


T, F, DC = TruthValue.T, TruthValue.F, TruthValue.DC

World = tuple  # tuple[TruthValue, ...]


def make_world(values: Iterable) -> World:
    """Build a world from 1/0/True/False/None/'*'/TruthValue entries (None and '*' mean DC)."""
    out = []
    for v in values:
        if isinstance(v, TruthValue):
            out.append(v)
        elif v is None or v == "*" or v == "dc":
            out.append(DC)
        elif v in (1, True, "1"):
            out.append(T)
        elif v in (0, False, "0"):
            out.append(F)
        else:
            raise ValueError(f"not a truth value: {v!r}")
    return tuple(out)


class AtomCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Tableau:
    sentences: tuple
    worlds: tuple
    source_count: int

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "worlds", tuple(make_world(w) for w in self.worlds))
        n = len(self.sentences)
        if not 0 <= self.source_count <= n:
            raise ValueError(f"source_count {self.source_count} outside 0..{n}")
        for w in self.worlds:
            if len(w) != n:
                raise ValueError(f"world {w} has {len(w)} entries, expected {n}")
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate worlds in tableau")

    @property
    def world_count(self) -> int:
        return len(self.worlds)

    @property
    def target_indices(self) -> range:
        return range(self.source_count, len(self.sentences))

    def row(self, sentence_index: int) -> tuple:
        """Truth values of one sentence across all worlds."""
        if not 0 <= sentence_index < len(self.sentences):
            raise IndexError(f"sentence index {sentence_index} out of range")
        return tuple(w[sentence_index] for w in self.worlds)

    def has_dc(self) -> bool:
        return any(DC in w for w in self.worlds)

    def world_set(self) -> set:
        return set(self.worlds)


def enumerate_worlds(
    sentences: Sequence[Sentence],
    source_count: int | None = None,
    atoms_cap: int = DEFAULT_ATOMS_CAP,
) -> Tableau:
    """Two-valued tableau of every consistent truth pattern of ``sentences``.

    Atom assignments are visited in descending binary order (first atom is
    the most significant bit, true = 1) and the first occurrence of each
    sentence vector is kept.  ``source_count`` defaults to all sentences.
    """
    atoms = atoms_of_all(sentences)
    if len(atoms) > atoms_cap:
        raise AtomCapExceeded(f"{len(atoms)} atoms exceeds cap of {atoms_cap}")
    seen: dict[World, None] = {}
    for bits in product((True, False), repeat=len(atoms)):
        assignment = dict(zip(atoms, bits))
        world = tuple(T if evaluate(s, assignment) else F for s in sentences)
        seen.setdefault(world, None)
    if source_count is None:
        source_count = len(sentences)
    return Tableau(tuple(sentences), tuple(seen), source_count)


def conjunctive_mp_sentences(n: int, antecedents=None, consequent: str = "B") -> list:
    """``[A1, ..., An, A1 & ... & An -> B, B]`` with a left-nested conjunction."""
    if n < 1:
        raise ValueError("need at least one antecedent")
    names = list(antecedents) if antecedents is not None else [f"A{i}" for i in range(1, n + 1)]
    if len(names) != n:
        raise ValueError("antecedent name count does not match n")
    atoms = [Atom(a) for a in names]
    conj = atoms[0]
    for a in atoms[1:]:
        conj = And(conj, a)
    return [*atoms, Implies(conj, Atom(consequent)), Atom(consequent)]


def conjunctive_mp_tableau(n: int, sentences: Sequence[Sentence] | None = None) -> Tableau:
    """Closed-form compressed tableau for modus ponens with ``n`` conjuncts.

    Worlds, in order: everything true; antecedents true with implication and
    consequent false; then for i = n down to 1, conjunct i false, earlier
    conjuncts true, later conjuncts and the consequent DC, implication true.
    The descending order reproduces the usual matrix layout for n = 3.

    ``sentences`` may supply the problem's own sentence objects (same shape).
    """
    if n < 1:
        raise ValueError("need at least one antecedent")
    if sentences is None:
        sentences = conjunctive_mp_sentences(n)
    if len(sentences) != n + 2:
        raise ValueError(f"expected {n + 2} sentences, got {len(sentences)}")
    worlds = [
        (T,) * (n + 2),
        (T,) * n + (F, F),
    ]
    for i in reversed(range(n)):
        worlds.append((T,) * i + (F,) + (DC,) * (n - i - 1) + (T, DC))
    return Tableau(tuple(sentences), tuple(worlds), source_count=n + 1)


def match_conjunctive_mp(sentences: Sequence[Sentence], source_count: int) -> int | None:
    """Return n if the sentence list has the conjunctive modus ponens shape, else None.

    Shape: n distinct atom sources, then ``a1 & ... & an -> b`` (the
    conjunction listing exactly those atoms in order), then target ``b``.
    """
    n = len(sentences) - 2
    if n < 1 or source_count != n + 1:
        return None
    heads, impl, target = sentences[:n], sentences[n], sentences[n + 1]
    if not all(isinstance(s, Atom) for s in heads):
        return None
    names = [s.name for s in heads]
    if len(set(names)) != n:
        return None
    if not (isinstance(impl, Implies) and isinstance(target, Atom) and impl.right == target):
        return None
    if target.name in names:
        return None
    conjuncts = []

    def flatten(node):
        if isinstance(node, And):
            flatten(node.left)
            flatten(node.right)
        else:
            conjuncts.append(node)

    flatten(impl.left)
    if conjuncts != list(heads):
        return None
    return n


def expand_world(w: World) -> set:
    """All DC-free worlds obtained by substituting T/F for each DC entry."""
    choices = [(F, T) if v == DC else (TruthValue(v),) for v in w]
    return set(product(*choices))


def expand_tableau(t: Tableau) -> Tableau:
    """Two-valued counterpart of ``t``; raises ValueError if expansions overlap."""
    out: dict[World, None] = {}
    for w in t.worlds:
        for e in sorted(expand_world(w), reverse=True):
            if e in out:
                raise ValueError(f"expansions overlap at world {e}")
            out[e] = None
    return Tableau(t.sentences, tuple(out), t.source_count)


def render_tableau(t: Tableau, labels: Sequence[str] | None = None) -> str:
    """Text rendering: one row per sentence, entries ``1``, ``0`` or ``*``."""
    if labels is None:
        labels = [to_text(s) for s in t.sentences]
    width = max((len(lbl) for lbl in labels), default=0)
    lines = []
    for i, lbl in enumerate(labels):
        cells = " ".join(v.symbol for v in t.row(i))
        lines.append(f"{lbl.ljust(width)}  {cells}".rstrip())
    return "\n".join(lines)
