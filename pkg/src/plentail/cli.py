"""Command-line front end and the ``.plp`` / ``.plev`` file formats.

Problem file (``.plp``), one declaration per line, ``#`` starts a comment::

    sentence <formula> [prior <p> | prior in [<lo>, <hi>]]
    target <formula>
    option atoms-cap <n>
    option schema conj-mp

Evidence file (``.plev``); world indices are 1-based into the compressed
tableau printed by ``compress``::

    prior-solution <w1> <w2> ...
    assess <formula> world <j> <p>
    assess <formula> auto [<p>]
    evidence on <formula> likelihood <Pr(E|S)> <Pr(E|~S)>
    evidence on <formula> posterior <Pr(S|E)>

Formulas containing spaces may be double-quoted.
"""

from __future__ import annotations

import argparse
import io
import re
import shlex
import sys
from dataclasses import dataclass, field

from .compress import compress_with_stats
from .constraints import PROB_TOL, Belief, build_system, dump_system, fmt, system_size
from .errors import InconsistencyError, InfeasibleError, ParseError, PLogicError
from .revise import (
    Assessment,
    Evidence,
    auto_assess,
    check_assessment,
    dc_cells,
    revise,
    select_prior,
    sentence_probability,
)
from .sentences import parse
from .solve import Interval, target_extremes
from .worlds import (
    DEFAULT_ATOMS_CAP,
    AtomCapExceeded,
    Tableau,
    conjunctive_mp_tableau,
    enumerate_worlds,
    expand_world,
    match_conjunctive_mp,
    render_tableau,
)

SCHEMAS = ("conj-mp",)
_INTERVAL_RE = re.compile(r"in\s*\[\s*([^,\]\s]+)\s*,\s*([^\]\s]+)\s*\]")


@dataclass
class Declaration:
    text: str
    sentence: object
    lo: float | None = None
    hi: float | None = None
    point: bool = True

    @property
    def has_prior(self) -> bool:
        return self.lo is not None


@dataclass
class ProblemSpec:
    sources: list
    target: Declaration
    atoms_cap: int = DEFAULT_ATOMS_CAP
    schema: str | None = None

    @property
    def declarations(self) -> list:
        return [*self.sources, self.target]

    @property
    def sentences(self) -> list:
        return [d.sentence for d in self.declarations]

    @property
    def labels(self) -> list:
        return [d.text for d in self.declarations]

    @property
    def target_index(self) -> int:
        return len(self.sources)

    def beliefs(self) -> list:
        out = []
        for i, d in enumerate(self.sources):
            if not d.has_prior:
                continue
            out.append(Belief.at(i, d.lo) if d.point else Belief.between(i, d.lo, d.hi))
        return out

    def index_of(self, sentence) -> int | None:
        for i, s in enumerate(self.sentences):
            if s == sentence:
                return i
        return None


@dataclass
class AssessDecl:
    formula: str
    sentence: object
    line: int
    world: int | None = None  # 1-based
    value: float | None = None
    auto: bool = False


@dataclass
class EvidenceSpec:
    prior_solution: tuple | None = None
    assessments: list = field(default_factory=list)
    evidence_formula: str | None = None
    evidence_sentence: object = None
    evidence_kind: str | None = None
    evidence_values: tuple = ()
    evidence_line: int | None = None


def _split(line: str, lineno: int) -> list:
    try:
        return shlex.split(line, comments=True)
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno) from None


def _formula(tokens: list, lineno: int):
    if not tokens:
        raise ParseError("missing formula", line=lineno)
    text = " ".join(tokens)
    try:
        return text, parse(text)
    except ParseError as exc:
        raise ParseError(f"in formula {text!r}: {exc}", line=lineno) from None


def _prob(token: str, lineno: int) -> float:
    try:
        p = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", line=lineno) from None
    if not -PROB_TOL <= p <= 1 + PROB_TOL:
        raise ParseError(f"probability {token} outside [0, 1]", line=lineno)
    return min(1.0, max(0.0, p))


def _cut(tokens: list, keywords: tuple) -> int:
    for i, tok in enumerate(tokens):
        if tok in keywords:
            return i
    return len(tokens)


def parse_problem(text: str) -> ProblemSpec:
    sources: list = []
    target = None
    atoms_cap = DEFAULT_ATOMS_CAP
    schema = None
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = _split(line, lineno)
        if not tokens:
            continue
        head, rest = tokens[0], tokens[1:]
        if head == "sentence":
            k = _cut(rest, ("prior",))
            ftext, sentence = _formula(rest[:k], lineno)
            decl = Declaration(ftext, sentence)
            if k < len(rest):
                spec = " ".join(rest[k + 1:])
                m = _INTERVAL_RE.fullmatch(spec)
                if m:
                    lo, hi = _prob(m.group(1), lineno), _prob(m.group(2), lineno)
                    if lo > hi:
                        raise ParseError(f"empty prior interval [{lo}, {hi}]", line=lineno)
                    decl.lo, decl.hi, decl.point = lo, hi, False
                elif len(rest) == k + 2:
                    decl.lo = decl.hi = _prob(rest[k + 1], lineno)
                else:
                    raise ParseError("expected 'prior <p>' or 'prior in [<lo>, <hi>]'", line=lineno)
            sources.append((lineno, decl))
        elif head == "target":
            if target is not None:
                raise ParseError("duplicate target declaration", line=lineno)
            ftext, sentence = _formula(rest, lineno)
            target = (lineno, Declaration(ftext, sentence))
        elif head == "option":
            if rest[:1] == ["atoms-cap"] and len(rest) == 2:
                try:
                    atoms_cap = int(rest[1])
                except ValueError:
                    raise ParseError(f"atoms-cap needs an integer, got {rest[1]!r}", line=lineno) from None
                if atoms_cap < 1:
                    raise ParseError("atoms-cap must be positive", line=lineno)
            elif rest[:1] == ["schema"] and len(rest) == 2:
                if rest[1] not in SCHEMAS:
                    raise ParseError(f"unknown schema {rest[1]!r}", line=lineno)
                schema = rest[1]
            else:
                raise ParseError(f"unknown option {' '.join(rest)!r}", line=lineno)
        else:
            raise ParseError(f"unknown declaration {head!r}", line=lineno)
    if target is None:
        raise ParseError("missing target declaration")
    if not sources:
        raise ParseError("no source sentences declared")
    seen: dict = {}
    for lineno, decl in [*sources, target]:
        if decl.sentence in seen:
            raise ParseError(f"duplicate sentence {decl.text!r} (first on line {seen[decl.sentence]})", line=lineno)
        seen[decl.sentence] = lineno
    return ProblemSpec([d for _, d in sources], target[1], atoms_cap, schema)


def parse_evidence(text: str) -> EvidenceSpec:
    spec = EvidenceSpec()
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = _split(line, lineno)
        if not tokens:
            continue
        head, rest = tokens[0], tokens[1:]
        if head == "prior-solution":
            if not rest:
                raise ParseError("prior-solution needs at least one weight", line=lineno)
            spec.prior_solution = tuple(_prob(t, lineno) for t in rest)
        elif head == "assess":
            k = _cut(rest, ("world", "auto"))
            if k == len(rest):
                raise ParseError("expected 'world <j> <p>' or 'auto'", line=lineno)
            ftext, sentence = _formula(rest[:k], lineno)
            tail = rest[k + 1:]
            if rest[k] == "auto":
                if len(tail) > 1:
                    raise ParseError("'auto' takes at most one operative probability", line=lineno)
                value = _prob(tail[0], lineno) if tail else None
                spec.assessments.append(AssessDecl(ftext, sentence, lineno, value=value, auto=True))
            else:
                if len(tail) != 2:
                    raise ParseError("expected 'world <j> <p>'", line=lineno)
                try:
                    j = int(tail[0])
                except ValueError:
                    raise ParseError(f"world index must be an integer, got {tail[0]!r}", line=lineno) from None
                if j < 1:
                    raise ParseError(f"world index {j} out of range", line=lineno)
                spec.assessments.append(AssessDecl(ftext, sentence, lineno, world=j, value=_prob(tail[1], lineno)))
        elif head == "evidence":
            if spec.evidence_kind is not None:
                raise ParseError("only one evidence declaration is allowed", line=lineno)
            if rest[:1] != ["on"]:
                raise ParseError("expected 'evidence on <formula> ...'", line=lineno)
            rest = rest[1:]
            k = _cut(rest, ("likelihood", "posterior"))
            if k == len(rest):
                raise ParseError("expected 'likelihood' or 'posterior'", line=lineno)
            ftext, sentence = _formula(rest[:k], lineno)
            kind, nums = rest[k], rest[k + 1:]
            want = 2 if kind == "likelihood" else 1
            if len(nums) != want:
                raise ParseError(f"{kind} evidence takes {want} probabilities", line=lineno)
            spec.evidence_formula, spec.evidence_sentence = ftext, sentence
            spec.evidence_kind = kind
            spec.evidence_values = tuple(_prob(t, lineno) for t in nums)
            spec.evidence_line = lineno
        else:
            raise ParseError(f"unknown declaration {head!r}", line=lineno)
    if spec.evidence_kind is None:
        raise ParseError("missing evidence declaration")
    return spec


# --- building tableaux ------------------------------------------------------


@dataclass
class Compressed:
    tableau: Tableau
    method: str
    worlds_before: int
    merges: int | None = None


def two_valued(problem: ProblemSpec) -> Tableau:
    return enumerate_worlds(problem.sentences, len(problem.sources), problem.atoms_cap)


def compressed(problem: ProblemSpec, schema: str | None = None, warn=None) -> Compressed:
    schema = schema or problem.schema
    if schema == "conj-mp":
        n = match_conjunctive_mp(problem.sentences, len(problem.sources))
        if n is not None:
            t = conjunctive_mp_tableau(n, problem.sentences)
            before = sum(len(expand_world(w)) for w in t.worlds)
            return Compressed(t, "schema conj-mp", before)
        if warn:
            warn("problem does not have the conj-mp shape; falling back to search compression")
    t, stats = compress_with_stats(two_valued(problem))
    return Compressed(t, "search", stats.worlds_before, stats.merges)


# --- commands ---------------------------------------------------------------


def fmt_vector(xs) -> str:
    return " ".join(fmt(x) for x in xs)


def fmt_interval(iv: Interval) -> str:
    return f"[{fmt(iv.lo)}, {fmt(iv.hi)}]"


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_worlds(args, out, err):
    problem = parse_problem(_read(args.problem))
    t = two_valued(problem)
    print(render_tableau(t, problem.labels), file=out)
    print(f"worlds {t.world_count}", file=out)


def cmd_compress(args, out, err):
    problem = parse_problem(_read(args.problem))
    c = compressed(problem, args.schema, lambda m: print(f"warning: {m}", file=err))
    print(render_tableau(c.tableau, problem.labels), file=out)
    print(f"method {c.method}", file=out)
    print(f"worlds-before {c.worlds_before}", file=out)
    print(f"worlds-after {c.tableau.world_count}", file=out)
    if c.merges is not None:
        print(f"merges {c.merges}", file=out)


def cmd_entail(args, out, err):
    problem = parse_problem(_read(args.problem))
    if args.no_compress:
        t = two_valued(problem)
    else:
        t = compressed(problem, args.schema, lambda m: print(f"warning: {m}", file=err)).tableau
    system = build_system(t, problem.beliefs(), problem.target_index)
    if args.dump_lp:
        print(dump_system(system), file=out)
    lo, hi = target_extremes(system)
    print(fmt_interval(Interval(min(1.0, max(0.0, lo.objective)), min(1.0, max(0.0, hi.objective)))), file=out)


def cmd_stats(args, out, err):
    problem = parse_problem(_read(args.problem))
    full = two_valued(problem)
    c = compressed(problem, args.schema, lambda m: print(f"warning: {m}", file=err))
    beliefs = problem.beliefs()
    size_full = system_size(build_system(full, beliefs, problem.target_index))
    size_comp = system_size(build_system(c.tableau, beliefs, problem.target_index))
    print(f"method {c.method}", file=out)
    print(f"worlds {full.world_count}", file=out)
    print(f"compressed-worlds {c.tableau.world_count}", file=out)
    print(f"system-size {size_full}", file=out)
    print(f"compressed-system-size {size_comp}", file=out)
    ratio = size_comp / size_full if size_full else 1.0
    print(f"compression-ratio {fmt(ratio)}", file=out)


def _resolve_index(problem: ProblemSpec, sentence, formula: str, line: int) -> int:
    idx = problem.index_of(sentence)
    if idx is None:
        raise ParseError(f"unknown sentence {formula!r}", line=line)
    return idx


def resolve_assessments(problem: ProblemSpec, t: Tableau, w, decls) -> dict:
    """Turn assessment declarations into :class:`Assessment` values keyed by sentence index.

    Assessments of source sentences are checked against their priors.
    """
    values: dict = {}
    auto: dict = {}
    for d in decls:
        idx = _resolve_index(problem, d.sentence, d.formula, d.line)
        cells = dc_cells(t, idx)
        if d.auto:
            decl = problem.declarations[idx]
            p = d.value
            if p is None:
                if not decl.has_prior or not decl.point:
                    raise ParseError(
                        f"'assess {d.formula} auto' needs a point prior or an explicit operative value", line=d.line
                    )
                p = decl.lo
            elif decl.has_prior and not decl.lo - PROB_TOL <= p <= decl.hi + PROB_TOL:
                raise InconsistencyError(f"line {d.line}: operative value {p} lies outside the prior of {d.formula!r}")
            if not cells:
                raise ParseError(f"{d.formula!r} has no DC cells to assess", line=d.line)
            auto[idx] = p
            values.setdefault(idx, {}).update(auto_assess(t, w, idx, p).values)
        else:
            j = d.world - 1
            if j >= t.world_count:
                raise ParseError(f"world index {d.world} out of range 1..{t.world_count}", line=d.line)
            if j not in cells:
                raise ParseError(f"{d.formula!r} is not DC in world {d.world}", line=d.line)
            values.setdefault(idx, {})[j] = d.value
    out = {idx: Assessment(idx, vals) for idx, vals in values.items()}
    for idx, a in out.items():
        decl = problem.declarations[idx]
        if idx == problem.target_index or len(a.values) < len(dc_cells(t, idx)):
            continue
        p_now = sentence_probability(t, w, idx, a)
        if idx in auto or (decl.has_prior and decl.point):
            p = auto.get(idx, decl.lo)
            if not check_assessment(t, w, idx, p, a):
                raise InconsistencyError(
                    f"assessments for {decl.text!r} give Pr = {fmt(p_now)}, but its prior is {fmt(p)}"
                )
        elif decl.has_prior and not decl.lo - 1e-6 <= p_now <= decl.hi + 1e-6:
            raise InconsistencyError(
                f"assessments for {decl.text!r} give Pr = {fmt(p_now)}, outside its prior [{fmt(decl.lo)}, {fmt(decl.hi)}]"
            )
    return out


def cmd_revise(args, out, err):
    problem = parse_problem(_read(args.problem))
    ev = parse_evidence(_read(args.evidence))
    c = compressed(problem, args.schema, lambda m: print(f"warning: {m}", file=err))
    t = c.tableau
    system = build_system(t, problem.beliefs(), problem.target_index)
    if ev.prior_solution is not None:
        if len(ev.prior_solution) != t.world_count:
            raise ParseError(f"prior-solution has {len(ev.prior_solution)} weights, tableau has {t.world_count} worlds")
        w = select_prior(system, "user", ev.prior_solution)
    else:
        w = select_prior(system, "midpoint")
    assessments = resolve_assessments(problem, t, w, ev.assessments)

    idx = _resolve_index(problem, ev.evidence_sentence, ev.evidence_formula, ev.evidence_line)
    if ev.evidence_kind == "likelihood":
        evidence = Evidence.likelihood(idx, *ev.evidence_values)
    else:
        evidence = Evidence.posterior(idx, *ev.evidence_values)
    missing = set(dc_cells(t, idx)) - set(assessments.get(idx, Assessment(idx)).values)
    if missing:
        raise InconsistencyError(
            f"evidence sentence {ev.evidence_formula!r} needs Pr(S|j) at DC worlds {sorted(j + 1 for j in missing)}"
        )
    tgt = problem.target_index
    tgt_a = assessments.get(tgt)
    if tgt_a is not None and len(tgt_a.values) < len(dc_cells(t, tgt)):
        print("warning: target assessments incomplete; no point estimate", file=err)
        tgt_a = None
    result = revise(t, w, evidence, assessments.get(idx), tgt, tgt_a)

    print(render_tableau(t, problem.labels), file=out)
    print("prior-solution:", file=out)
    print(fmt_vector(w), file=out)
    print("conditionals:" if evidence.kind == "likelihood" else "ratios:", file=out)
    print(fmt_vector(result.world_conditionals), file=out)
    print("posterior:", file=out)
    print(fmt_vector(result.posterior), file=out)
    print("prior-interval:", file=out)
    print(fmt_interval(result.prior_interval), file=out)
    print("posterior-interval:", file=out)
    print(fmt_interval(result.posterior_interval), file=out)
    if result.posterior_point is not None:
        print("posterior-point:", file=out)
        print(fmt(result.posterior_point), file=out)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plentail", description="Probabilistic-logic entailment with compressed worlds.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("problem", help="problem file (.plp)")
        p.set_defaults(func=func)
        return p

    add("worlds", cmd_worlds, "print the two-valued tableau")
    for name, func, help in (
        ("compress", cmd_compress, "print the compressed tableau"),
        ("entail", cmd_entail, "print the target's entailment interval"),
        ("revise", cmd_revise, "revise a representative prior against evidence"),
        ("stats", cmd_stats, "world counts and system sizes"),
    ):
        p = add(name, func, help)
        p.add_argument("--schema", choices=SCHEMAS, help="use the closed-form tableau for this schema")
        if name == "entail":
            p.add_argument("--no-compress", action="store_true", help="solve the two-valued system")
            p.add_argument("--dump-lp", action="store_true", help="print the constraint rows first")
        if name == "revise":
            p.add_argument("--evidence", required=True, help="evidence file (.plev)")
    return ap


def run(argv, err=None) -> tuple[int, str]:
    """Run one command; returns the exit code and captured stdout."""
    err = err if err is not None else sys.stderr
    out = io.StringIO()
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), out.getvalue()
    try:
        args.func(args, out, err)
    except (ParseError, AtomCapExceeded, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2, out.getvalue()
    except (InfeasibleError, InconsistencyError, PLogicError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1, out.getvalue()
    return 0, out.getvalue()


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
