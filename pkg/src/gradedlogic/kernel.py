r"""Hilbert-style proof kernel for graded implications.

A proof is a sequence of lines over a fixed theory; each line carries a
formula and a justification: hypothesis (index into the theory), axiom
(instance of one of 25 schemas), tautology (substitution instance of a
classical tautology over the formula's atoms), or modus ponens from two
earlier lines.  The kernel re-derives every claim: axiom instances are
recognised structurally and every arithmetic side condition is checked
with exact rational arithmetic.  Transitivity-style side conditions always
use the Lukasiewicz combinators; the strong-conjunction schemas use the
session t-norm.  Rejection is a value (a Verdict), not an exception.

Schema catalogue, in fixed match order (first match wins when no schema
name is declared):

    and1      (a ->[d] b) /\ (a ->[d] c)  =>  a ->[d] (b & c)
    and2      (a & b) ->[1] a
    and3      (a & b) ->[1] b
    or1       (a ->[d] c) /\ (b ->[d] c)  =>  (a | b) ->[d] c
    or2       a ->[1] (a | b)
    or3       b ->[1] (a | b)
    strong1   (top ->[c] a) /\ (top ->[d] b)  =>  top ->[c.d] (a * b)
    strong2   (a ->[c] bot) /\ (b ->[d] bot)  =>  (a * b) ->[c+d] bot
    strong3   top ->[1] (top * top)
    neg1      (a ->[d] b)  =>  ~b ->[d] ~a
    neg2      ~~a ->[1] a
    neg3      a ->[1] ~~a
    top       a ->[1] top
    bot       bot ->[1] a
    zero      a ->[0] b
    refl      a ->[c] a
    inkons    !(top ->[c] bot)            for c > 0
    trans1    (a ->[c] b) /\ (b ->[d] c')  =>  a ->[c.d (Luk)] c'
    trans2    (a ->[c] bot) /\ (top ->[d] b)  =>  a ->[c+d (Luk)] b
    lin1      (a ->[1] b) \/ (b ->[1] a)
    lin2      (top ->[d] a) \/ (a ->[1-d] bot)
    mean_trans1  (a1 ->[c1] b1) /\ ... /\ (b1,..,bn ->[d] g)
                     =>  a1,..,an ->[mean(c).d (Luk)] g
    mean_trans2  (a1,..,an ->[c] b) /\ (b ->[d] g)  =>  a1,..,an ->[c.d (Luk)] g
    mean_trans3  (a1 ->[c1] bot) /\ ... /\ (top ->[d] b)
                     =>  a1,..,an ->[mean(c)+d (Luk)] b
    mean_top     (top,..,top ->[c] a)  =>  top ->[c] a

The mean_* premises are flat conjunctions in any association and order;
the fixed-arity schemas require their exact binary shape.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import ResourceLimitError
from .grades import (
    TNormKind,
    as_grade,
    luk_tconorm,
    luk_tnorm,
    mean,
    negate,
    tconorm,
    tnorm,
)
from .syntax import (
    And,
    Atom,
    BasicExpr,
    Bottom,
    GradedImplication,
    Neg,
    OAnd,
    ONot,
    OOr,
    Or,
    OuterFormula,
    ParseError,
    Strong,
    Top,
    Var,
    outer_implies,
    parse_formula,
    render,
)

DEFAULT_ATOM_CAP = 16

ONE = Fraction(1)
ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# Justifications, proofs, verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hyp:
    """The formula is the theory member at this 0-based index."""

    index: int


@dataclass(frozen=True)
class AxiomInst:
    """Axiom-schema instance; the schema name may be left for the kernel to find."""

    schema: Optional[str] = None
    params: Optional[tuple] = None


@dataclass(frozen=True)
class Taut:
    """Substitution instance of a classical tautology; ``atoms`` summarises the
    truth table that witnessed it (2**atoms rows, all true)."""

    atoms: Optional[int] = None


@dataclass(frozen=True)
class MP:
    """Modus ponens: ``major`` desugars to (not minor) \\/ conclusion."""

    minor: int
    major: int


Justification = Union[Hyp, AxiomInst, Taut, MP]


@dataclass(frozen=True)
class ProofLine:
    formula: OuterFormula
    just: Justification


@dataclass(frozen=True)
class Proof:
    theory: tuple
    lines: tuple

    @property
    def conclusion(self) -> OuterFormula:
        if not self.lines:
            raise ValueError("empty proof has no conclusion")
        return self.lines[-1].formula


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: Optional[int] = None
    reason: Optional[str] = None


# ---------------------------------------------------------------------------
# Structural helpers
# ---------------------------------------------------------------------------


def _implication_parts(f: OuterFormula):
    """(premise, conclusion) when ``f`` has the desugared arrow shape."""
    if isinstance(f, OOr) and isinstance(f.left, ONot):
        return f.left.operand, f.right
    return None


def _gi_atom(f) -> Optional[GradedImplication]:
    if isinstance(f, Atom) and isinstance(f.content, GradedImplication):
        return f.content
    return None


def _single(g: Optional[GradedImplication]):
    """(antecedent, consequent, grade) for one-antecedent implications."""
    if g is not None and len(g.antecedents) == 1:
        return g.antecedents[0], g.consequent, g.grade
    return None


def _conjuncts(f: OuterFormula) -> list:
    if isinstance(f, OAnd):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _sorted_multiset(exprs: Iterable[BasicExpr]) -> tuple:
    return tuple(sorted(exprs, key=render))


# ---------------------------------------------------------------------------
# Axiom matchers.  Each returns a params tuple (grade bindings, in schema
# order) on success and None otherwise.
# ---------------------------------------------------------------------------


def _match_and1(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) != 2:
        return None
    s1, s2, s3 = _single(_gi_atom(cs[0])), _single(_gi_atom(cs[1])), _single(_gi_atom(parts[1]))
    if not (s1 and s2 and s3):
        return None
    a1, b1, d1 = s1
    a2, b2, d2 = s2
    a3, b3, d3 = s3
    if a1 == a2 == a3 and d1 == d2 == d3 and b3 == And(b1, b2):
        return (d1,)
    return None


def _match_and2(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and isinstance(s[0], And) and s[1] == s[0].left:
        return ()
    return None


def _match_and3(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and isinstance(s[0], And) and s[1] == s[0].right:
        return ()
    return None


def _match_or1(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) != 2:
        return None
    s1, s2, s3 = _single(_gi_atom(cs[0])), _single(_gi_atom(cs[1])), _single(_gi_atom(parts[1]))
    if not (s1 and s2 and s3):
        return None
    a1, c1, d1 = s1
    a2, c2, d2 = s2
    a3, c3, d3 = s3
    if c1 == c2 == c3 and d1 == d2 == d3 and a3 == Or(a1, a2):
        return (d1,)
    return None


def _match_or2(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and isinstance(s[1], Or) and s[0] == s[1].left:
        return ()
    return None


def _match_or3(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and isinstance(s[1], Or) and s[0] == s[1].right:
        return ()
    return None


def _match_strong1(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) != 2:
        return None
    s1, s2, s3 = _single(_gi_atom(cs[0])), _single(_gi_atom(cs[1])), _single(_gi_atom(parts[1]))
    if not (s1 and s2 and s3):
        return None
    if s1[0] != Top() or s2[0] != Top() or s3[0] != Top():
        return None
    if s3[1] == Strong(s1[1], s2[1]) and s3[2] == tnorm(kind, s1[2], s2[2]):
        return (s1[2], s2[2])
    return None


def _match_strong2(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) != 2:
        return None
    s1, s2, s3 = _single(_gi_atom(cs[0])), _single(_gi_atom(cs[1])), _single(_gi_atom(parts[1]))
    if not (s1 and s2 and s3):
        return None
    if s1[1] != Bottom() or s2[1] != Bottom() or s3[1] != Bottom():
        return None
    if s3[0] == Strong(s1[0], s2[0]) and s3[2] == tconorm(kind, s1[2], s2[2]):
        return (s1[2], s2[2])
    return None


def _match_strong3(f, kind):
    s = _single(_gi_atom(f))
    if s and s == (Top(), Strong(Top(), Top()), ONE):
        return ()
    return None


def _match_neg1(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    s1, s2 = _single(_gi_atom(parts[0])), _single(_gi_atom(parts[1]))
    if not (s1 and s2):
        return None
    if s2 == (Neg(s1[1]), Neg(s1[0]), s1[2]):
        return (s1[2],)
    return None


def _match_neg2(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and s[0] == Neg(Neg(s[1])):
        return ()
    return None


def _match_neg3(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and s[1] == Neg(Neg(s[0])):
        return ()
    return None


def _match_top(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and s[1] == Top():
        return ()
    return None


def _match_bot(f, kind):
    s = _single(_gi_atom(f))
    if s and s[2] == ONE and s[0] == Bottom():
        return ()
    return None


def _match_zero(f, kind):
    g = _gi_atom(f)
    if g is not None and g.grade == ZERO:
        return ()
    return None


def _match_refl(f, kind):
    s = _single(_gi_atom(f))
    if s and s[0] == s[1]:
        return (s[2],)
    return None


def _match_inkons(f, kind):
    if not isinstance(f, ONot):
        return None
    s = _single(_gi_atom(f.operand))
    if s and s[0] == Top() and s[1] == Bottom() and s[2] > ZERO:
        return (s[2],)
    return None


def _match_trans1(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) != 2:
        return None
    s1, s2, s3 = _single(_gi_atom(cs[0])), _single(_gi_atom(cs[1])), _single(_gi_atom(parts[1]))
    if not (s1 and s2 and s3):
        return None
    if s2[0] == s1[1] and s3[0] == s1[0] and s3[1] == s2[1] \
            and s3[2] == luk_tnorm(s1[2], s2[2]):
        return (s1[2], s2[2])
    return None


def _match_trans2(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) != 2:
        return None
    s1, s2, s3 = _single(_gi_atom(cs[0])), _single(_gi_atom(cs[1])), _single(_gi_atom(parts[1]))
    if not (s1 and s2 and s3):
        return None
    if s1[1] == Bottom() and s2[0] == Top() and s3[0] == s1[0] and s3[1] == s2[1] \
            and s3[2] == luk_tconorm(s1[2], s2[2]):
        return (s1[2], s2[2])
    return None


def _match_lin1(f, kind):
    if not isinstance(f, OOr) or isinstance(f.left, ONot):
        return None
    s1, s2 = _single(_gi_atom(f.left)), _single(_gi_atom(f.right))
    if s1 and s2 and s1[2] == ONE and s2[2] == ONE \
            and s2[0] == s1[1] and s2[1] == s1[0]:
        return ()
    return None


def _match_lin2(f, kind):
    if not isinstance(f, OOr) or isinstance(f.left, ONot):
        return None
    s1, s2 = _single(_gi_atom(f.left)), _single(_gi_atom(f.right))
    if s1 and s2 and s1[0] == Top() and s2[1] == Bottom() \
            and s2[0] == s1[1] and s2[2] == negate(s1[2]):
        return (s1[2],)
    return None


def _match_mean_trans1(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) < 2:
        return None
    concl = _gi_atom(parts[1])
    if concl is None:
        return None
    for j, cand in enumerate(cs):
        inner = _gi_atom(cand)
        if inner is None or inner.consequent != concl.consequent:
            continue
        rest = cs[:j] + cs[j + 1:]
        if len(inner.antecedents) != len(rest):
            continue
        singles = [_single(_gi_atom(r)) for r in rest]
        if any(s is None for s in singles):
            continue
        if _sorted_multiset(s[1] for s in singles) != inner.antecedents:
            continue
        if _sorted_multiset(s[0] for s in singles) != concl.antecedents:
            continue
        grades = tuple(s[2] for s in singles)
        if concl.grade == luk_tnorm(mean(grades), inner.grade):
            return grades + (inner.grade,)
    return None


def _match_mean_trans2(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) != 2:
        return None
    concl = _gi_atom(parts[1])
    if concl is None:
        return None
    for first, second in (cs, reversed(cs)):
        head = _gi_atom(first)
        tail = _single(_gi_atom(second))
        if head is None or tail is None:
            continue
        if tail[0] == head.consequent and concl.antecedents == head.antecedents \
                and concl.consequent == tail[1] \
                and concl.grade == luk_tnorm(head.grade, tail[2]):
            return (head.grade, tail[2])
    return None


def _match_mean_trans3(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    cs = _conjuncts(parts[0])
    if len(cs) < 2:
        return None
    concl = _gi_atom(parts[1])
    if concl is None:
        return None
    for j, cand in enumerate(cs):
        s = _single(_gi_atom(cand))
        if s is None or s[0] != Top() or s[1] != concl.consequent:
            continue
        rest = cs[:j] + cs[j + 1:]
        singles = [_single(_gi_atom(r)) for r in rest]
        if any(x is None or x[1] != Bottom() for x in singles):
            continue
        if _sorted_multiset(x[0] for x in singles) != concl.antecedents:
            continue
        grades = tuple(x[2] for x in singles)
        if concl.grade == luk_tconorm(mean(grades), s[2]):
            return grades + (s[2],)
    return None


def _match_mean_top(f, kind):
    parts = _implication_parts(f)
    if not parts:
        return None
    prem = _gi_atom(parts[0])
    concl = _single(_gi_atom(parts[1]))
    if prem is None or concl is None:
        return None
    if all(a == Top() for a in prem.antecedents) and concl[0] == Top() \
            and concl[1] == prem.consequent and concl[2] == prem.grade:
        return (prem.grade,)
    return None


_MATCHERS: Sequence = (
    ("and1", _match_and1),
    ("and2", _match_and2),
    ("and3", _match_and3),
    ("or1", _match_or1),
    ("or2", _match_or2),
    ("or3", _match_or3),
    ("strong1", _match_strong1),
    ("strong2", _match_strong2),
    ("strong3", _match_strong3),
    ("neg1", _match_neg1),
    ("neg2", _match_neg2),
    ("neg3", _match_neg3),
    ("top", _match_top),
    ("bot", _match_bot),
    ("zero", _match_zero),
    ("refl", _match_refl),
    ("inkons", _match_inkons),
    ("trans1", _match_trans1),
    ("trans2", _match_trans2),
    ("lin1", _match_lin1),
    ("lin2", _match_lin2),
    ("mean_trans1", _match_mean_trans1),
    ("mean_trans2", _match_mean_trans2),
    ("mean_trans3", _match_mean_trans3),
    ("mean_top", _match_mean_top),
)

SCHEMA_NAMES = tuple(name for name, _ in _MATCHERS)

_MATCHER_BY_NAME = dict(_MATCHERS)


def match_axiom(f: OuterFormula, kind: TNormKind = TNormKind.LUKASIEWICZ):
    """First schema (in catalogue order) that ``f`` instantiates, with its
    grade parameters; None when no schema applies."""
    for name, matcher in _MATCHERS:
        params = matcher(f, kind)
        if params is not None:
            return name, params
    return None


def match_schema(f: OuterFormula, schema: str,
                 kind: TNormKind = TNormKind.LUKASIEWICZ):
    """Match ``f`` against one named schema only."""
    matcher = _MATCHER_BY_NAME.get(schema)
    if matcher is None:
        raise ValueError(f"unknown axiom schema {schema!r}")
    return matcher(f, kind)


# ---------------------------------------------------------------------------
# Classical tautology instances
# ---------------------------------------------------------------------------


def _distinct_atoms(f: OuterFormula, seen: dict) -> None:
    if isinstance(f, Atom):
        seen.setdefault(f, len(seen))
    elif isinstance(f, ONot):
        _distinct_atoms(f.operand, seen)
    elif isinstance(f, (OAnd, OOr)):
        _distinct_atoms(f.left, seen)
        _distinct_atoms(f.right, seen)
    else:
        raise TypeError(f"not an outer formula: {f!r}")


def _eval_classical(f: OuterFormula, assignment: dict) -> bool:
    if isinstance(f, Atom):
        return assignment[f]
    if isinstance(f, ONot):
        return not _eval_classical(f.operand, assignment)
    if isinstance(f, OAnd):
        return _eval_classical(f.left, assignment) and _eval_classical(f.right, assignment)
    return _eval_classical(f.left, assignment) or _eval_classical(f.right, assignment)


def match_tautology(f: OuterFormula, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    """Truth-table check treating distinct atoms as independent booleans.

    Raises ResourceLimitError past ``atom_cap`` atoms instead of attempting
    2**cap rows silently.
    """
    seen: dict = {}
    _distinct_atoms(f, seen)
    atoms = list(seen)
    if len(atoms) > atom_cap:
        raise ResourceLimitError(
            f"{len(atoms)} distinct atoms exceed the truth-table cap of {atom_cap}"
        )
    for bits in itertools.product((False, True), repeat=len(atoms)):
        if not _eval_classical(f, dict(zip(atoms, bits))):
            return False
    return True


# ---------------------------------------------------------------------------
# Proof checking
# ---------------------------------------------------------------------------


def check_proof(
    theory: Sequence[OuterFormula],
    proof: Proof,
    kind: TNormKind = TNormKind.LUKASIEWICZ,
    atom_cap: int = DEFAULT_ATOM_CAP,
) -> Verdict:
    """Re-derive every line; the first failure yields a rejecting Verdict."""
    theory = tuple(theory)
    if not proof.lines:
        return Verdict(False, None, "empty proof")
    for i, line in enumerate(proof.lines):
        just = line.just
        if isinstance(just, Hyp):
            if not 0 <= just.index < len(theory):
                return Verdict(False, i, f"hypothesis index {just.index} out of range")
            if theory[just.index] != line.formula:
                return Verdict(
                    False, i,
                    f"formula differs from theory member {just.index}",
                )
        elif isinstance(just, AxiomInst):
            if just.schema is not None:
                if just.schema not in _MATCHER_BY_NAME:
                    return Verdict(False, i, f"unknown axiom schema {just.schema!r}")
                if match_schema(line.formula, just.schema, kind) is None:
                    return Verdict(
                        False, i, f"not an instance of schema {just.schema}"
                    )
            elif match_axiom(line.formula, kind) is None:
                return Verdict(False, i, "not an instance of any axiom schema")
        elif isinstance(just, Taut):
            if not match_tautology(line.formula, atom_cap):
                return Verdict(False, i, "not a classical tautology instance")
        elif isinstance(just, MP):
            if not (0 <= just.minor < i and 0 <= just.major < i):
                return Verdict(False, i, "modus ponens references a later or missing line")
            major = proof.lines[just.major].formula
            expected = outer_implies(proof.lines[just.minor].formula, line.formula)
            if major != expected:
                return Verdict(
                    False, i,
                    "major premise is not the implication of the minor premise "
                    "and this line",
                )
        else:
            return Verdict(False, i, f"unknown justification {just!r}")
    return Verdict(True)


# ---------------------------------------------------------------------------
# Grade bracketing
# ---------------------------------------------------------------------------


def tau_formulas(alpha: BasicExpr, c, denominators: Iterable[int]) -> list:
    """Formulas pinning a degree from below and above on the given grids.

    For every grid value t strictly below ``c`` this emits ``top ->[t] alpha``
    and for every t strictly above, ``alpha ->[1-t] bot``; together they say
    the degree of ``alpha`` is exactly ``c`` as far as the grids can see.
    """
    c = as_grade(c)
    ts = sorted({Fraction(i, q) for q in denominators for i in range(q + 1)})
    lower = [Atom(GradedImplication((Top(),), alpha, t)) for t in ts if t < c]
    upper = [Atom(GradedImplication((alpha,), Bottom(), negate(t))) for t in ts if t > c]
    return lower + upper


# ---------------------------------------------------------------------------
# Proof construction
# ---------------------------------------------------------------------------


class ProofBuilder:
    """Appends kernel-validated lines and hands out their indices.

    Identical formulas are deduplicated: re-adding an existing line returns
    the original index, keeping constructed proofs short.
    """

    def __init__(self, theory: Sequence[OuterFormula],
                 kind: TNormKind = TNormKind.LUKASIEWICZ):
        self.theory = tuple(theory)
        self.kind = kind
        self.lines: list = []
        self._index: dict = {}

    @classmethod
    def from_proof(cls, proof: Proof, kind: TNormKind = TNormKind.LUKASIEWICZ):
        builder = cls(proof.theory, kind)
        for line in proof.lines:
            builder._append(line.formula, line.just)
        return builder

    def _append(self, formula: OuterFormula, just: Justification) -> int:
        existing = self._index.get(formula)
        if existing is not None:
            return existing
        self.lines.append(ProofLine(formula, just))
        index = len(self.lines) - 1
        self._index[formula] = index
        return index

    def hyp(self, index: int) -> int:
        return self._append(self.theory[index], Hyp(index))

    def axiom(self, formula: OuterFormula) -> int:
        found = match_axiom(formula, self.kind)
        if found is None:
            raise ValueError(f"not an axiom instance: {render(formula)}")
        return self._append(formula, AxiomInst(found[0], found[1]))

    def taut(self, formula: OuterFormula) -> int:
        seen: dict = {}
        _distinct_atoms(formula, seen)
        if not match_tautology(formula):
            raise ValueError(f"not a tautology instance: {render(formula)}")
        return self._append(formula, Taut(len(seen)))

    def mp(self, minor: int, major: int) -> int:
        shape = _implication_parts(self.lines[major].formula)
        if shape is None or shape[0] != self.lines[minor].formula:
            raise ValueError("modus ponens premises do not fit")
        conclusion = shape[1]
        existing = self._index.get(conclusion)
        if existing is not None:
            return existing
        return self._append(conclusion, MP(minor, major))

    def conjoin(self, i: int, j: int) -> int:
        """Derive the conjunction of two earlier lines via a tautology step."""
        phi = self.lines[i].formula
        psi = self.lines[j].formula
        both = OAnd(phi, psi)
        step = self.taut(outer_implies(phi, outer_implies(psi, both)))
        half = self.mp(i, step)
        return self.mp(j, half)

    def conjoin_all(self, indices: Sequence[int]) -> int:
        acc = indices[0]
        for nxt in indices[1:]:
            acc = self.conjoin(acc, nxt)
        return acc

    def weaken(self, line: int, target) -> int:
        """Lower the grade of an implication line (any grade not above it).

        Derived step: reflexivity gives the consequent back to itself at the
        slackened grade, then a transitivity schema composes the two.
        """
        target = as_grade(target)
        g = _gi_atom(self.lines[line].formula)
        if g is None:
            raise ValueError("only implication atoms can be weakened")
        if target > g.grade:
            raise ValueError(f"cannot strengthen grade {g.grade} to {target}")
        if target == g.grade:
            return line
        slack = ONE + target - g.grade
        refl = self.axiom(Atom(GradedImplication((g.consequent,), g.consequent, slack)))
        pair = self.conjoin(line, refl)
        weakened = Atom(GradedImplication(g.antecedents, g.consequent, target))
        bridge = self.axiom(outer_implies(self.lines[pair].formula, weakened))
        return self.mp(pair, bridge)

    def build(self) -> Proof:
        return Proof(self.theory, tuple(self.lines))


def score_theory(answers: Sequence, items: Optional[Sequence[str]] = None,
                 disorder: str = "delta") -> tuple:
    """The standard scoring theory for graded answers.

    Two mean implications tie the disorder variable to the items from below
    and (negated) from above, and 2n facts pin each item's degree exactly.
    """
    answers = [as_grade(a) for a in answers]
    if not answers:
        raise ValueError("at least one answer is required")
    if items is None:
        items = [f"phi{i + 1}" for i in range(len(answers))]
    if len(items) != len(answers):
        raise ValueError("one item variable per answer is required")
    if len(set(items)) != len(items) or disorder in items:
        raise ValueError("item and disorder variables must be distinct")
    phis = [Var(name) for name in items]
    delta = Var(disorder)
    lower = Atom(GradedImplication(tuple(phis), delta, ONE))
    upper = Atom(GradedImplication(tuple(Neg(p) for p in phis), Neg(delta), ONE))
    floors = [Atom(GradedImplication((Top(),), p, c)) for p, c in zip(phis, answers)]
    ceils = [
        Atom(GradedImplication((p,), Bottom(), negate(c)))
        for p, c in zip(phis, answers)
    ]
    return (lower, upper, *floors, *ceils)


def build_score_derivation(
    n: int,
    answers: Sequence,
    items: Optional[Sequence[str]] = None,
    disorder: str = "delta",
    kind: TNormKind = TNormKind.LUKASIEWICZ,
) -> Proof:
    """Derive both score bounds from the standard scoring theory.

    The resulting proof's final two lines are ``top ->[d] delta`` and
    ``delta ->[1-d] bot`` with d the mean of the answers.  The route goes
    through the mean-transitivity schema and its top-collapse companion on
    each side; the negated side needs two bridging lemmas (``top ->[1] ~bot``
    and ``~top ->[1] bot``) plus negation rotations, each built from schema
    instances so the whole proof is kernel-checkable.
    """
    answers = [as_grade(a) for a in answers]
    if len(answers) != n:
        raise ValueError(f"expected {n} answers, got {len(answers)}")
    theory = score_theory(answers, items, disorder)
    lower_f = theory[0].content
    phis = list(lower_f.antecedents)
    delta = lower_f.consequent
    d = mean(answers)
    b = ProofBuilder(theory, kind)
    tops = (Top(),) * n

    # Lower bound: mean the item floors through the first theory implication.
    floor_idx = [b.hyp(2 + i) for i in range(n)]
    all_low = b.conjoin_all(floor_idx + [b.hyp(0)])
    spread_low = Atom(GradedImplication(tops, delta, d))
    ax_low = b.axiom(outer_implies(b.lines[all_low].formula, spread_low))
    if n == 1:
        pending_low = (all_low, ax_low)
    else:
        mid = b.mp(all_low, ax_low)
        collapse = b.axiom(
            outer_implies(spread_low, Atom(GradedImplication((Top(),), delta, d)))
        )
        pending_low = (mid, collapse)

    # Bridging lemmas.
    lemma_a = _derive_top_to_negbot(b)
    lemma_b = _derive_negtop_to_bot(b)

    # Upper bound: rotate each ceiling fact to top ->[1-c] ~item, mean them
    # through the negated theory implication, then rotate back onto delta.
    rotated = []
    for i in range(n):
        ceil = b.hyp(2 + n + i)
        ceil_f = theory[2 + n + i].content
        rot = b.axiom(
            outer_implies(
                theory[2 + n + i],
                Atom(GradedImplication((Neg(Bottom()),), Neg(ceil_f.antecedents[0]),
                                       ceil_f.grade)),
            )
        )
        via_negbot = b.mp(ceil, rot)
        pair = b.conjoin(lemma_a, via_negbot)
        tr = b.axiom(
            outer_implies(
                b.lines[pair].formula,
                Atom(GradedImplication((Top(),), Neg(ceil_f.antecedents[0]),
                                       ceil_f.grade)),
            )
        )
        rotated.append(b.mp(pair, tr))
    all_up = b.conjoin_all(rotated + [b.hyp(1)])
    spread_up = Atom(GradedImplication(tops, Neg(delta), negate(d)))
    ax_up = b.axiom(outer_implies(b.lines[all_up].formula, spread_up))
    mid_up = b.mp(all_up, ax_up)
    if n > 1:
        collapse_up = b.axiom(
            outer_implies(spread_up, Atom(GradedImplication((Top(),), Neg(delta),
                                                            negate(d))))
        )
        mid_up = b.mp(mid_up, collapse_up)

    rot_back = b.axiom(
        outer_implies(
            b.lines[mid_up].formula,
            Atom(GradedImplication((Neg(Neg(delta)),), Neg(Top()), negate(d))),
        )
    )
    doubled = b.mp(mid_up, rot_back)
    undouble = b.axiom(Atom(GradedImplication((delta,), Neg(Neg(delta)), ONE)))
    pair = b.conjoin(undouble, doubled)
    to_negtop = b.axiom(
        outer_implies(
            b.lines[pair].formula,
            Atom(GradedImplication((delta,), Neg(Top()), negate(d))),
        )
    )
    at_negtop = b.mp(pair, to_negtop)
    last_pair = b.conjoin(at_negtop, lemma_b)
    final_ax = b.axiom(
        outer_implies(
            b.lines[last_pair].formula,
            Atom(GradedImplication((delta,), Bottom(), negate(d))),
        )
    )

    # Fire the two pending conclusions so they land as the final two lines.
    b.mp(*pending_low)
    b.mp(last_pair, final_ax)
    return b.build()


def _derive_top_to_negbot(b: ProofBuilder) -> int:
    """top ->[1] ~bot, from schema instances only."""
    start = b.axiom(Atom(GradedImplication((Bottom(),), Neg(Top()), ONE)))
    rot = b.axiom(
        outer_implies(
            b.lines[start].formula,
            Atom(GradedImplication((Neg(Neg(Top())),), Neg(Bottom()), ONE)),
        )
    )
    rotated = b.mp(start, rot)
    dbl = b.axiom(Atom(GradedImplication((Top(),), Neg(Neg(Top())), ONE)))
    pair = b.conjoin(dbl, rotated)
    compose = b.axiom(
        outer_implies(
            b.lines[pair].formula,
            Atom(GradedImplication((Top(),), Neg(Bottom()), ONE)),
        )
    )
    return b.mp(pair, compose)


def _derive_negtop_to_bot(b: ProofBuilder) -> int:
    """~top ->[1] bot, from schema instances only."""
    start = b.axiom(Atom(GradedImplication((Neg(Bottom()),), Top(), ONE)))
    rot = b.axiom(
        outer_implies(
            b.lines[start].formula,
            Atom(GradedImplication((Neg(Top()),), Neg(Neg(Bottom())), ONE)),
        )
    )
    rotated = b.mp(start, rot)
    undbl = b.axiom(Atom(GradedImplication((Neg(Neg(Bottom())),), Bottom(), ONE)))
    pair = b.conjoin(rotated, undbl)
    compose = b.axiom(
        outer_implies(
            b.lines[pair].formula,
            Atom(GradedImplication((Neg(Top()),), Bottom(), ONE)),
        )
    )
    return b.mp(pair, compose)


# ---------------------------------------------------------------------------
# Proof scripts (JSON lines) and verdict serialisation
# ---------------------------------------------------------------------------


def _just_to_dict(just: Justification) -> dict:
    if isinstance(just, Hyp):
        return {"kind": "hyp", "args": {"index": just.index}}
    if isinstance(just, AxiomInst):
        args: dict = {}
        if just.schema is not None:
            args["schema"] = just.schema
        if just.params:
            args["params"] = [str(p) for p in just.params]
        return {"kind": "axiom", "args": args}
    if isinstance(just, Taut):
        args = {} if just.atoms is None else {"atoms": just.atoms}
        return {"kind": "taut", "args": args}
    if isinstance(just, MP):
        return {"kind": "mp", "args": {"minor": just.minor, "major": just.major}}
    raise TypeError(f"unknown justification {just!r}")


def proof_to_json_lines(proof: Proof) -> str:
    """One JSON object per proof line; 0-based indices throughout."""
    out = []
    for line in proof.lines:
        out.append(
            json.dumps(
                {"formula": render(line.formula), "just": _just_to_dict(line.just)},
                sort_keys=True,
            )
        )
    return "\n".join(out) + "\n"


def _just_from_dict(d: dict, lineno: int) -> Justification:
    kind = d.get("kind")
    args = d.get("args") or {}
    if kind == "hyp":
        if "index" not in args:
            raise ValueError(f"proof line {lineno}: hyp needs an index")
        return Hyp(int(args["index"]))
    if kind == "axiom":
        schema = args.get("schema")
        return AxiomInst(schema)
    if kind == "taut":
        atoms = args.get("atoms")
        return Taut(None if atoms is None else int(atoms))
    if kind == "mp":
        if "minor" not in args or "major" not in args:
            raise ValueError(f"proof line {lineno}: mp needs minor and major")
        return MP(int(args["minor"]), int(args["major"]))
    raise ValueError(f"proof line {lineno}: unknown justification kind {kind!r}")


def parse_proof_script(text: str, theory: Sequence[OuterFormula]) -> Proof:
    """Parse a JSON-lines proof script against a theory.

    Malformed JSON, formulas, or justification shapes raise ValueError; the
    logical content is judged later by ``check_proof``.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines()):
        stripped = raw.strip()
        if not stripped:
            continue
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ValueError(f"proof line {lineno}: bad JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or "formula" not in obj or "just" not in obj:
            raise ValueError(f"proof line {lineno}: expected formula and just fields")
        try:
            formula = parse_formula(obj["formula"])
        except ParseError as exc:
            raise ValueError(f"proof line {lineno}: {exc}") from None
        lines.append(ProofLine(formula, _just_from_dict(obj["just"], lineno)))
    return Proof(tuple(theory), tuple(lines))


def verdict_to_dict(verdict: Verdict) -> dict:
    if verdict.accepted:
        return {"accepted": True}
    out: dict = {"accepted": False}
    if verdict.line is not None:
        out["line"] = verdict.line
    if verdict.reason is not None:
        out["reason"] = verdict.reason
    return out
