"""Degree semantics and finite-grid refutation search.

An evaluation assigns an exact rational degree to every variable and fixes
the session t-norm.  Graded implications are crisp: they hold or fail, by
an exact comparison of the antecedent mean against the consequent degree
plus the grade's slack.  Outer connectives are classical.

Entailment is approximated by exhaustive countermodel search over the
finite grid {0, 1/m, ..., 1}: a found countermodel genuinely refutes, while
"no countermodel with denominator m" is deliberately weaker than full
entailment and is reported as exactly that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ResourceLimitError, UnboundVariableError
from .grades import Grade, TNormKind, as_grade, luk_tnorm, mean, negate, tnorm
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
    Strong,
    Top,
    Var,
    vars_of_formula,
)

DEFAULT_SEARCH_BUDGET = 1_000_000


@dataclass(frozen=True)
class Evaluation:
    """Variable degrees plus the session t-norm; treat as immutable."""

    values: Mapping[str, Grade]
    kind: TNormKind = TNormKind.LUKASIEWICZ

    def __post_init__(self):
        object.__setattr__(
            self, "values", {name: as_grade(v) for name, v in self.values.items()}
        )

    def __getitem__(self, name: str) -> Grade:
        try:
            return self.values[name]
        except KeyError:
            raise UnboundVariableError(name) from None


def eval_basic(v: Evaluation, e: BasicExpr) -> Grade:
    """The degree of a basic expression under ``v``, exact."""
    if isinstance(e, Var):
        return v[e.name]
    if isinstance(e, Top):
        return Fraction(1)
    if isinstance(e, Bottom):
        return Fraction(0)
    if isinstance(e, Neg):
        return negate(eval_basic(v, e.expr))
    if isinstance(e, And):
        return min(eval_basic(v, e.left), eval_basic(v, e.right))
    if isinstance(e, Or):
        return max(eval_basic(v, e.left), eval_basic(v, e.right))
    if isinstance(e, Strong):
        return tnorm(v.kind, eval_basic(v, e.left), eval_basic(v, e.right))
    raise TypeError(f"not a basic expression: {e!r}")


def satisfies_gi(v: Evaluation, g: GradedImplication) -> bool:
    """Antecedent mean may exceed the consequent by at most the grade's slack."""
    avg = mean(eval_basic(v, a) for a in g.antecedents)
    return avg <= eval_basic(v, g.consequent) + negate(g.grade)


def satisfies_gi_luk_form(v: Evaluation, g: GradedImplication) -> bool:
    """Equivalent one-antecedent form: degree combined with the grade by the
    Lukasiewicz t-norm must stay below the consequent degree."""
    if len(g.antecedents) != 1:
        raise ValueError("the residuated form applies to one-antecedent implications")
    return luk_tnorm(eval_basic(v, g.antecedents[0]), g.grade) <= eval_basic(
        v, g.consequent
    )


def satisfies_formula(v: Evaluation, f: OuterFormula) -> bool:
    if isinstance(f, Atom):
        if not isinstance(f.content, GradedImplication):
            raise TypeError(
                "graded-variable atoms have no degree semantics here; "
                "use the prototype-distance module"
            )
        return satisfies_gi(v, f.content)
    if isinstance(f, ONot):
        return not satisfies_formula(v, f.operand)
    if isinstance(f, OAnd):
        return satisfies_formula(v, f.left) and satisfies_formula(v, f.right)
    if isinstance(f, OOr):
        return satisfies_formula(v, f.left) or satisfies_formula(v, f.right)
    raise TypeError(f"not an outer formula: {f!r}")


def satisfies_theory(v: Evaluation, theory: Iterable[OuterFormula]) -> bool:
    return all(satisfies_formula(v, t) for t in theory)


def find_countermodel(
    theory: Sequence[OuterFormula],
    formula: OuterFormula,
    denominator: int,
    kind: TNormKind = TNormKind.LUKASIEWICZ,
    max_points: int = DEFAULT_SEARCH_BUDGET,
) -> Optional[Evaluation]:
    """Search the grid {0, 1/m, ..., 1} for an evaluation satisfying the
    theory but not the formula.

    Variables are enumerated in sorted-name order with ascending degrees, so
    the first (and returned) hit is the lexicographically smallest
    countermodel.  Raises ResourceLimitError when the grid has more than
    ``max_points`` evaluations rather than searching a truncated grid.
    """
    if denominator < 1:
        raise ValueError("grid denominator must be at least 1")
    names: set = set(vars_of_formula(formula))
    for t in theory:
        names |= vars_of_formula(t)
    ordered = sorted(names)
    points = (denominator + 1) ** len(ordered)
    if points > max_points:
        raise ResourceLimitError(
            f"grid of {points} evaluations exceeds the budget of {max_points}"
        )
    steps = [Fraction(i, denominator) for i in range(denominator + 1)]
    for combo in itertools.product(steps, repeat=len(ordered)):
        v = Evaluation(dict(zip(ordered, combo)), kind)
        if satisfies_theory(v, theory) and not satisfies_formula(v, formula):
            return v
    return None


def entails_on_grid(
    theory: Sequence[OuterFormula],
    formula: OuterFormula,
    denominator: int,
    kind: TNormKind = TNormKind.LUKASIEWICZ,
    max_points: int = DEFAULT_SEARCH_BUDGET,
) -> bool:
    """True when no countermodel exists on the given grid (and only that)."""
    return (
        find_countermodel(theory, formula, denominator, kind, max_points) is None
    )
