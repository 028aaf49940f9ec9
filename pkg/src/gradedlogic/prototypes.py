"""Distance-based degree semantics over the answer cube.

Worlds are points of [0, 1]^n under the city-block (L1) metric.  A vague
property is a pair of disjoint nonempty closed sets: prototypes (degree 1)
and counterexamples (degree 0); in between, the degree of a world is its
relative distance

    d(w, counterexamples) / (d(w, prototypes) + d(w, counterexamples)),

an exact rational.  Supported point sets are finite sets and axis faces
(all worlds with one fixed 0/1 coordinate); the i-th questionnaire item is
the pair (face x_i = 1, face x_i = 0), making its degree the i-th
coordinate.  Formulas over graded-variable atoms denote world regions:
an atom is the set of worlds where the variable's degree is exactly the
stated grade, and the classical connectives act as set operations.  A
formula is satisfied when its region covers every world; the checker
verifies this on finite grids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import ResourceLimitError, UnboundVariableError
from .grades import Grade, as_grade
from .syntax import (
    Atom,
    GradedVariable,
    OAnd,
    ONot,
    OOr,
    OuterFormula,
)

DEFAULT_GRID_BUDGET = 5_000_000

World = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def world(values: Iterable) -> World:
    """A point of the cube, coerced to exact coordinates in [0, 1]."""
    return tuple(as_grade(v) for v in values)


def l1_distance(w: World, u: World) -> Fraction:
    if len(w) != len(u):
        raise ValueError("worlds of different dimension")
    return sum((abs(a - b) for a, b in zip(w, u)), start=ZERO)


@dataclass(frozen=True)
class FiniteSet:
    """Finitely many explicit points; closed, nonempty by construction."""

    points: tuple

    def __post_init__(self):
        pts = tuple(world(p) for p in self.points)
        if not pts:
            raise ValueError("a point set must be nonempty")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("points of mixed dimension")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Face:
    """All worlds whose coordinate ``index`` equals ``value`` (0 or 1)."""

    index: int
    value: Grade

    def __post_init__(self):
        object.__setattr__(self, "value", as_grade(self.value))
        if self.value not in (ZERO, ONE):
            raise ValueError("faces sit at coordinate 0 or 1")
        if self.index < 0:
            raise ValueError("face index must be nonnegative")


PointSet = Union[FiniteSet, Face]


def set_distance(w: World, s: PointSet) -> Fraction:
    """L1 distance from a world to a set; for closed sets this is a minimum,
    so it is 0 exactly on members."""
    if isinstance(s, FiniteSet):
        return min(l1_distance(w, p) for p in s.points)
    if isinstance(s, Face):
        if s.index >= len(w):
            raise ValueError("face index outside world dimension")
        return abs(w[s.index] - s.value)
    raise TypeError(f"not a point set: {s!r}")


def contains(s: PointSet, w: World) -> bool:
    if isinstance(s, FiniteSet):
        return w in s.points
    if isinstance(s, Face):
        if s.index >= len(w):
            raise ValueError("face index outside world dimension")
        return w[s.index] == s.value
    raise TypeError(f"not a point set: {s!r}")


def _disjoint(a: PointSet, b: PointSet) -> bool:
    if isinstance(a, Face) and isinstance(b, Face):
        # Distinct indices always share a corner; equal indices overlap
        # unless the values differ.
        return a.index == b.index and a.value != b.value
    if isinstance(a, FiniteSet) and isinstance(b, FiniteSet):
        return not set(a.points) & set(b.points)
    fin, face = (a, b) if isinstance(a, FiniteSet) else (b, a)
    return all(not contains(face, p) for p in fin.points)


@dataclass(frozen=True)
class PCPair:
    """Prototype and counterexample sets; they must not touch."""

    protos: PointSet
    counters: PointSet

    def __post_init__(self):
        if not _disjoint(self.protos, self.counters):
            raise ValueError("prototype and counterexample sets overlap")


@dataclass(frozen=True)
class QEvaluation:
    """Binds variables to prototype/counterexample pairs over one cube.

    The ``basic`` variables are the coordinate readouts: the i-th is fixed
    to (face x_i = 1, face x_i = 0).  Further variables may be bound to any
    pair whose sets fit the dimension.
    """

    basic: tuple
    dependent: Mapping[str, PCPair]

    def __post_init__(self):
        if len(set(self.basic)) != len(self.basic):
            raise ValueError("duplicate basic variable names")
        overlap = set(self.basic) & set(self.dependent)
        if overlap:
            raise ValueError(f"variables bound twice: {sorted(overlap)}")
        n = len(self.basic)
        for name, pair in self.dependent.items():
            for s in (pair.protos, pair.counters):
                if isinstance(s, Face) and s.index >= n:
                    raise ValueError(f"{name}: face index outside dimension {n}")
                if isinstance(s, FiniteSet) and len(s.points[0]) != n:
                    raise ValueError(f"{name}: points of dimension != {n}")
        object.__setattr__(self, "dependent", dict(self.dependent))

    @property
    def dimension(self) -> int:
        return len(self.basic)

    def pair(self, var: str) -> PCPair:
        if var in self.basic:
            i = self.basic.index(var)
            return PCPair(Face(i, ONE), Face(i, ZERO))
        try:
            return self.dependent[var]
        except KeyError:
            raise UnboundVariableError(var) from None


def degree(ev: QEvaluation, var: str, w: World) -> Grade:
    """Relative-distance degree of ``var`` at ``w``; exact."""
    if len(w) != ev.dimension:
        raise ValueError("world dimension does not match the evaluation")
    pair = ev.pair(var)
    to_protos = set_distance(w, pair.protos)
    to_counters = set_distance(w, pair.counters)
    return to_counters / (to_protos + to_counters)


def in_region(ev: QEvaluation, f: OuterFormula, w: World) -> bool:
    """Membership of ``w`` in the region denoted by ``f``."""
    if isinstance(f, Atom):
        if not isinstance(f.content, GradedVariable):
            raise TypeError(
                "graded-implication atoms have no region semantics; "
                "use the degree semantics module"
            )
        return degree(ev, f.content.var, w) == f.content.grade
    if isinstance(f, ONot):
        return not in_region(ev, f.operand, w)
    if isinstance(f, OAnd):
        return in_region(ev, f.left, w) and in_region(ev, f.right, w)
    if isinstance(f, OOr):
        return in_region(ev, f.left, w) or in_region(ev, f.right, w)
    raise TypeError(f"not an outer formula: {f!r}")


def grid_worlds(n: int, k: int) -> Iterable[World]:
    """All worlds of [0,1]^n with coordinates on the k-denominator grid."""
    steps = [Fraction(i, k) for i in range(k + 1)]
    return itertools.product(steps, repeat=n)


def satisfied_on_grid(
    ev: QEvaluation,
    f: OuterFormula,
    k: int,
    max_points: int = DEFAULT_GRID_BUDGET,
) -> bool:
    """Does the region of ``f`` cover every grid world?  Grid verdicts only."""
    if k < 1:
        raise ValueError("grid denominator must be at least 1")
    n = ev.dimension
    points = (k + 1) ** n
    if points > max_points:
        raise ResourceLimitError(
            f"grid of {points} worlds exceeds the budget of {max_points}"
        )
    return all(in_region(ev, f, w) for w in grid_worlds(n, k))


def canonical_disorder_eval(
    n: int,
    disorder: str,
    items: Optional[Sequence[str]] = None,
) -> QEvaluation:
    """The canonical evaluation: items read out coordinates, the disorder's
    prototype is the all-ones corner and its counterexample the all-zeros
    corner, which makes its degree the arithmetic mean of the coordinates."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if items is None:
        items = tuple(f"phi{i + 1}" for i in range(n))
    items = tuple(items)
    if len(items) != n:
        raise ValueError(f"expected {n} item names, got {len(items)}")
    pair = PCPair(
        FiniteSet(((ONE,) * n,)),
        FiniteSet(((ZERO,) * n,)),
    )
    return QEvaluation(items, {disorder: pair})


# ---------------------------------------------------------------------------
# Canonical theory recognition
# ---------------------------------------------------------------------------


def _implication_sides(f: OuterFormula):
    if isinstance(f, OOr) and isinstance(f.left, ONot):
        return f.left.operand, f.right
    return None


def _biconditional_sides(f: OuterFormula):
    """(phi, psi) when ``f`` is (phi => psi) /\\ (psi => phi) in some order."""
    if not isinstance(f, OAnd):
        return None
    one = _implication_sides(f.left)
    two = _implication_sides(f.right)
    if one is None or two is None:
        return None
    if one[0] == two[1] and one[1] == two[0]:
        return one
    return None


def _q_atom(f: OuterFormula) -> Optional[GradedVariable]:
    if isinstance(f, Atom) and isinstance(f.content, GradedVariable):
        return f.content
    return None


def _conjunct_atoms(f: OuterFormula) -> Optional[list]:
    if isinstance(f, OAnd):
        left = _conjunct_atoms(f.left)
        right = _conjunct_atoms(f.right)
        if left is None or right is None:
            return None
        return left + right
    atom = _q_atom(f)
    return None if atom is None else [atom]


def _corner_halves(f: OuterFormula, level: Grade):
    """(disorder atom, item atoms) for one biconditional at degree ``level``."""
    sides = _biconditional_sides(f)
    if sides is None:
        return None
    for solo, conj in (sides, reversed(sides)):
        atom = _q_atom(solo)
        if atom is None or atom.grade != level:
            continue
        others = _conjunct_atoms(conj)
        if others is None or not others:
            continue
        if any(a.grade != level for a in others):
            continue
        names = [a.var for a in others]
        if len(set(names)) != len(names) or atom.var in names:
            continue
        return atom.var, names
    return None


def check_theory_correct_canonical(
    theory: Sequence[OuterFormula],
    n: int,
    k: int,
) -> Optional[QEvaluation]:
    """Recognise the standard two-biconditional disorder theory and verify it.

    The theory must consist of exactly two formulas: the disorder at degree 1
    iff all n items are at degree 1, and the same at degree 0.  On a match,
    the canonical evaluation is checked against both formulas on the
    k-denominator grid and returned; anything else returns None (the pattern
    is deliberately narrow, not a general model search).
    """
    if len(theory) != 2:
        return None
    ones = zeros = None
    for f in theory:
        found = _corner_halves(f, ONE)
        if found is not None and ones is None:
            ones = found
            continue
        found = _corner_halves(f, ZERO)
        if found is not None and zeros is None:
            zeros = found
    if ones is None or zeros is None:
        return None
    disorder, items = ones
    if zeros[0] != disorder or set(zeros[1]) != set(items):
        return None
    if len(items) != n:
        return None
    ev = canonical_disorder_eval(n, disorder, items)
    for f in theory:
        if not satisfied_on_grid(ev, f, k):
            return None
    return ev
