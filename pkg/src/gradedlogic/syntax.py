"""Two-level abstract syntax, concrete grammar, and canonical rendering.

Inner level: basic expressions built from variables, ``top``, ``bot``,
weak conjunction ``&`` (pointwise min), weak disjunction ``|`` (pointwise
max), strong conjunction ``*`` (session t-norm), and negation ``~``
(degree flip).

Outer level: formulas whose atoms are either graded implications

    a1, a2 ->[2/3] b

(antecedent list, bracketed grade, consequent) or graded variables

    (x, 2/3)

combined classically with ``/\\``, ``\\/``, ``!`` and ``=>``; the arrow is
sugar for negation-plus-disjunction and disappears at parse time.  The two
atom kinds never mix inside one formula.

The grammar is deliberately precedence-free: one unparenthesised binary
operator is allowed per level, chains must be parenthesised.  ``render``
produces a canonical fully parenthesised form, and ``parse`` of that form
returns a structurally equal tree.  Grades are parsed to exact rationals;
antecedent lists are kept as canonically sorted multisets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Union

from .grades import Grade, as_grade

# ---------------------------------------------------------------------------
# Basic expressions
# ---------------------------------------------------------------------------


class BasicExpr:
    """Base class for the inner, degree-valued expression level."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Var(BasicExpr):
    name: str

    def __post_init__(self):
        if not _IDENT_RE.fullmatch(self.name) or self.name in ("top", "bot"):
            raise ValueError(f"invalid variable name {self.name!r}")


@dataclass(frozen=True)
class Bottom(BasicExpr):
    pass


@dataclass(frozen=True)
class Top(BasicExpr):
    pass


@dataclass(frozen=True)
class And(BasicExpr):
    left: BasicExpr
    right: BasicExpr


@dataclass(frozen=True)
class Or(BasicExpr):
    left: BasicExpr
    right: BasicExpr


@dataclass(frozen=True)
class Strong(BasicExpr):
    """Strong conjunction, interpreted by the session t-norm."""

    left: BasicExpr
    right: BasicExpr


@dataclass(frozen=True)
class Neg(BasicExpr):
    expr: BasicExpr


# ---------------------------------------------------------------------------
# Atoms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedImplication:
    """A crisp claim: the antecedent mean exceeds the consequent by at most 1 - grade.

    Antecedents form a multiset; the constructor sorts them into a canonical
    order so that structural equality is multiset equality.  A one-element
    antecedent list is the plain (non-mean) implication.
    """

    antecedents: tuple[BasicExpr, ...]
    consequent: BasicExpr
    grade: Grade

    def __post_init__(self):
        ants = tuple(self.antecedents)
        if not ants:
            raise ValueError("graded implication needs at least one antecedent")
        object.__setattr__(self, "antecedents", tuple(sorted(ants, key=render)))
        object.__setattr__(self, "grade", as_grade(self.grade))

    def __str__(self) -> str:
        return render(self)


def gi(antecedents: Union[BasicExpr, Iterable[BasicExpr]], consequent: BasicExpr,
       grade) -> GradedImplication:
    """Convenience constructor accepting a single antecedent or an iterable."""
    if isinstance(antecedents, BasicExpr):
        antecedents = (antecedents,)
    return GradedImplication(tuple(antecedents), consequent, as_grade(grade))


@dataclass(frozen=True)
class GradedVariable:
    """An atom asserting that a variable takes a degree exactly."""

    var: str
    grade: Grade

    def __post_init__(self):
        if not _IDENT_RE.fullmatch(self.var) or self.var in ("top", "bot"):
            raise ValueError(f"invalid variable name {self.var!r}")
        object.__setattr__(self, "grade", as_grade(self.grade))

    def __str__(self) -> str:
        return render(self)


# ---------------------------------------------------------------------------
# Outer formulas
# ---------------------------------------------------------------------------


class OuterFormula:
    """Base class for the outer, two-valued formula level."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(OuterFormula):
    content: Union[GradedImplication, GradedVariable]


@dataclass(frozen=True)
class ONot(OuterFormula):
    operand: OuterFormula


@dataclass(frozen=True)
class OAnd(OuterFormula):
    left: OuterFormula
    right: OuterFormula

    def __post_init__(self):
        _check_homogeneous(self)


@dataclass(frozen=True)
class OOr(OuterFormula):
    left: OuterFormula
    right: OuterFormula

    def __post_init__(self):
        _check_homogeneous(self)


def outer_implies(phi: OuterFormula, psi: OuterFormula) -> OOr:
    """The outer arrow: material implication, stored desugared."""
    return OOr(ONot(phi), psi)


def atom_kinds(f: OuterFormula) -> frozenset:
    """The set of atom kinds ("implication" / "variable") occurring in ``f``."""
    if isinstance(f, Atom):
        kind = "implication" if isinstance(f.content, GradedImplication) else "variable"
        return frozenset((kind,))
    if isinstance(f, ONot):
        return atom_kinds(f.operand)
    if isinstance(f, (OAnd, OOr)):
        return atom_kinds(f.left) | atom_kinds(f.right)
    raise TypeError(f"not an outer formula: {f!r}")


def _check_homogeneous(f: OuterFormula) -> None:
    if len(atom_kinds(f)) > 1:
        raise ValueError("mixed atom kinds within one formula")


def vars_of_basic(e: BasicExpr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Top, Bottom)):
        return set()
    if isinstance(e, Neg):
        return vars_of_basic(e.expr)
    if isinstance(e, (And, Or, Strong)):
        return vars_of_basic(e.left) | vars_of_basic(e.right)
    raise TypeError(f"not a basic expression: {e!r}")


def vars_of_formula(f: OuterFormula) -> set:
    if isinstance(f, Atom):
        if isinstance(f.content, GradedVariable):
            return {f.content.var}
        names: set = set()
        for ant in f.content.antecedents:
            names |= vars_of_basic(ant)
        return names | vars_of_basic(f.content.consequent)
    if isinstance(f, ONot):
        return vars_of_formula(f.operand)
    if isinstance(f, (OAnd, OOr)):
        return vars_of_formula(f.left) | vars_of_formula(f.right)
    raise TypeError(f"not an outer formula: {f!r}")


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

_BASIC_OPS = {And: "&", Or: "|", Strong: "*"}


def render(x) -> str:
    """Canonical concrete text; ``parse_*`` of the result reproduces ``x``."""
    if isinstance(x, BasicExpr):
        return _render_basic(x)
    if isinstance(x, GradedImplication):
        ants = ", ".join(_render_basic(a) for a in x.antecedents)
        return f"{ants} ->[{x.grade}] {_render_basic(x.consequent)}"
    if isinstance(x, GradedVariable):
        return f"({x.var}, {x.grade})"
    if isinstance(x, OuterFormula):
        return _render_formula(x)
    raise TypeError(f"cannot render {x!r}")


def _render_basic(e: BasicExpr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Top):
        return "top"
    if isinstance(e, Bottom):
        return "bot"
    if isinstance(e, Neg):
        return "~" + _render_basic(e.expr)
    op = _BASIC_OPS.get(type(e))
    if op is not None:
        return f"({_render_basic(e.left)} {op} {_render_basic(e.right)})"
    raise TypeError(f"not a basic expression: {e!r}")


def _render_formula(f: OuterFormula) -> str:
    if isinstance(f, Atom):
        return render(f.content)
    if isinstance(f, ONot):
        if isinstance(f.operand, Atom):
            return f"!({_render_formula(f.operand)})"
        return "!" + _render_formula(f.operand)
    if isinstance(f, OAnd):
        return f"({_render_formula(f.left)} /\\ {_render_formula(f.right)})"
    if isinstance(f, OOr):
        return f"({_render_formula(f.left)} \\/ {_render_formula(f.right)})"
    raise TypeError(f"not an outer formula: {f!r}")


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_TOKEN_RE = re.compile(
    r"(?P<twochar>/\\|\\/|=>|->)"
    r"|(?P<single>[()\[\],&|*~!/])"
    r"|(?P<number>\d+(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


class ParseError(ValueError):
    """Syntax or grade error in concrete input, with a character offset."""

    def __init__(self, message: str, position: int, line: Union[int, None] = None):
        self.message = message
        self.position = position
        self.line = line
        where = f"line {line}, offset {position}" if line is not None else f"offset {position}"
        super().__init__(f"syntax error at {where}: {message}")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    length = len(text)
    while pos < length:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "ident":
            word = m.group()
            kind = word if word in ("top", "bot") else "IDENT"
        elif m.lastgroup == "number":
            kind = "NUM"
        else:
            kind = m.group()
        tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("EOF", "", length))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Backtrack(Exception):
    """Internal: an alternative failed; the farthest failure is kept."""


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.best_pos = -1
        self.best_msg = "expected input"

    # -- machinery ----------------------------------------------------------

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _fail(self, message: str, position: Union[int, None] = None):
        if position is None:
            position = self._peek().pos
        if position > self.best_pos:
            self.best_pos = position
            self.best_msg = message
        raise _Backtrack()

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._peek()
        if tok.kind != kind:
            self._fail(f"expected {what}", tok.pos)
        return self._advance()

    def _error(self) -> ParseError:
        return ParseError(self.best_msg, max(self.best_pos, 0))

    # -- basic expressions ---------------------------------------------------

    def basic(self) -> BasicExpr:
        left = self.unary()
        kind = self._peek().kind
        if kind in ("&", "|", "*"):
            self._advance()
            right = self.unary()
            node = {"&": And, "|": Or, "*": Strong}[kind]
            left = node(left, right)
        return left

    def unary(self) -> BasicExpr:
        tok = self._peek()
        if tok.kind == "IDENT":
            self._advance()
            return Var(tok.text)
        if tok.kind == "top":
            self._advance()
            return Top()
        if tok.kind == "bot":
            self._advance()
            return Bottom()
        if tok.kind == "~":
            self._advance()
            return Neg(self.unary())
        if tok.kind == "(":
            self._advance()
            inner = self.basic()
            self._expect(")", "')'")
            return inner
        self._fail("expected a basic expression", tok.pos)

    # -- grades ---------------------------------------------------------------

    def grade(self) -> Grade:
        tok = self._expect("NUM", "a grade literal")
        if self._peek().kind == "/":
            self._advance()
            den = self._expect("NUM", "a denominator")
            if "." in tok.text or "." in den.text:
                self._fail("fractions take integer parts", tok.pos)
            if int(den.text) == 0:
                self._fail("zero denominator", den.pos)
            value = Fraction(int(tok.text), int(den.text))
        else:
            value = Fraction(tok.text)
        if not 0 <= value <= 1:
            self._fail("grade literal outside [0, 1]", tok.pos)
        return value

    # -- atoms ----------------------------------------------------------------

    def gi_atom(self) -> Atom:
        antecedents = [self.basic()]
        while self._peek().kind == ",":
            self._advance()
            antecedents.append(self.basic())
        self._expect("->", "'->['")
        self._expect("[", "'['")
        g = self.grade()
        self._expect("]", "']'")
        consequent = self.basic()
        return Atom(GradedImplication(tuple(antecedents), consequent, g))

    def q_atom(self) -> Atom:
        self._expect("(", "'('")
        name = self._expect("IDENT", "a variable")
        self._expect(",", "','")
        g = self.grade()
        self._expect(")", "')'")
        return Atom(GradedVariable(name.text, g))

    def paren_formula(self) -> OuterFormula:
        self._expect("(", "'('")
        inner = self.formula()
        self._expect(")", "')'")
        return inner

    # -- formulas ---------------------------------------------------------------

    def term(self) -> OuterFormula:
        tok = self._peek()
        if tok.kind == "!":
            self._advance()
            return ONot(self.term())
        start = self.pos
        attempt: Callable
        for attempt in (self.gi_atom, self.q_atom, self.paren_formula):
            try:
                return attempt()
            except _Backtrack:
                self.pos = start
        self._fail("expected a formula", tok.pos)

    def formula(self) -> OuterFormula:
        left = self.term()
        tok = self._peek()
        if tok.kind in ("/\\", "\\/", "=>"):
            self._advance()
            right = self.term()
            try:
                if tok.kind == "/\\":
                    return OAnd(left, right)
                if tok.kind == "\\/":
                    return OOr(left, right)
                return outer_implies(left, right)
            except ValueError as exc:
                raise ParseError(str(exc), tok.pos) from None
        return left


def parse_basic(text: str) -> BasicExpr:
    """Parse a basic expression; raises ParseError with an offset on failure."""
    parser = _Parser(text)
    try:
        expr = parser.basic()
        parser._expect("EOF", "end of input")
    except _Backtrack:
        raise parser._error() from None
    return expr


def parse_formula(text: str) -> OuterFormula:
    """Parse an outer formula (graded-implication or graded-variable atoms)."""
    parser = _Parser(text)
    try:
        f = parser.formula()
        parser._expect("EOF", "end of input (parenthesise chained operators)")
    except _Backtrack:
        raise parser._error() from None
    return f


def parse_theory(text: str) -> tuple:
    """Parse a newline-separated list of formulas.

    Blank lines and lines starting with ``#`` are skipped; errors carry the
    1-based line number.
    """
    formulas = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            formulas.append(parse_formula(line))
        except ParseError as exc:
            raise ParseError(exc.message, exc.position, line=lineno) from None
    return tuple(formulas)
