"""Abstract syntax, the canonical renderer and the parser.

The round-trip property (parse of render reproduces the tree) is the
backbone; the rest pins down grammar corner cases and error reporting.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from gradedlogic import (
    And,
    Atom,
    Bottom,
    GradedImplication,
    GradedVariable,
    Neg,
    OAnd,
    ONot,
    OOr,
    Or,
    ParseError,
    Strong,
    Top,
    Var,
    gi,
    outer_implies,
    parse_basic,
    parse_formula,
    parse_theory,
    render,
    vars_of_basic,
    vars_of_formula,
)

from fuzz import rand_basic, rand_formula


class TestAstConstruction:
    def test_var_name_validation(self):
        assert Var("p1").name == "p1"
        with pytest.raises(ValueError):
            Var("2p")
        with pytest.raises(ValueError):
            Var("")
        with pytest.raises(ValueError):
            Var("top")
        with pytest.raises(ValueError):
            Var("bot")

    def test_implication_sorts_antecedents(self):
        f = GradedImplication((Var("b"), Var("a")), Var("c"), Fraction(1, 2))
        assert f.antecedents == (Var("a"), Var("b"))
        g = GradedImplication((Var("a"), Var("b")), Var("c"), Fraction(1, 2))
        assert f == g

    def test_implication_keeps_duplicates(self):
        f = GradedImplication((Var("a"), Var("a")), Var("b"), 1)
        assert len(f.antecedents) == 2

    def test_implication_grade_validated(self):
        with pytest.raises(ValueError):
            GradedImplication((Var("a"),), Var("b"), Fraction(3, 2))
        with pytest.raises(TypeError):
            GradedImplication((Var("a"),), Var("b"), 0.5)

    def test_implication_needs_an_antecedent(self):
        with pytest.raises(ValueError):
            GradedImplication((), Var("b"), 1)

    def test_gi_shorthand(self):
        assert gi(Var("a"), Var("b"), "1/2") == GradedImplication(
            (Var("a"),), Var("b"), Fraction(1, 2)
        )

    def test_mixed_atom_kinds_rejected(self):
        lhs = Atom(gi(Var("a"), Var("b"), 1))
        rhs = Atom(GradedVariable("x", Fraction(1, 2)))
        with pytest.raises(ValueError, match="mixed atom kinds"):
            OAnd(lhs, rhs)

    def test_outer_implies_desugars(self):
        phi = Atom(gi(Var("a"), Var("b"), 1))
        psi = Atom(gi(Var("b"), Var("c"), 1))
        assert outer_implies(phi, psi) == OOr(ONot(phi), psi)

    def test_vars_of(self):
        e = And(Var("p"), Or(Neg(Var("q")), Strong(Top(), Bottom())))
        assert vars_of_basic(e) == {"p", "q"}
        f = OAnd(Atom(gi(Var("a"), Var("b"), 1)), Atom(gi(Var("c"), Var("a"), 1)))
        assert vars_of_formula(f) == {"a", "b", "c"}


class TestRender:
    def test_basic_forms(self):
        assert render(And(Var("p"), Var("q"))) == "(p & q)"
        assert render(Or(Var("p"), Neg(Var("q")))) == "(p | ~q)"
        assert render(Strong(Top(), Bottom())) == "(top * bot)"
        assert render(Neg(Neg(Var("x")))) == "~~x"

    def test_implication_atom(self):
        f = GradedImplication((Var("a"), Var("b")), Var("c"), Fraction(2, 3))
        assert render(f) == "a, b ->[2/3] c"
        assert render(gi(Var("a"), Var("b"), 1)) == "a ->[1] b"

    def test_graded_variable_atom(self):
        assert render(GradedVariable("x", Fraction(2, 3))) == "(x, 2/3)"

    def test_outer_connectives(self):
        a = Atom(gi(Var("p"), Var("q"), 1))
        b = Atom(gi(Var("q"), Var("r"), 1))
        assert render(OAnd(a, b)) == "(p ->[1] q /\\ q ->[1] r)"
        assert render(OOr(ONot(a), b)) == "(!(p ->[1] q) \\/ q ->[1] r)"


class TestParse:
    def test_basic_round_examples(self):
        assert parse_basic("(p & q)") == And(Var("p"), Var("q"))
        assert parse_basic("~(p | bot)") == Neg(Or(Var("p"), Bottom()))
        assert parse_basic("top") == Top()

    def test_grades_decimal_and_fraction(self):
        f = parse_formula("p ->[0.7] q")
        assert f.content.grade == Fraction(7, 10)
        g = parse_formula("p ->[7/10] q")
        assert f == g
        assert parse_formula("p ->[1] q").content.grade == 1
        assert parse_formula("p ->[0.25] q").content.grade == Fraction(1, 4)

    def test_grade_out_of_range(self):
        with pytest.raises(ParseError, match="outside"):
            parse_formula("p ->[3/2] q")

    def test_antecedent_list(self):
        f = parse_formula("b, a, c ->[1/2] d")
        assert f.content.antecedents == (Var("a"), Var("b"), Var("c"))

    def test_q_atom(self):
        f = parse_formula("(mood, 3/4)")
        assert f == Atom(GradedVariable("mood", Fraction(3, 4)))

    def test_arrow_sugar(self):
        f = parse_formula("(p ->[1] q => r ->[1/2] s)")
        want = outer_implies(
            Atom(gi(Var("p"), Var("q"), 1)), Atom(gi(Var("r"), Var("s"), Fraction(1, 2)))
        )
        assert f == want

    def test_negation_of_atom(self):
        f = parse_formula("!(top ->[1] bot)")
        assert f == ONot(Atom(gi(Top(), Bottom(), 1)))

    def test_chained_operators_need_parens(self):
        with pytest.raises(ParseError, match="parenthesise"):
            parse_formula("p ->[1] q /\\ q ->[1] r /\\ r ->[1] s")
        with pytest.raises(ParseError):
            parse_formula("(p ->[1] q /\\ q ->[1] r /\\ r ->[1] s)")
        # and fully parenthesised versions are fine, either association
        parse_formula("((p ->[1] q /\\ q ->[1] r) /\\ r ->[1] s)")
        parse_formula("(p ->[1] q /\\ (q ->[1] r /\\ r ->[1] s))")

    def test_chained_basic_operators_need_parens(self):
        with pytest.raises(ParseError):
            parse_basic("p & q & r")
        assert parse_basic("(p & q) & r") == And(And(Var("p"), Var("q")), Var("r"))

    def test_error_offset_is_farthest_failure(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("p1 &")
        assert exc.value.position == 4
        assert str(exc.value).startswith("syntax error at offset 4")

    def test_error_on_garbage_token(self):
        with pytest.raises(ParseError):
            parse_formula("p ->[1] q ?")

    def test_theory_lines_and_comments(self):
        text = "\n".join(
            [
                "# screening rules",
                "",
                "p ->[1] q",
                "  q ->[1/2] r  ",
            ]
        )
        theory = parse_theory(text)
        assert len(theory) == 2
        assert theory[1].content.grade == Fraction(1, 2)

    def test_theory_error_carries_line_number(self):
        with pytest.raises(ParseError) as exc:
            parse_theory("p ->[1] q\np1 &\n")
        assert exc.value.line == 2


class TestRoundTrip:
    def test_basic_expressions(self):
        rng = random.Random(2101)
        for _ in range(400):
            e = rand_basic(rng, depth=4)
            assert parse_basic(render(e)) == e

    def test_implication_formulas(self):
        rng = random.Random(2102)
        for _ in range(400):
            f = rand_formula(rng, depth=3, mode="gi")
            assert parse_formula(render(f)) == f

    def test_graded_variable_formulas(self):
        rng = random.Random(2103)
        for _ in range(400):
            f = rand_formula(rng, depth=3, mode="q")
            assert parse_formula(render(f)) == f

    def test_render_is_stable_under_reparse(self):
        rng = random.Random(2104)
        for _ in range(100):
            f = rand_formula(rng, depth=3, mode="gi")
            text = render(f)
            assert render(parse_formula(text)) == text
