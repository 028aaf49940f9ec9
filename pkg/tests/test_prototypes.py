"""Distance semantics on the unit cube: point sets, degrees, regions."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from gradedlogic import (
    Atom,
    Face,
    FiniteSet,
    GradedVariable,
    OAnd,
    ONot,
    OOr,
    PCPair,
    QEvaluation,
    ResourceLimitError,
    UnboundVariableError,
    canonical_disorder_eval,
    check_theory_correct_canonical,
    contains,
    degree,
    gi,
    grid_worlds,
    in_region,
    l1_distance,
    mean,
    outer_implies,
    satisfied_on_grid,
    set_distance,
    world,
)
from gradedlogic import Var

F = Fraction


def qv(name: str, grade) -> Atom:
    return Atom(GradedVariable(name, grade))


def rand_world(rng: random.Random, n: int, k: int) -> tuple:
    return tuple(F(rng.randint(0, k), k) for _ in range(n))


class TestL1Distance:
    def test_worked_example(self):
        w = world([0, F(1, 2), 1])
        u = world([1, F(1, 2), F(3, 4)])
        assert l1_distance(w, u) == F(5, 4)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            l1_distance(world([0]), world([0, 1]))

    def test_metric_axioms_fuzz(self):
        rng = random.Random(5501)
        for _ in range(1500):
            n = rng.randint(1, 4)
            k = rng.randint(1, 6)
            w, u, v = (rand_world(rng, n, k) for _ in range(3))
            assert l1_distance(w, u) >= 0
            assert l1_distance(w, w) == 0
            assert (l1_distance(w, u) == 0) == (w == u)
            assert l1_distance(w, u) == l1_distance(u, w)
            assert l1_distance(w, v) <= l1_distance(w, u) + l1_distance(u, v)


class TestPointSets:
    def test_finite_set_validation(self):
        with pytest.raises(ValueError):
            FiniteSet(())
        with pytest.raises(ValueError):
            FiniteSet((world([0, 1]), world([0])))

    def test_face_validation(self):
        Face(0, F(1))
        Face(3, F(0))
        with pytest.raises(ValueError):
            Face(0, F(1, 2))
        with pytest.raises(ValueError):
            Face(-1, F(1))

    def test_finite_set_distance_is_min_over_points(self):
        s = FiniteSet((world([0, 0]), world([1, F(1, 2)])))
        w = world([F(3, 4), F(1, 2)])
        assert set_distance(w, s) == F(1, 4)
        assert set_distance(world([0, 0]), s) == 0

    def test_face_distance_closed_form(self):
        w = world([F(1, 4), F(2, 3), 1])
        assert set_distance(w, Face(0, F(1))) == F(3, 4)
        assert set_distance(w, Face(1, F(0))) == F(2, 3)
        assert set_distance(w, Face(2, F(1))) == 0

    def test_face_distance_matches_brute_force(self):
        # oracle: minimise the distance over every grid point lying on the
        # face; for grid worlds the true minimiser is itself a grid point
        rng = random.Random(5502)
        n, k = 3, 4
        for _ in range(60):
            w = rand_world(rng, n, k)
            i = rng.randrange(n)
            v = F(rng.randint(0, 1))
            face = Face(i, v)
            best = min(
                l1_distance(w, u)
                for u in itertools.product(
                    [F(a, k) for a in range(k + 1)], repeat=n
                )
                if u[i] == v
            )
            assert set_distance(w, face) == best

    def test_contains(self):
        s = FiniteSet((world([0, 1]),))
        assert contains(s, world([0, 1]))
        assert not contains(s, world([0, 0]))
        assert contains(Face(1, F(0)), world([F(1, 2), 0]))
        assert not contains(Face(1, F(0)), world([F(1, 2), F(1, 4)]))

    def test_distance_zero_iff_member(self):
        rng = random.Random(5503)
        for _ in range(300):
            n, k = rng.randint(1, 3), rng.randint(1, 4)
            w = rand_world(rng, n, k)
            if rng.random() < 0.5:
                pts = tuple(rand_world(rng, n, k) for _ in range(rng.randint(1, 3)))
                s = FiniteSet(pts)
            else:
                s = Face(rng.randrange(n), F(rng.randint(0, 1)))
            assert (set_distance(w, s) == 0) == contains(s, w)


class TestPCPair:
    def test_rejects_overlap(self):
        with pytest.raises(ValueError, match="overlap"):
            PCPair(Face(0, F(1)), Face(0, F(1)))
        with pytest.raises(ValueError, match="overlap"):
            # different-index faces share corners
            PCPair(Face(0, F(1)), Face(1, F(0)))
        with pytest.raises(ValueError, match="overlap"):
            PCPair(
                FiniteSet((world([0, 0]), world([1, 1]))),
                FiniteSet((world([1, 1]),)),
            )
        with pytest.raises(ValueError, match="overlap"):
            PCPair(FiniteSet((world([1, F(1, 2)]),)), Face(0, F(1)))

    def test_accepts_disjoint(self):
        PCPair(Face(0, F(1)), Face(0, F(0)))
        PCPair(FiniteSet((world([1, 1]),)), FiniteSet((world([0, 0]),)))
        PCPair(FiniteSet((world([F(1, 2), F(1, 2)]),)), Face(0, F(1)))


class TestQEvaluation:
    def test_basic_variables_read_coordinates(self):
        ev = QEvaluation(("x", "y"), {})
        assert ev.pair("x") == PCPair(Face(0, F(1)), Face(0, F(0)))
        rng = random.Random(5504)
        for _ in range(100):
            w = rand_world(rng, 2, 6)
            assert degree(ev, "x", w) == w[0]
            assert degree(ev, "y", w) == w[1]

    def test_unbound_variable(self):
        ev = QEvaluation(("x",), {})
        with pytest.raises(UnboundVariableError):
            ev.pair("z")

    def test_validation(self):
        with pytest.raises(ValueError):
            QEvaluation(("x", "x"), {})
        with pytest.raises(ValueError):
            QEvaluation(("x",), {"x": PCPair(Face(0, F(1)), Face(0, F(0)))})
        with pytest.raises(ValueError):
            QEvaluation(("x",), {"d": PCPair(Face(1, F(1)), Face(1, F(0)))})
        with pytest.raises(ValueError):
            QEvaluation(
                ("x",), {"d": PCPair(FiniteSet((world([1, 1]),)),
                                     FiniteSet((world([0, 0]),)))}
            )

    def test_degree_range_and_extremes(self):
        rng = random.Random(5505)
        for _ in range(300):
            n, k = rng.randint(1, 3), rng.randint(1, 4)
            corners = list(itertools.product((F(0), F(1)), repeat=n))
            rng.shuffle(corners)
            protos = FiniteSet(tuple(corners[:1]))
            counters = FiniteSet(tuple(corners[1:2]))
            ev = QEvaluation(
                tuple(f"x{i}" for i in range(n)),
                {"d": PCPair(protos, counters)},
            )
            w = rand_world(rng, n, k)
            val = degree(ev, "d", w)
            assert 0 <= val <= 1
            assert (val == 1) == contains(protos, w)
            assert (val == 0) == contains(counters, w)

    def test_world_dimension_checked(self):
        ev = QEvaluation(("x",), {})
        with pytest.raises(ValueError):
            degree(ev, "x", world([0, 1]))


class TestRegions:
    def test_atom_region_is_exact_degree(self):
        ev = QEvaluation(("x", "y"), {})
        f = qv("x", F(1, 2))
        assert in_region(ev, f, world([F(1, 2), 0]))
        assert not in_region(ev, f, world([F(1, 4), 0]))

    def test_classical_combinators(self):
        ev = QEvaluation(("x", "y"), {})
        rng = random.Random(5506)
        a = qv("x", F(1, 2))
        b = qv("y", F(1, 3))
        for _ in range(200):
            w = rand_world(rng, 2, 6)
            sa, sb = in_region(ev, a, w), in_region(ev, b, w)
            assert in_region(ev, ONot(a), w) == (not sa)
            assert in_region(ev, OAnd(a, b), w) == (sa and sb)
            assert in_region(ev, OOr(a, b), w) == (sa or sb)

    def test_implication_atoms_have_no_region(self):
        ev = QEvaluation(("x",), {})
        with pytest.raises(TypeError):
            in_region(ev, Atom(gi(Var("x"), Var("x"), 1)), world([0]))

    def test_grid_worlds_enumeration(self):
        pts = list(grid_worlds(2, 3))
        assert len(pts) == 16
        assert pts[0] == (F(0), F(0))
        assert pts[-1] == (F(1), F(1))

    def test_satisfied_on_grid(self):
        ev = QEvaluation(("x",), {})
        tauto = OOr(qv("x", F(1, 2)), ONot(qv("x", F(1, 2))))
        assert satisfied_on_grid(ev, tauto, 4)
        assert not satisfied_on_grid(ev, qv("x", F(1, 2)), 4)

    def test_grid_budget(self):
        ev = QEvaluation(tuple(f"x{i}" for i in range(12)), {})
        with pytest.raises(ResourceLimitError):
            satisfied_on_grid(ev, qv("x0", F(0)), 6, max_points=1000)


class TestCanonicalEvaluation:
    def test_disorder_degree_is_the_mean(self):
        for n in (1, 2, 3):
            ev = canonical_disorder_eval(n, "d")
            for k in (1, 2, 5):
                for w in grid_worlds(n, k):
                    assert degree(ev, "d", w) == mean(w)

    def test_item_names_default_and_custom(self):
        ev = canonical_disorder_eval(2, "d")
        assert ev.basic == ("phi1", "phi2")
        ev2 = canonical_disorder_eval(2, "dep", items=["a", "b"])
        assert ev2.basic == ("a", "b")
        with pytest.raises(ValueError):
            canonical_disorder_eval(2, "d", items=["a"])
        with pytest.raises(ValueError):
            canonical_disorder_eval(0, "d")


def bicond(a, b):
    return OAnd(outer_implies(a, b), outer_implies(b, a))


def level_formula(disorder: str, items, level) -> OAnd:
    conj = qv(items[0], level)
    for name in items[1:]:
        conj = OAnd(conj, qv(name, level))
    return bicond(qv(disorder, level), conj)


class TestTheoryRecognition:
    def test_recognises_canonical_pattern(self):
        items = ("p1", "p2")
        theory = (
            level_formula("d", items, F(1)),
            level_formula("d", items, F(0)),
        )
        ev = check_theory_correct_canonical(theory, 2, 4)
        assert ev is not None
        assert ev.basic == items
        assert degree(ev, "d", world([F(1, 2), 1])) == F(3, 4)

    def test_order_and_side_insensitive(self):
        items = ("p1", "p2", "p3")
        swapped = (
            level_formula("d", items, F(0)),
            OAnd(
                outer_implies(
                    OAnd(OAnd(qv("p1", 1), qv("p2", 1)), qv("p3", 1)),
                    qv("d", 1),
                ),
                outer_implies(
                    qv("d", 1),
                    OAnd(OAnd(qv("p1", 1), qv("p2", 1)), qv("p3", 1)),
                ),
            ),
        )
        assert check_theory_correct_canonical(swapped, 3, 3) is not None

    def test_single_item(self):
        theory = (
            level_formula("d", ("p1",), F(1)),
            level_formula("d", ("p1",), F(0)),
        )
        ev = check_theory_correct_canonical(theory, 1, 4)
        assert ev is not None
        assert degree(ev, "d", world([F(3, 4)])) == F(3, 4)

    def test_rejects_wrong_shapes(self):
        items = ("p1", "p2")
        good_one = level_formula("d", items, F(1))
        good_zero = level_formula("d", items, F(0))
        # wrong count
        assert check_theory_correct_canonical((good_one,), 2, 4) is None
        assert (
            check_theory_correct_canonical(
                (good_one, good_zero, good_zero), 2, 4
            )
            is None
        )
        # both levels the same
        assert check_theory_correct_canonical((good_one, good_one), 2, 4) is None
        # item sets differ across levels
        other = level_formula("d", ("p1", "p3"), F(0))
        assert check_theory_correct_canonical((good_one, other), 2, 4) is None
        # different disorder variables
        foreign = level_formula("e", items, F(0))
        assert check_theory_correct_canonical((good_one, foreign), 2, 4) is None
        # intermediate level is not part of the pattern
        half = level_formula("d", items, F(1, 2))
        assert check_theory_correct_canonical((good_one, half), 2, 4) is None
        # n mismatch
        assert check_theory_correct_canonical((good_one, good_zero), 3, 4) is None
        # one direction only, not a biconditional
        one_way = outer_implies(qv("d", 1), OAnd(qv("p1", 1), qv("p2", 1)))
        assert check_theory_correct_canonical((one_way, good_zero), 2, 4) is None

    def test_rejects_disorder_among_items(self):
        f1 = bicond(qv("d", 1), OAnd(qv("d", 1), qv("p1", 1)))
        f0 = bicond(qv("d", 0), OAnd(qv("d", 0), qv("p1", 0)))
        assert check_theory_correct_canonical((f1, f0), 2, 4) is None

    def test_recognised_theory_holds_on_finer_grids(self):
        items = ("p1", "p2")
        theory = (
            level_formula("d", items, F(1)),
            level_formula("d", items, F(0)),
        )
        ev = check_theory_correct_canonical(theory, 2, 8)
        assert ev is not None
        for f in theory:
            assert satisfied_on_grid(ev, f, 8)
