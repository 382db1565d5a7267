from __future__ import annotations

import random
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charbetti.errors import (
    ArgumentError,
    ContextMismatchError,
    DisjointnessError,
)
from charbetti.guards import GuardConfig, ResourceLimitError
from charbetti.ideals import (
    Monomial,
    MonomialIdeal,
    VariableContext,
    minimalize,
    parse_monomial,
)
from conftest import ideal_from

XYZ = VariableContext(("x", "y", "z"))


def mono(text: str, ctx: VariableContext = XYZ) -> Monomial:
    return parse_monomial(text, ctx)


class TestMonomial:
    def test_one_is_empty_map(self):
        one = Monomial.one(XYZ)
        assert one.is_one() and one.degree() == 0 and one.exps == ()

    def test_mul_lcm_divides(self):
        a, b = mono("x^2 y"), mono("y^2 z")
        assert (a * b).vector() == (2, 3, 1)
        assert a.lcm(b).vector() == (2, 2, 1)
        assert mono("x y").divides(mono("x^2 y")) is True
        assert mono("x^2").divides(mono("x y^5")) is False
        assert Monomial.one(XYZ).divides(a)

    def test_zero_exponents_never_stored(self):
        m = Monomial.from_vector(XYZ, (0, 3, 0))
        assert m.exps == ((2, 3),)

    def test_context_mismatch(self):
        other = VariableContext(("a", "b"))
        with pytest.raises(ContextMismatchError):
            mono("x").lcm(Monomial.variable(other, "a"))

    def test_parse_and_str_round_trip(self):
        m = mono("x^2 z")
        assert str(m) == "x^2 z"
        assert parse_monomial(str(m), XYZ) == m

    def test_index_out_of_range(self):
        with pytest.raises(ArgumentError):
            Monomial(XYZ, ((4, 1),))


class TestMinimalize:
    def test_divisor_absorbs_multiple(self):
        ideal = ideal_from("x1 x2", "x1 x2 x3")
        assert [str(g) for g in ideal.gens] == ["x1 x2"]

    def test_empty_set_is_zero_ideal(self):
        assert minimalize([], XYZ).is_zero()

    def test_rp2_generators_pairwise_incomparable(self, rp2):
        assert rp2.num_gens() == 10
        again = MonomialIdeal.from_gens(list(rp2.gens), rp2.context)
        assert again == rp2

    def test_idempotent(self, rp2):
        assert MonomialIdeal.from_gens(rp2.gens, rp2.context) == rp2

    def test_unit_absorbs_everything(self):
        ideal = MonomialIdeal.from_gens([Monomial.one(XYZ), mono("x y")], XYZ)
        assert ideal.is_unit()

    @given(
        st.lists(
            st.tuples(*(st.integers(0, 2) for _ in range(4))),
            min_size=0,
            max_size=12,
        ),
        st.randoms(),
    )
    @settings(max_examples=80, deadline=None)
    def test_order_insensitive(self, vectors, rng):
        ctx = VariableContext(("a", "b", "c", "d"))
        vectors = [v for v in vectors if any(v)]
        shuffled = vectors[:]
        rng.shuffle(shuffled)
        a = MonomialIdeal.from_vectors(ctx, vectors)
        b = MonomialIdeal.from_vectors(ctx, shuffled)
        assert a == b
        # no generator divides another
        for g in a.gens:
            for h in a.gens:
                if g != h:
                    assert not g.divides(h)


class TestPower:
    def test_principal(self):
        ideal = ideal_from("x1")
        cubed = ideal.power(3)
        assert [str(g) for g in cubed.gens] == ["x1^3"]

    def test_two_variables(self):
        ideal = ideal_from("x", "y")
        squared = ideal.power(2)
        assert sorted(str(g) for g in squared.gens) == ["x y", "x^2", "y^2"]

    def test_triangle_brute_force(self):
        # oracle: all pairwise products, then pairwise-divisibility filter
        ideal = ideal_from("x y", "y z", "x z")
        products = [
            (a * b).vector()
            for a, b in combinations_with_replacement(ideal.gens, 2)
        ]
        keep = [
            v
            for v in set(products)
            if not any(
                w != v and all(i <= j for i, j in zip(w, v))
                for w in set(products)
            )
        ]
        squared = ideal.power(2)
        assert sorted(keep) == sorted(g.vector() for g in squared.gens)
        assert squared.num_gens() == 6

    def test_zero_exponent_gives_unit(self):
        assert ideal_from("x y").power(0).is_unit()

    def test_negative_exponent_rejected(self):
        with pytest.raises(ArgumentError):
            ideal_from("x").power(-1)

    def test_generator_guard(self):
        guards = GuardConfig(max_generators=3)
        with pytest.raises(ResourceLimitError):
            ideal_from("x", "y", "z").power(2, guards)

    def test_cache_returns_identical_object(self):
        ideal = ideal_from("x y", "y z")
        assert ideal.power(3) is ideal.power(3)


class TestIntersect:
    def test_principal(self):
        a, b = ideal_from("x"), ideal_from("x", "y").restrict(mono("y", VariableContext(("x", "y"))))
        ctx = VariableContext(("x", "y"))
        a = MonomialIdeal.from_gens([parse_monomial("x", ctx)], ctx)
        b = MonomialIdeal.from_gens([parse_monomial("y", ctx)], ctx)
        assert [str(g) for g in a.intersect(b).gens] == ["x y"]

    def test_brute_force_membership(self):
        ctx = VariableContext(("x", "y"))
        a = MonomialIdeal.from_gens(
            [parse_monomial("x^2", ctx), parse_monomial("x y", ctx)], ctx
        )
        b = MonomialIdeal.from_gens([parse_monomial("y", ctx)], ctx)
        both = a.intersect(b)
        assert [str(g) for g in both.gens] == ["x y"]
        # membership oracle on a grid of monomials
        for ex in range(4):
            for ey in range(4):
                m = Monomial.from_vector(ctx, (ex, ey))
                assert both.contains(m) == (a.contains(m) and b.contains(m))

    def test_unit_is_identity(self, rp2):
        unit = MonomialIdeal.unit(rp2.context)
        assert rp2.intersect(unit) == rp2

    def test_context_mismatch(self):
        with pytest.raises(ContextMismatchError):
            ideal_from("x").intersect(ideal_from("a"))


class TestScale:
    def test_by_one(self, rp2):
        assert rp2.scale(Monomial.one(rp2.context)) == rp2

    def test_two_generators(self):
        ctx = VariableContext(("x1", "x2", "y"))
        ideal = MonomialIdeal.from_gens(
            [parse_monomial("x1", ctx), parse_monomial("x2", ctx)], ctx
        )
        scaled = ideal.scale(parse_monomial("y", ctx))
        assert sorted(str(g) for g in scaled.gens) == ["x1 y", "x2 y"]

    def test_extends_context(self):
        ideal = ideal_from("x y", "y z")
        w = parse_monomial("w")
        scaled = ideal.scale(w)
        assert scaled.context.names == ("x", "y", "z", "w")
        assert sorted(str(g) for g in scaled.gens) == ["x y w", "y z w"]


class TestAddDisjointMonomial:
    def test_basic(self):
        ideal = ideal_from("x1 x2")
        bigger = ideal.add_disjoint_monomial(parse_monomial("y1 y2"))
        assert bigger.num_gens() == 2
        assert bigger.context.names == ("x1", "x2", "y1", "y2")

    def test_katzman_plus_edge(self, katzman):
        bigger = katzman.add_disjoint_monomial(parse_monomial("y1 y2"))
        assert bigger.num_gens() == katzman.num_gens() + 1
        assert all(g.degree() == 2 for g in bigger.gens)

    def test_overlap_rejected(self):
        ideal = ideal_from("x y")
        with pytest.raises(DisjointnessError):
            ideal.add_disjoint_monomial(parse_monomial("y", ideal.context))


class TestPolarize:
    def test_square(self):
        ideal = ideal_from("x^2")
        assert [str(g) for g in ideal.polarize().gens] == ["x1_1 x1_2"]

    def test_squarefree_is_renaming(self, rp2):
        polarized = rp2.polarize()
        assert polarized.num_gens() == rp2.num_gens()
        assert polarized.context.names == tuple(
            f"x{i}_1" for i in range(1, 7)
        )
        assert sorted(tuple(v for v in g.vector()) for g in polarized.gens) == sorted(
            tuple(v for v in g.vector()) for g in rp2.gens
        )

    def test_mixed_example(self):
        ideal = ideal_from("x^2", "x y")
        polarized = ideal.polarize()
        assert sorted(str(g) for g in polarized.gens) == [
            "x1_1 x1_2",
            "x1_1 x2_1",
        ]

    def test_output_squarefree_and_unused_variables_dropped(self):
        ctx = VariableContext(("x", "y", "z"))
        ideal = MonomialIdeal.from_gens([parse_monomial("x^3 y", ctx)], ctx)
        polarized = ideal.polarize()
        assert polarized.is_squarefree()
        assert polarized.context.names == ("x1_1", "x1_2", "x1_3", "x2_1")


class TestRestrict:
    def test_full_lcm_gives_everything(self, rp2):
        assert rp2.restrict(rp2.lcm_of_gens()) == rp2

    def test_one_gives_zero_ideal(self, rp2):
        assert rp2.restrict(Monomial.one(rp2.context)).is_zero()

    def test_subset(self):
        ideal = ideal_from("x y", "y z", "x z")
        kept = ideal.restrict(Monomial.from_vector(ideal.context, (1, 1, 0)))
        assert [str(g) for g in kept.gens] == ["x y"]


class TestPowerAdditivity:
    def test_random_corpus(self):
        rng = random.Random(20240811)
        for _ in range(12):
            n = rng.randint(2, 5)
            ctx = VariableContext(tuple(f"x{i}" for i in range(1, n + 1)))
            gens = []
            for _ in range(rng.randint(1, 5)):
                vec = tuple(rng.randint(0, 2) for _ in range(n))
                if any(vec):
                    gens.append(Monomial.from_vector(ctx, vec))
            if not gens:
                continue
            ideal = MonomialIdeal.from_gens(gens, ctx)
            for a in range(1, 4):
                for b in range(1, 4):
                    if a + b > 5:
                        continue
                    assert ideal.power(a + b) == ideal.power(a).multiply(
                        ideal.power(b)
                    )
