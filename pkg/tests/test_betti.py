from __future__ import annotations

from math import comb

import pytest

from charbetti.betti import (
    betti_at,
    betti_table,
    betti_tables,
    betti_tables_bounded,
    betti_tables_via_duals,
    check_splitting,
    formula_check,
    formula_rhs,
    hochster_betti,
)
from charbetti.cache import TableCache
from charbetti.errors import (
    ArgumentError,
    PartitionError,
    SquarefreeRequiredError,
    UndefinedInvariantError,
)
from charbetti.fields import FieldSpec, QQ
from charbetti.ideals import (
    Monomial,
    MonomialIdeal,
    VariableContext,
    parse_ideal_text,
    parse_monomial,
)
from conftest import ideal_from


def maximal_ideal(n: int) -> MonomialIdeal:
    ctx = VariableContext(tuple(f"x{i}" for i in range(1, n + 1)))
    return MonomialIdeal.from_gens(
        [Monomial.variable(ctx, f"x{i}") for i in range(1, n + 1)], ctx
    )


class TestBettiTable:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_koszul(self, n):
        # the variables generate a Koszul-resolved ideal:
        # beta_i = C(n, i+1), independent of the field
        for field in (QQ, FieldSpec(2)):
            table = betti_table(maximal_ideal(n), field)
            assert table.total_vector() == tuple(
                comb(n, i + 1) for i in range(n)
            )

    def test_first_column_is_the_generators(self, rp2):
        table = betti_table(rp2, QQ)
        zero_column = {m for (i, m), v in table.entries.items() if i == 0}
        assert zero_column == set(rp2.gens)
        assert all(
            v == 1 for (i, _), v in table.entries.items() if i == 0
        )

    def test_rp2_characteristic_two_jump(self, rp2, F2, F3):
        tables = betti_tables(rp2, [QQ, F2, F3])
        assert tables["Q"].total_vector() == (10, 15, 6)
        assert tables["F2"].total_vector() == (10, 15, 7, 1)
        assert tables["F3"].total_vector() == tables["Q"].total_vector()

    def test_klein_jump_at_four_and_five(self, klein, F2):
        tables = betti_tables(klein, [QQ, F2])
        q, f2 = tables["Q"].total(), tables["F2"].total()
        assert f2[4] == q[4] + 1
        assert f2[5] == q[5] + 1
        for i in (0, 1, 2, 3):
            assert q[i] == f2[i]

    def test_unit_ideal(self):
        unit = MonomialIdeal.unit(VariableContext(("x",)))
        table = betti_table(unit, QQ)
        assert table.total_vector() == (1,)
        assert table.projective_dimension() == 0
        assert table.regularity() == 0

    def test_zero_ideal_rejected(self):
        with pytest.raises(ArgumentError):
            betti_table(MonomialIdeal.zero(VariableContext(("x",))), QQ)

    def test_cache_round_trip(self, rp2):
        cache = TableCache()
        first = betti_tables(rp2, [QQ], cache=cache)["Q"]
        second = betti_tables(rp2, [QQ], cache=cache)["Q"]
        assert first.entries == second.entries

    def test_graded_view_sums_multidegrees(self, rp2):
        table = betti_table(rp2, QQ)
        graded = table.graded()
        assert graded[(0, 3)] == 10
        assert sum(v for (i, _), v in graded.items() if i == 1) == 15


class TestBettiAt:
    def test_generators_have_beta_zero_one(self, rp2):
        for g in rp2.gens:
            assert betti_at(rp2, g, 0, QQ) == 1

    def test_off_lattice_is_zero(self, rp2):
        probe = Monomial.from_vector(rp2.context, (3, 0, 0, 0, 0, 0))
        assert betti_at(rp2, probe, 0, QQ) == 0

    def test_matches_full_table(self, rp2, F2):
        table = betti_table(rp2, F2)
        for (i, m), value in table.entries.items():
            assert betti_at(rp2, m, i, F2) == value

    def test_kty_probe(self, kty, F2):
        alpha1 = Monomial.from_vector(kty.context, (1,) * 10)
        for i in (2, 3):
            assert betti_at(kty, alpha1, i, QQ) == 0
            assert betti_at(kty, alpha1, i, F2) == 1


class TestRouteAgreement:
    @pytest.mark.parametrize("tag", ["Q", "F2", "F3"])
    def test_hochster_equals_lattice_on_corpus(self, rp2, kty, tag):
        field = FieldSpec.parse(tag)
        for ideal in (rp2, kty, ideal_from("x y", "y z", "x z")):
            assert hochster_betti(ideal, field).entries == betti_table(
                ideal, field
            ).entries

    def test_hochster_equals_lattice_on_klein(self, klein, F2):
        for field in (QQ, F2):
            assert hochster_betti(klein, field).entries == betti_table(
                klein, field
            ).entries

    def test_dual_route_agrees(self, rp2, klein, F2):
        for ideal in (rp2, klein, ideal_from("x^2", "x y", "y^3")):
            lattice_route = betti_tables(ideal, [QQ, F2])
            dual_route = betti_tables_via_duals(ideal, [QQ, F2])
            for tag in ("Q", "F2"):
                assert lattice_route[tag].entries == dual_route[tag].entries

    def test_bounded_route_agrees(self, rp2, F2):
        full = betti_tables(rp2, [QQ, F2])
        bounded = betti_tables_bounded(rp2, [QQ, F2], i_max=2)
        for tag in ("Q", "F2"):
            expected = {
                k: v for k, v in full[tag].entries.items() if k[0] <= 2
            }
            assert bounded[tag].entries == expected

    def test_hochster_requires_squarefree(self):
        with pytest.raises(SquarefreeRequiredError):
            hochster_betti(ideal_from("x^2"), QQ)


class TestDerivedInvariants:
    def test_koszul_pd_and_reg(self):
        table = betti_table(maximal_ideal(3), QQ)
        assert table.projective_dimension() == 2
        assert table.regularity() == 1

    def test_empty_table_has_no_invariants(self):
        table = betti_table(maximal_ideal(1), QQ)
        empty = type(table)(QQ, {})
        with pytest.raises(UndefinedInvariantError):
            empty.projective_dimension()
        with pytest.raises(UndefinedInvariantError):
            empty.regularity()

    def test_scaling_shifts_degrees(self, rp2):
        w = parse_monomial("u v w")
        scaled = rp2.scale(w)
        before = betti_table(rp2, QQ)
        after = betti_table(scaled, QQ)
        assert {
            (i, j + w.degree()): v for (i, j), v in before.graded().items()
        } == after.graded()
        assert before.total_vector() == after.total_vector()

    def test_polarization_preserves_graded_betti(self, F2):
        ideal = ideal_from("x^2", "x y", "y^3")
        for field in (QQ, F2):
            original = betti_table(ideal, field)
            polarized = betti_table(ideal.polarize(), field)
            assert original.graded() == polarized.graded()


class TestSplitting:
    def test_two_disjoint_squares(self, F2):
        ideal = ideal_from("x^2", "y^2")
        j_part = parse_ideal_text("vars: x y\nx^2\n")
        k_part = parse_ideal_text("vars: x y\ny^2\n")
        for field in (QQ, F2):
            report = check_splitting(ideal, j_part, k_part, field)
            assert report.holds
            assert report.lhs[1] == 1  # beta_1(I) = beta_0(J cap K)

    def test_power_of_scaled_plus_variable(self):
        # (zx, y)^2 = (zx)^2 + y(zx, y) is a splitting
        ctx = VariableContext(("x", "y", "z"))
        base = MonomialIdeal.from_gens(
            [parse_monomial("z x", ctx), parse_monomial("y", ctx)], ctx
        )
        squared = base.power(2)
        j_part = MonomialIdeal.from_gens([parse_monomial("z^2 x^2", ctx)], ctx)
        k_part = MonomialIdeal.from_gens(
            [parse_monomial("x y z", ctx), parse_monomial("y^2", ctx)], ctx
        )
        for field in (QQ, FieldSpec(2)):
            assert check_splitting(squared, j_part, k_part, field).holds

    def test_random_partition_is_just_reported(self, rp2):
        j_part = MonomialIdeal.from_gens(list(rp2.gens[:4]), rp2.context)
        k_part = MonomialIdeal.from_gens(list(rp2.gens[4:]), rp2.context)
        report = check_splitting(rp2, j_part, k_part, QQ)
        assert isinstance(report.holds, bool)
        assert len(report.lhs) == len(report.rhs)

    def test_partition_violation(self, rp2):
        j_part = MonomialIdeal.from_gens(list(rp2.gens[:4]), rp2.context)
        with pytest.raises(PartitionError):
            check_splitting(rp2, j_part, j_part, QQ)


class TestFormula:
    def test_principal_plus_variable_closed_form(self):
        # (x, y)^h: beta_0 = h+1 and beta_1 = h
        ideal = ideal_from("x")
        for h in (1, 2, 3, 4):
            for field in (QQ, FieldSpec(3)):
                predicted = formula_rhs(ideal, h, field)
                assert predicted == (h + 1, h)
                result = formula_check(ideal, parse_monomial("y"), h, field)
                assert result["verdict"] == "EQUAL"

    def test_rp2_h1_both_fields(self, rp2, F2):
        for field in (QQ, F2):
            result = formula_check(rp2, parse_monomial("y1 y2"), 1, field)
            assert result["verdict"] == "EQUAL"

    def test_monotone_spreading_of_differences(self, rp2, F2):
        gap = lambda h: [
            a - b
            for a, b in zip(formula_rhs(rp2, h, F2), formula_rhs(rp2, h, QQ))
        ]
        one, two = gap(1), gap(2)
        assert any(d > 0 for d in one)
        padded = one + [0] * (len(two) - len(one))
        assert all(b >= a for a, b in zip(padded, two))

    def test_needs_positive_power(self, rp2):
        with pytest.raises(ArgumentError):
            formula_rhs(rp2, 0, QQ)


class TestJsonShape:
    def test_bit_exact_layout(self):
        table = betti_table(maximal_ideal(2), QQ)
        payload = table.to_json()
        assert payload == {
            "field": "Q",
            "total": [[0, 2], [1, 1]],
            "graded": [[0, 1, 2], [1, 2, 1]],
            "multigraded": [
                [0, "x1", 1],
                [0, "x2", 1],
                [1, "x1 x2", 1],
            ],
        }

    def test_quotient_indexing_shifts(self):
        payload = betti_table(maximal_ideal(2), QQ).to_json(
            shift_to_quotient=True
        )
        assert payload["total"] == [[0, 1], [1, 2], [2, 1]]
        assert payload["multigraded"][0] == [0, "1", 1]