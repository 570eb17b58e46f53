"""Tests for paths, path elements, dimension tables and the graded quotient engine."""

import pytest

from enums import GradingKind
from errors import (DegreeOutOfRangeError, InputError, NeedsExplicitBoundError, RelationError,
                    ShapeMismatchError)
from PathSpace import (GradedDimTable, Path, PathElement, StopPolicy, compare_tables, dims,
                       enumerate_paths, graded_quotient, normal_form, path_counts)
from PreprojectiveRelations import standard_relations
from QuiverModel import double, generate_quiver
from ScalarField import ScalarField


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

class TestPath:
    def test_composition_order(self, a2):
        dq = double(a2)
        loop = Path.of(dq, ["a", "a*"])
        assert (loop.source, loop.target) == ("2", "2")
        assert loop.star_degree == 1
        assert str(loop) == "a∘a*"

    def test_compose_requires_matching_ends(self, a3):
        a = Path.of(a3, ["a"])
        b = Path.of(a3, ["b"])
        assert b.compose(a) == Path.of(a3, ["b", "a"])
        assert a.compose(b) is None

    def test_trivial_paths_are_units(self, a3):
        a = Path.of(a3, ["a"])
        assert a.compose(Path.trivial("1")) == a
        assert Path.trivial("2").compose(a) == a
        assert str(Path.trivial("1")) == "e_1"

    def test_non_composable_names(self, a2):
        with pytest.raises(ShapeMismatchError):
            Path.of(a2, ["a", "a"])


class TestPathElement:
    def test_linear_structure(self, a2, qq):
        dq = double(a2)
        x = PathElement.from_arrows(qq, dq, ["a", "a*"])
        y = PathElement.from_arrows(qq, dq, ["a*", "a"], 3)
        assert (x - x).is_zero()
        assert (x + y).coefficient(Path.of(dq, ["a*", "a"])) == qq(3)
        assert x.scale(2) == x + x
        assert str(x - y.scale("1/3")) == "a∘a* - a*∘a"

    def test_bilinear_compose(self, a2, qq):
        dq = double(a2)
        a = PathElement.from_arrows(qq, dq, ["a"])
        star = PathElement.from_arrows(qq, dq, ["a*"], 2)
        assert a.compose(star) == PathElement.from_arrows(qq, dq, ["a", "a*"], 2)
        assert a.compose(a).is_zero()

    def test_homogeneity(self, a3, qq):
        dq = double(a3)
        mixed = PathElement.from_arrows(qq, dq, ["a"]) + PathElement.from_arrows(qq, dq, ["b", "a"])
        assert not mixed.is_homogeneous()
        assert standard_relations(dq, qq)[1].is_homogeneous()


class TestEnumeration:
    def test_loops_in_doubled_a2(self, a2):
        dq = double(a2)
        assert enumerate_paths(dq, "1", "1", 2) == [Path.of(dq, ["a*", "a"])]
        assert enumerate_paths(dq, "1", "2", 2) == []

    def test_counts_match_enumeration(self, a3):
        dq = double(a3)
        for length in range(5):
            for i in dq.vertices:
                for j in dq.vertices:
                    assert path_counts(dq, i, j, length) == len(enumerate_paths(dq, i, j, length))

    def test_parallel_arrows(self, kronecker):
        assert path_counts(kronecker, "1", "2", 1) == 2

    def test_negative_length(self, a2):
        with pytest.raises(ShapeMismatchError):
            enumerate_paths(a2, "1", "2", -1)


# ---------------------------------------------------------------------------
# Dimension tables
# ---------------------------------------------------------------------------

A2_JSON = {
    "grading": "star",
    "entries": [
        {"i": "1", "j": "1", "p": 0, "dim": 1},
        {"i": "1", "j": "2", "p": 0, "dim": 1},
        {"i": "2", "j": "2", "p": 0, "dim": 1},
        {"i": "2", "j": "1", "p": 1, "dim": 1},
    ],
    "total": 4,
}


class TestGradedDimTable:
    def test_zero_entries_dropped_and_sorted(self):
        table = GradedDimTable(GradingKind.STAR_DEGREE,
                               {("2", "1", 1): 1, ("1", "1", 0): 1, ("1", "2", 0): 0}, ["1", "2"])
        assert list(table.entries) == [("1", "1", 0), ("2", "1", 1)]
        assert table.total == 2
        assert table.max_degree == 1
        assert table.get("1", "2", 0) == 0

    def test_negative_dimension(self):
        with pytest.raises(ShapeMismatchError):
            GradedDimTable(GradingKind.STAR_DEGREE, {("1", "1", 0): -1})

    def test_json_shape(self):
        table = GradedDimTable.from_json_dict(A2_JSON)
        assert table.to_json_dict() == A2_JSON
        assert table.degree_totals() == {0: 3, 1: 1}

    def test_first_difference_ordering(self):
        left = GradedDimTable(GradingKind.STAR_DEGREE, {("1", "2", 0): 1, ("2", "1", 1): 1}, ["1", "2"])
        right = GradedDimTable(GradingKind.STAR_DEGREE, {("1", "2", 0): 2, ("2", "1", 1): 3}, ["1", "2"])
        assert left.first_difference(right) == (("1", "2", 0), 1, 2)
        assert left.first_difference(left) is None

    def test_compare_tables_names_location(self):
        left = GradedDimTable(GradingKind.STAR_DEGREE, {("2", "1", 1): 1}, ["1", "2"])
        right = GradedDimTable(GradingKind.STAR_DEGREE, {}, ["1", "2"])
        result = compare_tables("left equals right", left, right)
        assert not result.passed
        assert "i=2, j=1, p=1" in result.detail

    def test_text_rendering(self):
        text = GradedDimTable.from_json_dict(A2_JSON).to_text()
        assert text.splitlines()[0].split() == ["p", "i", "j", "dim"]
        assert text.endswith("total 4")


# ---------------------------------------------------------------------------
# Graded quotients
# ---------------------------------------------------------------------------

class TestGradedQuotient:
    def test_a2_table(self, a2, qq):
        dq = double(a2)
        pres = graded_quotient(dq, standard_relations(dq, qq))
        assert dims(pres).to_json_dict() == A2_JSON
        assert pres.vanishes_beyond

    def test_normal_forms_in_a3(self, a3, qq):
        dq = double(a3)
        pres = graded_quotient(dq, standard_relations(dq, qq))
        through_1 = PathElement.from_arrows(qq, dq, ["a", "a*"])
        through_3 = PathElement.from_arrows(qq, dq, ["b*", "b"])
        assert not normal_form(through_1, pres).is_zero()
        assert normal_form(through_1 - through_3, pres).is_zero()
        assert normal_form(PathElement.from_arrows(qq, dq, ["a*", "a"]), pres).is_zero()

    def test_ideal_dimension(self, a2, qq):
        dq = double(a2)
        pres = graded_quotient(dq, standard_relations(dq, qq))
        assert pres.ideal_dimension("1", "1", 2) == 1
        assert pres.degree_is_zero(2)

    def test_path_length_grading(self, a3, qq):
        dq = double(a3)
        pres = graded_quotient(dq, standard_relations(dq, qq))
        by_length = dims(pres, GradingKind.PATH_LENGTH)
        assert by_length.total == 10
        assert by_length.get("3", "1", 2) == 1

    def test_auto_needs_dynkin(self, cycle3, qq):
        with pytest.raises(NeedsExplicitBoundError):
            graded_quotient(cycle3, [], StopPolicy.auto(), qq)

    def test_bounded_free_cycle(self, cycle3, qq):
        pres = graded_quotient(cycle3, [], StopPolicy.bounded(3), qq)
        by_length = dims(pres, GradingKind.PATH_LENGTH)
        assert by_length.total == 12
        assert by_length.get("1", "1", 3) == 1

    def test_out_of_range(self, a3, qq):
        dq = double(a3)
        pres = graded_quotient(dq, standard_relations(dq, qq), StopPolicy.bounded(1))
        with pytest.raises(DegreeOutOfRangeError):
            normal_form(PathElement.from_arrows(qq, dq, ["a", "a*"]), pres)

    def test_rejects_bad_relations(self, a3, qq):
        dq = double(a3)
        mixed = PathElement.from_arrows(qq, dq, ["a"]) + PathElement.from_arrows(qq, dq, ["b", "a"])
        with pytest.raises(RelationError):
            graded_quotient(dq, [mixed], StopPolicy.bounded(2), qq)
        with pytest.raises(RelationError):
            graded_quotient(dq, [PathElement.from_path(qq, Path.trivial("1"))], StopPolicy.bounded(2), qq)

    def test_restricted_sources(self, a3, qq):
        dq = double(a3)
        pres = graded_quotient(dq, standard_relations(dq, qq), sources=["3"])
        assert sum(len(pres.basis("3", j)) for j in dq.vertices) == 3

    def test_negative_bound(self):
        with pytest.raises(InputError):
            StopPolicy.bounded(-1)


class TestQuotientInvariants:
    @pytest.mark.parametrize("family,rank", [("A", 3), ("A", 4), ("D", 4)])
    def test_stays_zero_past_automatic_stop(self, family, rank, qq):
        dq = double(generate_quiver(family, rank))
        relations = standard_relations(dq, qq)
        pres = graded_quotient(dq, relations)
        stop = pres.computed_degree
        assert pres.degree_is_zero(stop)
        longer = graded_quotient(dq, relations, StopPolicy.bounded(stop + 1), qq)
        assert longer.degree_is_zero(stop)
        assert longer.degree_is_zero(stop + 1)

    @pytest.mark.parametrize("family,rank", [("A", 3), ("D", 4)])
    def test_every_placed_relation_reduces_to_zero(self, family, rank, qq):
        dq = double(generate_quiver(family, rank))
        pres = graded_quotient(dq, standard_relations(dq, qq))
        placed = 0
        for relation in standard_relations(dq, qq):
            i = next(iter(relation.terms)).source
            for x in dq.vertices:
                for inner in range(3):
                    for v in enumerate_paths(dq, x, i, inner):
                        for y in dq.vertices:
                            for outer in range(3):
                                for u in enumerate_paths(dq, i, y, outer):
                                    element = PathElement.from_path(qq, u).compose(relation).compose(
                                        PathElement.from_path(qq, v))
                                    assert normal_form(element, pres).is_zero(), (u, relation, v)
                                    placed += 1
        assert placed > 0

    @pytest.mark.parametrize("family,rank", [
        ("A", 2), ("A", 3), ("A", 4), ("A", 5), ("A", 6), ("D", 4), ("D", 5), ("D", 6), ("E", 6),
    ])
    def test_rationals_and_prime_field_agree(self, family, rank, qq):
        fp = ScalarField(1009)
        dq = double(generate_quiver(family, rank))
        over_q = dims(graded_quotient(dq, standard_relations(dq, qq)))
        over_p = dims(graded_quotient(dq, standard_relations(dq, fp)))
        assert over_q == over_p
        assert over_q.total > 0
