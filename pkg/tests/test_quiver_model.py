"""Tests for quiver parsing, generators, classification and DOT export."""

import random

import networkx as nx
import pytest

from enums import DynkinFamily
from errors import (CyclicQuiverError, HeightError, InputError, NotDynkinError,
                    QuiverDefinitionError, QuiverSyntaxError, UnknownVertexError)
from QuiverModel import (Arrow, Quiver, cartan_matrix, classify, double, export_dot, format_quiver,
                         generate_quiver, height_function, load_quiver, parse_quiver,
                         positive_roots, random_orientation, reorient)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class TestParsing:
    def test_full_description(self):
        q = parse_quiver("""
            quiver Example   # header
            vertex 1
            vertex 2
            vertex 3
            arrow a : 1 -> 2
            arrow b : 2 -> 3
        """)
        assert q.name == "Example"
        assert q.vertices == ("1", "2", "3")
        assert [a.name for a in q.arrows] == ["a", "b"]
        assert q.arrow("b") == Arrow("b", "2", "3")

    def test_semicolons_and_forward_references(self):
        q = parse_quiver("arrow x : u -> v; vertex u; vertex v")
        assert q.arrows[0].source == "u"

    def test_round_trip_through_format(self, d4):
        assert parse_quiver(format_quiver(d4)) == d4

    def test_generator_request(self):
        q = parse_quiver("# built in\nD 5 outward\n")
        assert q == generate_quiver("D", 5, "outward")

    def test_generator_must_stand_alone(self):
        with pytest.raises(QuiverSyntaxError):
            parse_quiver("vertex 1\nA 3 linear")

    def test_syntax_error_names_line(self):
        with pytest.raises(QuiverSyntaxError) as info:
            parse_quiver("vertex 1\nvertex 2\narrow a 1 -> 2")
        assert info.value.line == 3

    def test_duplicate_vertex(self):
        with pytest.raises(QuiverDefinitionError) as info:
            parse_quiver("vertex 1\nvertex 1")
        assert info.value.line == 2

    def test_duplicate_arrow(self):
        with pytest.raises(QuiverDefinitionError):
            parse_quiver("vertex 1; vertex 2; arrow a : 1 -> 2; arrow a : 2 -> 1")

    def test_dangling_endpoint(self):
        with pytest.raises(QuiverDefinitionError):
            parse_quiver("vertex 1\narrow a : 1 -> 9")

    def test_unknown_vertex(self, a2):
        with pytest.raises(UnknownVertexError):
            a2.check_vertex("7")

    def test_load_from_file(self, write_quiver):
        q = load_quiver(write_quiver("vertex p\nvertex s\narrow a : p -> s\n"))
        assert q.vertices == ("p", "s")


# ---------------------------------------------------------------------------
# Generators and orientations
# ---------------------------------------------------------------------------

class TestGenerators:
    def test_linear_a(self, a3):
        assert [(a.source, a.target) for a in a3.arrows] == [("1", "2"), ("2", "3")]

    def test_alternating_a(self):
        q = generate_quiver("A", 4, "alternating")
        assert [(a.source, a.target) for a in q.arrows] == [("1", "2"), ("3", "2"), ("3", "4")]

    def test_d4_inward(self, d4):
        assert all(a.target == "2" for a in d4.arrows)

    @pytest.mark.parametrize("rank", [6, 7, 8])
    def test_e_series(self, rank):
        q = generate_quiver("E", rank, "standard")
        assert classify(q).dynkin_type == f"E{rank}"

    @pytest.mark.parametrize("family,rank,orientation", [
        ("A", 0, "linear"), ("D", 3, "inward"), ("E", 9, "standard"),
        ("A", 3, "inward"), ("E", 6, "linear"), ("A", 3, "sideways"),
    ])
    def test_rejects_bad_requests(self, family, rank, orientation):
        with pytest.raises(InputError):
            generate_quiver(family, rank, orientation)

    @pytest.mark.parametrize("family,rank,orientation", [
        ("A", 4, "linear"), ("D", 5, "inward"), ("E", 6, "standard"),
    ])
    def test_omitted_orientation_uses_family_default(self, family, rank, orientation):
        assert generate_quiver(family, rank) == generate_quiver(family, rank, orientation)

    def test_reorient_keeps_names(self, a3):
        flipped = reorient(a3, ["b"])
        assert flipped.arrow("b") == Arrow("b", "3", "2")
        assert flipped.arrow("a") == a3.arrow("a")

    def test_random_orientation_is_seeded(self, d4):
        first = random_orientation(d4, random.Random(5))
        second = random_orientation(d4, random.Random(5))
        assert first == second
        assert classify(first).dynkin_type == "D4"


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------

class TestClassification:
    def test_a3(self, a3):
        info = classify(a3)
        assert (info.dynkin_type, info.is_tree, info.is_acyclic) == ("A3", True, True)

    def test_directed_cycle(self, cycle3):
        info = classify(cycle3)
        assert (info.dynkin_type, info.is_tree, info.is_acyclic) == (None, False, False)

    def test_parallel_arrows(self, kronecker):
        info = classify(kronecker)
        assert (info.dynkin_type, info.is_tree, info.is_acyclic) == (None, False, True)

    def test_d_and_e_families(self):
        assert classify(generate_quiver("D", 6, "outward")).family is DynkinFamily.D
        assert classify(generate_quiver("E", 7, "standard")).family is DynkinFamily.E

    def test_extended_d4_is_not_dynkin(self):
        q = parse_quiver("vertex c; vertex 1; vertex 2; vertex 3; vertex 4\n"
                         "arrow a : 1 -> c; arrow b : 2 -> c; arrow d : 3 -> c; arrow e : 4 -> c")
        info = classify(q)
        assert info.is_tree and not info.is_dynkin

    def test_empty_quiver(self):
        info = classify(Quiver([], []))
        assert info.dynkin_type is None and not info.is_tree


class TestDoubling:
    def test_star_arrows(self, a2):
        dq = double(a2)
        assert dq.quiver.arrow("a*") == Arrow("a*", "2", "1", starred=True)
        assert dq.star_of("a") == "a*" and dq.star_of("a*") == "a"
        assert dq.quiver.name == "A2bar"

    def test_star_name_clash(self):
        q = Quiver(["1", "2"], [Arrow("a", "1", "2"), Arrow("a*", "2", "1")])
        with pytest.raises(QuiverDefinitionError):
            double(q)


class TestHeights:
    def test_linear_heights(self, a3):
        assert height_function(a3) == {"1": 0, "2": 1, "3": 2}

    def test_heights_of_d4(self, d4):
        heights = height_function(d4)
        assert heights["2"] == 1
        assert all(heights[v] == 0 for v in ("1", "3", "4"))

    def test_cyclic_input(self, cycle3):
        with pytest.raises(CyclicQuiverError):
            height_function(cycle3)

    def test_unbalanced_cycle(self):
        q = parse_quiver("vertex 1; vertex 2; vertex 3\n"
                         "arrow a : 1 -> 2; arrow b : 2 -> 3; arrow c : 1 -> 3")
        with pytest.raises(HeightError):
            height_function(q)

    def test_kronecker_heights(self, kronecker):
        assert height_function(kronecker) == {"1": 0, "2": 1}


class TestRoots:
    @pytest.mark.parametrize("family,rank,orientation,count", [
        ("A", 3, "linear", 6), ("D", 4, "inward", 12), ("E", 6, "standard", 36),
        ("E", 8, "standard", 120),
    ])
    def test_root_counts(self, family, rank, orientation, count):
        assert len(positive_roots(generate_quiver(family, rank, orientation))) == count

    @pytest.mark.parametrize("n", range(1, 7))
    def test_type_a_count(self, n):
        assert len(positive_roots(generate_quiver("A", n))) == n * (n + 1) // 2

    @pytest.mark.parametrize("family,rank", [("A", 4), ("D", 5), ("E", 6)])
    def test_orientation_independent(self, family, rank):
        q = generate_quiver(family, rank)
        roots = sorted(positive_roots(q))
        rng = random.Random(rank)
        for _ in range(5):
            assert sorted(positive_roots(random_orientation(q, rng))) == roots
        assert sorted(positive_roots(reorient(q, [a.name for a in q.arrows]))) == roots

    def test_coordinate_sums(self, a3, d4):
        assert sum(sum(r) for r in positive_roots(a3)) == 10
        assert sum(sum(r) for r in positive_roots(d4)) == 28

    def test_highest_root_of_d4(self, d4):
        assert positive_roots(d4)[-1] == (1, 2, 1, 1)

    def test_cartan_matrix(self, a2):
        assert cartan_matrix(a2).tolist() == [[2, -1], [-1, 2]]

    def test_not_dynkin(self, kronecker):
        with pytest.raises(NotDynkinError):
            positive_roots(kronecker)


class TestDot:
    def test_quiver_export(self, a2):
        dot = export_dot(a2)
        assert dot.startswith('digraph "A2" {')
        assert '"1" -> "2" [label="a"];' in dot

    def test_doubled_export_marks_stars(self, a2):
        dot = export_dot(double(a2))
        assert '"2" -> "1" [label="a*", style=dashed];' in dot

    def test_export_matches_graph(self, d4):
        dot = export_dot(d4)
        assert dot.count("->") == nx.number_of_edges(d4.graph())
