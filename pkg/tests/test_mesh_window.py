"""Tests for translation-quiver windows, mesh Hom spaces and the covering functor."""

import pytest

from errors import CyclicQuiverError, NeedsExplicitBoundError, WindowError
from MeshWindow import (build_window, covering_pi, lambda_ho, lift_path, mesh_hom,
                        mesh_presentation, sigma_violations, verify_covering_iso, vertex_id)
from PathSpace import Path, PathElement
from PreprojectiveRelations import lambda_co, sign_free_relation_at
from QuiverModel import double, export_dot, generate_quiver


@pytest.fixture
def a2_window(a2):
    return build_window(a2, 2)


class TestWindow:
    def test_a2_counts(self, a2_window):
        assert len(a2_window.quiver.vertices) == 6
        assert len(a2_window.quiver.arrows) == 5
        assert [m.vertex for m in a2_window.meshes] == ["(1,1)", "(1,2)", "(2,1)", "(2,2)"]

    def test_arrow_shapes(self, a2_window):
        star = a2_window.quiver.arrow("(0,a*)")
        assert (star.source, star.target) == ("(0,2)", "(1,1)")
        assert not a2_window.quiver.has_arrow("(2,a*)")

    def test_sigma_bijective(self, a2_window, d4):
        assert sigma_violations(a2_window) == []
        assert sigma_violations(build_window(d4, 3)) == []

    def test_tau(self, a2_window):
        assert a2_window.tau("(1,2)") == "(0,2)"
        with pytest.raises(WindowError):
            a2_window.tau("(0,2)")
        with pytest.raises(WindowError):
            a2_window.vertex(5, "1")

    def test_negative_columns(self, a2):
        w = build_window(a2, 1, -1)
        assert w.vertex(-1, "1") == vertex_id(-1, "1")
        assert len(w.meshes) == 4

    @pytest.mark.parametrize("rank", [2, 3])
    def test_nothing_maps_into_negative_degree(self, rank):
        q = generate_quiver("A", rank)
        w = build_window(q, 1, -1)
        for i in q.vertices:
            for j in q.vertices:
                assert mesh_hom(w, (0, i), (-1, j))[0] == 0

    def test_longest_path(self, a2_window):
        assert a2_window.longest_path_length() == 5

    def test_bad_input(self, a2, cycle3):
        with pytest.raises(CyclicQuiverError):
            build_window(cycle3, 2)
        with pytest.raises(WindowError):
            build_window(a2, 0, 1)


class TestMeshHom:
    def test_a2_hom_spaces(self, a2_window):
        assert mesh_hom(a2_window, (0, "1"), (0, "2"))[0] == 1
        assert mesh_hom(a2_window, (0, "1"), (1, "1"))[0] == 0
        assert mesh_hom(a2_window, (0, "2"), (1, "1"))[0] == 1
        assert mesh_hom(a2_window, "(0,2)", "(1,2)")[0] == 0

    def test_no_morphisms_backwards(self, a2_window):
        assert mesh_hom(a2_window, (1, "1"), (0, "1"))[0] == 0

    @pytest.mark.parametrize("family,rank,orientation", [
        ("A", 2, "linear"), ("A", 3, "linear"), ("A", 4, "alternating"), ("D", 4, "inward"),
    ])
    def test_matches_combinatorial_table(self, family, rank, orientation):
        q = generate_quiver(family, rank, orientation)
        assert lambda_ho(q) == lambda_co(q)[1]

    def test_auto_window_stops(self, a3):
        w, _, table = mesh_presentation(a3)
        assert table.max_degree == 2
        assert w.p_max >= 3

    @pytest.mark.parametrize("family,rank,orientation", [
        ("A", 2, "linear"), ("A", 4, "alternating"), ("D", 4, "inward"), ("D", 5, "inward"),
    ])
    def test_zero_one_column_past_vanishing(self, family, rank, orientation):
        q = generate_quiver(family, rank, orientation)
        _, _, table = mesh_presentation(q)
        vanishing = table.max_degree + 1
        w = build_window(q, vanishing + 1)
        for i in q.vertices:
            for j in q.vertices:
                assert mesh_hom(w, (0, i), (vanishing, j))[0] == 0
                assert mesh_hom(w, (0, i), (vanishing + 1, j))[0] == 0
        assert lambda_ho(q, vanishing + 1) == table

    def test_non_dynkin(self, kronecker):
        with pytest.raises(NeedsExplicitBoundError):
            lambda_ho(kronecker)
        table = lambda_ho(kronecker, 2)
        assert table.get("1", "2", 0) == 2


class TestCovering:
    def test_meshes_map_to_sign_free_relations(self, a2, a2_window):
        dq = double(a2)
        for mesh in a2_window.meshes:
            _, i = a2_window.position[mesh.vertex]
            assert covering_pi(a2_window, mesh.element) == sign_free_relation_at(dq, i, a2_window.field)

    def test_lift_and_project(self, a2, a2_window):
        dq = double(a2)
        path = Path.of(dq, ["a", "a*"])
        lifted = lift_path(a2_window, path)
        assert (lifted.source, lifted.target) == ("(0,2)", "(1,2)")
        assert covering_pi(a2_window, lifted) == PathElement.from_path(a2_window.field, path)

    def test_lift_leaving_window(self, a2, a2_window):
        path = Path.of(double(a2), ["a*"])
        with pytest.raises(WindowError):
            lift_path(a2_window, path, column=2)

    @pytest.mark.parametrize("family,rank,orientation", [
        ("A", 3, "linear"), ("A", 3, "alternating"), ("D", 4, "outward"),
    ])
    def test_verify_covering(self, family, rank, orientation):
        report = verify_covering_iso(generate_quiver(family, rank, orientation))
        assert report.passed, [c for c in report.checks if not c.passed]
        assert set(report.tables) == {"ho", "co(q=-1)", "co(q=1)"}


class TestDot:
    def test_window_dot(self, a2_window):
        dot = export_dot(a2_window)
        assert "rankdir=LR;" in dot
        assert dot.count("rank=same;") == 3
        assert dot.count("style=dashed, color=gray") == 4
        assert '"(0,2)" -> "(1,1)" [label="(0,a*)"];' in dot
