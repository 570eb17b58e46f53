"""Tests for representations, Hom and Ext, the bimodule Omega and its tensor algebra."""

import random

import pytest

from errors import CyclicQuiverError, NeedsExplicitBoundError
from ModuleHomology import (ModuleMap, all_paths, direct_sum, dual_algebra, ext1, ext_map_first,
                            ext_map_second, hom_rep, injective, injective_map, lambda_te, omega,
                            projective, projective_map, projective_presentation,
                            random_representation, regular_bimodule,
                            tau_minus, tau_orbit_table, tensor_power, tensor_product)
from PreprojectiveRelations import lambda_co
from QuiverModel import generate_quiver
from ScalarField import matmul, matrices_equal


def identity_map(rep):
    return ModuleMap(rep, rep, {v: rep.field.identity(rep.dims[v]) for v in rep.quiver.vertices})


def random_dims(q, rng):
    return {v: rng.randint(0, 2) for v in q.vertices}


class TestRepresentations:
    def test_all_paths(self, a3, cycle3):
        assert len(all_paths(a3)) == 6
        with pytest.raises(CyclicQuiverError):
            all_paths(cycle3)

    def test_projectives_and_injectives(self, a2, a3):
        assert projective(a2, "1").dimension_vector() == (1, 0)
        assert projective(a2, "2").dimension_vector() == (1, 1)
        assert injective(a2, "1").dimension_vector() == (1, 1)
        assert injective(a2, "2").dimension_vector() == (0, 1)
        assert projective(a3, "3").dimension_vector() == (1, 1, 1)
        assert injective(a3, "2").dimension_vector() == (0, 1, 1)

    def test_dual_algebra(self, a3):
        da = dual_algebra(a3)
        assert da.total_dimension == 6
        assert da.summands == ["I1", "I2", "I3"]

    def test_path_action(self, a3):
        p3 = projective(a3, "3")
        path = p3.basis["1"][0]
        assert matrices_equal(p3.path_action(path), p3.field.matrix([[1]]))

    def test_path_action_composes_arrow_matrices(self, a3, qq, rng):
        m = random_representation(a3, {"1": 2, "2": 1, "3": 3}, qq, rng)
        path = projective(a3, "3").basis["1"][0]
        action = m.path_action(path)
        assert action.shape == (2, 3)
        assert matrices_equal(action, matmul(m.maps["a"], m.maps["b"]))

    def test_bad_map_detected(self, a2):
        p2 = projective(a2, "2")
        field = p2.field
        f = ModuleMap(p2, p2, {"1": field.identity(1), "2": field.zeros(1, 1)})
        assert f.failures() == ["a"]
        assert identity_map(p2).is_valid()

    def test_arrow_maps_are_homomorphisms(self, d4):
        for arrow in d4.arrows:
            u, v = arrow.source, arrow.target
            assert projective_map(projective(d4, u), projective(d4, v), arrow).is_valid()
            assert injective_map(injective(d4, u), injective(d4, v), arrow).is_valid()


class TestHom:
    def test_yoneda(self, a3, any_field, rng):
        m = random_representation(a3, {"1": 2, "2": 1, "3": 2}, any_field, rng)
        for i in a3.vertices:
            hom = hom_rep(projective(a3, i, any_field), m)
            assert hom.dimension == m.dims[i]
            assert all(f.is_valid() for f in hom.basis)

    @pytest.mark.parametrize("family,rank,orientation", [
        ("A", 3, "linear"), ("A", 4, "alternating"), ("D", 4, "inward"),
    ])
    def test_yoneda_on_random_representations(self, family, rank, orientation, fp):
        q = generate_quiver(family, rank, orientation)
        projectives = {i: projective(q, i, fp) for i in q.vertices}
        rng = random.Random(rank)
        for _ in range(50):
            m = random_representation(q, random_dims(q, rng), fp, rng)
            for i, p in projectives.items():
                assert hom_rep(p, m).dimension == m.dims[i]

    def test_coordinates(self, a3):
        p = projective(a3, "3")
        hom = hom_rep(p, p)
        assert hom.dimension == 1
        assert len(hom.coordinates(identity_map(p))) == 1

    def test_direct_sum(self, a3):
        total = direct_sum([projective(a3, "2"), projective(a3, "3")])
        assert total.dimension_vector() == (2, 2, 1)
        assert hom_rep(projective(a3, "1"), total).dimension == 2


class TestExt:
    def test_presentation_is_exact(self, a3, qq, rng):
        m = random_representation(a3, {"1": 1, "2": 2, "3": 1}, qq, rng)
        pres = projective_presentation(m)
        assert pres.epi.is_valid()
        assert pres.inclusion.is_valid()
        for v in a3.vertices:
            assert pres.cover.dims[v] == pres.kernel.dims[v] + m.dims[v]

    def test_a2_values(self, a2):
        assert ext1(injective(a2, "2"), projective(a2, "1")).dimension == 1
        assert ext1(injective(a2, "2"), projective(a2, "2")).dimension == 0

    def test_projectives_and_injectives_vanish(self, a3, fp, rng):
        m = random_representation(a3, {"1": 1, "2": 2, "3": 1}, fp, rng)
        for i in a3.vertices:
            assert ext1(projective(a3, i, fp), m).dimension == 0
            assert ext1(m, injective(a3, i, fp)).dimension == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_additive_over_direct_sums(self, a3, fp, seed):
        rng = random.Random(seed)
        m, n1, n2 = (random_representation(a3, random_dims(a3, rng), fp, rng) for _ in range(3))
        assert ext1(m, direct_sum([n1, n2])).dimension == ext1(m, n1).dimension + ext1(m, n2).dimension
        assert ext1(direct_sum([n1, n2]), m).dimension == ext1(n1, m).dimension + ext1(n2, m).dimension

    def test_identity_maps_induce_identities(self, a3):
        i2, p2 = injective(a3, "2"), projective(a3, "2")
        ext = ext1(i2, p2)
        assert ext.dimension == 1
        assert matrices_equal(ext_map_second(ext, ext, identity_map(p2)), p2.field.identity(1))
        assert matrices_equal(ext_map_first(ext, ext, identity_map(i2)), p2.field.identity(1))


class TestTranslate:
    def test_tau_minus_of_simple_projective(self, a3):
        assert tau_minus(projective(a3, "1")).dimension_vector() == (0, 1, 0)
        assert tau_minus(projective(a3, "2")).dimension_vector() == (0, 1, 1)

    def test_injective_goes_to_zero(self, a3):
        assert tau_minus(injective(a3, "1")).is_zero()

    def test_orbit_table_matches_quotient(self, a3):
        assert tau_orbit_table(a3) == lambda_co(a3)[1]


class TestOmega:
    def test_a2(self, a2):
        w = omega(a2)
        assert w.total == 1
        assert w.dimension("1", "2") == 1
        assert w.commutation_failures() == []

    def test_a3_matches_degree_one(self, a3):
        w = omega(a3)
        degree_one = lambda_co(a3)[1].restrict(1)
        assert {(i, j): w.dimension(j, i) for j in a3.vertices for i in a3.vertices
                if w.dimension(j, i)} == degree_one
        assert w.commutation_failures() == []

    def test_json(self, a2):
        data = omega(a2).to_json_dict()
        assert data["components"] == [{"i": "2", "j": "1", "dim": 1}]


class TestTensorAlgebra:
    def test_regular_bimodule_is_a_unit(self, a3):
        w = omega(a3)
        a = regular_bimodule(a3)
        assert a.commutation_failures() == []
        assert tensor_product(a, w).dims == w.dims
        assert tensor_product(w, a).dims == w.dims

    def test_tensor_square(self, a3):
        square = tensor_power(omega(a3), 2)
        assert square.total == 1
        assert square.dimension("1", "3") == 1
        assert square.commutation_failures() == []
        assert tensor_power(omega(a3), 3).is_zero()

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_matches_quotient_in_type_a(self, n):
        q = generate_quiver("A", n)
        assert lambda_te(q) == lambda_co(q)[1]

    def test_d4(self, d4, fp):
        assert lambda_te(d4, field=fp) == lambda_co(d4, field=fp)[1]

    def test_non_dynkin(self, kronecker):
        with pytest.raises(NeedsExplicitBoundError):
            lambda_te(kronecker)
        table = lambda_te(kronecker, 1)
        assert table.max_degree <= 1
        assert table.get("1", "2", 0) == 2
