"""End-to-end agreement of the three constructions on Dynkin quivers."""

import random

import pytest

from MeshWindow import lambda_ho, verify_covering_iso
from ModuleHomology import lambda_te, tau_orbit_table
from PreprojectiveRelations import QAssignment, lambda_co
from QuiverModel import classify, generate_quiver, positive_roots, random_orientation, reorient
from ScalarField import ScalarField
from ScalingEquivalence import solve_scaling, verify_scaling

COXETER_NUMBERS = {"A": lambda n: n + 1, "D": lambda n: 2 * n - 2, "E": {6: 12, 7: 18, 8: 30}.get}

DYNKIN_SUITE = [
    ("A", 1, "linear"), ("A", 2, "linear"), ("A", 3, "linear"), ("A", 4, "alternating"),
    ("A", 5, "linear"), ("D", 4, "inward"), ("D", 5, "inward"), ("E", 6, "standard"),
]


def expected_total(family, rank):
    h = COXETER_NUMBERS[family](rank)
    return rank * h * (h + 1) // 6


@pytest.mark.parametrize("family,rank,orientation", DYNKIN_SUITE)
def test_three_constructions_agree(family, rank, orientation):
    q = generate_quiver(family, rank, orientation)
    _, co = lambda_co(q)
    assert lambda_ho(q) == co
    assert lambda_te(q) == co
    assert co.total == expected_total(family, rank) == sum(sum(root) for root in positive_roots(q))


@pytest.mark.parametrize("family,rank,orientation", DYNKIN_SUITE)
def test_covering_checks_pass(family, rank, orientation):
    report = verify_covering_iso(generate_quiver(family, rank, orientation))
    assert report.passed, [c for c in report.checks if not c.passed]


@pytest.mark.parametrize("family,rank,orientation", [
    ("A", 2, "linear"), ("A", 3, "alternating"), ("A", 4, "linear"), ("A", 5, "linear"),
    ("A", 6, "linear"), ("D", 4, "outward"), ("D", 5, "inward"), ("D", 6, "inward"),
    ("E", 6, "standard"),
])
def test_orbit_mesh_and_tensor_tables_agree(family, rank, orientation):
    q = generate_quiver(family, rank, orientation)
    orbit = tau_orbit_table(q)
    assert orbit == lambda_ho(q) == lambda_te(q)


def test_a2_golden_table():
    _, table = lambda_co(generate_quiver("A", 2))
    assert table.entries == {("1", "1", 0): 1, ("1", "2", 0): 1, ("2", "2", 0): 1,
                             ("2", "1", 1): 1}


def test_a3_golden_table():
    _, table = lambda_co(generate_quiver("A", 3))
    assert table.degree_totals() == {0: 6, 1: 3, 2: 1}
    assert table.restrict(1) == {("2", "1"): 1, ("2", "2"): 1, ("3", "2"): 1}
    assert table.restrict(2) == {("3", "1"): 1}


class TestOrientationIndependence:
    @pytest.mark.parametrize("rank", [3, 4])
    def test_type_a(self, rank):
        totals = {lambda_co(generate_quiver("A", rank, o))[1].total for o in ("linear", "alternating")}
        assert totals == {expected_total("A", rank)}

    def test_d4_orientation_classes(self):
        inward = generate_quiver("D", 4, "inward")
        quivers = [inward, generate_quiver("D", 4, "outward"), reorient(inward, ["a"])]
        assert {lambda_co(q)[1].total for q in quivers} == {28}

    @pytest.mark.parametrize("seed", range(3))
    def test_random_d5(self, seed):
        q = random_orientation(generate_quiver("D", 5), random.Random(seed))
        assert classify(q).dynkin_type == "D5"
        assert lambda_co(q)[1].total == expected_total("D", 5)


class TestRescalingSuite:
    @staticmethod
    def random_case(rng, field, literal):
        family, rank = rng.choice([("A", 5), ("D", 5)])
        q = random_orientation(generate_quiver(family, rank), rng)
        return q, QAssignment(q, field, {a.name: field.parse_scalar(literal(rng)) for a in q.arrows})

    def check(self, q, qa, field):
        report = verify_scaling(q, qa, solve_scaling(q, qa))
        assert report.passed, report.failures()
        assert report.all_nonzero
        _, deformed = lambda_co(q, qa, field)
        _, standard = lambda_co(q, QAssignment.constant(q, field, 1), field)
        assert deformed == standard

    def test_prime_field(self):
        field = ScalarField.parse("fp:1009")
        rng = random.Random(1009)
        for _ in range(100):
            q, qa = self.random_case(rng, field, lambda r: str(r.randint(1, 1008)))
            self.check(q, qa, field)

    def test_rationals(self):
        field = ScalarField.parse("q")
        rng = random.Random(20)
        for _ in range(20):
            q, qa = self.random_case(
                rng, field, lambda r: f"{r.choice([-1, 1]) * r.randint(1, 9)}/{r.randint(1, 9)}")
            self.check(q, qa, field)
