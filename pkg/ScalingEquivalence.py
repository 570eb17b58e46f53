"""Rescaling Isomorphism Between q-Deformed and Standard Preprojective Algebras"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import networkx as nx

from errors import NotATreeError
from PathSpace import CheckResult, PathElement, StopPolicy, normal_form
from PreprojConstants import *
from PreprojectiveRelations import QAssignment, lambda_co, q_relation_at
from QuiverModel import Quiver, classify, double


@dataclass
class ScalingSolution:
    """
    Vertex scalars ε and λ. The map φ_ε scales each arrow α: i → j by
    ε(i)⁻¹·ε(j), fixes starred arrows, and sends ρ_{q,i} to λ(i)·ρ_{1,i}.
    """
    quiver: Quiver
    field: object
    epsilon: Dict[str, object]
    lambdas: Dict[str, object]

    def arrow_scale(self, name: str):
        if not self.quiver.has_arrow(name):
            return self.field.one
        arrow = self.quiver.arrow(name)
        return self.field.inverse(self.epsilon[arrow.source]) * self.epsilon[arrow.target]

    def to_json_dict(self) -> dict:
        text = self.field.to_text
        return {
            "epsilon": {v: text(self.epsilon[v]) for v in self.quiver.vertices},
            "lambda": {v: text(self.lambdas[v]) for v in self.quiver.vertices},
        }


@dataclass
class VertexCheck:
    vertex: str
    lam: object
    passed: bool
    image: str
    expected: str


@dataclass
class ScalingReport:
    """Per-vertex outcome of comparing φ_ε(ρ_{q,i}) with λ(i)·ρ_{1,i}."""
    solution: ScalingSolution
    checks: List[VertexCheck]
    all_nonzero: bool

    @property
    def passed(self) -> bool:
        return self.all_nonzero and all(check.passed for check in self.checks)

    def failures(self) -> List[str]:
        return [check.vertex for check in self.checks if not check.passed]

    def to_json_dict(self) -> dict:
        text = self.solution.field.to_text
        return {
            "passed": self.passed,
            "all_nonzero": self.all_nonzero,
            "vertices": [{"vertex": c.vertex, "lambda": text(c.lam), "passed": c.passed}
                         for c in self.checks],
        }


def solve_scaling(q: Quiver, qa: QAssignment) -> ScalingSolution:
    """
    Solve for ε and λ by propagating along a depth-first traversal of the tree.

    Args:
        q: A quiver whose underlying graph is a tree
        qa: Nonzero q value on every arrow

    Returns:
        The solution, with ε = 1 at the first vertex and free λ values set to 1
    """
    if not classify(q).is_tree:
        raise NotATreeError(f"quiver {q.name} is not a tree")
    qa.require_nonzero()
    field = qa.field

    edge_arrow = {frozenset((a.source, a.target)): a for a in q.arrows}
    root = q.vertices[0]
    epsilon = {root: field.one}
    lambdas: Dict[str, object] = {}

    undirected = nx.Graph(nx.MultiGraph(q.graph()))
    for known, new in nx.dfs_edges(undirected, source=root):
        arrow = edge_arrow[frozenset((known, new))]
        value = qa[arrow.name]
        lambdas.setdefault(known, field.one)
        if arrow.source == known:
            epsilon[new] = lambdas[known] * epsilon[known]
            lambdas[new] = value * lambdas[known]
        else:
            epsilon[new] = value * epsilon[known] * field.inverse(lambdas[known])
            lambdas[new] = lambdas[known] * field.inverse(value)
    for vertex in q.vertices:
        lambdas.setdefault(vertex, field.one)

    logging.info("  Solved rescaling on %s: epsilon %s", q.name,
                 [field.to_text(epsilon[v]) for v in q.vertices])
    return ScalingSolution(q, field, {v: epsilon[v] for v in q.vertices},
                           {v: lambdas[v] for v in q.vertices})


def apply_phi(sol: ScalingSolution, x: PathElement) -> PathElement:
    """
    Apply the algebra map φ_ε to a combination of paths of the doubled quiver.

    Args:
        sol: The scaling solution
        x: Element of the doubled path algebra

    Returns:
        x with every base arrow α: i → j in each path contributing a factor ε(i)⁻¹·ε(j)
    """
    def weight(path):
        factor = sol.field.one
        for name in path.arrows:
            factor = factor * sol.arrow_scale(name)
        return factor
    return x.map_coefficients(weight)


def invert_solution(sol: ScalingSolution) -> ScalingSolution:
    """The solution for φ_ε⁻¹: ε and λ replaced by their inverses."""
    inverse = sol.field.inverse
    return ScalingSolution(sol.quiver, sol.field,
                           {v: inverse(e) for v, e in sol.epsilon.items()},
                           {v: inverse(l) for v, l in sol.lambdas.items()})


def verify_scaling(q: Quiver, qa: QAssignment, sol: ScalingSolution) -> ScalingReport:
    """
    Check φ_ε(ρ_{q,i}) = λ(i)·ρ_{1,i} coefficientwise at every vertex.

    Args:
        q: The base quiver
        qa: The q values the solution was computed for
        sol: Candidate solution

    Returns:
        Report with one entry per vertex
    """
    dq = double(q)
    field = qa.field
    one = QAssignment.constant(q, field, 1)
    values = list(sol.epsilon.values()) + list(sol.lambdas.values())
    all_nonzero = all(not field.is_zero(v) for v in values)

    checks = []
    for vertex in q.vertices:
        image = apply_phi(sol, q_relation_at(dq, qa, vertex))
        expected = q_relation_at(dq, one, vertex).scale(sol.lambdas[vertex])
        passed = image == expected
        if not passed:
            logging.warning("  Rescaling fails at vertex %s: %s != %s", vertex, image, expected)
        checks.append(VertexCheck(vertex, sol.lambdas[vertex], passed, str(image), str(expected)))
    return ScalingReport(sol, checks, all_nonzero)


def check_ideal_transport(q: Quiver, qa: QAssignment, sol: ScalingSolution) -> List[CheckResult]:
    """
    Check that φ_ε carries each q-relation into the standard ideal and that
    φ_ε⁻¹ carries each standard relation into the q-ideal.

    Args:
        q: The base quiver
        qa: q values
        sol: The scaling solution

    Returns:
        One result per direction
    """
    dq = double(q)
    field = qa.field
    one = QAssignment.constant(q, field, 1)
    # The relations have length 2, so two lengths suffice.
    standard_pres, _ = lambda_co(q, one, field, StopPolicy.bounded(2))
    deformed_pres, _ = lambda_co(q, qa, field, StopPolicy.bounded(2))
    inverse = invert_solution(sol)

    forward = [v for v in q.vertices
               if not normal_form(apply_phi(sol, q_relation_at(dq, qa, v)), standard_pres).is_zero()]
    backward = [v for v in q.vertices
                if not normal_form(apply_phi(inverse, q_relation_at(dq, one, v)), deformed_pres).is_zero()]
    return [
        CheckResult("phi maps q-relations into the standard ideal", not forward,
                    f"outside at {', '.join(forward)}" if forward else ""),
        CheckResult("inverse maps standard relations into the q-ideal", not backward,
                    f"outside at {', '.join(backward)}" if backward else ""),
    ]
