"""Preprojective Relations and the Combinatorial Preprojective Algebra"""

import logging
import re
from typing import Dict, List, Optional, Tuple

from errors import QAssignmentError
from PathSpace import (GradedDimTable, Path, PathElement, QuotientPresentation, StopPolicy,
                       dims, graded_quotient, normal_form)
from enums import GradingKind
from PreprojConstants import *
from QuiverModel import DoubledQuiver, Quiver, double
from ScalarField import ScalarField

_Q_ITEM = re.compile(rf'^({IDENTIFIER_PATTERN})\s*=\s*(\S+)$')


class QAssignment:
    """A scalar q(α) for every arrow α of a base quiver."""

    def __init__(self, quiver: Quiver, field: ScalarField, values: Dict[str, object]):
        """
        Initialize and validate the assignment.

        Args:
            quiver: The base quiver
            field: Field the values live in
            values: Map base-arrow name -> scalar; every arrow must be present
        """
        self.quiver = quiver
        self.field = field
        unknown = sorted(set(values) - {a.name for a in quiver.arrows})
        if unknown:
            raise QAssignmentError(f"q given for unknown arrow(s): {', '.join(unknown)}")
        missing = [a.name for a in quiver.arrows if a.name not in values]
        if missing:
            raise QAssignmentError(f"no q value for arrow(s): {', '.join(missing)}")
        self.values = {a.name: field(values[a.name]) for a in quiver.arrows}

    @classmethod
    def parse(cls, text: str, quiver: Quiver, field: ScalarField,
              default_one: bool = False) -> 'QAssignment':
        """
        Parse ``a=2,b=-1/3``.

        Args:
            text: Comma-separated assignments (may be empty)
            quiver: The base quiver
            field: Field for the values
            default_one: Give unlisted arrows the value 1 instead of failing

        Returns:
            The assignment
        """
        values: Dict[str, object] = {}
        for item in (text or '').split(','):
            item = item.strip()
            if not item:
                continue
            match = _Q_ITEM.match(item)
            if not match:
                raise QAssignmentError(f"cannot parse q assignment '{item}'")
            name, literal = match.groups()
            if name in values:
                raise QAssignmentError(f"arrow '{name}' assigned twice")
            values[name] = field.parse_scalar(literal)
        if default_one:
            for arrow in quiver.arrows:
                values.setdefault(arrow.name, field.one)
        return cls(quiver, field, values)

    @classmethod
    def constant(cls, quiver: Quiver, field: ScalarField, value=1) -> 'QAssignment':
        return cls(quiver, field, {a.name: field(value) for a in quiver.arrows})

    def __getitem__(self, name: str):
        return self.values[name]

    def zero_arrows(self) -> List[str]:
        return [name for name, value in self.values.items() if self.field.is_zero(value)]

    def require_nonzero(self):
        zeros = self.zero_arrows()
        if zeros:
            raise QAssignmentError(f"q must be nonzero, got 0 on arrow(s): {', '.join(zeros)}")

    def to_text(self) -> str:
        return ','.join(f"{name}={self.field.to_text(v)}" for name, v in self.values.items())

    def __repr__(self) -> str:
        return f"QAssignment({self.to_text()})"


# ========================================
# RELATIONS
# ========================================

def _loop(dq: DoubledQuiver, field: ScalarField, outer: str, inner: str, coefficient) -> PathElement:
    return PathElement.from_path(field, Path.of(dq.quiver, [outer, inner]), coefficient)


def standard_relation_at(dq: DoubledQuiver, vertex: str, field: ScalarField) -> PathElement:
    """ρ_i = Σ_{t(α)=i} α∘α* − Σ_{s(β)=i} β*∘β."""
    relation = PathElement.zero(field)
    for arrow in dq.base.arrows_into(vertex):
        relation = relation + _loop(dq, field, arrow.name, dq.star_of(arrow.name), 1)
    for arrow in dq.base.arrows_from(vertex):
        relation = relation + _loop(dq, field, dq.star_of(arrow.name), arrow.name, -1)
    return relation


def q_relation_at(dq: DoubledQuiver, qa: QAssignment, vertex: str) -> PathElement:
    """ρ_{q,i} = Σ_{s(α)=i} α*∘α − Σ_{t(α)=i} q(α)·α∘α*."""
    field = qa.field
    relation = PathElement.zero(field)
    for arrow in dq.base.arrows_from(vertex):
        relation = relation + _loop(dq, field, dq.star_of(arrow.name), arrow.name, 1)
    for arrow in dq.base.arrows_into(vertex):
        relation = relation + _loop(dq, field, arrow.name, dq.star_of(arrow.name), -qa[arrow.name])
    return relation


def sign_free_relation_at(dq: DoubledQuiver, vertex: str, field: ScalarField) -> PathElement:
    """Σ a∘a* over every arrow a of the doubled quiver ending at the vertex."""
    relation = PathElement.zero(field)
    for arrow in dq.quiver.arrows_into(vertex):
        relation = relation + _loop(dq, field, arrow.name, dq.star_of(arrow.name), 1)
    return relation


def standard_relations(dq: DoubledQuiver, field: Optional[ScalarField] = None) -> List[PathElement]:
    """
    One relation ρ_i per vertex; isolated vertices contribute nothing.

    Args:
        dq: The doubled quiver
        field: Coefficient field, ℚ by default

    Returns:
        The nonzero ρ_i in vertex order
    """
    field = field or ScalarField()
    relations = [standard_relation_at(dq, v, field) for v in dq.vertices]
    return [r for r in relations if not r.is_zero()]


def q_relations(dq: DoubledQuiver, qa: QAssignment) -> List[PathElement]:
    """
    The vertex components ρ_{q,i} of Σ_α (α*∘α − q(α)·α∘α*).

    Args:
        dq: The doubled quiver
        qa: q value for every base arrow

    Returns:
        The nonzero ρ_{q,i} in vertex order
    """
    relations = [q_relation_at(dq, qa, v) for v in dq.vertices]
    return [r for r in relations if not r.is_zero()]


def sign_free_relations(dq: DoubledQuiver, field: Optional[ScalarField] = None) -> List[PathElement]:
    """The relations Σ_{t(a)=i} a∘a*, equal to ρ_{q,i} for q ≡ −1."""
    field = field or ScalarField()
    relations = [sign_free_relation_at(dq, v, field) for v in dq.vertices]
    return [r for r in relations if not r.is_zero()]


# ========================================
# THE COMBINATORIAL ALGEBRA
# ========================================

def lambda_co(q: Quiver, qa: Optional[QAssignment] = None, field: Optional[ScalarField] = None,
              stop: Optional[StopPolicy] = None) -> Tuple[QuotientPresentation, GradedDimTable]:
    """
    The preprojective algebra as a quotient of the doubled path algebra.

    Args:
        q: The base quiver
        qa: q-deformation; the standard relations ρ_i when omitted
        field: Scalar field; taken from qa, else ℚ
        stop: Stopping policy, automatic by default

    Returns:
        Tuple of (presentation, star-graded dimension table)
    """
    field = field or (qa.field if qa is not None else ScalarField())
    dq = double(q)
    if qa is None:
        relations = standard_relations(dq, field)
    else:
        relations = q_relations(dq, qa)
    pres = graded_quotient(dq, relations, stop or StopPolicy.auto(), field)
    table = dims(pres, GradingKind.STAR_DEGREE)
    logging.info("  Combinatorial algebra of %s over %s: total %d", q.name, field.name, table.total)
    return pres, table


def multiply(x: PathElement, y: PathElement, pres: QuotientPresentation) -> PathElement:
    """The product x∘y in the quotient; zero for non-composable paths."""
    return normal_form(x.compose(y), pres)
