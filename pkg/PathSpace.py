"""Paths, Path Elements and the Graded Quotient Engine for Preproj-Verify"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from enums import GradingKind, StopMode
from errors import (DegreeOutOfRangeError, InputError, NeedsExplicitBoundError, RelationError,
                    ShapeMismatchError)
from PreprojConstants import *
from QuiverModel import Arrow, DoubledQuiver, Quiver, classify
from ScalarField import ScalarField, entries, quotient_basis


def as_quiver(q) -> Quiver:
    """The underlying Quiver of a Quiver, DoubledQuiver or mesh window."""
    if isinstance(q, Quiver):
        return q
    return q.quiver


# ========================================
# PATHS
# ========================================

@dataclass(frozen=True)
class Path:
    """
    A path in a quiver, arrows stored in composition order.

    Composition is right-to-left: ``b∘a`` means "first a, then b", so
    ``arrows[0]`` is traversed last, the source is the source of
    ``arrows[-1]`` and the target is the target of ``arrows[0]``.
    An empty arrow tuple is the trivial path e_i at ``source``.
    """
    arrows: Tuple[str, ...]
    source: str
    target: str
    star_degree: int = 0

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @classmethod
    def trivial(cls, vertex: str) -> 'Path':
        return cls((), vertex, vertex, 0)

    @classmethod
    def from_arrow(cls, arrow: Arrow) -> 'Path':
        return cls((arrow.name,), arrow.source, arrow.target, int(arrow.starred))

    @classmethod
    def of(cls, q, names: Sequence[str]) -> 'Path':
        """
        Build a path from arrow names given in composition order.

        Args:
            q: The quiver the arrows belong to
            names: Arrow names, leftmost applied last

        Returns:
            The path
        """
        quiver = as_quiver(q)
        if not names:
            raise ShapeMismatchError("use Path.trivial for paths of length 0")
        path = cls.from_arrow(quiver.arrow(names[-1]))
        for name in reversed(names[:-1]):
            step = cls.from_arrow(quiver.arrow(name))
            composed = step.compose(path)
            if composed is None:
                raise ShapeMismatchError(f"arrows {' ∘ '.join(names)} do not compose")
            path = composed
        return path

    def compose(self, other: 'Path') -> Optional['Path']:
        """self ∘ other, or None when other does not end where self starts."""
        if other.target != self.source:
            return None
        return Path(self.arrows + other.arrows, other.source, self.target,
                    self.star_degree + other.star_degree)

    def sort_key(self) -> Tuple:
        return (self.length, self.arrows, self.source)

    def __str__(self) -> str:
        if self.is_trivial:
            return f"e_{self.source}"
        return '∘'.join(self.arrows)


class PathElement:
    """A finite linear combination of paths with exact coefficients."""

    def __init__(self, field: ScalarField, terms: Optional[Dict[Path, object]] = None):
        self.field = field
        self.terms: Dict[Path, object] = {}
        for path, coefficient in (terms or {}).items():
            if not field.is_zero(coefficient):
                self.terms[path] = coefficient

    @classmethod
    def zero(cls, field: ScalarField) -> 'PathElement':
        return cls(field)

    @classmethod
    def from_path(cls, field: ScalarField, path: Path, coefficient=None) -> 'PathElement':
        return cls(field, {path: field.one if coefficient is None else field(coefficient)})

    @classmethod
    def from_arrows(cls, field: ScalarField, q, names: Sequence[str], coefficient=None) -> 'PathElement':
        return cls.from_path(field, Path.of(q, names), coefficient)

    def _accumulate(self, pairs: Iterable[Tuple[Path, object]]) -> 'PathElement':
        totals: Dict[Path, object] = {}
        for path, coefficient in pairs:
            totals[path] = totals.get(path, self.field.zero) + coefficient
        return PathElement(self.field, totals)

    def __add__(self, other: 'PathElement') -> 'PathElement':
        return self._accumulate(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: 'PathElement') -> 'PathElement':
        return self + (-other)

    def __neg__(self) -> 'PathElement':
        return PathElement(self.field, {p: -c for p, c in self.terms.items()})

    def scale(self, scalar) -> 'PathElement':
        factor = self.field(scalar)
        return PathElement(self.field, {p: c * factor for p, c in self.terms.items()})

    def compose(self, other: 'PathElement') -> 'PathElement':
        """Bilinear extension of path composition: self ∘ other."""
        pairs = []
        for left, a in self.terms.items():
            for right, b in other.terms.items():
                product = left.compose(right)
                if product is not None:
                    pairs.append((product, a * b))
        return self._accumulate(pairs)

    def map_coefficients(self, weight: Callable[[Path], object]) -> 'PathElement':
        """Multiply every term by a path-dependent scalar."""
        return PathElement(self.field, {p: c * weight(p) for p, c in self.terms.items()})

    def coefficient(self, path: Path):
        return self.terms.get(path, self.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def paths(self) -> List[Path]:
        return sorted(self.terms, key=Path.sort_key)

    def signatures(self) -> set:
        """The (source, target, length, star_degree) of every term."""
        return {(p.source, p.target, p.length, p.star_degree) for p in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.signatures()) <= 1

    def __eq__(self, other) -> bool:
        return isinstance(other, PathElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for path in self.paths():
            coefficient = self.field.to_text(self.terms[path])
            if coefficient == '1':
                parts.append(str(path))
            elif coefficient == '-1':
                parts.append(f"-{path}")
            else:
                parts.append(f"{coefficient}·{path}")
        return ' + '.join(parts).replace('+ -', '- ')

    def __repr__(self) -> str:
        return f"PathElement({self})"


# ========================================
# FREE PATH COMBINATORICS
# ========================================

def enumerate_paths(q, i: str, j: str, length: int) -> List[Path]:
    """
    All paths from i to j with exactly ``length`` arrows.

    Args:
        q: Quiver, DoubledQuiver or window
        i: Source vertex
        j: Target vertex
        length: Number of arrows, at least 0

    Returns:
        The paths, ordered by arrow-name sequence
    """
    quiver = as_quiver(q)
    quiver.check_vertex(i)
    quiver.check_vertex(j)
    if length < 0:
        raise ShapeMismatchError("path length must be non-negative")

    frontier = [Path.trivial(i)]
    for _ in range(length):
        frontier = [Path.from_arrow(arrow).compose(path)
                    for path in frontier
                    for arrow in quiver.arrows_from(path.target)]
    return sorted((p for p in frontier if p.target == j), key=Path.sort_key)


def path_counts(q, i: str, j: str, length: int) -> int:
    """Number of paths i → j of the given length, from powers of the adjacency matrix."""
    quiver = as_quiver(q)
    quiver.check_vertex(i)
    quiver.check_vertex(j)
    n = len(quiver.vertices)
    adjacency = np.zeros((n, n), dtype=object)
    for arrow in quiver.arrows:
        adjacency[quiver.index[arrow.source], quiver.index[arrow.target]] += 1
    power = np.identity(n, dtype=object)
    for _ in range(length):
        power = power.dot(adjacency)
    return int(power[quiver.index[i], quiver.index[j]])


# ========================================
# DIMENSION TABLES
# ========================================

class GradedDimTable:
    """
    Dimensions of the pieces e_j·Λ·e_i, keyed by (i, j, p) with i the source
    and j the target. Only nonzero entries are stored.
    """

    def __init__(self, grading: GradingKind, entries: Dict[Tuple[str, str, int], int],
                 vertex_order: Sequence[str] = ()):
        """
        Initialize the table.

        Args:
            grading: Which degree p refers to
            entries: Map (i, j, p) -> dimension; zero entries are dropped
            vertex_order: Order used for sorting entries; unknown vertices sort after, by name
        """
        self.grading = grading
        self.vertex_order: Tuple[str, ...] = tuple(vertex_order)
        self._rank = {v: k for k, v in enumerate(self.vertex_order)}
        nonzero = {key: dim for key, dim in entries.items() if dim}
        for key, dim in nonzero.items():
            if dim < 0:
                raise ShapeMismatchError(f"negative dimension at {key}")
        self.entries: Dict[Tuple[str, str, int], int] = {
            key: nonzero[key] for key in sorted(nonzero, key=self._entry_key)}

    def _vertex_key(self, vertex: str) -> Tuple:
        return (0, self._rank[vertex], '') if vertex in self._rank else (1, 0, vertex)

    def _entry_key(self, key: Tuple[str, str, int]) -> Tuple:
        i, j, p = key
        return (p, self._vertex_key(i), self._vertex_key(j))

    def _location_key(self, key: Tuple[str, str, int]) -> Tuple:
        i, j, p = key
        return (self._vertex_key(i), self._vertex_key(j), p)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def get(self, i: str, j: str, p: int) -> int:
        return self.entries.get((i, j, p), 0)

    @property
    def max_degree(self) -> int:
        return max((p for _, _, p in self.entries), default=-1)

    def degree_totals(self) -> Dict[int, int]:
        totals: Dict[int, int] = {}
        for (_, _, p), dim in self.entries.items():
            totals[p] = totals.get(p, 0) + dim
        return dict(sorted(totals.items()))

    def restrict(self, degree: int) -> Dict[Tuple[str, str], int]:
        return {(i, j): dim for (i, j, p), dim in self.entries.items() if p == degree}

    def first_difference(self, other: 'GradedDimTable') -> Optional[Tuple[Tuple[str, str, int], int, int]]:
        """
        The first entry, ordered by (i, j, p), where two tables differ.

        Returns:
            ((i, j, p), this dimension, other dimension), or None when equal
        """
        keys = set(self.entries) | set(other.entries)
        for key in sorted(keys, key=self._location_key):
            mine, theirs = self.entries.get(key, 0), other.entries.get(key, 0)
            if mine != theirs:
                return key, mine, theirs
        return None

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedDimTable) and self.grading == other.grading
                and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"GradedDimTable({self.grading.value}, total={self.total})"

    def to_json_dict(self) -> dict:
        return {
            "grading": self.grading.value,
            "entries": [{"i": i, "j": j, "p": p, "dim": dim}
                        for (i, j, p), dim in self.entries.items()],
            "total": self.total,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> 'GradedDimTable':
        order: List[str] = []
        table_entries = {}
        for item in data["entries"]:
            for vertex in (item["i"], item["j"]):
                if vertex not in order:
                    order.append(vertex)
            table_entries[(item["i"], item["j"], int(item["p"]))] = int(item["dim"])
        table = cls(GradingKind(data["grading"]), {}, order)
        # Keep the serialized entry order so re-serialization is byte-identical.
        table.entries = {key: dim for key, dim in table_entries.items() if dim}
        if data.get("total", table.total) != table.total:
            raise ShapeMismatchError("table total does not match its entries")
        return table

    def to_text(self) -> str:
        """Aligned text table: one row per nonzero entry, then totals per degree."""
        header = ("p", "i", "j", "dim")
        rows = [(str(p), i, j, str(dim)) for (i, j, p), dim in self.entries.items()]
        widths = [max(len(r[k]) for r in [header] + rows) for k in range(4)]
        lines = ['  '.join(cell.rjust(widths[k]) for k, cell in enumerate(header))]
        lines.append('  '.join('-' * w for w in widths))
        for row in rows:
            lines.append('  '.join(cell.rjust(widths[k]) for k, cell in enumerate(row)))
        totals = ', '.join(f"{p}: {n}" for p, n in self.degree_totals().items())
        lines.append(f"grading {self.grading.value}; per degree {{{totals}}}; total {self.total}")
        return '\n'.join(lines)


# ========================================
# GRADED QUOTIENTS
# ========================================

@dataclass(frozen=True)
class StopPolicy:
    """When graded_quotient stops: at the first vanishing degree, or at a fixed bound."""
    mode: StopMode
    max_degree: Optional[int] = None

    @classmethod
    def auto(cls) -> 'StopPolicy':
        return cls(StopMode.AUTO)

    @classmethod
    def bounded(cls, max_degree: int) -> 'StopPolicy':
        if max_degree < 0:
            raise InputError("max degree must be non-negative")
        return cls(StopMode.MAX_DEGREE, max_degree)


@dataclass
class Component:
    """One piece (source i, target z, length d) of a graded quotient."""
    candidates: List[Path]
    basis: List[Path]
    # reduction[c] = coordinates of candidate c over the basis
    reduction: List[List] = dataclass_field(default_factory=list)
    candidate_index: Dict[Path, int] = dataclass_field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.basis)


class QuotientPresentation:
    """
    A path algebra modulo a homogeneous ideal, computed length by length.

    For each source i, target z and length d the presentation keeps a basis
    of non-pivot paths and the reduction of every candidate path onto it.
    """

    def __init__(self, q, relations: List[PathElement], field: ScalarField,
                 stop: StopPolicy, sources: Sequence[str]):
        self.source_quiver = q
        self.quiver = as_quiver(q)
        self.relations = relations
        self.field = field
        self.stop = stop
        self.sources: Tuple[str, ...] = tuple(sources)
        self.components: Dict[Tuple[str, str, int], Component] = {}
        self.computed_degree = -1
        self.vanishes_beyond = False
        self._nf_cache: Dict[Path, List] = {}

    def component(self, i: str, z: str, d: int) -> Component:
        return self.components.get((i, z, d)) or Component([], [])

    def dimension(self, i: str, j: str, d: int) -> int:
        return self.component(i, j, d).dimension

    def basis_at(self, i: str, j: str, d: int) -> List[Path]:
        return list(self.component(i, j, d).basis)

    def basis(self, i: str, j: str) -> List[Path]:
        """Basis of e_j·Λ·e_i across all computed lengths."""
        return [p for d in range(self.computed_degree + 1) for p in self.basis_at(i, j, d)]

    def ideal_dimension(self, i: str, j: str, d: int) -> int:
        return path_counts(self.quiver, i, j, d) - self.dimension(i, j, d)

    def degree_is_zero(self, d: int) -> bool:
        return all(not self.dimension(i, z, d) for i in self.sources for z in self.quiver.vertices)

    # ----------------------------------------
    # Construction
    # ----------------------------------------

    def _build_degree(self, d: int):
        quiver = self.quiver
        for i in self.sources:
            for z in quiver.vertices:
                if d == 0:
                    if z == i:
                        trivial = Path.trivial(i)
                        self.components[(i, z, 0)] = Component(
                            [trivial], [trivial], [[self.field.one]], {trivial: 0})
                    continue
                self._build_component(i, z, d)
        self.computed_degree = d

    def _build_component(self, i: str, z: str, d: int):
        field = self.field
        candidates = []
        for arrow in self.quiver.arrows_into(z):
            step = Path.from_arrow(arrow)
            for lower in self.component(i, arrow.source, d - 1).basis:
                candidates.append(step.compose(lower))
        if not candidates:
            return
        candidates.sort(key=Path.sort_key)
        index = {path: k for k, path in enumerate(candidates)}

        rows = []
        for relation in self.relations:
            sample = next(iter(relation.terms))
            if sample.target != z or sample.length > d:
                continue
            for lower in self.component(i, sample.source, d - sample.length).basis:
                row = [field.zero] * len(candidates)
                for path, coefficient in relation.terms.items():
                    head = self.quiver.arrow(path.arrows[0])
                    tail = Path(path.arrows[1:] + lower.arrows, lower.source, head.source,
                                path.star_degree + lower.star_degree - int(head.starred))
                    below = self.component(i, head.source, d - 1).basis
                    step = Path.from_arrow(head)
                    for coordinate, basis_path in zip(self.nf_coords(tail), below):
                        if not field.is_zero(coordinate):
                            row[index[step.compose(basis_path)]] += coefficient * coordinate
                if any(not field.is_zero(x) for x in row):
                    rows.append(row)

        free, projection = quotient_basis(rows, len(candidates), field)
        projection_rows = entries(projection)
        reduction = [[projection_rows[position][k] for position in range(len(free))]
                     for k in range(len(candidates))]

        basis = [candidates[k] for k in free]
        self.components[(i, z, d)] = Component(candidates, basis, reduction, index)
        logging.debug("    Component %s -> %s length %d: %d candidates, dim %d",
                      i, z, d, len(candidates), len(basis))

    # ----------------------------------------
    # Normal forms
    # ----------------------------------------

    def nf_coords(self, path: Path) -> List:
        """Coordinates of the class of a path over basis_at(source, target, length)."""
        if path in self._nf_cache:
            return self._nf_cache[path]
        self._check_range(path)
        component = self.component(path.source, path.target, path.length)
        if path.length == 0 or not component.basis:
            coordinates = [self.field.one] if path.length == 0 else []
            self._nf_cache[path] = coordinates
            return coordinates

        head = self.quiver.arrow(path.arrows[0])
        tail = Path(path.arrows[1:], path.source, head.source, path.star_degree - int(head.starred))
        step = Path.from_arrow(head)
        below = self.component(path.source, head.source, path.length - 1).basis
        coordinates = [self.field.zero] * component.dimension
        for coordinate, basis_path in zip(self.nf_coords(tail), below):
            if self.field.is_zero(coordinate):
                continue
            for k, value in enumerate(component.reduction[component.candidate_index[step.compose(basis_path)]]):
                coordinates[k] += coordinate * value
        self._nf_cache[path] = coordinates
        return coordinates

    def _check_range(self, path: Path):
        if path.source not in self.sources:
            raise DegreeOutOfRangeError(f"source {path.source} was not computed")
        if path.length > self.computed_degree and not self.vanishes_beyond:
            raise DegreeOutOfRangeError(
                f"length {path.length} beyond computed degree {self.computed_degree}")

    def reduce(self, x: PathElement) -> PathElement:
        result: Dict[Path, object] = {}
        for path, coefficient in x.terms.items():
            if path.length > self.computed_degree:
                self._check_range(path)
                continue
            basis = self.basis_at(path.source, path.target, path.length)
            for value, basis_path in zip(self.nf_coords(path), basis):
                result[basis_path] = result.get(basis_path, self.field.zero) + coefficient * value
        return PathElement(self.field, result)


def _check_relations(relations: Iterable[PathElement]) -> List[PathElement]:
    checked = []
    for relation in relations:
        if relation.is_zero():
            logging.debug("    Dropping zero relation")
            continue
        if not relation.is_homogeneous():
            raise RelationError(f"relation {relation} is not homogeneous")
        if next(iter(relation.terms)).length < 1:
            raise RelationError(f"relation {relation} has length 0")
        checked.append(relation)
    return checked


def graded_quotient(q, relations: List[PathElement], stop: StopPolicy = None,
                    field: Optional[ScalarField] = None,
                    sources: Optional[Sequence[str]] = None) -> QuotientPresentation:
    """
    Compute the quotient of the path algebra by the ideal generated by relations.

    Args:
        q: Quiver, DoubledQuiver or window
        relations: Homogeneous relations of length at least 1
        stop: StopPolicy.auto() (Dynkin only) or StopPolicy.bounded(N)
        field: Scalar field; taken from the relations when omitted
        sources: Restrict to components e_j·Λ·e_i with i in sources

    Returns:
        The computed presentation
    """
    stop = stop or StopPolicy.auto()
    quiver = as_quiver(q)
    relations = _check_relations(relations)
    if field is None:
        field = relations[0].field if relations else ScalarField()

    if stop.mode is StopMode.AUTO:
        base = q.base if isinstance(q, DoubledQuiver) else quiver
        if not classify(base).is_dynkin:
            raise NeedsExplicitBoundError(
                f"quiver {base.name} is not Dynkin: pass an explicit maximum degree")
        bound = AUTO_DEGREE_CAP
    else:
        bound = stop.max_degree

    if sources is None:
        sources = quiver.vertices
    for vertex in sources:
        quiver.check_vertex(vertex)

    pres = QuotientPresentation(q, relations, field, stop, sources)
    for d in range(bound + 1):
        pres._build_degree(d)
        size = sum(pres.dimension(i, z, d) for i in pres.sources for z in quiver.vertices)
        logging.info("  Length %d: %d basis classes", d, size)
        if size == 0:
            pres.vanishes_beyond = True
            break
    else:
        if stop.mode is StopMode.AUTO:
            raise NeedsExplicitBoundError(f"no vanishing degree up to {AUTO_DEGREE_CAP}")
    return pres


def normal_form(x: PathElement, pres: QuotientPresentation) -> PathElement:
    """
    The representative of x over the stored basis; zero exactly when x lies in the ideal.

    Args:
        x: A combination of paths within the computed range
        pres: The presentation

    Returns:
        The normal form
    """
    return pres.reduce(x)


def dims(pres: QuotientPresentation, grading: GradingKind = GradingKind.STAR_DEGREE) -> GradedDimTable:
    """
    Dimension table of a presentation.

    Args:
        pres: A computed presentation
        grading: STAR_DEGREE counts basis paths by starred arrows, PATH_LENGTH by length

    Returns:
        The table keyed by (source, target, degree)
    """
    counts: Dict[Tuple[str, str, int], int] = {}
    for (i, z, d), component in pres.components.items():
        for path in component.basis:
            p = path.star_degree if grading is GradingKind.STAR_DEGREE else d
            counts[(i, z, p)] = counts.get((i, z, p), 0) + 1
    return GradedDimTable(grading, counts, pres.quiver.vertices)


# ========================================
# CHECK RESULTS
# ========================================

@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification step. Failures are data, never exceptions."""
    name: str
    passed: bool
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def compare_tables(name: str, left: GradedDimTable, right: GradedDimTable) -> CheckResult:
    """Entrywise table equality, naming the first differing (i, j, p) on failure."""
    difference = left.first_difference(right)
    if difference is None:
        return CheckResult(name, True, f"tables agree, total {left.total}")
    (i, j, p), mine, theirs = difference
    return CheckResult(name, False, f"first difference at i={i}, j={j}, p={p}: {mine} != {theirs}")
