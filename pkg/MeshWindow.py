"""Translation Quiver Windows, Mesh Categories and the Covering Functor"""

import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from enums import GradingKind
from errors import CyclicQuiverError, NeedsExplicitBoundError, WindowError
from PathSpace import (CheckResult, GradedDimTable, Path, PathElement, QuotientPresentation,
                       StopPolicy, compare_tables, graded_quotient, normal_form)
from PreprojConstants import *
from PreprojectiveRelations import QAssignment, lambda_co, sign_free_relation_at
from QuiverModel import Arrow, Quiver, classify, dot_quote, double
from ScalarField import ScalarField
from ScalingEquivalence import solve_scaling, verify_scaling

Position = Tuple[int, str]


def vertex_id(n: int, i: str) -> str:
    return f"({n},{i})"


def arrow_id(n: int, name: str) -> str:
    return f"({n},{name})"


@dataclass
class MeshRelation:
    """The mesh m_z = Σ a∘σ(a) over the arrows a ending at z."""
    vertex: str
    element: PathElement


class TranslationWindow:
    """
    Columns p_min..p_max of the translation quiver ℤQ.

    Vertex (n, i) carries arrows (n, α): (n, s(α)) → (n, t(α)) and
    (n, α*): (n, t(α)) → (n+1, s(α)); τ(n, i) = (n−1, i).
    """

    def __init__(self, base: Quiver, p_min: int, p_max: int, field: ScalarField):
        self.base = base
        self.p_min = p_min
        self.p_max = p_max
        self.field = field
        self.position: Dict[str, Position] = {}
        self.pi_arrow: Dict[str, str] = {}
        self.sigma: Dict[str, str] = {}
        self.meshes: List[MeshRelation] = []
        self._presentations: Dict[Tuple[str, ...], QuotientPresentation] = {}

        vertices = []
        for n in range(p_min, p_max + 1):
            for i in base.vertices:
                vid = vertex_id(n, i)
                vertices.append(vid)
                self.position[vid] = (n, i)

        arrows = []
        for n in range(p_min, p_max + 1):
            for alpha in base.arrows:
                name = arrow_id(n, alpha.name)
                arrows.append(Arrow(name, vertex_id(n, alpha.source), vertex_id(n, alpha.target)))
                self.pi_arrow[name] = alpha.name
                if n - 1 >= p_min:
                    self.sigma[name] = arrow_id(n - 1, alpha.name + STAR_SUFFIX)
            if n < p_max:
                for alpha in base.arrows:
                    name = arrow_id(n, alpha.name + STAR_SUFFIX)
                    arrows.append(Arrow(name, vertex_id(n, alpha.target),
                                        vertex_id(n + 1, alpha.source), starred=True))
                    self.pi_arrow[name] = alpha.name + STAR_SUFFIX
                    self.sigma[name] = arrow_id(n, alpha.name)

        self.quiver = Quiver(vertices, arrows, f"Z{base.name}[{p_min},{p_max}]")
        self._build_meshes()

    def _build_meshes(self):
        for vid in self.quiver.vertices:
            n, _ = self.position[vid]
            if n - 1 < self.p_min:
                continue
            terms = PathElement.zero(self.field)
            for arrow in self.quiver.arrows_into(vid):
                mesh_path = Path.of(self.quiver, [arrow.name, self.sigma[arrow.name]])
                terms = terms + PathElement.from_path(self.field, mesh_path)
            if not terms.is_zero():
                self.meshes.append(MeshRelation(vid, terms))

    def vertex(self, n: int, i: str) -> str:
        vid = vertex_id(n, i)
        if vid not in self.position:
            raise WindowError(f"vertex ({n},{i}) lies outside columns [{self.p_min},{self.p_max}]")
        return vid

    def tau(self, vid: str) -> str:
        if vid not in self.position:
            raise WindowError(f"unknown window vertex {vid}")
        n, i = self.position[vid]
        return self.vertex(n - 1, i)

    def mesh_elements(self) -> List[PathElement]:
        return [mesh.element for mesh in self.meshes]

    def longest_path_length(self) -> int:
        return nx.dag_longest_path_length(nx.DiGraph(self.quiver.graph()))

    def presentation(self, sources: Tuple[str, ...]) -> QuotientPresentation:
        """Mesh-category quotient for the given source vertices, computed once per source set."""
        if sources not in self._presentations:
            stop = StopPolicy.bounded(self.longest_path_length())
            self._presentations[sources] = graded_quotient(
                self, self.mesh_elements(), stop, self.field, sources)
        return self._presentations[sources]

    def to_dot(self) -> str:
        """Columns left to right; meshes drawn as dashed edges z → τz."""
        lines = [f"digraph {dot_quote(self.quiver.name)} {{", f"    rankdir={DOT_WINDOW_RANKDIR};"]
        for n in range(self.p_min, self.p_max + 1):
            members = ' '.join(dot_quote(vertex_id(n, i)) + ';' for i in self.base.vertices)
            lines.append(f"    {{ rank=same; {members} }}")
        for arrow in self.quiver.arrows:
            lines.append(f"    {dot_quote(arrow.source)} -> {dot_quote(arrow.target)} "
                         f"[label={dot_quote(arrow.name)}];")
        for mesh in self.meshes:
            lines.append(f"    {dot_quote(mesh.vertex)} -> {dot_quote(self.tau(mesh.vertex))} "
                         f"[style={DOT_TAU_EDGE_STYLE}, color={DOT_TAU_EDGE_COLOR}, constraint=false];")
        lines.append("}")
        return '\n'.join(lines) + '\n'

    def __repr__(self) -> str:
        return (f"TranslationWindow({self.base.name}, columns [{self.p_min},{self.p_max}], "
                f"{len(self.quiver.vertices)} vertices, {len(self.meshes)} meshes)")


def build_window(q: Quiver, p_max: int, p_min: int = 0, field: Optional[ScalarField] = None) -> TranslationWindow:
    """
    Build the columns p_min..p_max of ℤQ with every mesh that fits.

    Args:
        q: An acyclic quiver
        p_max: Last column
        p_min: First column (negative to look at negative degrees)
        field: Coefficient field of the mesh relations

    Returns:
        The window
    """
    if not classify(q).is_acyclic:
        raise CyclicQuiverError(f"quiver {q.name} has a directed cycle")
    if p_max < p_min:
        raise WindowError(f"empty column range [{p_min},{p_max}]")
    window = TranslationWindow(q, p_min, p_max, field or ScalarField())
    logging.info("  Built window %r", window)
    return window


def sigma_violations(w: TranslationWindow) -> List[str]:
    """Vertices x with τx in the window where σ fails to biject arrows into x onto arrows out of τx."""
    violations = []
    for vid in w.quiver.vertices:
        n, i = w.position[vid]
        if n - 1 < w.p_min:
            continue
        images = [w.sigma.get(a.name) for a in w.quiver.arrows_into(vid)]
        expected = sorted(a.name for a in w.quiver.arrows_from(w.tau(vid)))
        if None in images or sorted(images) != expected:
            violations.append(vid)
    return violations


def _as_position(w: TranslationWindow, point) -> str:
    if isinstance(point, tuple):
        n, i = point
        return w.vertex(n, i)
    if point not in w.position:
        raise WindowError(f"unknown window vertex {point}")
    return point


def mesh_hom(w: TranslationWindow, source, target) -> Tuple[int, List[Path]]:
    """
    Morphisms between two window vertices in the mesh category.

    Args:
        w: The window
        source: (n, i) or a window vertex id
        target: (p, j) or a window vertex id

    Returns:
        Tuple of (dimension, basis paths)
    """
    start = _as_position(w, source)
    end = _as_position(w, target)
    pres = w.presentation((start,))
    basis = pres.basis(start, end)
    return len(basis), basis


def _window_table(w: TranslationWindow, pres: QuotientPresentation, last: int) -> GradedDimTable:
    counts: Dict[Tuple[str, str, int], int] = {}
    for i in w.base.vertices:
        for p in range(last + 1):
            for j in w.base.vertices:
                counts[(i, j, p)] = len(pres.basis(vertex_id(0, i), vertex_id(p, j)))
    return GradedDimTable(GradingKind.STAR_DEGREE, counts, w.base.vertices)


def mesh_presentation(q: Quiver, p_max: Optional[int] = None,
                      field: Optional[ScalarField] = None
                      ) -> Tuple[TranslationWindow, QuotientPresentation, GradedDimTable]:
    """
    Window, mesh quotient from column 0 and the dimension table.

    With p_max omitted the window grows until some column p has no nonzero
    Hom from column 0; the table then holds the degrees below p.
    """
    field = field or ScalarField()
    if p_max is not None:
        w = build_window(q, p_max, 0, field)
        pres = w.presentation(tuple(vertex_id(0, i) for i in q.vertices))
        return w, pres, _window_table(w, pres, p_max)

    if not classify(q).is_dynkin:
        raise NeedsExplicitBoundError(f"quiver {q.name} is not Dynkin: pass an explicit window")
    columns = max(len(q.vertices), 1)
    while columns <= AUTO_DEGREE_CAP:
        w = build_window(q, columns, 0, field)
        pres = w.presentation(tuple(vertex_id(0, i) for i in q.vertices))
        table = _window_table(w, pres, columns)
        totals = table.degree_totals()
        vanishing = next((p for p in range(columns + 1) if not totals.get(p)), None)
        if vanishing is not None:
            logging.info("  Mesh category of %s vanishes from degree %d", q.name, vanishing)
            return w, pres, _window_table(w, pres, vanishing - 1)
        columns *= 2
    raise NeedsExplicitBoundError(f"no vanishing degree up to {AUTO_DEGREE_CAP}")


def lambda_ho(q: Quiver, p_max: Optional[int] = None, field: Optional[ScalarField] = None) -> GradedDimTable:
    """
    The homological preprojective algebra as a table: entry (i, j, p) is the
    dimension of Hom((0, i), (p, j)) in the mesh category.

    Args:
        q: The base quiver
        p_max: Last degree; required unless q is Dynkin
        field: Coefficient field

    Returns:
        Star-graded dimension table
    """
    return mesh_presentation(q, p_max, field)[2]


def covering_pi(w: TranslationWindow, x) -> PathElement:
    """
    Collapse columns: (n, i) ↦ i, (n, α) ↦ α, (n, α*) ↦ α*.

    Args:
        w: The window
        x: A window Path or PathElement

    Returns:
        The image over the doubled base quiver
    """
    if isinstance(x, Path):
        x = PathElement.from_path(w.field, x)
    image: Dict[Path, object] = {}
    for path, coefficient in x.terms.items():
        _, source = w.position[path.source]
        _, target = w.position[path.target]
        collapsed = Path(tuple(w.pi_arrow[a] for a in path.arrows), source, target, path.star_degree)
        image[collapsed] = image.get(collapsed, x.field.zero) + coefficient
    return PathElement(x.field, image)


def lift_path(w: TranslationWindow, path: Path, column: int = 0) -> Path:
    """
    The unique window path starting at (column, source) that π maps to a path
    of the doubled quiver.
    """
    n = column
    vid = w.vertex(n, path.source)
    lifted = Path.trivial(vid)
    for name in reversed(path.arrows):
        if name.endswith(STAR_SUFFIX):
            step = arrow_id(n, name)
            n += 1
        else:
            step = arrow_id(n, name)
        if not w.quiver.has_arrow(step):
            raise WindowError(f"lift of {path} leaves the window at column {n}")
        lifted = Path.from_arrow(w.quiver.arrow(step)).compose(lifted)
        if lifted is None:
            raise WindowError(f"{path} is not a path of the doubled quiver")
    return lifted


@dataclass
class CoveringReport:
    """Checks tying the mesh category to the combinatorial algebra."""
    checks: List[CheckResult]
    tables: Dict[str, GradedDimTable] = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def verify_covering_iso(q: Quiver, field: Optional[ScalarField] = None) -> CoveringReport:
    """
    Verify that π identifies the mesh category from column 0 with the
    preprojective algebra.

    Args:
        q: A Dynkin quiver
        field: Coefficient field

    Returns:
        Report: meshes map to sign-free relations, tables agree with q ≡ −1,
        the rescaling bridge to q ≡ 1 holds, and basis paths lift to nonzero classes
    """
    field = field or ScalarField()
    dq = double(q)
    w, mesh_pres, ho_table = mesh_presentation(q, None, field)

    wrong_meshes = []
    for mesh in w.meshes:
        _, i = w.position[mesh.vertex]
        if covering_pi(w, mesh.element) != sign_free_relation_at(dq, i, field):
            wrong_meshes.append(mesh.vertex)
    checks = [CheckResult("meshes map to sign-free relations", not wrong_meshes,
                          f"{len(w.meshes)} meshes" if not wrong_meshes
                          else f"wrong at {', '.join(wrong_meshes)}")]

    sigma_bad = sigma_violations(w)
    checks.append(CheckResult("sigma is bijective", not sigma_bad, ', '.join(sigma_bad)))

    minus_one = QAssignment.constant(q, field, -1)
    one = QAssignment.constant(q, field, 1)
    _, sign_free_table = lambda_co(q, minus_one, field)
    standard_pres, standard_table = lambda_co(q, one, field)
    checks.append(compare_tables("mesh table equals q=-1 table", ho_table, sign_free_table))

    report = verify_scaling(q, minus_one, solve_scaling(q, minus_one))
    checks.append(CheckResult("q=-1 rescaling relations", report.passed,
                              ', '.join(report.failures())))
    checks.append(compare_tables("q=-1 table equals q=1 table", sign_free_table, standard_table))

    missing = []
    for i in q.vertices:
        for j in q.vertices:
            for path in standard_pres.basis(i, j):
                lifted = lift_path(w, path)
                if normal_form(PathElement.from_path(field, lifted), mesh_pres).is_zero():
                    missing.append(str(path))
    checks.append(CheckResult("basis paths lift to nonzero mesh classes", not missing,
                              ', '.join(missing)))

    return CoveringReport(checks, {"ho": ho_table, "co(q=-1)": sign_free_table,
                                   "co(q=1)": standard_table})
