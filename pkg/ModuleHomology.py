"""Representations, Hom and Ext Solvers, and the Tensor Preprojective Algebra"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from enums import GradingKind
from errors import CyclicQuiverError, NeedsExplicitBoundError, ShapeMismatchError
from PathSpace import GradedDimTable, Path
from PreprojConstants import *
from QuiverModel import Arrow, Quiver, classify
from ScalarField import (ScalarField, entries, kernel, kron, matmul, matrices_equal,
                         quotient_basis, rref, solve, transpose)


def all_paths(q: Quiver) -> List[Path]:
    """Every path of an acyclic quiver, trivial ones included, in canonical order."""
    if not classify(q).is_acyclic:
        raise CyclicQuiverError(f"quiver {q.name} has a directed cycle: paths are unbounded")
    paths = [Path.trivial(v) for v in q.vertices]
    frontier = list(paths)
    while frontier:
        frontier = [Path.from_arrow(arrow).compose(path)
                    for path in frontier for arrow in q.arrows_from(path.target)]
        paths.extend(frontier)
    return sorted(paths, key=Path.sort_key)


# ========================================
# REPRESENTATIONS AND MAPS
# ========================================

class Representation:
    """
    A right module over the path algebra, as a representation.

    For an arrow γ: u → v the action matrix has shape (dim at u, dim at v):
    it sends the space at v to the space at u, matching x ↦ x·γ.
    """

    def __init__(self, quiver: Quiver, field: ScalarField, dims: Dict[str, int],
                 maps: Optional[Dict[str, DomainMatrix]] = None,
                 basis: Optional[Dict[str, List]] = None, name: str = "M"):
        self.quiver = quiver
        self.field = field
        self.name = name
        self.dims = {v: dims.get(v, 0) for v in quiver.vertices}
        self.maps: Dict[str, DomainMatrix] = {}
        for arrow in quiver.arrows:
            shape = (self.dims[arrow.source], self.dims[arrow.target])
            matrix = (maps or {}).get(arrow.name)
            if matrix is None:
                matrix = field.zeros(*shape)
            if matrix.shape != shape:
                raise ShapeMismatchError(
                    f"{name}: action of {arrow.name} has shape {matrix.shape}, expected {shape}")
            self.maps[arrow.name] = matrix
        self.basis = basis or {}

    def dimension_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dimension(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dimension == 0

    def path_action(self, path: Path) -> DomainMatrix:
        """Matrix of x ↦ x·path, from the space at the target to the space at the source."""
        result = self.field.identity(self.dims[path.source])
        for name in reversed(path.arrows):
            result = matmul(result, self.maps[name])
        return result

    def __repr__(self) -> str:
        return f"Representation({self.name}: {self.dimension_vector()})"


class ModuleMap:
    """A morphism of representations: one matrix per vertex, shape (dim target, dim source)."""

    def __init__(self, source: Representation, target: Representation,
                 components: Dict[str, DomainMatrix]):
        self.source = source
        self.target = target
        self.components = {}
        for v in source.quiver.vertices:
            shape = (target.dims[v], source.dims[v])
            matrix = components.get(v)
            if matrix is None:
                matrix = source.field.zeros(*shape)
            if matrix.shape != shape:
                raise ShapeMismatchError(f"map component at {v} has shape {matrix.shape}, expected {shape}")
            self.components[v] = matrix

    @classmethod
    def from_vector(cls, source: Representation, target: Representation, vector: Sequence) -> 'ModuleMap':
        components = {}
        offset = 0
        for v in source.quiver.vertices:
            rows, cols = target.dims[v], source.dims[v]
            block = [list(vector[offset + r * cols: offset + (r + 1) * cols]) for r in range(rows)]
            components[v] = source.field.raw_matrix(block, rows, cols)
            offset += rows * cols
        return cls(source, target, components)

    def to_vector(self) -> List:
        vector = []
        for v in self.source.quiver.vertices:
            for row in entries(self.components[v]):
                vector.extend(row)
        return vector

    def compose(self, other: 'ModuleMap') -> 'ModuleMap':
        """self ∘ other."""
        return ModuleMap(other.source, self.target,
                         {v: matmul(self.components[v], other.components[v])
                          for v in self.source.quiver.vertices})

    def failures(self) -> List[str]:
        """Arrows γ: u → v where N_γ·f_v differs from f_u·M_γ."""
        bad = []
        for arrow in self.source.quiver.arrows:
            u, v = arrow.source, arrow.target
            left = matmul(self.target.maps[arrow.name], self.components[v])
            right = matmul(self.components[u], self.source.maps[arrow.name])
            if not matrices_equal(left, right):
                bad.append(arrow.name)
        return bad

    def is_valid(self) -> bool:
        return not self.failures()


def direct_sum(reps: Sequence[Representation], name: str = "M") -> Representation:
    """Direct sum; the summand names are kept in ``summands``."""
    first = reps[0]
    field, quiver = first.field, first.quiver
    dims = {v: sum(r.dims[v] for r in reps) for v in quiver.vertices}
    maps = {}
    for arrow in quiver.arrows:
        rows = [[field.zero] * dims[arrow.target] for _ in range(dims[arrow.source])]
        row_offset = col_offset = 0
        for r in reps:
            block = entries(r.maps[arrow.name])
            for a, line in enumerate(block):
                for b, x in enumerate(line):
                    rows[row_offset + a][col_offset + b] = x
            row_offset += r.dims[arrow.source]
            col_offset += r.dims[arrow.target]
        maps[arrow.name] = field.raw_matrix(rows, dims[arrow.source], dims[arrow.target])
    total = Representation(quiver, field, dims, maps, name=name)
    total.summands = [r.name for r in reps]
    return total


def random_representation(q: Quiver, dims: Dict[str, int], field: ScalarField,
                          rng: random.Random, bound: int = 2) -> Representation:
    """Representation with uniformly random small integer action matrices."""
    maps = {}
    for arrow in q.arrows:
        rows, cols = dims.get(arrow.source, 0), dims.get(arrow.target, 0)
        maps[arrow.name] = field.matrix(
            [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols)
    return Representation(q, field, dims, maps, name="R")


# ========================================
# PROJECTIVES, INJECTIVES, DUAL
# ========================================

def _path_representation(q: Quiver, field: ScalarField, basis: Dict[str, List[Path]],
                         image, name: str) -> Representation:
    """Representation whose basis at each vertex is a list of paths and whose arrows act by ``image``."""
    index = {v: {p.arrows: k for k, p in enumerate(paths)} for v, paths in basis.items()}
    maps = {}
    for arrow in q.arrows:
        u, v = arrow.source, arrow.target
        rows = [[field.zero] * len(basis[v]) for _ in range(len(basis[u]))]
        for col, path in enumerate(basis[v]):
            result = image(arrow, path)
            if result is not None:
                rows[index[u][result.arrows]][col] = field.one
        maps[arrow.name] = field.raw_matrix(rows, len(basis[u]), len(basis[v]))
    dims = {v: len(paths) for v, paths in basis.items()}
    return Representation(q, field, dims, maps, basis, name)


def projective(q: Quiver, i: str, field: Optional[ScalarField] = None) -> Representation:
    """
    P_i = e_i·kQ: at vertex v the paths v → i, an arrow γ acting by p ↦ p∘γ.

    Args:
        q: An acyclic quiver
        i: The vertex
        field: Scalar field, ℚ by default

    Returns:
        The projective representation
    """
    q.check_vertex(i)
    field = field or ScalarField()
    paths = all_paths(q)
    basis = {v: [p for p in paths if p.source == v and p.target == i] for v in q.vertices}
    return _path_representation(q, field, basis,
                                lambda arrow, p: p.compose(Path.from_arrow(arrow)), f"P{i}")


def injective(q: Quiver, i: str, field: Optional[ScalarField] = None) -> Representation:
    """
    I_i = D(kQ·e_i): at vertex v the duals δ_p of paths p: i → v; an arrow γ
    sends δ_p to δ_a when p = γ∘a, and to zero otherwise.
    """
    q.check_vertex(i)
    field = field or ScalarField()
    paths = all_paths(q)
    basis = {v: [p for p in paths if p.source == i and p.target == v] for v in q.vertices}

    def peel(arrow: Arrow, p: Path) -> Optional[Path]:
        if not p.arrows or p.arrows[0] != arrow.name:
            return None
        return Path(p.arrows[1:], i, arrow.source, p.star_degree)
    return _path_representation(q, field, basis, peel, f"I{i}")


def dual_algebra(q: Quiver, field: Optional[ScalarField] = None) -> Representation:
    """D(kQ) as the direct sum of the injectives, in vertex order."""
    field = field or ScalarField()
    return direct_sum([injective(q, i, field) for i in q.vertices], "DA")


def projective_map(source: Representation, target: Representation, arrow: Arrow) -> ModuleMap:
    """P_u → P_v for γ: u → v, sending p to γ∘p."""
    field = source.field
    step = Path.from_arrow(arrow)
    components = {}
    for w in source.quiver.vertices:
        index = {p.arrows: k for k, p in enumerate(target.basis[w])}
        rows = [[field.zero] * len(source.basis[w]) for _ in range(len(target.basis[w]))]
        for col, p in enumerate(source.basis[w]):
            rows[index[step.compose(p).arrows]][col] = field.one
        components[w] = field.raw_matrix(rows, len(target.basis[w]), len(source.basis[w]))
    return ModuleMap(source, target, components)


def injective_map(source: Representation, target: Representation, arrow: Arrow) -> ModuleMap:
    """I_u → I_v for γ: u → v, sending δ_a to δ_p when a = p∘γ."""
    field = source.field
    components = {}
    for w in source.quiver.vertices:
        index = {p.arrows: k for k, p in enumerate(target.basis[w])}
        rows = [[field.zero] * len(source.basis[w]) for _ in range(len(target.basis[w]))]
        for col, a in enumerate(source.basis[w]):
            if a.arrows and a.arrows[-1] == arrow.name:
                rows[index[a.arrows[:-1]]][col] = field.one
        components[w] = field.raw_matrix(rows, len(target.basis[w]), len(source.basis[w]))
    return ModuleMap(source, target, components)


# ========================================
# HOM
# ========================================

@dataclass
class HomSpace:
    """Basis of Hom(M, N) with a coordinate solver."""
    source: Representation
    target: Representation
    basis: List[ModuleMap]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def coordinates(self, f: ModuleMap) -> List:
        """Coordinates of a module map over the basis."""
        if not self.basis:
            return []
        vectors = [b.to_vector() for b in self.basis]
        size = len(vectors[0])
        columns = self.source.field.raw_matrix(
            [[vectors[k][t] for k in range(len(vectors))] for t in range(size)], size, len(vectors))
        solution = solve(columns, f.to_vector())
        if solution is None:
            raise ShapeMismatchError("map is not a module homomorphism")
        return solution


def hom_rep(M: Representation, N: Representation) -> HomSpace:
    """
    All module maps M → N, as the kernel of the commutation equations.

    Args:
        M: Source representation
        N: Target representation

    Returns:
        The Hom space with an exact basis
    """
    field = M.field
    quiver = M.quiver
    offsets = {}
    size = 0
    for v in quiver.vertices:
        offsets[v] = size
        size += N.dims[v] * M.dims[v]

    def unknown(v, a, c):
        return offsets[v] + a * M.dims[v] + c

    rows = []
    for arrow in quiver.arrows:
        u, v = arrow.source, arrow.target
        n_gamma = entries(N.maps[arrow.name])
        m_gamma = entries(M.maps[arrow.name])
        # (N_γ f_v − f_u M_γ)[r][c] = 0
        for r in range(N.dims[u]):
            for c in range(M.dims[v]):
                row = [field.zero] * size
                for a in range(N.dims[v]):
                    row[unknown(v, a, c)] += n_gamma[r][a]
                for b in range(M.dims[u]):
                    row[unknown(u, r, b)] -= m_gamma[b][c]
                rows.append(row)

    if size == 0:
        return HomSpace(M, N, [])
    if rows:
        vectors = kernel(field.raw_matrix(rows, len(rows), size))
    else:
        vectors = [[field.one if k == t else field.zero for k in range(size)] for t in range(size)]
    logging.debug("    Hom(%s, %s): %d unknowns, dimension %d", M.name, N.name, size, len(vectors))
    return HomSpace(M, N, [ModuleMap.from_vector(M, N, vector) for vector in vectors])


# ========================================
# PRESENTATIONS AND EXT
# ========================================

@dataclass
class ProjectivePresentation:
    """0 → K → P0 → M → 0 with P0 = ⊕_v P_v^{dim M_v}."""
    module: Representation
    cover: Representation
    generators: Dict[str, List[Tuple[str, int, Path]]]
    epi: ModuleMap
    kernel: Representation
    inclusion: ModuleMap


def projective_presentation(M: Representation) -> ProjectivePresentation:
    """
    Canonical, generally non-minimal, presentation of M.

    The cover has basis (v, m, p) at w, for p: w → v a path and m < dim M_v;
    it maps onto M by (v, m, p) ↦ e_m·p. The kernel is projective since the
    path algebra of an acyclic quiver is hereditary.
    """
    q, field = M.quiver, M.field
    paths = all_paths(q)
    generators = {w: [(v, m, p) for v in q.vertices for m in range(M.dims[v])
                      for p in paths if p.source == w and p.target == v]
                  for w in q.vertices}
    index = {w: {(v, m, p.arrows): k for k, (v, m, p) in enumerate(gens)}
             for w, gens in generators.items()}

    cover_maps = {}
    for arrow in q.arrows:
        u, w = arrow.source, arrow.target
        step = Path.from_arrow(arrow)
        rows = [[field.zero] * len(generators[w]) for _ in range(len(generators[u]))]
        for col, (v, m, p) in enumerate(generators[w]):
            rows[index[u][(v, m, p.compose(step).arrows)]][col] = field.one
        cover_maps[arrow.name] = field.raw_matrix(rows, len(generators[u]), len(generators[w]))
    dims = {w: len(gens) for w, gens in generators.items()}
    cover = Representation(q, field, dims, cover_maps, name=f"P0({M.name})")

    epi_components = {}
    inclusion_components = {}
    kernel_dims = {}
    for w in q.vertices:
        columns = [[row[m] for row in entries(M.path_action(p))] for v, m, p in generators[w]]
        epi = field.raw_matrix([[columns[k][r] for k in range(len(columns))]
                                for r in range(M.dims[w])], M.dims[w], len(columns))
        epi_components[w] = epi
        vectors = kernel(epi) if len(columns) else []
        kernel_dims[w] = len(vectors)
        inclusion_components[w] = field.raw_matrix(
            [[vectors[k][t] for k in range(len(vectors))] for t in range(len(columns))],
            len(columns), len(vectors))

    kernel_maps = {}
    for arrow in q.arrows:
        u, w = arrow.source, arrow.target
        moved = matmul(cover.maps[arrow.name], inclusion_components[w])
        moved_rows = entries(moved)
        cols = []
        for c in range(kernel_dims[w]):
            solution = solve(inclusion_components[u], [row[c] for row in moved_rows])
            if solution is None:
                raise ShapeMismatchError("kernel of the cover is not a subrepresentation")
            cols.append(solution)
        kernel_maps[arrow.name] = field.raw_matrix(
            [[cols[c][r] for c in range(kernel_dims[w])] for r in range(kernel_dims[u])],
            kernel_dims[u], kernel_dims[w])
    K = Representation(q, field, kernel_dims, kernel_maps, name=f"K({M.name})")

    return ProjectivePresentation(M, cover, generators, ModuleMap(cover, M, epi_components),
                                  K, ModuleMap(K, cover, inclusion_components))


class ExtSpace:
    """
    Ext¹(M, N) as Hom(K, N) modulo restrictions of Hom(P0, N).

    Classes are represented by basis maps K → N spanning a complement of the
    restrictions; ``coordinates`` reads off the class of any map K → N.
    """

    def __init__(self, presentation: ProjectivePresentation, target: Representation):
        self.presentation = presentation
        self.source = presentation.module
        self.target = target
        field = target.field
        self.hom_kernel = hom_rep(presentation.kernel, target)
        hom_cover = hom_rep(presentation.cover, target)

        images = [self.hom_kernel.coordinates(g.compose(presentation.inclusion))
                  for g in hom_cover.basis]
        n, m = self.hom_kernel.dimension, len(images)
        # [B | I]: pivots inside B span the restrictions, pivots inside I complete a basis.
        augmented = [[images[k][t] for k in range(m)] + [field.one if s == t else field.zero
                                                         for s in range(n)]
                     for t in range(n)]
        _, pivots = rref(field.raw_matrix(augmented, n, m + n))
        image_pivots = [p for p in pivots if p < m]
        self.complement = [p - m for p in pivots if p >= m]
        self.image_rank = len(image_pivots)
        frame_columns = [images[k] for k in image_pivots] + [
            [field.one if s == c else field.zero for s in range(n)] for c in self.complement]
        self.frame = field.raw_matrix([[col[t] for col in frame_columns] for t in range(n)], n, n)

    @property
    def dimension(self) -> int:
        return len(self.complement)

    def representative(self, k: int) -> ModuleMap:
        return self.hom_kernel.basis[self.complement[k]]

    def coordinates(self, h: ModuleMap) -> List:
        """Coordinates of the class of h: K → N over the representatives."""
        if not self.dimension:
            return []
        solution = solve(self.frame, self.hom_kernel.coordinates(h))
        return solution[self.image_rank:]


def ext1(M: Representation, N: Representation,
         presentation: Optional[ProjectivePresentation] = None) -> ExtSpace:
    """
    Ext¹(M, N) from the canonical presentation of M.

    Args:
        M: First argument
        N: Second argument
        presentation: Reuse an existing presentation of M

    Returns:
        The Ext space with class representatives and a coordinate solver
    """
    ext = ExtSpace(presentation or projective_presentation(M), N)
    logging.debug("    Ext1(%s, %s) = %d", M.name, N.name, ext.dimension)
    return ext


def _columns_to_matrix(field: ScalarField, columns: List[List], rows: int) -> DomainMatrix:
    return field.raw_matrix([[col[r] for col in columns] for r in range(rows)], rows, len(columns))


def ext_map_second(ext_of_source: ExtSpace, ext_of_target: ExtSpace, g: ModuleMap) -> DomainMatrix:
    """
    Ext¹(M, N) → Ext¹(M, N') induced by g: N → N', composing representatives with g.

    Both spaces must be computed from the same presentation of M.
    """
    columns = [ext_of_target.coordinates(g.compose(ext_of_source.representative(k)))
               for k in range(ext_of_source.dimension)]
    return _columns_to_matrix(g.source.field, columns, ext_of_target.dimension)


def ext_map_first(ext_of_codomain: ExtSpace, ext_of_domain: ExtSpace, f: ModuleMap) -> DomainMatrix:
    """
    Ext¹(M', N) → Ext¹(M, N) induced by f: M → M'.

    The canonical lift of f sends the generator (v, m, p) of the cover of M to
    Σ_k f_v[k][m]·(v, k, p) in the cover of M'; restricted to kernels it
    pulls representatives back.
    """
    field = f.source.field
    domain_pres = ext_of_domain.presentation
    codomain_pres = ext_of_codomain.presentation
    q = f.source.quiver

    f_entries = {v: entries(f.components[v]) for v in q.vertices}
    kernel_components = {}
    for w in q.vertices:
        source_gens = domain_pres.generators[w]
        target_index = {(v, k, p.arrows): t for t, (v, k, p) in enumerate(codomain_pres.generators[w])}
        lift = [[field.zero] * len(source_gens) for _ in range(len(target_index))]
        for col, (v, m, p) in enumerate(source_gens):
            f_v = f_entries[v]
            for k in range(f.target.dims[v]):
                if not field.is_zero(f_v[k][m]):
                    lift[target_index[(v, k, p.arrows)]][col] += f_v[k][m]
        lift_matrix = field.raw_matrix(lift, len(target_index), len(source_gens))
        moved = entries(matmul(lift_matrix, domain_pres.inclusion.components[w]))
        columns = []
        for c in range(domain_pres.kernel.dims[w]):
            solution = solve(codomain_pres.inclusion.components[w], [row[c] for row in moved])
            if solution is None:
                raise ShapeMismatchError("lift does not preserve kernels")
            columns.append(solution)
        kernel_components[w] = _columns_to_matrix(field, columns, codomain_pres.kernel.dims[w])
    restricted = ModuleMap(domain_pres.kernel, codomain_pres.kernel, kernel_components)

    columns = [ext_of_domain.coordinates(ext_of_codomain.representative(k).compose(restricted))
               for k in range(ext_of_codomain.dimension)]
    return _columns_to_matrix(field, columns, ext_of_domain.dimension)


# ========================================
# BIMODULES
# ========================================

class Bimodule:
    """
    Components W[j][i] = e_j·W·e_i with arrow actions on both sides.

    For γ: u → v the left action maps W[u][i] → W[v][i] and the right action
    maps W[j][v] → W[j][u].
    """

    def __init__(self, quiver: Quiver, field: ScalarField, dims: Dict[Tuple[str, str], int],
                 left: Dict[Tuple[str, str], DomainMatrix], right: Dict[Tuple[str, str], DomainMatrix],
                 name: str = "W"):
        self.quiver = quiver
        self.field = field
        self.name = name
        self.dims = {(j, i): dims.get((j, i), 0) for j in quiver.vertices for i in quiver.vertices}
        self.left = {}
        self.right = {}
        for arrow in quiver.arrows:
            u, v = arrow.source, arrow.target
            for i in quiver.vertices:
                shape = (self.dims[(v, i)], self.dims[(u, i)])
                matrix = left.get((arrow.name, i))
                self.left[(arrow.name, i)] = field.zeros(*shape) if matrix is None else matrix
            for j in quiver.vertices:
                shape = (self.dims[(j, u)], self.dims[(j, v)])
                matrix = right.get((j, arrow.name))
                self.right[(j, arrow.name)] = field.zeros(*shape) if matrix is None else matrix

    def dimension(self, j: str, i: str) -> int:
        return self.dims[(j, i)]

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total == 0

    def commutation_failures(self) -> List[str]:
        """Places where (γ·w)·δ and γ·(w·δ) differ."""
        failures = []
        for gamma in self.quiver.arrows:
            for delta in self.quiver.arrows:
                u, v = gamma.source, gamma.target
                x, y = delta.source, delta.target
                left_first = matmul(self.right[(v, delta.name)], self.left[(gamma.name, y)])
                right_first = matmul(self.left[(gamma.name, x)], self.right[(u, delta.name)])
                if not matrices_equal(left_first, right_first):
                    failures.append(f"{gamma.name}·W·{delta.name}")
        return failures

    def to_json_dict(self) -> dict:
        text = self.field.to_text

        def dump(matrix):
            return [[text(x) for x in row] for row in entries(matrix)]
        return {
            "name": self.name,
            "components": [{"i": i, "j": j, "dim": self.dims[(j, i)]}
                           for j in self.quiver.vertices for i in self.quiver.vertices
                           if self.dims[(j, i)]],
            "left": [{"arrow": name, "i": i, "matrix": dump(m)}
                     for (name, i), m in self.left.items() if 0 not in m.shape],
            "right": [{"arrow": name, "j": j, "matrix": dump(m)}
                      for (j, name), m in self.right.items() if 0 not in m.shape],
        }

    def __repr__(self) -> str:
        return f"Bimodule({self.name}: total {self.total})"


def regular_bimodule(q: Quiver, field: Optional[ScalarField] = None) -> Bimodule:
    """kQ itself: W[j][i] spanned by the paths i → j."""
    field = field or ScalarField()
    paths = all_paths(q)
    basis = {(j, i): [p for p in paths if p.source == i and p.target == j]
             for j in q.vertices for i in q.vertices}
    index = {key: {p.arrows: k for k, p in enumerate(ps)} for key, ps in basis.items()}

    def action(source_key, target_key, image):
        rows = [[field.zero] * len(basis[source_key]) for _ in range(len(basis[target_key]))]
        for col, p in enumerate(basis[source_key]):
            rows[index[target_key][image(p).arrows]][col] = field.one
        return field.raw_matrix(rows, len(basis[target_key]), len(basis[source_key]))

    left, right = {}, {}
    for arrow in q.arrows:
        u, v = arrow.source, arrow.target
        step = Path.from_arrow(arrow)
        for i in q.vertices:
            left[(arrow.name, i)] = action((u, i), (v, i), step.compose)
        for j in q.vertices:
            right[(j, arrow.name)] = action((j, v), (j, u), lambda p, step=step: p.compose(step))
    return Bimodule(q, field, {key: len(ps) for key, ps in basis.items()}, left, right, "A")


def omega(q: Quiver, field: Optional[ScalarField] = None) -> Bimodule:
    """
    The bimodule W[j][i] = Ext¹(I_i, P_j); the left action comes from
    P_u → P_v and the right action from I_u → I_v, for every arrow u → v.

    Args:
        q: An acyclic quiver
        field: Scalar field

    Returns:
        The bimodule Ω
    """
    field = field or ScalarField()
    projectives = {j: projective(q, j, field) for j in q.vertices}
    injectives = {i: injective(q, i, field) for i in q.vertices}
    presentations = {i: projective_presentation(injectives[i]) for i in q.vertices}
    ext = {(j, i): ext1(injectives[i], projectives[j], presentations[i])
           for j in q.vertices for i in q.vertices}

    left, right = {}, {}
    for arrow in q.arrows:
        u, v = arrow.source, arrow.target
        along_p = projective_map(projectives[u], projectives[v], arrow)
        along_i = injective_map(injectives[u], injectives[v], arrow)
        for i in q.vertices:
            left[(arrow.name, i)] = ext_map_second(ext[(u, i)], ext[(v, i)], along_p)
        for j in q.vertices:
            right[(j, arrow.name)] = ext_map_first(ext[(j, v)], ext[(j, u)], along_i)

    bimodule = Bimodule(q, field, {key: e.dimension for key, e in ext.items()}, left, right, "Omega")
    logging.info("  Omega of %s: total dimension %d", q.name, bimodule.total)
    return bimodule


@dataclass
class _TensorComponent:
    starts: Dict[str, int]
    size: int
    free: List[int]
    projection: DomainMatrix


def tensor_product(W: Bimodule, V: Bimodule) -> Bimodule:
    """
    W ⊗_A V: (⊕_l W[j][l] ⊗ V[l][i]) modulo (w·γ) ⊗ x − w ⊗ (γ·x) for every arrow γ.

    Args:
        W: Left factor
        V: Right factor

    Returns:
        The tensor product with induced outer actions
    """
    q, field = W.quiver, W.field
    vertices = q.vertices
    components: Dict[Tuple[str, str], _TensorComponent] = {}

    for j in vertices:
        for i in vertices:
            starts, offset = {}, 0
            for l in vertices:
                starts[l] = offset
                offset += W.dims[(j, l)] * V.dims[(l, i)]
            rows = []
            for arrow in q.arrows:
                u, v = arrow.source, arrow.target
                # Rows run over W[j][v] ⊗ V[u][i]: (w·γ) ⊗ x lands in block u, w ⊗ (γ·x) in block v.
                moved_w = entries(kron(transpose(W.right[(j, arrow.name)]),
                                       field.identity(V.dims[(u, i)])))
                moved_v = entries(kron(field.identity(W.dims[(j, v)]),
                                       transpose(V.left[(arrow.name, i)])))
                for first, second in zip(moved_w, moved_v):
                    row = [field.zero] * offset
                    for k, x in enumerate(first):
                        row[starts[u] + k] += x
                    for k, x in enumerate(second):
                        row[starts[v] + k] -= x
                    rows.append(row)
            free, projection = quotient_basis(rows, offset, field)
            components[(j, i)] = _TensorComponent(starts, offset, free, projection)

    def split(j, i, position):
        """(l, a, b) for a coordinate of the unreduced space of component (j, i)."""
        component = components[(j, i)]
        for l, start in component.starts.items():
            width = V.dims[(l, i)]
            size = W.dims[(j, l)] * width
            if start <= position < start + size:
                return l, (position - start) // width, (position - start) % width
        raise ShapeMismatchError("coordinate outside the tensor space")

    def induced(source_key, target_key, image_vector):
        source, target = components[source_key], components[target_key]
        columns = []
        for position in source.free:
            vector = [field.zero] * target.size
            for k, x in image_vector(position):
                vector[k] += x
            columns.append(vector)
        lifted = _columns_to_matrix(field, columns, target.size)
        return matmul(target.projection, lifted)

    left, right = {}, {}
    for arrow in q.arrows:
        u, v = arrow.source, arrow.target
        for i in vertices:
            def left_image(position, i=i, u=u, v=v, name=arrow.name):
                l, a, b = split(u, i, position)
                matrix = entries(W.left[(name, l)])             # W[u][l] → W[v][l]
                start = components[(v, i)].starts[l]
                width = V.dims[(l, i)]
                return [(start + c * width + b, matrix[c][a]) for c in range(W.dims[(v, l)])]
            left[(arrow.name, i)] = induced((u, i), (v, i), left_image)
        for j in vertices:
            def right_image(position, j=j, u=u, v=v, name=arrow.name):
                l, a, b = split(j, v, position)
                matrix = entries(V.right[(l, name)])            # V[l][v] → V[l][u]
                start = components[(j, u)].starts[l]
                width = V.dims[(l, u)]
                return [(start + a * width + d, matrix[d][b]) for d in range(width)]
            right[(j, arrow.name)] = induced((j, v), (j, u), right_image)

    dims = {key: len(component.free) for key, component in components.items()}
    return Bimodule(q, field, dims, left, right, f"{W.name}*{V.name}")


def tensor_power(w: Bimodule, p: int) -> Bimodule:
    """
    W^{⊗p} over the path algebra, built as W ⊗ W^{⊗(p−1)}.

    Args:
        w: A bimodule
        p: Non-negative power; p = 0 gives the regular bimodule

    Returns:
        The tensor power
    """
    if p < 0:
        raise ShapeMismatchError("tensor power must be non-negative")
    if p == 0:
        return regular_bimodule(w.quiver, w.field)
    power = w
    for _ in range(p - 1):
        power = tensor_product(w, power)
    return power


def _bimodule_entries(w: Bimodule, p: int) -> Dict[Tuple[str, str, int], int]:
    return {(i, j, p): w.dims[(j, i)] for j in w.quiver.vertices for i in w.quiver.vertices}


def lambda_te(q: Quiver, p_max: Optional[int] = None, field: Optional[ScalarField] = None) -> GradedDimTable:
    """
    Dimension table of the tensor algebra of Ω: entry (i, j, p) is dim Ω^{⊗p}[j][i].

    Args:
        q: The base quiver
        p_max: Last power; required unless q is Dynkin
        field: Scalar field

    Returns:
        The table, stopping at the first vanishing power in automatic mode
    """
    field = field or ScalarField()
    if p_max is None and not classify(q).is_dynkin:
        raise NeedsExplicitBoundError(f"quiver {q.name} is not Dynkin: pass an explicit maximum degree")
    bound = AUTO_DEGREE_CAP if p_max is None else p_max

    counts = _bimodule_entries(regular_bimodule(q, field), 0)
    base = omega(q, field)
    power = base
    for p in range(1, bound + 1):
        if power.is_zero():
            break
        counts.update(_bimodule_entries(power, p))
        power = tensor_product(base, power)
    else:
        if p_max is None and not power.is_zero():
            raise NeedsExplicitBoundError(f"no vanishing tensor power up to {AUTO_DEGREE_CAP}")
    table = GradedDimTable(GradingKind.STAR_DEGREE, counts, q.vertices)
    logging.info("  Tensor algebra of %s: total %d", q.name, table.total)
    return table


# ========================================
# AR TRANSLATE
# ========================================

class InjectiveData:
    """Injectives of a quiver with their presentations, shared between τ⁻ computations."""

    def __init__(self, q: Quiver, field: ScalarField):
        self.injectives = {i: injective(q, i, field) for i in q.vertices}
        self.presentations = {i: projective_presentation(rep) for i, rep in self.injectives.items()}
        self.maps = {a.name: injective_map(self.injectives[a.source], self.injectives[a.target], a)
                     for a in q.arrows}


def tau_minus(M: Representation, data: Optional[InjectiveData] = None) -> Representation:
    """
    The inverse Auslander-Reiten translate Ext¹(DA, M), vertex by vertex.

    Args:
        M: A representation
        data: Cached injectives of the quiver

    Returns:
        The representation with Ext¹(I_i, M) at vertex i
    """
    q, field = M.quiver, M.field
    data = data or InjectiveData(q, field)
    ext = {i: ext1(data.injectives[i], M, data.presentations[i]) for i in q.vertices}
    maps = {a.name: ext_map_first(ext[a.target], ext[a.source], data.maps[a.name]) for a in q.arrows}
    return Representation(q, field, {i: e.dimension for i, e in ext.items()}, maps,
                          name=f"tau-({M.name})")


def tau_orbit_table(q: Quiver, p_max: Optional[int] = None, field: Optional[ScalarField] = None) -> GradedDimTable:
    """
    Entry (i, j, p) = dim Hom(P_i, τ^{-p} P_j), iterating τ⁻ from each projective.

    Args:
        q: The base quiver
        p_max: Last power; required unless q is Dynkin
        field: Scalar field

    Returns:
        The table, stopping once every orbit has vanished in automatic mode
    """
    field = field or ScalarField()
    if p_max is None and not classify(q).is_dynkin:
        raise NeedsExplicitBoundError(f"quiver {q.name} is not Dynkin: pass an explicit maximum degree")
    bound = AUTO_DEGREE_CAP if p_max is None else p_max
    data = InjectiveData(q, field)
    projectives = {i: projective(q, i, field) for i in q.vertices}

    counts = {}
    for j in q.vertices:
        module = projectives[j]
        for p in range(bound + 1):
            if module.is_zero():
                break
            for i in q.vertices:
                counts[(i, j, p)] = hom_rep(projectives[i], module).dimension
            module = tau_minus(module, data)
        else:
            if p_max is None and not module.is_zero():
                raise NeedsExplicitBoundError(f"no vanishing translate up to {AUTO_DEGREE_CAP}")
    return GradedDimTable(GradingKind.STAR_DEGREE, counts, q.vertices)
