"""Quiver Data Model for Preproj-Verify"""

import logging
import random
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from enums import DynkinFamily, Orientation
from errors import (CyclicQuiverError, HeightError, InputError, NotDynkinError,
                    QuiverDefinitionError, QuiverSyntaxError, UnknownVertexError)
from PreprojConstants import *

_ID = IDENTIFIER_PATTERN
_HEADER_LINE = re.compile(rf'^quiver\s+(\S+)$')
_VERTEX_LINE = re.compile(rf'^vertex\s+({_ID})$')
_ARROW_LINE = re.compile(rf'^arrow\s+({_ID})\s*:\s*({_ID})\s*->\s*({_ID})$')
_GENERATOR_LINE = re.compile(r'^([ADE])\s+(\d+)\s+([a-z]+)$')

DEFAULT_ORIENTATION = {
    DynkinFamily.A: Orientation.LINEAR,
    DynkinFamily.D: Orientation.INWARD,
    DynkinFamily.E: Orientation.STANDARD,
}


@dataclass(frozen=True)
class Arrow:
    """An arrow of a quiver. Starred arrows are the reversed copies of a doubled quiver."""
    name: str
    source: str
    target: str
    starred: bool = False


class Quiver:
    """A finite quiver: ordered vertices and arrows with source and target maps."""

    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow], name: str = "Q"):
        """
        Initialize and validate a quiver.

        Args:
            vertices: Vertex identifiers in declaration order
            arrows: Arrows in declaration order
            name: Display name
        """
        self.name = name
        self.vertices: Tuple[str, ...] = tuple(vertices)
        self.arrows: Tuple[Arrow, ...] = tuple(arrows)

        self.index: Dict[str, int] = {}
        for vertex in self.vertices:
            if vertex in self.index:
                raise QuiverDefinitionError(f"duplicate vertex '{vertex}'")
            self.index[vertex] = len(self.index)

        self._arrows_by_name: Dict[str, Arrow] = {}
        self._incoming: Dict[str, List[Arrow]] = {v: [] for v in self.vertices}
        self._outgoing: Dict[str, List[Arrow]] = {v: [] for v in self.vertices}
        for arrow in self.arrows:
            if arrow.name in self._arrows_by_name:
                raise QuiverDefinitionError(f"duplicate arrow '{arrow.name}'")
            for endpoint in (arrow.source, arrow.target):
                if endpoint not in self.index:
                    raise QuiverDefinitionError(
                        f"arrow '{arrow.name}' has dangling endpoint '{endpoint}'")
            self._arrows_by_name[arrow.name] = arrow
            self._outgoing[arrow.source].append(arrow)
            self._incoming[arrow.target].append(arrow)

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrows_by_name[name]
        except KeyError:
            raise QuiverDefinitionError(f"unknown arrow '{name}'") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._arrows_by_name

    def check_vertex(self, vertex: str) -> None:
        if vertex not in self.index:
            raise UnknownVertexError(f"unknown vertex '{vertex}' in quiver {self.name}")

    def arrows_into(self, vertex: str) -> List[Arrow]:
        return self._incoming[vertex]

    def arrows_from(self, vertex: str) -> List[Arrow]:
        return self._outgoing[vertex]

    def graph(self) -> nx.MultiDiGraph:
        """The quiver as a networkx multigraph keyed by arrow name."""
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for arrow in self.arrows:
            graph.add_edge(arrow.source, arrow.target, key=arrow.name)
        return graph

    def __eq__(self, other) -> bool:
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self) -> int:
        return hash((self.vertices, self.arrows))

    def __repr__(self) -> str:
        return f"Quiver({self.name}: {len(self.vertices)} vertices, {len(self.arrows)} arrows)"


class DoubledQuiver:
    """
    The doubled quiver Q̄: the base quiver plus a reversed arrow α*: j → i for
    every α: i → j, with the star involution between them.
    """

    def __init__(self, base: Quiver, quiver: Quiver, star: Dict[str, str]):
        self.base = base
        self.quiver = quiver
        self.star = star

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> Tuple[Arrow, ...]:
        return self.quiver.arrows

    def star_of(self, name: str) -> str:
        return self.star[name]

    def __repr__(self) -> str:
        return f"DoubledQuiver({self.base.name}: {len(self.quiver.arrows)} arrows)"


@dataclass(frozen=True)
class Classification:
    """Structural type of a quiver's underlying graph."""
    family: Optional[DynkinFamily]
    rank: int
    is_tree: bool
    is_acyclic: bool

    @property
    def dynkin_type(self) -> Optional[str]:
        if self.family is None:
            return None
        return f"{self.family.value}{self.rank}"

    @property
    def is_dynkin(self) -> bool:
        return self.family is not None


# ========================================
# PARSING AND PRINTING
# ========================================

def parse_quiver(text: str) -> Quiver:
    """
    Parse a quiver description.

    Lines hold ``quiver <name>``, ``vertex <id>``, ``arrow <id> : <src> -> <dst>``
    or a built-in generator request such as ``A 3 linear``; ``;`` separates
    statements on one line and ``#`` starts a comment.

    Args:
        text: The description

    Returns:
        The quiver, declaration order preserved
    """
    name = "Q"
    vertices: List[str] = []
    arrows: List[Arrow] = []
    seen_vertices: Dict[str, int] = {}
    seen_arrows: Dict[str, int] = {}
    pending: List[Tuple[int, Arrow]] = []
    generated: Optional[Quiver] = None

    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split(COMMENT_CHAR, 1)[0]
        for statement in line.split(STATEMENT_SEPARATOR):
            statement = ' '.join(statement.split())
            if not statement:
                continue

            match = _GENERATOR_LINE.match(statement)
            if match:
                if vertices or arrows or generated is not None:
                    raise QuiverSyntaxError(line_number, "generator request must stand alone")
                family, rank, orientation = match.groups()
                try:
                    generated = generate_quiver(family, int(rank), orientation)
                except InputError as error:
                    raise QuiverSyntaxError(line_number, str(error)) from None
                continue
            if generated is not None:
                raise QuiverSyntaxError(line_number, "generator request must stand alone")

            match = _HEADER_LINE.match(statement)
            if match:
                name = match.group(1)
                continue

            match = _VERTEX_LINE.match(statement)
            if match:
                vertex = match.group(1)
                if vertex in seen_vertices:
                    raise QuiverDefinitionError(
                        f"duplicate vertex '{vertex}' (first declared on line "
                        f"{seen_vertices[vertex]})", line_number)
                seen_vertices[vertex] = line_number
                vertices.append(vertex)
                continue

            match = _ARROW_LINE.match(statement)
            if match:
                arrow_name, source, target = match.groups()
                if arrow_name in seen_arrows:
                    raise QuiverDefinitionError(
                        f"duplicate arrow '{arrow_name}' (first declared on line "
                        f"{seen_arrows[arrow_name]})", line_number)
                seen_arrows[arrow_name] = line_number
                arrow = Arrow(arrow_name, source, target)
                arrows.append(arrow)
                pending.append((line_number, arrow))
                continue

            raise QuiverSyntaxError(line_number, f"cannot parse '{statement}'")

    if generated is not None:
        return generated

    # Endpoints may be declared after the arrow that uses them.
    for line_number, arrow in pending:
        for endpoint in (arrow.source, arrow.target):
            if endpoint not in seen_vertices:
                raise QuiverDefinitionError(
                    f"arrow '{arrow.name}' has dangling endpoint '{endpoint}'", line_number)

    quiver = Quiver(vertices, arrows, name)
    logging.debug("  Parsed quiver %s: %d vertices, %d arrows", name, len(vertices), len(arrows))
    return quiver


def format_quiver(q: Quiver) -> str:
    """Print a quiver in the format read by parse_quiver."""
    lines = [f"quiver {q.name}"]
    lines.extend(f"vertex {vertex}" for vertex in q.vertices)
    lines.extend(f"arrow {a.name} : {a.source} -> {a.target}" for a in q.arrows)
    return '\n'.join(lines) + '\n'


def load_quiver(path: str) -> Quiver:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_quiver(f.read())


# ========================================
# GENERATORS
# ========================================

def generate_quiver(family, rank: int, orientation=None) -> Quiver:
    """
    Build a Dynkin quiver with vertices 1..n and arrows named a, b, c, ...

    Args:
        family: 'A', 'D' or 'E' (or a DynkinFamily)
        rank: Number of vertices
        orientation: linear|alternating for A, inward|outward for D, standard for E;
            omitted means the family default in DEFAULT_ORIENTATION

    Returns:
        The generated quiver
    """
    family = DynkinFamily(family.value if isinstance(family, DynkinFamily) else family)
    if orientation is None:
        orientation = DEFAULT_ORIENTATION[family]
    try:
        orientation = Orientation(orientation.value if isinstance(orientation, Orientation)
                                  else orientation)
    except ValueError:
        raise InputError(f"unknown orientation '{orientation}'") from None

    if family is DynkinFamily.A:
        if rank < 1:
            raise InputError("A_n needs n >= 1")
        edges = [(k, k + 1) for k in range(1, rank)]
        if orientation is Orientation.LINEAR:
            pairs = edges
        elif orientation is Orientation.ALTERNATING:
            pairs = [(s, t) if index % 2 == 0 else (t, s) for index, (s, t) in enumerate(edges)]
        else:
            raise InputError(f"A_n supports linear|alternating, not {orientation.value}")
    elif family is DynkinFamily.D:
        if rank < 4:
            raise InputError("D_n needs n >= 4")
        branch = rank - 2
        edges = [(k, k + 1) for k in range(1, branch)] + [(rank - 1, branch), (rank, branch)]
        if orientation is Orientation.INWARD:
            pairs = edges
        elif orientation is Orientation.OUTWARD:
            pairs = [(t, s) for s, t in edges]
        else:
            raise InputError(f"D_n supports inward|outward, not {orientation.value}")
    else:
        if rank not in (6, 7, 8):
            raise InputError("E_n needs n in {6, 7, 8}")
        if orientation is not Orientation.STANDARD:
            raise InputError(f"E_n supports standard, not {orientation.value}")
        pairs = [(k, k + 1) for k in range(1, rank - 1)] + [(rank, 3)]

    if len(pairs) > len(ARROW_NAMES):
        raise InputError(f"rank {rank} is too large for the built-in generators")
    vertices = [str(k) for k in range(1, rank + 1)]
    arrows = [Arrow(ARROW_NAMES[index], str(s), str(t)) for index, (s, t) in enumerate(pairs)]
    return Quiver(vertices, arrows, f"{family.value}{rank}")


def reorient(q: Quiver, reversed_arrows: Iterable[str]) -> Quiver:
    """Reverse the named arrows, keeping names and declaration order."""
    flipped = set(reversed_arrows)
    for name in flipped:
        q.arrow(name)
    arrows = [Arrow(a.name, a.target, a.source) if a.name in flipped else a for a in q.arrows]
    return Quiver(q.vertices, arrows, q.name)


def random_orientation(q: Quiver, rng: random.Random) -> Quiver:
    """Reverse each arrow independently with probability 1/2."""
    return reorient(q, [a.name for a in q.arrows if rng.random() < 0.5])


# ========================================
# STRUCTURE
# ========================================

def double(q: Quiver) -> DoubledQuiver:
    """
    Add a starred arrow α*: j → i for every arrow α: i → j.

    Args:
        q: The base quiver

    Returns:
        The doubled quiver; base arrows keep their names, starred ones get a '*' suffix
    """
    star: Dict[str, str] = {}
    starred = []
    for arrow in q.arrows:
        star_name = arrow.name + STAR_SUFFIX
        if q.has_arrow(star_name):
            raise QuiverDefinitionError(f"arrow name '{star_name}' clashes with a starred arrow")
        star[arrow.name] = star_name
        star[star_name] = arrow.name
        starred.append(Arrow(star_name, arrow.target, arrow.source, starred=True))
    full = Quiver(q.vertices, list(q.arrows) + starred, f"{q.name}bar")
    return DoubledQuiver(q, full, star)


def classify(q: Quiver) -> Classification:
    """
    Classify the underlying graph: Dynkin type, tree, directed acyclicity.

    Args:
        q: The quiver

    Returns:
        Classification of q
    """
    digraph = q.graph()
    is_acyclic = nx.is_directed_acyclic_graph(digraph)
    if not q.vertices:
        return Classification(None, 0, False, is_acyclic)

    undirected = nx.MultiGraph(digraph)
    is_tree = nx.is_connected(undirected) and undirected.number_of_edges() == len(q.vertices) - 1
    family = None
    if is_tree:
        family = _dynkin_family(nx.Graph(undirected))
    return Classification(family, len(q.vertices) if family else 0, is_tree, is_acyclic)


def _dynkin_family(tree: nx.Graph) -> Optional[DynkinFamily]:
    degrees = dict(tree.degree())
    branch_points = [v for v, d in degrees.items() if d >= 3]
    if not branch_points:
        return DynkinFamily.A
    if len(branch_points) > 1 or degrees[branch_points[0]] > 3:
        return None

    center = branch_points[0]
    arms = []
    for neighbour in tree.neighbors(center):
        # Arm length = vertices reachable from the neighbour without passing the center.
        arm = nx.node_connected_component(tree.subgraph(set(tree) - {center}), neighbour)
        arms.append(len(arm))
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return DynkinFamily.D
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return DynkinFamily.E
    return None


def height_function(q: Quiver) -> Dict[str, int]:
    """
    The height function h with h(t(α)) = h(s(α)) + 1 for every arrow and
    minimum 0 on each connected component.

    Args:
        q: An acyclic quiver

    Returns:
        Map vertex -> height
    """
    if not classify(q).is_acyclic:
        raise CyclicQuiverError(f"quiver {q.name} has a directed cycle")

    heights: Dict[str, int] = {}
    undirected = nx.MultiGraph(q.graph())
    for component in nx.connected_components(undirected):
        root = min(component, key=q.index.get)
        local = {root: 0}
        stack = [root]
        while stack:
            vertex = stack.pop()
            constraints = [(a.target, local[vertex] + 1) for a in q.arrows_from(vertex)]
            constraints += [(a.source, local[vertex] - 1) for a in q.arrows_into(vertex)]
            for other, value in constraints:
                if other not in local:
                    local[other] = value
                    stack.append(other)
                elif local[other] != value:
                    raise HeightError(f"no height function: conflict at vertex '{other}'")
        lowest = min(local.values())
        heights.update({v: h - lowest for v, h in local.items()})
    return {v: heights[v] for v in q.vertices}


def cartan_matrix(q: Quiver) -> np.ndarray:
    """Symmetric Cartan matrix 2I - A of the underlying graph."""
    n = len(q.vertices)
    cartan = 2 * np.eye(n, dtype=np.int64)
    for arrow in q.arrows:
        s, t = q.index[arrow.source], q.index[arrow.target]
        cartan[s, t] -= 1
        cartan[t, s] -= 1
    return cartan


def positive_roots(q: Quiver) -> List[Tuple[int, ...]]:
    """
    All positive roots of the underlying Dynkin diagram, by closing the simple
    roots under simple reflections.

    Args:
        q: A Dynkin quiver

    Returns:
        Dimension vectors indexed by vertex order, sorted by height then lexicographically
    """
    if not classify(q).is_dynkin:
        raise NotDynkinError(f"quiver {q.name} is not Dynkin")

    cartan = cartan_matrix(q)
    n = len(q.vertices)
    simple = [tuple(int(x) for x in row) for row in np.eye(n, dtype=np.int64)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new_frontier = []
        for root in frontier:
            vector = np.array(root, dtype=np.int64)
            pairing = cartan @ vector
            for k in range(n):
                reflected = vector.copy()
                reflected[k] -= pairing[k]
                if (reflected >= 0).all() and reflected.any():
                    image = tuple(int(x) for x in reflected)
                    if image not in roots:
                        roots.add(image)
                        new_frontier.append(image)
        frontier = new_frontier
    return sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r)))


# ========================================
# DOT EXPORT
# ========================================

def dot_quote(text: str) -> str:
    return '"' + text.replace('\\', '\\\\').replace('"', '\\"') + '"'


def export_dot(obj) -> str:
    """
    Render a quiver, doubled quiver or mesh window as a Graphviz digraph.

    Args:
        obj: Quiver, DoubledQuiver, or any object with a ``to_dot()`` method

    Returns:
        DOT text with nodes and edges in declaration order
    """
    if isinstance(obj, DoubledQuiver):
        quiver = obj.quiver
    elif isinstance(obj, Quiver):
        quiver = obj
    else:
        return obj.to_dot()

    lines = [f"digraph {dot_quote(quiver.name)} {{"]
    for vertex in quiver.vertices:
        lines.append(f"    {dot_quote(vertex)} [shape={DOT_NODE_SHAPE}];")
    for arrow in quiver.arrows:
        style = f", style={DOT_STAR_EDGE_STYLE}" if arrow.starred else ""
        lines.append(f"    {dot_quote(arrow.source)} -> {dot_quote(arrow.target)} "
                     f"[label={dot_quote(arrow.name)}{style}];")
    lines.append("}")
    return '\n'.join(lines) + '\n'
