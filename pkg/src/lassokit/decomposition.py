"""Structured decompositions: bags on shape vertices, adhesions on shape edges,
joined by spans of monomorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .colimits import Cocone, FiniteDiagram, colimit, image_factorization, pullback
from .cset import Hom, Instance, InstanceError, compose, find_isomorphism, is_mono, iter_isomorphisms


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class ShapeGraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        for s, t in self.edges:
            if not (0 <= s < self.n_vertices and 0 <= t < self.n_vertices):
                raise DecompositionError(f"shape edge ({s}, {t}) out of range")

    def is_forest(self) -> bool:
        """Underlying undirected multigraph is acyclic (loops and parallel edges are cycles)."""
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t in self.edges:
            a, b = find(s), find(t)
            if a == b:
                return False
            parent[a] = b
        return True


@dataclass
class StructuredDecomposition:
    shape: ShapeGraph
    bags: list[Instance]
    adhesions: list[Instance]
    legs: list[tuple[Hom, Hom]]
    schema: object = field(default=None, compare=False)

    def __post_init__(self):
        if self.schema is None:
            pieces = self.bags + self.adhesions
            if not pieces:
                raise DecompositionError("an empty decomposition needs an explicit schema")
            self.schema = pieces[0].schema

    def node(self, k: int) -> Instance:
        """Node ``k`` of the incidence diagram: bags first, then adhesions."""
        n = len(self.bags)
        return self.bags[k] if k < n else self.adhesions[k - n]


def validate_decomposition(d: StructuredDecomposition) -> list[str]:
    errors = []
    shape = d.shape
    if len(d.bags) != shape.n_vertices:
        errors.append(f"{len(d.bags)} bags for {shape.n_vertices} shape vertices")
    if len(d.adhesions) != len(shape.edges) or len(d.legs) != len(shape.edges):
        errors.append("adhesion/leg count does not match shape edges")
    if errors:
        return errors
    for piece in d.bags + d.adhesions:
        if piece.schema != d.schema:
            errors.append("pieces do not share one schema")
            break
    for e, ((s, t), (left, right)) in enumerate(zip(shape.edges, d.legs)):
        for side, leg, target in (("source", left, d.bags[s]), ("target", right, d.bags[t])):
            if leg.dom != d.adhesions[e] or leg.cod != target:
                errors.append(f"edge {e}: {side} leg has wrong endpoints")
            elif not is_mono(leg):
                errors.append(f"edge {e}: {side} leg is not monic")
    return errors


def to_diagram(d: StructuredDecomposition) -> FiniteDiagram:
    n = len(d.bags)
    arrows = []
    for e, ((s, t), (left, right)) in enumerate(zip(d.shape.edges, d.legs)):
        arrows.append((n + e, s, left))
        arrows.append((n + e, t, right))
    return FiniteDiagram(list(d.bags) + list(d.adhesions), arrows)


def from_diagram(shape: ShapeGraph, diagram: FiniteDiagram, schema=None) -> StructuredDecomposition:
    """Inverse of :func:`to_diagram` for a diagram laid out the same way."""
    n = shape.n_vertices
    legs = []
    for e in range(len(shape.edges)):
        legs.append((diagram.arrows[2 * e][2], diagram.arrows[2 * e + 1][2]))
    return StructuredDecomposition(shape, list(diagram.nodes[:n]), list(diagram.nodes[n:]), legs,
                                   schema=schema)


def decomposition_colimit(d: StructuredDecomposition) -> tuple[Instance, Cocone]:
    return colimit(to_diagram(d), d.schema)


def width_vector(d: StructuredDecomposition) -> dict[str, int]:
    return {s: max((b.sizes[s] for b in d.bags), default=0) for s in d.schema.objects}


def width(d: StructuredDecomposition, measure: str | None = None):
    """Largest bag, per sort.

    ``measure`` selects a sort (scalar result) or ``"total"`` (largest total bag
    cardinality).  Without a measure, graph-like schemas report the vertex sort
    and other schemas the whole per-sort vector.
    """
    if measure is None:
        if d.schema.name in ("Grph", "RGrph") or (d.schema.name or "").startswith("CGr"):
            measure = "V"
        else:
            return width_vector(d)
    if measure == "total":
        return max((b.total_size() for b in d.bags), default=0)
    if measure not in d.schema.objects:
        raise DecompositionError(f"unknown sort {measure!r}")
    return max((b.sizes[measure] for b in d.bags), default=0)


def aligned_cocone(d: StructuredDecomposition, target: Instance) -> Cocone:
    """The colimit cocone of ``d`` transported onto ``target`` by the first isomorphism found."""
    apex, cocone = decomposition_colimit(d)
    iso = find_isomorphism(apex, target)
    if iso is None:
        raise DecompositionError("colimit of the decomposition is not isomorphic to the target")
    return Cocone(cocone.diagram, target, [compose(iso, leg) for leg in cocone.legs])


@dataclass
class PulledBack:
    """Result of pulling a decomposition back along ``delta: X -> Y``.

    ``to_original[k]`` maps node ``k`` of the new diagram into node ``k`` of the
    old one and ``to_domain[k]`` maps it into ``X``; together they are the
    pullback projections.
    """
    decomposition: StructuredDecomposition
    to_original: list[Hom]
    to_domain: list[Hom]


def pullback_decomposition_full(d: StructuredDecomposition, delta: Hom) -> PulledBack:
    cocone = aligned_cocone(d, delta.cod)
    diagram = cocone.diagram
    nodes, proj_x, proj_d = [], [], []
    for leg in cocone.legs:
        p, px, pd = pullback(delta, leg)
        nodes.append(p)
        proj_x.append(px)
        proj_d.append(pd)
    arrows = []
    for i, j, h in diagram.arrows:
        # (x, b) in node i goes to (x, h(b)) in node j
        index = {}
        for s in nodes[j].schema.objects:
            index[s] = {(a, b): k for k, (a, b) in
                        enumerate(zip(proj_x[j].components[s], proj_d[j].components[s]))}
        comps = {}
        for s in nodes[i].schema.objects:
            hc = h.components[s]
            comps[s] = [index[s][(a, hc[b])]
                        for a, b in zip(proj_x[i].components[s], proj_d[i].components[s])]
        arrows.append((i, j, Hom(nodes[i], nodes[j], comps)))
    new = from_diagram(d.shape, FiniteDiagram(nodes, arrows), schema=d.schema)
    return PulledBack(new, proj_d, proj_x)


def pullback_decomposition(d: StructuredDecomposition, delta: Hom) -> StructuredDecomposition:
    """Decomposition of ``dom(delta)`` of the same shape, by pointwise pullback."""
    return pullback_decomposition_full(d, delta).decomposition


@dataclass
class ImageDiagram:
    diagram: FiniteDiagram
    epis: list[Hom]
    monos: list[Hom]


def diagram_of_images(d: FiniteDiagram, c: Cocone) -> ImageDiagram:
    """Pointwise images of the cocone legs, joined by the induced monomorphisms."""
    epis, nodes, monos = [], [], []
    for leg in c.legs:
        e, img, m = image_factorization(leg)
        epis.append(e)
        nodes.append(img)
        monos.append(m)
    arrows = []
    for i, j, _ in d.arrows:
        back = {s: {y: k for k, y in enumerate(monos[j].components[s])}
                for s in nodes[j].schema.objects}
        try:
            comps = {s: [back[s][y] for y in monos[i].components[s]] for s in nodes[i].schema.objects}
        except KeyError as exc:
            raise InstanceError("cocone legs do not commute with the diagram") from exc
        arrows.append((i, j, Hom(nodes[i], nodes[j], comps)))
    return ImageDiagram(FiniteDiagram(nodes, arrows), epis, monos)


def diagrams_isomorphic(a: FiniteDiagram, b: FiniteDiagram) -> list[Hom] | None:
    """A family of node isomorphisms commuting with every arrow, or None.

    Both diagrams must share the arrow layout (same endpoints in the same order).
    """
    if len(a.nodes) != len(b.nodes) or len(a.arrows) != len(b.arrows):
        return None
    if any((i, j) != (k, m) for (i, j, _), (k, m, _) in zip(a.arrows, b.arrows)):
        return None
    n = len(a.nodes)
    choice: list[Hom | None] = [None] * n
    touching = [[] for _ in range(n)]
    for k, (i, j, _) in enumerate(a.arrows):
        touching[i].append(k)
        touching[j].append(k)
    # visit nodes adjacent to already chosen ones first so conflicts surface early
    order: list[int] = []
    seen = set()
    for start in range(n):
        if start in seen:
            continue
        stack = [start]
        while stack:
            v = stack.pop(0)
            if v in seen:
                continue
            seen.add(v)
            order.append(v)
            for k in touching[v]:
                i, j, _ = a.arrows[k]
                stack.append(j if i == v else i)

    def consistent(v: int) -> bool:
        for k in touching[v]:
            i, j, ha = a.arrows[k]
            if choice[i] is None or choice[j] is None:
                continue
            hb = b.arrows[k][2]
            if compose(hb, choice[i]).components != compose(choice[j], ha).components:
                return False
        return True

    def rec(pos: int) -> bool:
        if pos == len(order):
            return True
        v = order[pos]
        for iso in iter_isomorphisms(a.nodes[v], b.nodes[v]):
            choice[v] = iso
            if consistent(v) and rec(pos + 1):
                return True
        choice[v] = None
        return False

    return list(choice) if rec(0) else None


def decompositions_isomorphic(a: StructuredDecomposition, b: StructuredDecomposition) -> bool:
    if a.shape != b.shape:
        return False
    return diagrams_isomorphic(to_diagram(a), to_diagram(b)) is not None
