"""Named small instances and decompositions, plus seeded random generators.

Vertex and edge numbering of every fixture is documented next to it so tests
can refer to elements by index.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .colimits import Span
from .cset import Hom, Instance, graph, rgraph, subinstance
from .decomposition import ShapeGraph, StructuredDecomposition
from .schema import builtin_schema

GRPH = builtin_schema("Grph")
RGRPH = builtin_schema("RGrph")


def _inclusion(sub: Instance, big: Instance, comps: dict) -> Hom:
    return Hom(sub, big, comps, validate=True)


# -- graphs ------------------------------------------------------------------------------

def path3() -> Instance:
    """x -> y -> z: vertices x=0, y=1, z=2; edges 0: x->y, 1: y->z."""
    return graph(GRPH, 3, [(0, 1), (1, 2)])


def two_loops() -> Instance:
    """One vertex with two loops."""
    return graph(GRPH, 1, [(0, 0), (0, 0)])


def loop_vertex() -> Instance:
    return graph(GRPH, 1, [(0, 0)])


def bare_vertex(schema=GRPH) -> Instance:
    return Instance(schema, {"V": 1}, {})


def discrete(n: int, schema=GRPH) -> Instance:
    if schema.name == "RGrph":
        return rgraph(RGRPH, n)
    return graph(schema, n, [])


def path_pullback() -> dict:
    """The graphs G, H, the map f: G -> H and the two-bag decomposition of H.

    H: x=0, y=1, z=2 with edges x->y, y->z.
    G: x'1=0, x'2=1, y'=2, z'=3 with edges x'1->y', x'2->y', y'->z'.
    """
    h = path3()
    g = graph(GRPH, 4, [(0, 2), (1, 2), (2, 3)])
    f = Hom(g, h, {"V": [0, 0, 1, 2], "E": [0, 0, 1]}, validate=True)
    bag_xy = graph(GRPH, 2, [(0, 1)])
    bag_yz = graph(GRPH, 2, [(0, 1)])
    adhesion = bare_vertex()
    legs = (Hom(adhesion, bag_xy, {"V": [1], "E": []}, validate=True),
            Hom(adhesion, bag_yz, {"V": [0], "E": []}, validate=True))
    d = StructuredDecomposition(ShapeGraph(2, [(0, 1)]), [bag_xy, bag_yz], [adhesion], [legs])
    return {"G": g, "H": h, "f": f, "d": d,
            "expected_bags": [{0, 1, 2}, {2, 3}]}


def p3_contraction() -> dict:
    """Y = x->y->z with X the edge x->y, and the decomposition of Y from :func:`path_pullback`."""
    y = path3()
    x = graph(GRPH, 2, [(0, 1)])
    f = Hom(x, y, {"V": [0, 1], "E": [0]}, validate=True)
    return {"Y": y, "X": x, "f": f, "d": path_pullback()["d"]}


def loop_vertices_span() -> Span:
    """Two loop-vertices over a bare vertex; its pushout is one vertex with two loops."""
    apex = bare_vertex()
    a, b = loop_vertex(), loop_vertex()
    return Span(apex, Hom(apex, a, {"V": [0], "E": []}), Hom(apex, b, {"V": [0], "E": []}))


def triangle_decomposition() -> StructuredDecomposition:
    """The directed triangle a->b->c->a split into three edge bags over a K3 shape.

    Bag i holds vertices (i, i+1) and the edge between them; the adhesion on the
    shape edge (i, i+1) is the shared vertex.
    """
    bags = [graph(GRPH, 2, [(0, 1)]) for _ in range(3)]
    adhesions = [bare_vertex() for _ in range(3)]
    legs = []
    edges = [(0, 1), (1, 2), (2, 0)]
    for k, (i, j) in enumerate(edges):
        legs.append((Hom(adhesions[k], bags[i], {"V": [1], "E": []}),
                     Hom(adhesions[k], bags[j], {"V": [0], "E": []})))
    return StructuredDecomposition(ShapeGraph(3, edges), bags, adhesions, legs)


def full_two() -> Instance:
    """Two vertices, a loop at each and one edge in each direction."""
    return graph(GRPH, 2, [(0, 0), (1, 1), (0, 1), (1, 0)])


def star_decomposition() -> StructuredDecomposition:
    """A star-shaped decomposition of :func:`full_two`.

    The centre holds both looped vertices; each leaf is a single edge; both
    adhesions are the two bare vertices.
    """
    centre = graph(GRPH, 2, [(0, 0), (1, 1)])
    forward = graph(GRPH, 2, [(0, 1)])
    backward = graph(GRPH, 2, [(1, 0)])
    adhesions = [discrete(2), discrete(2)]
    legs = [(Hom(adhesions[0], centre, {"V": [0, 1], "E": []}),
             Hom(adhesions[0], forward, {"V": [0, 1], "E": []})),
            (Hom(adhesions[1], centre, {"V": [0, 1], "E": []}),
             Hom(adhesions[1], backward, {"V": [0, 1], "E": []}))]
    return StructuredDecomposition(ShapeGraph(3, [(0, 1), (0, 2)]), [centre, forward, backward],
                                   adhesions, legs)


def naive_contraction_fixture() -> dict:
    """Three bags where contracting bag by bag breaks a monic leg.

    Y: a=0, b=1, c=2, w=3, z=4 with edges a->c, c->b, a->w, b->w, w->z.
    X is the path a->c->b.  Bag 0 = {a, b, c} with the X edges, bag 1 = {a, b, w},
    bag 2 = {w, z}; adhesions {a, b} and {w}.  Inside the adhesion {a, b} the
    part of X is discrete, but bag 0 connects a and b.
    """
    y = graph(GRPH, 5, [(0, 2), (2, 1), (0, 3), (1, 3), (3, 4)])
    x = graph(GRPH, 3, [(0, 2), (2, 1)])
    f = Hom(x, y, {"V": [0, 1, 2], "E": [0, 1]}, validate=True)
    b0 = graph(GRPH, 3, [(0, 2), (2, 1)])
    b1 = graph(GRPH, 3, [(0, 2), (1, 2)])
    b2 = graph(GRPH, 2, [(0, 1)])
    a01, a12 = discrete(2), bare_vertex()
    legs = [(Hom(a01, b0, {"V": [0, 1], "E": []}), Hom(a01, b1, {"V": [0, 1], "E": []})),
            (Hom(a12, b1, {"V": [2], "E": []}), Hom(a12, b2, {"V": [0], "E": []}))]
    d = StructuredDecomposition(ShapeGraph(3, [(0, 1), (1, 2)]), [b0, b1, b2], [a01, a12], legs)
    return {"Y": y, "X": x, "f": f, "d": d}


# -- reflexive graphs ---------------------------------------------------------------------

def terminal_rgraph() -> Instance:
    """One vertex and its distinguished loop."""
    return rgraph(RGRPH, 1)


def edge_with_loops() -> Instance:
    """Vertices 0, 1 with distinguished loops 0, 1 and the edge 2: 0 -> 1."""
    return rgraph(RGRPH, 2, [(0, 1)])


def coequalizer_pair() -> tuple[Hom, Hom]:
    """The two homomorphisms from the terminal reflexive graph to :func:`edge_with_loops`."""
    top, ewl = terminal_rgraph(), edge_with_loops()
    return (Hom(top, ewl, {"V": [0], "E": [0]}, validate=True),
            Hom(top, ewl, {"V": [1], "E": [1]}, validate=True))


def smoothing_witness_span() -> Span:
    """Two copies of an edge over its two endpoints; the pushout has parallel edges."""
    apex = rgraph(RGRPH, 2)
    a, b = edge_with_loops(), edge_with_loops()
    return Span(apex, Hom(apex, a, {"V": [0, 1], "E": [0, 1]}, validate=True),
                Hom(apex, b, {"V": [0, 1], "E": [0, 1]}, validate=True))


def rgraph_tree_fixture() -> dict:
    """A reflexive path 0->1->2 with an extra loop at 1, split into two bags at 1.

    X is the extra loop together with its vertex.
    """
    y = rgraph(RGRPH, 3, [(0, 1), (1, 2), (1, 1)])
    x = rgraph(RGRPH, 1, [(0, 0)])
    f = Hom(x, y, {"V": [1], "E": [1, 5]}, validate=True)
    b0 = rgraph(RGRPH, 2, [(0, 1), (1, 1)])
    b1 = rgraph(RGRPH, 2, [(0, 1)])
    adh = rgraph(RGRPH, 1)
    legs = [(Hom(adh, b0, {"V": [1], "E": [1]}, validate=True),
             Hom(adh, b1, {"V": [0], "E": [0]}, validate=True))]
    d = StructuredDecomposition(ShapeGraph(2, [(0, 1)]), [b0, b1], [adh], legs)
    return {"Y": y, "X": x, "f": f, "d": d}


def rgraph_cycle_fixture() -> dict:
    """A reflexive triangle decomposed over a K3 shape, with X a single vertex."""
    bags = [rgraph(RGRPH, 2, [(0, 1)]) for _ in range(3)]
    adhesions = [rgraph(RGRPH, 1) for _ in range(3)]
    edges = [(0, 1), (1, 2), (2, 0)]
    legs = []
    for k, (i, j) in enumerate(edges):
        legs.append((Hom(adhesions[k], bags[i], {"V": [1], "E": [1]}),
                     Hom(adhesions[k], bags[j], {"V": [0], "E": [0]})))
    d = StructuredDecomposition(ShapeGraph(3, edges), bags, adhesions, legs)
    y = rgraph(RGRPH, 3, [(0, 1), (1, 2), (2, 0)])
    x = rgraph(RGRPH, 1)
    f = Hom(x, y, {"V": [0], "E": [0]}, validate=True)
    return {"Y": y, "X": x, "f": f, "d": d}


# -- random generators --------------------------------------------------------------------

@dataclass
class RandomCase:
    y: Instance
    d: StructuredDecomposition
    f: Hom


def random_tree_decomposition(rng: random.Random, max_bags: int = 4, max_vertices: int = 3,
                              max_edges: int = 3) -> tuple[Instance, StructuredDecomposition]:
    """A random tree-shaped decomposition of directed multigraphs, built bag by bag.

    Each new bag hangs off a random earlier bag: it starts from a random
    sub-graph of its parent (the adhesion) and then grows fresh vertices and
    edges.  Returns the colimit together with the decomposition.
    """
    from .decomposition import decomposition_colimit

    n_bags = rng.randint(1, max_bags)
    bags: list[Instance] = []
    adhesions: list[Instance] = []
    legs = []
    shape_edges = []

    def grow(base_v: int, base_edges: list[tuple[int, int]]) -> Instance:
        n = rng.randint(max(base_v, 1), max_vertices)
        edges = list(base_edges)
        room = max_edges - len(edges)
        for _ in range(rng.randint(0, max(room, 0))):
            edges.append((rng.randrange(n), rng.randrange(n)))
        return graph(GRPH, n, edges)

    bags.append(grow(0, []))
    for k in range(1, n_bags):
        p = rng.randrange(k)
        parent = bags[p]
        keep_v = sorted(v for v in range(parent.sizes["V"]) if rng.random() < 0.5)
        kv = set(keep_v)
        keep_e = sorted(e for e in range(parent.sizes["E"])
                        if parent.actions["s"][e] in kv and parent.actions["t"][e] in kv and rng.random() < 0.5)
        adh, to_parent = subinstance(parent, {"V": keep_v, "E": keep_e})
        child = grow(adh.sizes["V"], list(zip(adh.actions["s"], adh.actions["t"])))
        to_child = Hom(adh, child, {"V": range(adh.sizes["V"]), "E": range(adh.sizes["E"])})
        bags.append(child)
        adhesions.append(adh)
        legs.append((to_parent, to_child))
        shape_edges.append((p, k))
    d = StructuredDecomposition(ShapeGraph(n_bags, shape_edges), bags, adhesions, legs)
    y, _ = decomposition_colimit(d)
    return y, d


def random_subobject(rng: random.Random, y: Instance) -> Hom:
    """A random sub-graph inclusion (vertices kept with probability 1/2, then edges among them)."""
    keep_v = [v for v in range(y.sizes["V"]) if rng.random() < 0.5]
    kv = set(keep_v)
    keep_e = [e for e in range(y.sizes["E"])
              if y.actions["s"][e] in kv and y.actions["t"][e] in kv and rng.random() < 0.6]
    return subinstance(y, {"V": keep_v, "E": keep_e})[1]


def random_case(rng: random.Random, **kw) -> RandomCase:
    y, d = random_tree_decomposition(rng, **kw)
    return RandomCase(y, d, random_subobject(rng, y))


def random_hom_into(rng: random.Random, y: Instance, max_vertices: int = 4, max_edges: int = 4) -> Hom:
    """A random graph ``X`` with a random homomorphism ``X -> y`` (need not be monic)."""
    n = rng.randint(0 if y.sizes["V"] == 0 else 1, max_vertices)
    if y.sizes["V"] == 0:
        n = 0
    vmap = [rng.randrange(y.sizes["V"]) for _ in range(n)]
    pre: dict[int, list[int]] = {}
    for x, v in enumerate(vmap):
        pre.setdefault(v, []).append(x)
    edges, emap = [], []
    for _ in range(rng.randint(0, max_edges)):
        if not y.sizes["E"]:
            break
        e = rng.randrange(y.sizes["E"])
        srcs, tgts = pre.get(y.actions["s"][e]), pre.get(y.actions["t"][e])
        if srcs and tgts:
            edges.append((rng.choice(srcs), rng.choice(tgts)))
            emap.append(e)
    x = graph(GRPH, n, edges)
    return Hom(x, y, {"V": vmap, "E": emap}, validate=True)
