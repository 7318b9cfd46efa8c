import random

import pytest

from lassokit import fixtures as fx
from lassokit.colimits import Cocone, colimit
from lassokit.cset import Hom, compose, find_isomorphism, graph, identity, is_epi, is_mono, subinstance
from lassokit.decomposition import (DecompositionError, ShapeGraph, StructuredDecomposition,
                                    decomposition_colimit, decompositions_isomorphic,
                                    diagram_of_images, pullback_decomposition,
                                    pullback_decomposition_full, to_diagram, validate_decomposition,
                                    width, width_vector)
from lassokit.lasso import lasso_cc
from lassokit.schema import builtin_schema
from lassokit.universe import get_universe


def test_path_pullback_decomposition_valid():
    d = fx.path_pullback()["d"]
    assert validate_decomposition(d) == []
    diag = to_diagram(d)
    assert len(diag.nodes) == 3 and len(diag.arrows) == 2


def test_non_injective_leg_reported(grph):
    bag = graph(grph, 1, [])
    adh = graph(grph, 2, [])
    leg = Hom(adh, bag, {"V": [0, 0], "E": []})
    d = StructuredDecomposition(ShapeGraph(2, [(0, 1)]), [bag, bag], [adh], [(leg, leg)])
    problems = validate_decomposition(d)
    assert problems and "edge 0" in problems[0] and "monic" in problems[0]


def test_empty_shape_decomposes_initial(grph):
    d = StructuredDecomposition(ShapeGraph(0, []), [], [], [], schema=grph)
    assert validate_decomposition(d) == []
    apex, _ = decomposition_colimit(d)
    assert apex.total_size() == 0
    assert width(d) == 0


def test_single_bag_diagram(grph):
    d = StructuredDecomposition(ShapeGraph(1, []), [fx.path3()], [], [])
    diag = to_diagram(d)
    assert len(diag.nodes) == 1 and diag.arrows == []


def test_triangle_diagram_size():
    diag = to_diagram(fx.triangle_decomposition())
    assert len(diag.nodes) == 6 and len(diag.arrows) == 6
    assert not fx.triangle_decomposition().shape.is_forest()


def test_path_pullback_colimit_and_width():
    f1 = fx.path_pullback()
    apex, _ = decomposition_colimit(f1["d"])
    assert find_isomorphism(apex, f1["H"]) is not None
    assert width(f1["d"]) == 2
    assert width(f1["d"], "E") == 1
    assert width(f1["d"], "total") == 3
    with pytest.raises(DecompositionError):
        width(f1["d"], "W")


def test_empty_adhesion_gives_disjoint_union(grph):
    a, b = graph(grph, 2, [(0, 1)]), graph(grph, 2, [(0, 1)])
    empty = graph(grph, 0, [])
    none = Hom(empty, a, {"V": [], "E": []})
    d = StructuredDecomposition(ShapeGraph(2, [(0, 1)]), [a, b], [empty], [(none, Hom(empty, b, {}))])
    apex, _ = decomposition_colimit(d)
    assert apex.sizes == {"V": 4, "E": 2}


def test_star_decomposition_builds_full_two():
    d = fx.star_decomposition()
    assert validate_decomposition(d) == []
    apex, _ = decomposition_colimit(d)
    assert find_isomorphism(apex, fx.full_two()) is not None


def test_single_empty_bag_has_zero_width(grph):
    d = StructuredDecomposition(ShapeGraph(1, []), [graph(grph, 0, [])], [], [])
    assert width(d) == 0
    assert width_vector(d) == {"V": 0, "E": 0}


def test_generic_schema_width_is_vector():
    petri = builtin_schema("Petri")
    from lassokit.cset import empty_instance
    d = StructuredDecomposition(ShapeGraph(1, []), [empty_instance(petri)], [], [])
    assert width(d) == {s: 0 for s in petri.objects}


def test_shape_forest_detection():
    assert ShapeGraph(3, [(0, 1), (1, 2)]).is_forest()
    assert ShapeGraph(4, [(0, 1), (2, 3)]).is_forest()
    assert not ShapeGraph(1, [(0, 0)]).is_forest()
    assert not ShapeGraph(2, [(0, 1), (1, 0)]).is_forest()


def test_pullback_along_identity():
    d = fx.path_pullback()["d"]
    y, _ = decomposition_colimit(d)
    pulled = pullback_decomposition(d, identity(y))
    assert decompositions_isomorphic(pulled, d)


def test_path_pullback_pullback_bags():
    f1 = fx.path_pullback()
    pulled = pullback_decomposition_full(f1["d"], f1["f"])
    bags = [set(h.components["V"]) for h in pulled.to_domain[:2]]
    assert bags == f1["expected_bags"]
    assert pulled.decomposition.shape == f1["d"].shape
    assert validate_decomposition(pulled.decomposition) == []
    apex, _ = decomposition_colimit(pulled.decomposition)
    assert find_isomorphism(apex, f1["G"]) is not None


def test_pullback_along_bag_inclusion():
    f1 = fx.path_pullback()
    h = f1["H"]
    bag, inc = subinstance(h, {"V": [0, 1], "E": [0]})
    pulled = pullback_decomposition(f1["d"], inc)
    # bag 0 pulls back to itself, bag 1 to the shared vertex
    assert find_isomorphism(pulled.bags[0], bag) is not None
    assert pulled.bags[1].sizes == {"V": 1, "E": 0}


def test_pullback_misaligned_rejected(grph):
    d = fx.path_pullback()["d"]
    other = graph(grph, 1, [])
    with pytest.raises(DecompositionError):
        pullback_decomposition(d, identity(other))


def test_random_pullbacks_valid_and_decompose_domain():
    rng = random.Random(11)
    for _ in range(40):
        y, d = fx.random_tree_decomposition(rng)
        delta = fx.random_hom_into(rng, y)
        pulled = pullback_decomposition(d, delta)
        assert pulled.shape == d.shape
        assert validate_decomposition(pulled) == []
        apex, _ = decomposition_colimit(pulled)
        assert find_isomorphism(apex, delta.dom) is not None


def test_images_of_monic_colimit_cocone_are_originals():
    d = to_diagram(fx.triangle_decomposition())
    _, c = colimit(d)
    images = diagram_of_images(d, c)
    for node, img in zip(d.nodes, images.diagram.nodes):
        assert find_isomorphism(node, img) is not None
    assert images.diagram.is_monic()


def test_one_node_images():
    y = fx.path3()
    q = lasso_cc().eta(y)
    from lassokit.colimits import FiniteDiagram
    d = FiniteDiagram([y], [])
    images = diagram_of_images(d, Cocone(d, q.cod, [q]))
    assert images.diagram.nodes[0] == q.cod


def test_images_preserve_colimit_under_epi_postcomposition(grph):
    """Gluing the images of a colimit cocone followed by an epi recovers the epi's target."""
    rng = random.Random(3)
    for _ in range(40):
        y, d = fx.random_tree_decomposition(rng)
        f = fx.random_subobject(rng, y)
        q = lasso_cc().eta(f.dom)
        from lassokit.contraction import contract
        c = contract(y, f, lasso_cc())
        diag = to_diagram(d)
        _, cocone = colimit(diag)
        iso = find_isomorphism(cocone.apex, y)
        legs = [compose(c.quotient, compose(iso, leg)) for leg in cocone.legs]
        images = diagram_of_images(diag, Cocone(diag, c.result, legs))
        assert images.diagram.is_monic()
        apex, _ = colimit(images.diagram)
        assert find_isomorphism(apex, c.result) is not None


def test_width_monotone_under_bagwise_epis():
    rng = random.Random(5)
    for _ in range(40):
        y, d = fx.random_tree_decomposition(rng)
        f = fx.random_subobject(rng, y)
        from lassokit.contraction import pushforward_images
        r = pushforward_images(d, f, lasso_cc())
        assert all(is_epi(e) for e in r.bag_epis)
        before, after = width_vector(d), width_vector(r.output)
        assert all(after[s] <= before[s] for s in before)
