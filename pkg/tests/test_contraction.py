import random

import pytest

from lassokit import fixtures as fx
from lassokit.colimits import Span, image_factorization, kernel_labels, pushout
from lassokit.cset import (Hom, find_isomorphism, graph, identity, is_iso, iter_subobjects,
                           subinstance)
from lassokit.decomposition import (DecompositionError, decomposition_colimit,
                                    decompositions_isomorphic, validate_decomposition, width)
from lassokit.contraction import (ContractionError, ShapeGateError, composite_contraction_probe, contract,
                                  equivalence_check, naive_pointwise_contraction,
                                  pushforward_images, pushforward_span, q_colimit_matches)
from lassokit.lasso import lasso_cc, lasso_rgrph, lasso_trivial
from lassokit.universe import get_universe


# -- contract -------------------------------------------------------------------------------

def test_contract_along_identity_is_lasso_image():
    y = fx.path3()
    c = contract(y, identity(y), lasso_cc())
    assert find_isomorphism(c.result, lasso_cc().on_object(y)) is not None


def test_p3_contraction():
    p3 = fx.p3_contraction()
    c = contract(p3["Y"], p3["f"], lasso_cc())
    assert c.result.sizes == {"V": 2, "E": 2}
    assert c.quotient.components["V"] == (0, 0, 1)
    assert sorted(zip(c.result.actions["s"], c.result.actions["t"])) == [(0, 0), (0, 1)]


def test_trivial_contraction_is_iso(grph):
    p3 = fx.p3_contraction()
    c = contract(p3["Y"], p3["f"], lasso_trivial(grph))
    assert is_iso(c.quotient)


def test_non_mono_sub_rejected_naming_sort(grph):
    y = fx.path3()
    x = fx.discrete(2)
    with pytest.raises(ContractionError, match="sort\\(s\\) V"):
        contract(y, Hom(x, y, {"V": [1, 1], "E": []}), lasso_cc())


def test_schema_mismatch_rejected():
    p3 = fx.p3_contraction()
    with pytest.raises(ContractionError):
        contract(p3["Y"], p3["f"], lasso_rgrph("cc"))


def test_sub_must_land_in_base():
    p3 = fx.p3_contraction()
    with pytest.raises(ContractionError):
        contract(fx.two_loops(), p3["f"], lasso_cc())


def test_contracting_along_image_agrees_with_arbitrary_map(grph):
    """For cc on graphs, contracting along any g equals contracting along its image."""
    u = get_universe(grph, {"V": 3, "E": 3})
    cc = lasso_cc()
    checked = 0
    for i, x in enumerate(u.instances):
        for j, y in enumerate(u.instances):
            for g in u.homs(i, j):
                _, _, quot = pushout(Span(x, cc.eta(x), g))
                _, _, m = image_factorization(g)
                via_image = contract(y, m, cc)
                assert kernel_labels(quot) == kernel_labels(via_image.quotient)
                checked += 1
    assert checked > 1000


# -- pushforward ----------------------------------------------------------------------------

def test_p3_pushforward_images():
    p3 = fx.p3_contraction()
    r = pushforward_images(p3["d"], p3["f"], lasso_cc())
    b0, b1 = r.output.bags
    assert b0.sizes == {"V": 1, "E": 1} and b0.actions["s"] == b0.actions["t"]
    assert b1.sizes == {"V": 2, "E": 1} and b1.actions["s"] != b1.actions["t"]
    assert r.output.adhesions[0].sizes == {"V": 1, "E": 0}
    assert all(r.checks().values())
    assert width(p3["d"]) == width(r.output) == 2


def test_trivial_pushforward_is_bagwise_iso(grph):
    p3 = fx.p3_contraction()
    r = pushforward_images(p3["d"], p3["f"], lasso_trivial(grph))
    assert decompositions_isomorphic(r.output, p3["d"])


def test_p3_span_matches_images():
    p3 = fx.p3_contraction()
    eq = equivalence_check(p3["d"], p3["f"], lasso_cc())
    assert eq and len(eq.isos) == 3
    assert q_colimit_matches(eq.span)
    assert set(eq.span.intermediates) == {"x", "q", "h", "omega", "u", "pulled"}


def test_misaligned_base_rejected(grph):
    d = fx.path_pullback()["d"]
    y = graph(grph, 4, [(0, 1)])
    _, inc = subinstance(y, {"V": [0]})
    with pytest.raises(DecompositionError, match="misalignment"):
        pushforward_images(d, inc, lasso_cc())


def test_invalid_decomposition_rejected(grph):
    d = fx.path_pullback()["d"]
    two = fx.discrete(2)
    bad_leg = Hom(two, d.bags[0], {"V": [0, 0], "E": []})
    broken = type(d)(d.shape, d.bags, [two], [(bad_leg, bad_leg)])
    p3 = fx.p3_contraction()
    assert validate_decomposition(broken)
    with pytest.raises((ContractionError, DecompositionError)):
        pushforward_images(broken, p3["f"], lasso_cc())


def test_naive_control_breaks_monic_legs():
    n = fx.naive_contraction_fixture()
    naive = naive_pointwise_contraction(n["d"], n["f"], lasso_cc())
    assert not naive.monic()
    r = pushforward_images(n["d"], n["f"], lasso_cc())
    assert all(r.checks().values())
    assert equivalence_check(n["d"], n["f"], lasso_cc())


def test_star_pushforward_all_vertices():
    d = fx.star_decomposition()
    y, _ = decomposition_colimit(d)
    _, inc = subinstance(y, {"V": [0, 1], "E": []})
    eq = equivalence_check(d, inc, lasso_cc())
    assert eq
    assert eq.images.contraction.result.sizes == {"V": 2, "E": 4}


def test_deloop_on_tree_accepted():
    t = fx.rgraph_tree_fixture()
    deloop = lasso_rgrph("deloop")
    r = pushforward_span(t["d"], t["f"], deloop)
    assert all(r.checks().values())
    assert r.contraction.result.sizes == {"V": 3, "E": 5}
    assert equivalence_check(t["d"], t["f"], deloop)


def test_cyclic_shape_gated_for_non_strong_lasso():
    cyc = fx.rgraph_cycle_fixture()
    with pytest.raises(ShapeGateError):
        pushforward_span(cyc["d"], cyc["f"], lasso_rgrph("deloop"))
    # the direct construction needs no gate
    assert all(pushforward_images(cyc["d"], cyc["f"], lasso_rgrph("deloop")).checks().values())
    assert equivalence_check(cyc["d"], cyc["f"], lasso_rgrph("cc"))


def test_triangle_with_cc():
    d = fx.triangle_decomposition()
    y, _ = decomposition_colimit(d)
    _, inc = subinstance(y, {"V": [0, 1], "E": []})
    assert equivalence_check(d, inc, lasso_cc())


def test_random_equivalence_cc():
    rng = random.Random(2024)
    for _ in range(60):
        case = fx.random_case(rng)
        eq = equivalence_check(case.d, case.f, lasso_cc())
        assert eq
        assert q_colimit_matches(eq.span)


def test_random_equivalence_trivial(grph):
    rng = random.Random(99)
    for _ in range(30):
        case = fx.random_case(rng)
        eq = equivalence_check(case.d, case.f, lasso_trivial(grph))
        assert eq
        assert decompositions_isomorphic(eq.images.output, case.d)


# -- composing contractions -----------------------------------------------------------------

def _second_subs(c):
    return [inc for _, inc in iter_subobjects(c.result)]


def test_composite_found_for_cc():
    p3 = fx.p3_contraction()
    c1 = contract(p3["Y"], p3["f"], lasso_cc())
    for f2 in _second_subs(c1):
        search = composite_contraction_probe(p3["Y"], p3["f"], f2, lasso_cc(), {"V": 3, "E": 3})
        assert search.found
        assert kernel_labels(contract(p3["Y"], search.witness, lasso_cc()).quotient) == \
            kernel_labels(search.composite)


def test_composite_for_trivial_is_initial_subobject(grph):
    p3 = fx.p3_contraction()
    t = lasso_trivial(grph)
    c1 = contract(p3["Y"], p3["f"], t)
    search = composite_contraction_probe(p3["Y"], p3["f"], identity(c1.result), t)
    assert search.found and search.witness.dom.total_size() == 0
    assert search.checked == 1


def test_composite_probe_bounds_and_landing():
    p3 = fx.p3_contraction()
    with pytest.raises(ContractionError):
        composite_contraction_probe(p3["Y"], p3["f"], p3["f"], lasso_cc(), {"V": 2})
    with pytest.raises(ContractionError):
        composite_contraction_probe(p3["Y"], p3["f"], p3["f"], lasso_cc())


def test_gather_composites_reported(rgrph):
    rng = random.Random(17)
    gather = lasso_rgrph("gather")
    y = fx.rgraph_tree_fixture()["Y"]
    subs = [inc for _, inc in iter_subobjects(y)]
    outcomes = []
    for _ in range(5):
        f1 = rng.choice(subs)
        c1 = contract(y, f1, gather)
        f2 = rng.choice(_second_subs(c1))
        outcomes.append(composite_contraction_probe(y, f1, f2, gather, {"V": 3, "E": 6}).found)
    assert len(outcomes) == 5


def test_gather_two_step_contraction_with_no_single_witness(rgrph):
    # contract the edge 0->1, then the merged vertex together with that edge (now a loop)
    y = fx.rgraph_tree_fixture()["Y"]
    gather = lasso_rgrph("gather")
    f1 = subinstance(y, {"V": [0, 1], "E": [0, 1, 3]})[1]
    c1 = contract(y, f1, gather)
    f2 = subinstance(c1.result, {"V": [0], "E": [0, 1]})[1]
    search = composite_contraction_probe(y, f1, f2, gather)
    assert not search.found
    assert search.checked == sum(1 for _ in iter_subobjects(y))
