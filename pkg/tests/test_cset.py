import pytest

from lassokit import fixtures as fx
from lassokit.config import BoundExceeded
from lassokit.cset import (Hom, Instance, InstanceError, canonical_form, check_hom, compose,
                           enumerate_homs, enumerate_instances, find_isomorphism, identity, inverse,
                           is_epi, is_iso, is_isomorphic, is_mono, iter_subobjects, graph, rgraph,
                           terminal_instance)
from oracles import brute_homs, brute_isomorphic


def test_instance_rejects_out_of_range_action(grph):
    with pytest.raises(InstanceError):
        Instance(grph, {"V": 1, "E": 1}, {"s": [1], "t": [0]})


def test_instance_rejects_broken_equation(rgrph):
    # l(0) = edge 0 but that edge is not a loop at 0
    with pytest.raises(InstanceError):
        Instance(rgrph, {"V": 2, "E": 2}, {"s": [0, 1], "t": [1, 1], "l": [0, 1]})


def test_identity_is_natural(grph):
    assert check_hom(identity(fx.path3())) == []


def test_mismatched_source_reported_at_s(grph):
    e = graph(grph, 2, [(0, 1)])
    h = Hom(e, e, {"V": [1, 1], "E": [0]})
    witnesses = check_hom(h)
    assert ("s", 0) in witnesses


def test_path_pullback_map_is_natural():
    f = fx.path_pullback()["f"]
    assert check_hom(f) == []
    # its edge action is the unique one compatible with the vertex map
    assert [h.components["E"] for h in enumerate_homs(f.dom, f.cod)
            if h.components["V"] == f.components["V"]] == [f.components["E"]]


def test_identity_is_mono_epi_iso():
    i = identity(fx.path3())
    assert is_mono(i) and is_epi(i) and is_iso(i)


def test_collapse_is_epi_not_mono(grph):
    h = Hom(graph(grph, 2, []), graph(grph, 1, []), {"V": [0, 0], "E": []})
    assert is_epi(h) and not is_mono(h) and not is_iso(h)


def test_inverse_round_trip():
    y = fx.path3()
    iso = find_isomorphism(y, y)
    assert compose(inverse(iso), iso) == identity(y)


def test_find_isomorphism_self_is_identity():
    y = fx.full_two()
    assert find_isomorphism(y, y) == identity(y)


def test_loop_counts_differ(grph):
    assert find_isomorphism(fx.loop_vertex(), fx.two_loops()) is None


def test_renamed_paths_isomorphic(grph):
    a = graph(grph, 3, [(0, 1), (1, 2)])
    b = graph(grph, 3, [(2, 0), (0, 1)])
    iso = find_isomorphism(a, b)
    assert iso is not None and check_hom(iso) == [] and is_iso(iso)
    assert brute_isomorphic(a, b)


def test_two_homs_terminal_to_edge_with_loops():
    assert len(enumerate_homs(fx.terminal_rgraph(), fx.edge_with_loops())) == 2


@pytest.mark.parametrize("name", ["Grph", "RGrph", "Petri"])
def test_unique_map_to_terminal(name):
    from lassokit.schema import builtin_schema
    schema = builtin_schema(name)
    top = terminal_instance(schema)
    for x in enumerate_instances(schema, {s: 2 for s in schema.objects})[:15]:
        assert len(enumerate_homs(x, top)) == 1


def test_single_edge_endomorphisms(grph):
    e = graph(grph, 2, [(0, 1)])
    homs = enumerate_homs(e, e)
    assert len(homs) == 1 and homs[0] == identity(e)
    # the brute-force oracle looks at 2^2 * 1 candidate families and keeps one
    assert len(brute_homs(e, e)) == 1


def test_enumerate_homs_matches_brute_force(grph):
    universe = enumerate_instances(grph, {"V": 2, "E": 2})
    for a in universe:
        for b in universe:
            got = sorted(tuple(h.components[s] for s in grph.objects) for h in enumerate_homs(a, b))
            want = sorted(tuple(tuple(c[s]) for s in grph.objects) for c in brute_homs(a, b))
            assert got == want
            assert all(check_hom(h) == [] for h in enumerate_homs(a, b))


def test_enumerate_homs_refuses_above_ceiling(grph, monkeypatch):
    monkeypatch.setenv("LASSOKIT_MAX_CARRIER", "2")
    big = graph(grph, 3, [])
    with pytest.raises(BoundExceeded):
        enumerate_homs(big, big)


def test_universe_sizes_match_known_counts(grph):
    # iso classes of directed multigraphs: 1 vertex with 0..2 loops, and so on
    assert len(enumerate_instances(grph, {"V": 1, "E": 2})) == 4  # empty, point, 1 loop, 2 loops
    assert len(enumerate_instances(grph, {"V": 2, "E": 0})) == 3


def test_canonical_form_is_invariant(grph):
    a = graph(grph, 3, [(0, 1), (1, 2)])
    b = graph(grph, 3, [(2, 0), (0, 1)])
    ca, ia = canonical_form(a)
    cb, ib = canonical_form(b)
    assert ca == cb
    assert check_hom(ia) == [] and is_iso(ia)


def test_subobjects_of_edge(grph):
    e = graph(grph, 2, [(0, 1)])
    subs = list(iter_subobjects(e))
    # empty, {0}, {1}, {0,1}, {0,1}+edge
    assert len(subs) == 5
    assert all(is_mono(inc) for _, inc in subs)


def test_rgraph_helper_distinguished_loops(rgrph):
    x = rgraph(rgrph, 2, [(0, 1)])
    assert x.actions["l"] == (0, 1)
    assert x.sizes == {"V": 2, "E": 3}
