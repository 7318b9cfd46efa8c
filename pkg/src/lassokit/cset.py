"""Finite copresheaf instances over a schema and their homomorphisms.

Carriers are dense ranges ``0..n-1``; an action is a tuple whose ``i``-th entry
is the image of element ``i``.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .config import require_within
from .schema import SchemaPresentation


class InstanceError(ValueError):
    pass


class Instance:
    __slots__ = ("schema", "sizes", "actions", "_key", "_hash")

    def __init__(self, schema: SchemaPresentation, sizes: Mapping[str, int],
                 actions: Mapping[str, Sequence[int]], validate: bool = True):
        self.schema = schema
        self.sizes = {s: int(sizes.get(s, 0)) for s in schema.objects}
        self.actions = {g.name: tuple(actions.get(g.name, ())) for g in schema.generators}
        self._key = (tuple(self.sizes[s] for s in schema.objects),
                     tuple(self.actions[g.name] for g in schema.generators))
        self._hash = hash((schema, self._key))
        if validate:
            errors = instance_violations(self)
            if errors:
                raise InstanceError("; ".join(errors))

    def size(self, sort: str) -> int:
        return self.sizes[sort]

    def total_size(self) -> int:
        return sum(self.sizes.values())

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self._key == other._key and self.schema == other.schema

    def __hash__(self):
        return self._hash

    def __repr__(self):
        acts = ", ".join(f"{k}={list(v)}" for k, v in self.actions.items())
        return f"Instance({self.schema.name or 'schema'}, {self.sizes}, {acts})"

    def path_action(self, path: Sequence[str], sort: str) -> tuple[int, ...]:
        """Compose actions along ``path`` (diagrammatic order) starting at ``sort``."""
        out = tuple(range(self.sizes[sort]))
        for name in path:
            act = self.actions[name]
            out = tuple(act[x] for x in out)
        return out


def instance_violations(inst: Instance) -> list[str]:
    errors = []
    schema = inst.schema
    for s, n in inst.sizes.items():
        if n < 0:
            errors.append(f"negative carrier for {s}")
    for g in schema.generators:
        act = inst.actions[g.name]
        if len(act) != inst.sizes[g.dom]:
            errors.append(f"action {g.name} has {len(act)} entries, expected {inst.sizes[g.dom]}")
            continue
        bound = inst.sizes[g.cod]
        if any(not 0 <= y < bound for y in act):
            errors.append(f"action {g.name} leaves carrier {g.cod}")
    if errors:
        return errors
    for lhs, rhs in schema.equations:
        ends = schema.path_endpoints(lhs) or schema.path_endpoints(rhs)
        sort = ends[0]
        if inst.path_action(lhs, sort) != inst.path_action(rhs, sort):
            errors.append(f"equation {list(lhs)} = {list(rhs)} fails")
    return errors


def empty_instance(schema: SchemaPresentation) -> Instance:
    return Instance(schema, {}, {})


def terminal_instance(schema: SchemaPresentation) -> Instance:
    return Instance(schema, {s: 1 for s in schema.objects},
                    {g.name: (0,) for g in schema.generators})


class Hom:
    __slots__ = ("dom", "cod", "components")

    def __init__(self, dom: Instance, cod: Instance, components: Mapping[str, Sequence[int]],
                 validate: bool = False):
        self.dom = dom
        self.cod = cod
        self.components = {s: tuple(components.get(s, ())) for s in dom.schema.objects}
        if validate:
            problems = check_hom(self)
            if problems:
                raise InstanceError(f"not a homomorphism: {problems[:3]}")

    @classmethod
    def _trusted(cls, dom: Instance, cod: Instance, components: dict) -> "Hom":
        # components must already be a dict of tuples keyed by every sort
        h = cls.__new__(cls)
        h.dom, h.cod, h.components = dom, cod, components
        return h

    def __call__(self, sort: str, x: int) -> int:
        return self.components[sort][x]

    def __eq__(self, other):
        if not isinstance(other, Hom):
            return NotImplemented
        return (self.components == other.components and self.dom == other.dom
                and self.cod == other.cod)

    def __hash__(self):
        return hash((self.dom, self.cod, tuple(self.components.values())))

    def __repr__(self):
        return f"Hom({ {k: list(v) for k, v in self.components.items()} })"

    def then(self, other: "Hom") -> "Hom":
        """``other . self``."""
        return compose(other, self)


def identity(inst: Instance) -> Hom:
    return Hom(inst, inst, {s: range(n) for s, n in inst.sizes.items()})


def compose(g: Hom, f: Hom) -> Hom:
    """``g . f`` (apply ``f`` first)."""
    if f.cod is not g.dom and f.cod != g.dom:
        raise InstanceError("composing non-composable homomorphisms")
    gcs = g.components
    comps = {s: tuple([gcs[s][x] for x in fc]) for s, fc in f.components.items()}
    return Hom._trusted(f.dom, g.cod, comps)


def check_hom(h: Hom) -> list[tuple[str, int]]:
    """Naturality witnesses ``(generator, element)``; empty when ``h`` is natural."""
    if h.dom.schema != h.cod.schema:
        raise InstanceError("schema mismatch")
    bad = []
    for s, comp in h.components.items():
        if len(comp) != h.dom.sizes[s] or any(not 0 <= y < h.cod.sizes[s] for y in comp):
            bad.append((f"component:{s}", -1))
    if bad:
        return bad
    for g in h.dom.schema.generators:
        da, ca = h.dom.actions[g.name], h.cod.actions[g.name]
        src, tgt = h.components[g.dom], h.components[g.cod]
        for x in range(h.dom.sizes[g.dom]):
            if tgt[da[x]] != ca[src[x]]:
                bad.append((g.name, x))
    return bad


def is_mono(h: Hom) -> bool:
    return all(len(set(c)) == len(c) for c in h.components.values())


def is_epi(h: Hom) -> bool:
    return all(len(set(c)) == h.cod.sizes[s] for s, c in h.components.items())


def is_iso(h: Hom) -> bool:
    return all(len(c) == h.cod.sizes[s] and len(set(c)) == len(c)
               for s, c in h.components.items())


def inverse(h: Hom) -> Hom:
    comps = {}
    for s, c in h.components.items():
        inv = [0] * len(c)
        for x, y in enumerate(c):
            inv[y] = x
        comps[s] = inv
    return Hom(h.cod, h.dom, comps)


def _search_order(schema: SchemaPresentation) -> list[str]:
    # assigning a sort with many outgoing generators forces the most values
    out = {s: 0 for s in schema.objects}
    for g in schema.generators:
        out[g.dom] += 1
    return sorted(schema.objects, key=lambda s: (-out[s], schema.objects.index(s)))


def _iter_homs(a: Instance, b: Instance, injective: bool) -> Iterator[dict[str, list[int]]]:
    schema = a.schema
    if schema != b.schema:
        raise InstanceError("schema mismatch")
    outgoing = {s: [(a.actions[g.name], b.actions[g.name], g.cod) for g in schema.outgoing(s)]
                for s in schema.objects}
    comp = {s: [-1] * a.sizes[s] for s in schema.objects}
    used = {s: [False] * b.sizes[s] for s in schema.objects}
    order = [(s, x) for s in _search_order(schema) for x in range(a.sizes[s])]
    nb = {s: b.sizes[s] for s in schema.objects}

    def assign(s: str, x: int, y: int, trail: list) -> bool:
        stack = [(s, x, y)]
        while stack:
            s, x, y = stack.pop()
            cur = comp[s][x]
            if cur >= 0:
                if cur != y:
                    return False
                continue
            if injective:
                if used[s][y]:
                    return False
                used[s][y] = True
            comp[s][x] = y
            trail.append((s, x))
            for da, db, cod in outgoing[s]:
                stack.append((cod, da[x], db[y]))
        return True

    def undo(trail: list) -> None:
        for s, x in trail:
            if injective:
                used[s][comp[s][x]] = False
            comp[s][x] = -1

    def rec(i: int):
        while i < len(order) and comp[order[i][0]][order[i][1]] >= 0:
            i += 1
        if i == len(order):
            yield {s: list(c) for s, c in comp.items()}
            return
        s, x = order[i]
        for y in range(nb[s]):
            trail: list = []
            if assign(s, x, y, trail):
                yield from rec(i + 1)
            undo(trail)

    yield from rec(0)


def enumerate_homs(a: Instance, b: Instance, check_bounds: bool = True) -> list[Hom]:
    """All homomorphisms ``a -> b`` in deterministic (lexicographic search) order."""
    if check_bounds:
        require_within(list(a.sizes.values()) + list(b.sizes.values()))
    return [Hom(a, b, c) for c in _iter_homs(a, b, injective=False)]


def iter_homs(a: Instance, b: Instance) -> Iterator[Hom]:
    for c in _iter_homs(a, b, injective=False):
        yield Hom(a, b, c)


def iter_monos(a: Instance, b: Instance) -> Iterator[Hom]:
    if any(a.sizes[s] > b.sizes[s] for s in a.schema.objects):
        return
    for c in _iter_homs(a, b, injective=True):
        yield Hom(a, b, c)


def _fiber_profile(inst: Instance) -> tuple:
    # iso-invariant summary used to reject non-isomorphic pairs quickly
    prof = [tuple(inst.sizes[s] for s in inst.schema.objects)]
    for g in inst.schema.generators:
        counts = [0] * inst.sizes[g.cod]
        for y in inst.actions[g.name]:
            counts[y] += 1
        prof.append(tuple(sorted(counts)))
    return tuple(prof)


def iter_isomorphisms(a: Instance, b: Instance) -> Iterator[Hom]:
    if a.schema != b.schema or _fiber_profile(a) != _fiber_profile(b):
        return
    for c in _iter_homs(a, b, injective=True):
        yield Hom(a, b, c)


def find_isomorphism(a: Instance, b: Instance) -> Hom | None:
    """The first isomorphism in search order, or None."""
    return next(iter_isomorphisms(a, b), None)


def is_isomorphic(a: Instance, b: Instance) -> bool:
    return find_isomorphism(a, b) is not None


def relabel(inst: Instance, perms: Mapping[str, Sequence[int]]) -> Instance:
    """Transport ``inst`` along per-sort bijections (element ``x`` becomes ``perms[s][x]``)."""
    schema = inst.schema
    acts = {}
    for g in schema.generators:
        src, tgt = perms[g.dom], perms[g.cod]
        act = inst.actions[g.name]
        new = [0] * len(act)
        for x, y in enumerate(act):
            new[src[x]] = tgt[y]
        acts[g.name] = new
    return Instance(schema, inst.sizes, acts, validate=False)


def canonical_form(inst: Instance) -> tuple[Instance, Hom]:
    """Least relabelling of a small instance, with the iso ``inst -> canonical``.

    Brute force over all per-sort permutations, so only meant for the tiny
    carriers used by the exhaustive universes.
    """
    schema = inst.schema
    sorts = schema.objects
    best_key = None
    best_perm = None
    gens = schema.generators
    for combo in product(*(permutations(range(inst.sizes[s])) for s in sorts)):
        perms = dict(zip(sorts, combo))
        key = []
        for g in gens:
            src, tgt = perms[g.dom], perms[g.cod]
            act = inst.actions[g.name]
            new = [0] * len(act)
            for x, y in enumerate(act):
                new[src[x]] = tgt[y]
            key.append(tuple(new))
        key = tuple(key)
        if best_key is None or key < best_key:
            best_key, best_perm = key, perms
    canon = Instance(schema, inst.sizes, {g.name: a for g, a in zip(gens, best_key)}, validate=False)
    return canon, Hom(inst, canon, best_perm)


def enumerate_instances(schema: SchemaPresentation, bounds: Mapping[str, int]) -> list[Instance]:
    """All valid instances with ``size(s) <= bounds[s]``, one canonical form per iso class."""
    sorts = schema.objects
    require_within([bounds.get(s, 0) for s in sorts], "universe bound")
    seen = set()
    out = []
    for sizes in product(*(range(bounds.get(s, 0) + 1) for s in sorts)):
        size_map = dict(zip(sorts, sizes))
        choices = [product(range(size_map[g.cod]), repeat=size_map[g.dom]) for g in schema.generators]
        for acts in product(*[list(c) for c in choices]):
            actions = {g.name: a for g, a in zip(schema.generators, acts)}
            inst = Instance(schema, size_map, actions, validate=False)
            if instance_violations(inst):
                continue
            canon, _ = canonical_form(inst)
            if canon not in seen:
                seen.add(canon)
                out.append(canon)
    return out


def subinstance(inst: Instance, keep: Mapping[str, Iterable[int]]) -> tuple[Instance, Hom]:
    """The sub-instance on the given element sets (must be closed under actions)."""
    schema = inst.schema
    kept = {s: sorted(set(keep.get(s, ()))) for s in schema.objects}
    index = {s: {x: i for i, x in enumerate(xs)} for s, xs in kept.items()}
    acts = {}
    for g in schema.generators:
        act = inst.actions[g.name]
        try:
            acts[g.name] = [index[g.cod][act[x]] for x in kept[g.dom]]
        except KeyError as exc:
            raise InstanceError(f"element set not closed under {g.name}") from exc
    sub = Instance(schema, {s: len(xs) for s, xs in kept.items()}, acts, validate=False)
    return sub, Hom(sub, inst, kept)


def iter_subobjects(inst: Instance) -> Iterator[tuple[Instance, Hom]]:
    """Every sub-instance (as an inclusion), smallest element sets first."""
    schema = inst.schema
    sorts = schema.objects
    subsets = []
    for s in sorts:
        n = inst.sizes[s]
        subsets.append([frozenset(x for x in range(n) if mask >> x & 1)
                        for mask in sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m))])
    for combo in product(*subsets):
        chosen = dict(zip(sorts, combo))
        if all(inst.actions[g.name][x] in chosen[g.cod] for g in schema.generators
               for x in chosen[g.dom]):
            yield subinstance(inst, chosen)


# -- graph-flavoured constructors -------------------------------------------------

def graph(schema: SchemaPresentation, n_vertices: int, edges: Sequence[tuple[int, int]]) -> Instance:
    """A ``Grph`` instance from an edge list."""
    return Instance(schema, {"V": n_vertices, "E": len(edges)},
                    {"s": [e[0] for e in edges], "t": [e[1] for e in edges]})


def rgraph(schema: SchemaPresentation, n_vertices: int,
           extra_edges: Sequence[tuple[int, int]] = ()) -> Instance:
    """A reflexive graph: edge ``v`` is the distinguished loop of vertex ``v``,
    further edges follow in the given order."""
    edges = [(v, v) for v in range(n_vertices)] + list(extra_edges)
    return Instance(schema, {"V": n_vertices, "E": len(edges)},
                    {"s": [e[0] for e in edges], "t": [e[1] for e in edges],
                     "l": list(range(n_vertices))})


def colored_graph(schema: SchemaPresentation, n_vertices: int,
                  edges: Mapping[int, Sequence[tuple[int, int]]]) -> Instance:
    """A ``CGr_k`` instance; ``edges`` maps colour ``i`` (1-based) to its edge list."""
    k = len(schema.objects) - 1
    sizes = {"V": n_vertices}
    acts = {}
    for i in range(1, k + 1):
        es = list(edges.get(i, ()))
        sizes[f"E{i}"] = len(es)
        acts[f"s{i}"] = [e[0] for e in es]
        acts[f"t{i}"] = [e[1] for e in es]
    return Instance(schema, sizes, acts)
