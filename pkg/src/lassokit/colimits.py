"""Pointwise finite colimits, pullbacks and image factorizations.

Every colimit goes through one engine: form the coproduct of the nodes, then
quotient each sort by the equivalence generated by the arrows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cset import Hom, Instance, InstanceError, compose, is_iso, is_mono, subinstance


class UnionFind:
    """Union-find whose class representative is always the least member."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def labels(self) -> tuple[list[int], int]:
        """Dense class labels, numbered by least member, and the class count."""
        out = []
        dense: dict[int, int] = {}
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in dense:
                dense[r] = len(dense)
            out.append(dense[r])
        return out, len(dense)


def quotient(inst: Instance, pairs: Mapping[str, Iterable[tuple[int, int]]]) -> Hom:
    """Quotient by the least congruence containing ``pairs``; returns the quotient map.

    The closure propagates identifications along every generator until stable,
    so the induced actions are always well defined.
    """
    schema = inst.schema
    ufs = {s: UnionFind(inst.sizes[s]) for s in schema.objects}
    pending = []
    for s, ps in pairs.items():
        for a, b in ps:
            pending.append((s, a, b))
    outgoing = {s: [(inst.actions[g.name], g.cod) for g in schema.outgoing(s)] for s in schema.objects}
    while pending:
        s, a, b = pending.pop()
        if ufs[s].union(a, b):
            for act, cod in outgoing[s]:
                if act[a] != act[b]:
                    pending.append((cod, act[a], act[b]))
    return quotient_from_union_find(inst, ufs)


def quotient_from_union_find(inst: Instance, ufs: Mapping[str, UnionFind]) -> Hom:
    schema = inst.schema
    labels = {}
    sizes = {}
    for s in schema.objects:
        labels[s], sizes[s] = ufs[s].labels()
    acts = {}
    for g in schema.generators:
        act = [0] * sizes[g.dom]
        src, tgt = labels[g.dom], labels[g.cod]
        src_act = inst.actions[g.name]
        for x in range(inst.sizes[g.dom]):
            act[src[x]] = tgt[src_act[x]]
        acts[g.name] = act
    q = Instance(schema, sizes, acts, validate=False)
    return Hom(inst, q, labels)


def kernel_labels(h: Hom) -> dict[str, tuple[int, ...]]:
    """The partition induced by ``h`` on its domain, as dense labels by least member."""
    out = {}
    for s, comp in h.components.items():
        dense: dict[int, int] = {}
        out[s] = tuple(dense.setdefault(y, len(dense)) for y in comp)
    return out


def kernel_refines(h: Hom, k: Hom) -> bool:
    """True when every pair identified by ``h`` is identified by ``k`` (same domain)."""
    for s, hc in h.components.items():
        kc = k.components[s]
        seen: dict[int, int] = {}
        for x, y in enumerate(hc):
            if seen.setdefault(y, kc[x]) != kc[x]:
                return False
    return True


def factor_through_epi(epi: Hom, h: Hom) -> Hom | None:
    """The unique ``u`` with ``u . epi = h``, or None when ``h`` does not respect ``epi``'s kernel."""
    comps = {}
    for s, ec in epi.components.items():
        hc = h.components[s]
        out = [-1] * epi.cod.sizes[s]
        for x, y in enumerate(ec):
            if out[y] == -1:
                out[y] = hc[x]
            elif out[y] != hc[x]:
                return None
        if -1 in out:
            raise InstanceError("factor_through_epi called with a non-epi")
        comps[s] = out
    return Hom(epi.cod, h.cod, comps)


@dataclass
class FiniteDiagram:
    nodes: list[Instance]
    arrows: list[tuple[int, int, Hom]] = field(default_factory=list)

    def validate(self) -> list[str]:
        errors = []
        for k, (i, j, h) in enumerate(self.arrows):
            if h.dom != self.nodes[i] or h.cod != self.nodes[j]:
                errors.append(f"arrow {k} ({i}->{j}) does not match its endpoints")
        return errors

    def is_monic(self) -> bool:
        return all(is_mono(h) for _, _, h in self.arrows)


@dataclass
class Cocone:
    diagram: FiniteDiagram
    apex: Instance
    legs: list[Hom]

    def violations(self) -> list[int]:
        """Indices of arrows whose triangle fails to commute."""
        bad = []
        for k, (i, j, h) in enumerate(self.diagram.arrows):
            if compose(self.legs[j], h).components != self.legs[i].components:
                bad.append(k)
        return bad


@dataclass
class Span:
    apex: Instance
    left: Hom
    right: Hom

    @property
    def monic(self) -> bool:
        return is_mono(self.left) and is_mono(self.right)

    def as_diagram(self) -> FiniteDiagram:
        return FiniteDiagram([self.left.cod, self.apex, self.right.cod],
                             [(1, 0, self.left), (1, 2, self.right)])


def coproduct(nodes: Sequence[Instance]) -> tuple[Instance, list[Hom]]:
    if not nodes:
        raise InstanceError("coproduct of no nodes needs an explicit schema; use colimit")
    schema = nodes[0].schema
    offsets = []
    sizes = {s: 0 for s in schema.objects}
    for node in nodes:
        if node.schema != schema:
            raise InstanceError("schema mismatch in diagram")
        offsets.append(dict(sizes))
        for s in schema.objects:
            sizes[s] += node.sizes[s]
    acts = {g.name: [] for g in schema.generators}
    for node, off in zip(nodes, offsets):
        for g in schema.generators:
            base = off[g.cod]
            acts[g.name].extend(base + y for y in node.actions[g.name])
    total = Instance(schema, sizes, acts, validate=False)
    legs = [Hom(node, total, {s: range(off[s], off[s] + node.sizes[s]) for s in schema.objects})
            for node, off in zip(nodes, offsets)]
    return total, legs


def colimit(d: FiniteDiagram, schema=None) -> tuple[Instance, Cocone]:
    """Colimit of a finite diagram with its canonical cocone."""
    if not d.nodes:
        from .cset import empty_instance
        if schema is None:
            raise InstanceError("empty diagram needs a schema")
        return empty_instance(schema), Cocone(d, empty_instance(schema), [])
    total, inj = coproduct(d.nodes)
    ufs = {s: UnionFind(total.sizes[s]) for s in total.schema.objects}
    for i, j, h in d.arrows:
        for s, comp in h.components.items():
            ii, jj = inj[i].components[s], inj[j].components[s]
            uf = ufs[s]
            for x, y in enumerate(comp):
                uf.union(ii[x], jj[y])
    q = quotient_from_union_find(total, ufs)
    legs = [compose(q, leg) for leg in inj]
    return q.cod, Cocone(d, q.cod, legs)


def mediating_map(colim: Cocone, other: Cocone) -> Hom:
    """The map ``colim.apex -> other.apex`` induced by a cocone over the same diagram.

    Raises InstanceError if ``other`` assigns two values to one colimit element,
    which means it was not a cocone.
    """
    apex = colim.apex
    comps = {s: [-1] * n for s, n in apex.sizes.items()}
    for leg, oleg in zip(colim.legs, other.legs):
        for s, comp in leg.components.items():
            out, ocomp = comps[s], oleg.components[s]
            for x, y in enumerate(comp):
                if out[y] == -1:
                    out[y] = ocomp[x]
                elif out[y] != ocomp[x]:
                    raise InstanceError("legs disagree on a colimit element: not a cocone")
    for s, out in comps.items():
        if -1 in out:
            raise InstanceError("colimit legs are not jointly surjective")
    return Hom(apex, other.apex, comps)


def is_colimit_cocone(c: Cocone) -> bool:
    """True iff the canonical mediating map into ``c.apex`` is an isomorphism."""
    if c.violations():
        return False
    schema = c.apex.schema
    _, canon = colimit(c.diagram, schema)
    try:
        u = mediating_map(canon, c)
    except InstanceError:
        return False
    return is_iso(u)


def pushout(s: Span) -> tuple[Instance, Hom, Hom]:
    """Pushout of a span; returns ``(P, left foot -> P, right foot -> P)``."""
    apex, cocone = colimit(s.as_diagram())
    return apex, cocone.legs[0], cocone.legs[2]


def coequalizer(a: Hom, b: Hom) -> tuple[Instance, Hom]:
    if a.dom != b.dom or a.cod != b.cod:
        raise InstanceError("coequalizer needs a parallel pair")
    d = FiniteDiagram([a.dom, a.cod], [(0, 1, a), (0, 1, b)])
    apex, cocone = colimit(d)
    return apex, cocone.legs[1]


def pullback(f: Hom, g: Hom) -> tuple[Instance, Hom, Hom]:
    """Fiber product of ``f: A -> C`` and ``g: B -> C``; elements ordered lexicographically."""
    if f.cod != g.cod:
        raise InstanceError("pullback needs a shared codomain")
    schema = f.dom.schema
    elems = {}
    index = {}
    for s in schema.objects:
        fc, gc = f.components[s], g.components[s]
        by_val: dict[int, list[int]] = {}
        for b, y in enumerate(gc):
            by_val.setdefault(y, []).append(b)
        pairs = [(a, b) for a, y in enumerate(fc) for b in by_val.get(y, ())]
        elems[s] = pairs
        index[s] = {p: i for i, p in enumerate(pairs)}
    acts = {}
    for gen in schema.generators:
        fa, ga = f.dom.actions[gen.name], g.dom.actions[gen.name]
        idx = index[gen.cod]
        acts[gen.name] = [idx[(fa[a], ga[b])] for a, b in elems[gen.dom]]
    p = Instance(schema, {s: len(e) for s, e in elems.items()}, acts, validate=False)
    left = Hom(p, f.dom, {s: [a for a, _ in e] for s, e in elems.items()})
    right = Hom(p, g.dom, {s: [b for _, b in e] for s, e in elems.items()})
    return p, left, right


def image_factorization(h: Hom) -> tuple[Hom, Instance, Hom]:
    """``h = mono . epi`` through the pointwise image (a sub-instance of the codomain)."""
    keep = {s: set(c) for s, c in h.components.items()}
    img, mono = subinstance(h.cod, keep)
    back = {s: {y: i for i, y in enumerate(mono.components[s])} for s in img.schema.objects}
    epi = Hom(h.dom, img, {s: [back[s][y] for y in c] for s, c in h.components.items()})
    return epi, img, mono
