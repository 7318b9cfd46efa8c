"""Finite test universes: every instance within carrier bounds, up to isomorphism.

A universe is built once per (schema, bounds) and caches the homomorphisms and
monic spans that the exhaustive checks share.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .colimits import Span, pushout
from .config import require_within
from .cset import Hom, Instance, canonical_form, compose, enumerate_instances, iter_homs, iter_monos
from .schema import SchemaPresentation


@dataclass
class MonicSpan:
    span: Span
    pushout: Instance
    left_leg: Hom    # left foot -> pushout
    right_leg: Hom   # right foot -> pushout


class Universe:
    def __init__(self, schema: SchemaPresentation, bounds: Mapping[str, int]):
        self.schema = schema
        self.bounds = {s: int(bounds.get(s, 0)) for s in schema.objects}
        self.instances: list[Instance] = enumerate_instances(schema, self.bounds)
        self.index = {x: i for i, x in enumerate(self.instances)}
        self._homs: dict[tuple[int, int], list[Hom]] = {}
        self._autos: dict[int, list[Hom]] = {}
        self._spans: dict[bool, list[MonicSpan]] = {}
        self._parallel: list[tuple[Hom, Hom]] | None = None

    def __len__(self):
        return len(self.instances)

    def within(self, x: Instance) -> bool:
        return all(x.sizes[s] <= self.bounds[s] for s in self.schema.objects)

    def homs(self, i: int, j: int) -> list[Hom]:
        key = (i, j)
        if key not in self._homs:
            self._homs[key] = list(iter_homs(self.instances[i], self.instances[j]))
        return self._homs[key]

    def all_homs(self):
        for i in range(len(self)):
            for j in range(len(self)):
                yield from self.homs(i, j)

    def automorphisms(self, i: int) -> list[Hom]:
        if i not in self._autos:
            x = self.instances[i]
            self._autos[i] = [h for h in iter_monos(x, x)]
        return self._autos[i]

    def monos_up_to_target_automorphism(self, i: int, j: int) -> list[Hom]:
        """Monos ``instances[i] -> instances[j]``, one per orbit of ``Aut(instances[j])``."""
        autos = self.automorphisms(j)
        out = []
        for m in iter_monos(self.instances[i], self.instances[j]):
            key = tuple(m.components.values())
            if all(tuple(compose(a, m).components.values()) >= key for a in autos):
                out.append(m)
        return out

    def monic_spans(self, pushout_within_bounds: bool = True) -> list[MonicSpan]:
        """Monic spans of universe instances, up to automorphisms of the feet.

        By default only spans whose pushout also lies inside the bounds are kept,
        so every object involved belongs to the universe.  The axiom checks pass
        ``False`` and test every span whose feet are in the universe.
        """
        if pushout_within_bounds in self._spans:
            return self._spans[pushout_within_bounds]
        out = []
        n = len(self)
        for c in range(n):
            legs = []
            for a in range(n):
                legs.extend(self.monos_up_to_target_automorphism(c, a))
            apex = self.instances[c]
            for p in range(len(legs)):
                for q in range(p, len(legs)):
                    left, right = legs[p], legs[q]
                    size_ok = all(left.cod.sizes[s] + right.cod.sizes[s] - apex.sizes[s] <= self.bounds[s]
                                  for s in self.schema.objects)
                    if pushout_within_bounds and not size_ok:
                        continue
                    span = Span(apex, left, right)
                    p_obj, ll, rl = pushout(span)
                    out.append(MonicSpan(span, p_obj, ll, rl))
        self._spans[pushout_within_bounds] = out
        return out

    def parallel_monos(self) -> list[tuple[Hom, Hom]]:
        """Distinct parallel pairs of monos ``C => A``, first leg up to ``Aut(A)``."""
        if self._parallel is not None:
            return self._parallel
        out = []
        n = len(self)
        for c in range(n):
            for a in range(n):
                firsts = self.monos_up_to_target_automorphism(c, a)
                if not firsts:
                    continue
                alls = list(iter_monos(self.instances[c], self.instances[a]))
                for f in firsts:
                    for g in alls:
                        if g.components != f.components:
                            out.append((f, g))
        self._parallel = out
        return out

    def representative(self, x: Instance) -> tuple[int, Hom]:
        """Universe index of ``x``'s iso class and an iso ``x -> representative``."""
        canon, iso = canonical_form(x)
        return self.index[canon], iso


@lru_cache(maxsize=32)
def _cached(schema: SchemaPresentation, bounds_key: tuple) -> Universe:
    return Universe(schema, dict(bounds_key))


def get_universe(schema: SchemaPresentation, bounds: Mapping[str, int]) -> Universe:
    key = tuple(sorted((s, int(bounds.get(s, 0))) for s in schema.objects))
    # the ceiling may have changed since the universe was cached
    require_within([b for _, b in key], "universe bound")
    return _cached(schema, key)


def graph_bounds(max_vertices: int, max_edges: int) -> dict[str, int]:
    return {"V": max_vertices, "E": max_edges}
