"""Lassos: endofunctors with an epic unit, given here as quotient functors.

A quotient functor is described by the identifications its unit makes on each
instance.  The action on homomorphisms is never written by hand: it is the
unique map making the naturality square commute, and it fails loudly when no
such map exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .colimits import factor_through_epi, kernel_labels, kernel_refines, quotient
from .cset import Hom, Instance, compose, is_epi
from .schema import SchemaPresentation, builtin_schema

Pairs = Mapping[str, Iterable[tuple[int, int]]]


class NaturalityError(ValueError):
    """The unit does not factor through a homomorphism's image square."""


class QuotientFunctor:
    """An endofunctor with a unit whose components are quotient maps.

    This is the shape shared by every lasso shipped here, and also by negative
    fixtures that fail the lasso axioms.
    """

    def __init__(self, schema: SchemaPresentation, name: str,
                 relation: Callable[[Instance], Pairs] | None = None):
        self.schema = schema
        self.name = name
        self._relation = relation
        self._eta_cache: dict[Instance, Hom] = {}

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"

    def _compute_eta(self, x: Instance) -> Hom:
        pairs = self._relation(x) if self._relation else {}
        return quotient(x, pairs)

    def eta(self, x: Instance) -> Hom:
        """The unit component ``x -> on_object(x)``."""
        cached = self._eta_cache.get(x)
        if cached is None:
            if x.schema != self.schema:
                raise ValueError(f"{self.name} is defined on {self.schema.name}, got {x.schema.name}")
            cached = self._compute_eta(x)
            self._eta_cache[x] = cached
        return cached

    def on_object(self, x: Instance) -> Instance:
        return self.eta(x).cod

    def on_hom(self, h: Hom) -> Hom:
        """The unique ``u`` with ``u . eta(dom) = eta(cod) . h``."""
        u = factor_through_epi(self.eta(h.dom), compose(self.eta(h.cod), h))
        if u is None:
            raise NaturalityError(f"{self.name}: unit is not natural for {h!r}")
        return u

    def is_natural_for(self, h: Hom) -> bool:
        return kernel_refines(self.eta(h.dom), compose(self.eta(h.cod), h))


class Lasso(QuotientFunctor):
    """A lasso on a copresheaf category.

    ``strong`` records whether the functor is known to preserve colimits of all
    monic diagrams (None when unknown).
    """

    def __init__(self, schema, name, relation=None, strong: bool | None = None):
        super().__init__(schema, name, relation)
        self.strong = strong


class ComposedLasso(Lasso):
    """``outer . inner``: apply ``inner`` first."""

    def __init__(self, outer: QuotientFunctor, inner: QuotientFunctor, name: str | None = None):
        if outer.schema != inner.schema:
            raise ValueError("composing lassos on different schemas")
        strong = None
        if getattr(outer, "strong", None) and getattr(inner, "strong", None):
            strong = True
        super().__init__(inner.schema, name or f"{outer.name}.{inner.name}", strong=strong)
        self.outer = outer
        self.inner = inner

    def _compute_eta(self, x: Instance) -> Hom:
        first = self.inner.eta(x)
        return compose(self.outer.eta(first.cod), first)


def compose_lassos(outer: QuotientFunctor, inner: QuotientFunctor) -> ComposedLasso:
    return ComposedLasso(outer, inner)


# -- built-in lassos --------------------------------------------------------------

def lasso_trivial(schema: SchemaPresentation) -> Lasso:
    return Lasso(schema, "trivial", None, strong=True)


def _endpoint_pairs(x: Instance, s: str = "s", t: str = "t") -> list[tuple[int, int]]:
    return list(zip(x.actions[s], x.actions[t]))


def lasso_cc(schema: SchemaPresentation | None = None) -> Lasso:
    """Connected components on directed multigraphs: vertices collapse, edges survive as loops."""
    schema = schema or builtin_schema("Grph")
    return Lasso(schema, "cc", lambda x: {"V": _endpoint_pairs(x)}, strong=True)


def _rgrph_cc(x: Instance) -> dict:
    # merging vertices forces their distinguished loops together (naturality of l)
    return {"V": _endpoint_pairs(x)}


def _rgrph_deloop(x: Instance) -> dict:
    s, t, l = x.actions["s"], x.actions["t"], x.actions["l"]
    return {"E": [(e, l[s[e]]) for e in range(x.sizes["E"]) if s[e] == t[e]]}


def _rgrph_source(x: Instance) -> dict:
    s, l = x.actions["s"], x.actions["l"]
    return {"V": _endpoint_pairs(x), "E": [(e, l[s[e]]) for e in range(x.sizes["E"])]}


def _rgrph_target(x: Instance) -> dict:
    t, l = x.actions["t"], x.actions["l"]
    return {"V": _endpoint_pairs(x), "E": [(e, l[t[e]]) for e in range(x.sizes["E"])]}


def _rgrph_gather(x: Instance) -> dict:
    pairs = _rgrph_deloop(x)
    pairs["V"] = _endpoint_pairs(x)
    return pairs


RGRPH_KINDS = ("trivial", "cc", "deloop", "source", "target", "gather",
               "cc_then_deloop", "deloop_then_cc", "terminal")

# Known at desk scale: see tests/test_lasso.py::test_rgrph_strength_flags
_RGRPH_STRONG = {"trivial": True, "cc": True, "deloop": False, "source": True, "target": True,
                 "gather": False}


def lasso_rgrph(kind: str) -> Lasso:
    """A lasso on reflexive graphs.

    ``cc_then_deloop`` applies ``cc`` first (the terminal lasso, also available
    as ``terminal``); ``deloop_then_cc`` applies ``deloop`` first.
    """
    schema = builtin_schema("RGrph")
    simple = {"cc": _rgrph_cc, "deloop": _rgrph_deloop, "source": _rgrph_source,
              "target": _rgrph_target, "gather": _rgrph_gather}
    if kind == "trivial":
        return lasso_trivial(schema)
    if kind in simple:
        return Lasso(schema, kind, simple[kind], strong=_RGRPH_STRONG[kind])
    if kind in ("cc_then_deloop", "terminal"):
        return ComposedLasso(lasso_rgrph("deloop"), lasso_rgrph("cc"), name=kind)
    if kind == "deloop_then_cc":
        return ComposedLasso(lasso_rgrph("cc"), lasso_rgrph("deloop"), name=kind)
    raise ValueError(f"unknown reflexive-graph lasso {kind!r}")


def rgrph_lassos() -> dict[str, Lasso]:
    """The eight named lassos of the reflexive-graph lasso poset."""
    return {k: lasso_rgrph(k) for k in ("trivial", "deloop", "cc", "deloop_then_cc",
                                         "source", "target", "gather", "cc_then_deloop")}


def lasso_color(k: int, colors: Iterable[int]) -> Lasso:
    """Collapse vertices joined by edges of the selected colours (1-based)."""
    colors = sorted(set(colors))
    if not colors:
        raise ValueError("need at least one colour")
    if any(not 1 <= c <= k for c in colors):
        raise ValueError(f"colour out of range 1..{k}")
    schema = builtin_schema("CGr", k)
    if len(colors) == 1:
        c = colors[0]
        return Lasso(schema, f"color:{{{c}}}",
                     lambda x: {"V": _endpoint_pairs(x, f"s{c}", f"t{c}")}, strong=True)
    out: Lasso = lasso_color(k, colors[:1])
    for c in colors[1:]:
        out = ComposedLasso(lasso_color(k, [c]), out)
    out.name = "color:{" + ",".join(map(str, colors)) + "}"
    return out


def smoothing() -> QuotientFunctor:
    """Identify parallel edges of a reflexive graph (including parallel loops).

    A functor with a natural epic unit that does *not* preserve monic pushouts;
    shipped only as a negative fixture.
    """
    def rel(x: Instance) -> dict:
        s, t = x.actions["s"], x.actions["t"]
        first: dict[tuple[int, int], int] = {}
        pairs = []
        for e in range(x.sizes["E"]):
            key = (s[e], t[e])
            pairs.append((e, first.setdefault(key, e)))
        return {"E": pairs}

    return QuotientFunctor(builtin_schema("RGrph"), "smoothing", rel)


def parse_lasso(name: str, schema: SchemaPresentation | None = None) -> QuotientFunctor:
    """Resolve a CLI lasso name; ``A.B`` (or ``A∘B``) composes, applying ``B`` first."""
    name = name.replace("∘", ".")
    if "." in name:
        parts = [parse_lasso(p, schema) for p in name.split(".")]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = ComposedLasso(p, out)
        out.name = name
        return out
    if name == "trivial":
        return lasso_trivial(schema or builtin_schema("Grph"))
    if name == "cc":
        if schema is not None and schema.name == "RGrph":
            return lasso_rgrph("cc")
        return lasso_cc()
    if name == "smoothing":
        return smoothing()
    if name.startswith("rgrph:"):
        return lasso_rgrph(name.split(":", 1)[1])
    if name.startswith("color:"):
        body = name.split(":", 1)[1]
        k = None
        if ":" in body:
            k_text, body = body.split(":", 1)
            k = int(k_text)
        colors = [int(c) for c in body.strip("{}").split(",") if c.strip()]
        if k is None:
            if schema is not None and (schema.name or "").startswith("CGr"):
                k = len(schema.objects) - 1
            else:
                k = max(colors)
        return lasso_color(k, colors)
    raise ValueError(f"unknown lasso {name!r}")


@dataclass
class LassoMorphism:
    source: QuotientFunctor
    target: QuotientFunctor
    checked: list[Instance] = field(default_factory=list)

    def component(self, a: Instance) -> Hom:
        """``f_A : source(A) -> target(A)`` with ``target.eta(A) = f_A . source.eta(A)``."""
        f = factor_through_epi(self.source.eta(a), self.target.eta(a))
        if f is None:
            raise NaturalityError(f"no component at {a!r}")
        return f


@dataclass
class MorphismSearch:
    morphism: LassoMorphism | None
    witness: Instance | None
    bounds: dict

    def __bool__(self):
        return self.morphism is not None


def lasso_morphism_exists(src: QuotientFunctor, dst: QuotientFunctor, bounds: Mapping[str, int]) -> MorphismSearch:
    """Search for the (unique) lasso morphism on every universe instance."""
    from .universe import get_universe

    if src.schema != dst.schema:
        raise ValueError("lassos on different schemas")
    universe = get_universe(src.schema, bounds)
    for a in universe.instances:
        if not kernel_refines(src.eta(a), dst.eta(a)):
            return MorphismSearch(None, a, dict(bounds))
    return MorphismSearch(LassoMorphism(src, dst, list(universe.instances)), None, dict(bounds))


def identifications(lasso: QuotientFunctor, x: Instance) -> dict[str, tuple[int, ...]]:
    """The partition the unit induces on ``x`` (dense labels by least member)."""
    return kernel_labels(lasso.eta(x))


def unit_is_epi(lasso: QuotientFunctor, x: Instance) -> bool:
    return is_epi(lasso.eta(x))
