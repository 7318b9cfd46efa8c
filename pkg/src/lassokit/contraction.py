"""Lasso contractions of objects and their pushforward to structured decompositions.

Two constructions of the contracted decomposition are provided: the direct one
(images of the composite ``Y -> Y/f`` restricted to each bag) and the one built
from pullback, local quotient and pointwise pushout.  They must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .colimits import (Cocone, FiniteDiagram, Span, colimit, is_colimit_cocone, kernel_labels,
                       mediating_map)
from .config import require_within
from .cset import Hom, Instance, compose, find_isomorphism, is_epi, is_mono, iter_subobjects
from .decomposition import (DecompositionError, StructuredDecomposition, aligned_cocone,
                            decomposition_colimit, diagram_of_images, diagrams_isomorphic,
                            from_diagram, pullback_decomposition_full, to_diagram,
                            validate_decomposition, width_vector)
from .lasso import QuotientFunctor


class ContractionError(ValueError):
    """A precondition of a contraction or pushforward does not hold."""


class ShapeGateError(ContractionError):
    """A non-strong lasso was asked to push forward along a cyclic shape."""


@dataclass
class Contraction:
    base: Instance
    sub: Hom
    lasso: QuotientFunctor
    result: Instance
    quotient: Hom          # Y ->> Y/f
    co_leg: Hom            # lasso(X) -> Y/f
    cocone: Cocone = field(repr=False)  # pushout cocone over lasso(X) <- X -> Y


def _map_out_of_pushout(cocone: Cocone, left_map: Hom, right_map: Hom) -> Hom:
    """The map out of a pushout (cocone over ``[L, apex, R]``) determined by its two feet."""
    apex_leg = compose(left_map, cocone.diagram.arrows[0][2])
    other = Cocone(cocone.diagram, left_map.cod, [left_map, apex_leg, right_map])
    return mediating_map(cocone, other)


def contract(y: Instance, f: Hom, lasso: QuotientFunctor) -> Contraction:
    """``Y/f``: the pushout of ``f: X -> Y`` against the unit ``X ->> lasso(X)``."""
    if f.cod != y:
        raise ContractionError("sub-object does not land in the base")
    if y.schema != lasso.schema:
        raise ContractionError(f"lasso {lasso.name} lives on {lasso.schema.name}, base on {y.schema.name}")
    if not is_mono(f):
        bad = [s for s, c in f.components.items() if len(set(c)) != len(c)]
        raise ContractionError(f"sub-object map is not monic on sort(s) {', '.join(bad)}")
    eta = lasso.eta(f.dom)
    apex, cocone = colimit(Span(f.dom, eta, f).as_diagram(), y.schema)
    co_leg, quotient = cocone.legs[0], cocone.legs[2]
    assert is_epi(quotient), "internal: pushout of an epi is not epic"
    return Contraction(y, f, lasso, apex, quotient, co_leg, cocone)


# -- pushforward ----------------------------------------------------------------------

@dataclass
class PushforwardResult:
    input: StructuredDecomposition
    contraction: Contraction
    output: StructuredDecomposition
    bag_epis: list[Hom]                       # node k of input -> node k of output
    method: str
    intermediates: dict = field(default_factory=dict, repr=False)

    def checks(self) -> dict[str, bool]:
        """The guarantees every pushforward must satisfy."""
        before, after = width_vector(self.input), width_vector(self.output)
        apex, _ = decomposition_colimit(self.output)
        return {
            "shape": self.output.shape == self.input.shape,
            "valid": not validate_decomposition(self.output),
            "width": all(after[s] <= before[s] for s in before),
            "colimit": find_isomorphism(apex, self.contraction.result) is not None,
            "epis": all(is_epi(e) for e in self.bag_epis),
        }


def _require(result: PushforwardResult) -> PushforwardResult:
    failed = [k for k, ok in result.checks().items() if not ok]
    if failed:
        raise AssertionError(f"internal: pushforward ({result.method}) broke {failed}")
    return result


def _prepare(d: StructuredDecomposition, f: Hom, lasso: QuotientFunctor):
    problems = validate_decomposition(d)
    if problems:
        raise ContractionError("invalid decomposition: " + "; ".join(problems))
    try:
        cocone = aligned_cocone(d, f.cod)
    except DecompositionError as exc:
        raise DecompositionError(f"colimit misalignment: {exc}") from exc
    return cocone, contract(f.cod, f, lasso)


def pushforward_images(d: StructuredDecomposition, f: Hom, lasso: QuotientFunctor,
                       check: bool = True) -> PushforwardResult:
    """``d/f`` as the diagram of images of ``Y -> Y/f`` composed with the cocone over ``d``."""
    cocone, c = _prepare(d, f, lasso)
    legs = [compose(c.quotient, leg) for leg in cocone.legs]
    images = diagram_of_images(cocone.diagram, Cocone(cocone.diagram, c.result, legs))
    out = from_diagram(d.shape, images.diagram, schema=d.schema)
    result = PushforwardResult(d, c, out, images.epis, "images",
                               {"cocone": cocone, "monos": images.monos})
    return _require(result) if check else result


def shape_gate(d: StructuredDecomposition, lasso: QuotientFunctor) -> None:
    """Tree-shaped decompositions work for every lasso; other shapes need a strong one."""
    if d.shape.is_forest():
        return
    if getattr(lasso, "strong", None) is not True:
        raise ShapeGateError(f"shape has a cycle and lasso {lasso.name} is not known to be strong")


def pushforward_span(d: StructuredDecomposition, f: Hom, lasso: QuotientFunctor,
                     check: bool = True) -> PushforwardResult:
    """``d/f`` via pullback to ``X``, local quotient to ``lasso(X)``, pointwise pushout, images."""
    shape_gate(d, lasso)
    cocone, c = _prepare(d, f, lasso)
    schema = d.schema
    diagram = cocone.diagram
    pulled = pullback_decomposition_full(d, f)
    x_diag = to_diagram(pulled.decomposition)
    eta_x = lasso.eta(f.dom)

    # local quotients: images of x(i) -> X ->> lasso(X)
    q_legs = [compose(eta_x, leg) for leg in pulled.to_domain]
    q_img = diagram_of_images(x_diag, Cocone(x_diag, eta_x.cod, q_legs))

    # h(i) = q(i) +_{x(i)} d(i)
    h_nodes, h_cocones = [], []
    for k in range(len(diagram.nodes)):
        span = Span(x_diag.nodes[k], q_img.epis[k], pulled.to_original[k])
        apex, pc = colimit(span.as_diagram(), schema)
        h_nodes.append(apex)
        h_cocones.append(pc)
    h_arrows = []
    for (i, j, darr), (_, _, qarr) in zip(diagram.arrows, q_img.diagram.arrows):
        to_j = h_cocones[j]
        u = _map_out_of_pushout(h_cocones[i], compose(to_j.legs[0], qarr), compose(to_j.legs[2], darr))
        h_arrows.append((i, j, u))
    h_diag = FiniteDiagram(h_nodes, h_arrows)

    # Omega_i : h(i) -> Y/f, induced by q(i) -> lasso(X) -> Y/f and d(i) -> Y ->> Y/f
    omega = [_map_out_of_pushout(pc, compose(c.co_leg, q_img.monos[k]),
                                 compose(c.quotient, cocone.legs[k]))
             for k, pc in enumerate(h_cocones)]
    omega_cocone = Cocone(h_diag, c.result, omega)

    _, h_colim = colimit(h_diag, schema)
    images = diagram_of_images(h_diag, h_colim)
    out = from_diagram(d.shape, images.diagram, schema=schema)
    u = [pc.legs[2] for pc in h_cocones]  # d(i) ->> h(i)
    bag_epis = [compose(e, uk) for e, uk in zip(images.epis, u)]
    result = PushforwardResult(d, c, out, bag_epis, "span", {
        "x": pulled.decomposition, "q": q_img.diagram, "h": h_diag, "omega": omega_cocone,
        "u": u, "pulled": pulled})
    if check:
        _require(result)
        assert is_colimit_cocone(omega_cocone), "internal: Omega is not a colimit cocone"
    return result


@dataclass
class Equivalence:
    equivalent: bool
    isos: list[Hom] | None
    images: PushforwardResult
    span: PushforwardResult

    def __bool__(self):
        return self.equivalent


def equivalence_check(d: StructuredDecomposition, f: Hom, lasso: QuotientFunctor) -> Equivalence:
    """Both pushforwards agree bagwise and legwise up to isomorphism."""
    a = pushforward_images(d, f, lasso)
    b = pushforward_span(d, f, lasso)
    isos = None
    if a.output.shape == b.output.shape:
        isos = diagrams_isomorphic(to_diagram(a.output), to_diagram(b.output))
    return Equivalence(isos is not None, isos, a, b)


def q_colimit_matches(result: PushforwardResult) -> bool:
    """The local-quotient diagram has ``lasso(X)`` as its colimit."""
    q = result.intermediates["q"]
    apex, _ = colimit(q, result.input.schema)
    return find_isomorphism(apex, result.contraction.lasso.on_object(result.contraction.sub.dom)) is not None


# -- negative control -------------------------------------------------------------------

@dataclass
class NaiveContraction:
    diagram: FiniteDiagram
    contractions: list[Contraction]

    def monic(self) -> bool:
        return self.diagram.is_monic()


def naive_pointwise_contraction(d: StructuredDecomposition, f: Hom, lasso: QuotientFunctor) -> NaiveContraction:
    """Contract every bag and adhesion along its own intersection with ``X``.

    This is the construction that does *not* work in general: the induced legs
    can fail to be monic.
    """
    cocone, _ = _prepare(d, f, lasso)
    pulled = pullback_decomposition_full(d, f)
    x_diag = to_diagram(pulled.decomposition)
    locals_ = [contract(node, pulled.to_original[k], lasso) for k, node in enumerate(cocone.diagram.nodes)]
    arrows = []
    for (i, j, darr), (_, _, xarr) in zip(cocone.diagram.arrows, x_diag.arrows):
        ci, cj = locals_[i], locals_[j]
        u = _map_out_of_pushout(ci.cocone, compose(cj.co_leg, lasso.on_hom(xarr)),
                                compose(cj.quotient, darr))
        arrows.append((i, j, u))
    return NaiveContraction(FiniteDiagram([c.result for c in locals_], arrows), locals_)


# -- composing contractions ---------------------------------------------------------------

@dataclass
class CompositeSearch:
    witness: Hom | None
    checked: int
    bounds: dict
    composite: Hom

    @property
    def found(self) -> bool:
        return self.witness is not None


def composite_contraction_probe(y: Instance, f1: Hom, f2: Hom, lasso: QuotientFunctor,
                       bounds: Mapping[str, int] | None = None) -> CompositeSearch:
    """Look for one sub-object ``f: X -> Y`` whose contraction equals contracting
    along ``f1`` and then along ``f2``.

    Equality is tested on kernels: ``Y ->> Y/f`` and the composite identify the
    same elements, which makes their codomains isomorphic compatibly with both
    quotients.
    """
    if bounds is not None:
        for s in y.schema.objects:
            if y.sizes[s] > bounds.get(s, y.sizes[s]):
                raise ContractionError(f"base exceeds the probe bound on {s}")
    require_within(y.sizes.values(), "probe base")
    c1 = contract(y, f1, lasso)
    if f2.cod != c1.result:
        raise ContractionError("second sub-object must land in the first contraction")
    c2 = contract(c1.result, f2, lasso)
    composite = compose(c2.quotient, c1.quotient)
    target = kernel_labels(composite)
    checked = 0
    for _, inc in iter_subobjects(y):
        checked += 1
        if kernel_labels(contract(y, inc, lasso).quotient) == target:
            return CompositeSearch(inc, checked, dict(bounds or {}), composite)
    return CompositeSearch(None, checked, dict(bounds or {}), composite)
