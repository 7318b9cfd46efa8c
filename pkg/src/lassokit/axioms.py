"""Exhaustive desk-scale checks of the lasso axioms, strength and canonicity.

All results are necessary-condition checks: they quantify over a finite
universe only, and every report carries the bounds it was computed under.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from .colimits import Cocone, FiniteDiagram, Span, UnionFind, colimit, kernel_labels, mediating_map
from .cset import Hom, InstanceError, compose, empty_instance, is_epi, is_iso
from .lasso import NaturalityError, QuotientFunctor
from .schema import SchemaPresentation
from .universe import get_universe

FUNCTORIALITY_SAMPLE = 2000


@dataclass
class Failure:
    kind: str
    detail: str
    witness: object = None

    def to_dict(self) -> dict:
        from .serialize import witness_to_dict
        return {"kind": self.kind, "detail": self.detail, "witness": witness_to_dict(self.witness)}


@dataclass
class AxiomReport:
    lasso: str
    bounds: dict
    universe_size: int
    checked: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)
    scope: str = "necessary-condition check on a finite universe"

    @property
    def passed(self) -> bool:
        return not any(self.failures.values())

    def section_passed(self, name: str) -> bool:
        return not self.failures.get(name)

    def first_failure(self, name: str) -> Failure | None:
        fs = self.failures.get(name) or []
        return fs[0] if fs else None

    def to_dict(self) -> dict:
        return {
            "lasso": self.lasso,
            "bounds": self.bounds,
            "scope": self.scope,
            "universe_size": self.universe_size,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "failures": {k: [f.to_dict() for f in v] for k, v in self.failures.items()},
        }


def preserves_colimit(lasso: QuotientFunctor, diagram: FiniteDiagram,
                      cocone: Cocone | None = None) -> bool:
    """Does the canonical map ``colim(lasso . diagram) -> lasso(colim diagram)`` invert?

    ``cocone`` may supply an already computed colimit cocone of ``diagram``.
    """
    schema = lasso.schema
    if cocone is None:
        _, cocone = colimit(diagram, schema)
    apex = cocone.apex
    image = FiniteDiagram([lasso.on_object(x) for x in diagram.nodes],
                          [(i, j, lasso.on_hom(h)) for i, j, h in diagram.arrows])
    _, image_colim = colimit(image, schema)
    target = Cocone(image, lasso.on_object(apex), [lasso.on_hom(leg) for leg in cocone.legs])
    try:
        u = mediating_map(image_colim, target)
    except InstanceError:
        return False
    return is_iso(u)


def _check_units(lasso, universe, report):
    fails = []
    for x in universe.instances:
        eta = lasso.eta(x)
        if eta.dom != x or not is_epi(eta):
            fails.append(Failure("L2-epi", "unit component is not epic", x))
    report.checked["L2-epi"] = len(universe)
    report.failures["L2-epi"] = fails


def _check_naturality(lasso, universe, report):
    fails = []
    count = 0
    natural_homs = []
    for h in universe.all_homs():
        count += 1
        if not lasso.is_natural_for(h):
            fails.append(Failure("naturality", "square does not commute", h))
        else:
            natural_homs.append(h)
    report.checked["naturality"] = count
    report.failures["naturality"] = fails
    # functoriality of the derived action on a deterministic sample of composable pairs
    by_dom: dict = {}
    for h in natural_homs:
        by_dom.setdefault(h.dom, []).append(h)
    ffails = []
    checked = 0
    for f in natural_homs:
        for g in by_dom.get(f.cod, ()):
            if checked >= FUNCTORIALITY_SAMPLE:
                break
            checked += 1
            lhs = lasso.on_hom(compose(g, f))
            rhs = compose(lasso.on_hom(g), lasso.on_hom(f))
            if lhs.components != rhs.components:
                ffails.append(Failure("functoriality", "action does not respect composition", (g, f)))
        if checked >= FUNCTORIALITY_SAMPLE:
            break
    report.checked["functoriality"] = checked
    report.failures["functoriality"] = ffails


def _check_spans(lasso, universe, report, section="L1"):
    fails = []
    spans = universe.monic_spans(pushout_within_bounds=False)
    for ms in spans:
        diagram = ms.span.as_diagram()
        cocone = Cocone(diagram, ms.pushout, [ms.left_leg, compose(ms.left_leg, ms.span.left), ms.right_leg])
        try:
            ok = preserves_colimit(lasso, diagram, cocone)
        except NaturalityError as exc:
            fails.append(Failure(section, f"action undefined on span leg: {exc}", ms.span))
            continue
        if not ok:
            fails.append(Failure(section, "image of monic pushout is not a pushout", ms.span))
    report.checked[section] = len(spans)
    report.failures[section] = fails


def check_lasso_axioms(lasso: QuotientFunctor, bounds: Mapping[str, int]) -> AxiomReport:
    """Check L2 (epic, natural unit) and L1 (monic pushouts preserved) exhaustively."""
    universe = get_universe(lasso.schema, bounds)
    report = AxiomReport(lasso.name, dict(universe.bounds), len(universe))
    _check_units(lasso, universe, report)
    if report.failures["L2-epi"]:
        # the derived action on homs needs epic units; nothing further is meaningful
        for section in ("naturality", "functoriality", "L1"):
            report.checked[section] = 0
            report.failures[section] = []
        report.skipped = ["naturality", "functoriality", "L1"]
        return report
    _check_naturality(lasso, universe, report)
    _check_spans(lasso, universe, report)
    return report


def check_strong(lasso: QuotientFunctor, bounds: Mapping[str, int]) -> AxiomReport:
    """Preservation of colimits of monic diagrams: the initial object, monic
    pushouts and coequalizers of parallel monos."""
    universe = get_universe(lasso.schema, bounds)
    report = AxiomReport(lasso.name, dict(universe.bounds), len(universe))
    empty = FiniteDiagram([], [])
    init_ok = lasso.on_object(empty_instance(lasso.schema)).total_size() == 0
    report.checked["initial"] = 1
    report.failures["initial"] = [] if init_ok else [Failure("initial", "initial object not preserved", empty)]
    _check_spans(lasso, universe, report, section="pushouts")
    fails = []
    pairs = universe.parallel_monos()
    for a, b in pairs:
        d = FiniteDiagram([a.dom, a.cod], [(0, 1, a), (0, 1, b)])
        try:
            ok = preserves_colimit(lasso, d)
        except NaturalityError as exc:
            fails.append(Failure("coequalizers", str(exc), (a, b)))
            continue
        if not ok:
            fails.append(Failure("coequalizers", "coequalizer of monos not preserved", (a, b)))
    report.checked["coequalizers"] = len(pairs)
    report.failures["coequalizers"] = fails
    return report


# -- canonicity probe ----------------------------------------------------------------

def _set_partitions(n: int):
    """Restricted-growth label tuples of length ``n``."""
    if n == 0:
        yield ()
        return

    def rec(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for lab in range(top + 2):
            prefix.append(lab)
            yield from rec(prefix, max(top, lab))
            prefix.pop()

    yield from rec([0], 0)


def _congruences(x) -> list[tuple[tuple[int, ...], ...]]:
    sorts = x.schema.objects
    out = []
    for labels in product(*(list(_set_partitions(x.sizes[s])) for s in sorts)):
        lab = dict(zip(sorts, labels))
        ok = True
        for g in x.schema.generators:
            act, src, tgt = x.actions[g.name], lab[g.dom], lab[g.cod]
            seen: dict[int, int] = {}
            for e in range(x.sizes[g.dom]):
                if seen.setdefault(src[e], tgt[act[e]]) != tgt[act[e]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(labels))
    return out


def _respects(h_comps: Sequence[Sequence[int]], p_dom, p_cod) -> bool:
    for comp, a, b in zip(h_comps, p_dom, p_cod):
        seen: dict[int, int] = {}
        for x, y in enumerate(comp):
            if seen.setdefault(a[x], b[y]) != b[y]:
                return False
    return True


def _generated(n_sizes, maps, parts) -> tuple[tuple[int, ...], ...]:
    """Equivalence on the target generated by pushing partitions forward along maps."""
    out = []
    for k, n in enumerate(n_sizes):
        uf = UnionFind(n)
        for comps, part in zip(maps, parts):
            comp, lab = comps[k], part[k]
            first: dict[int, int] = {}
            for x, y in enumerate(comp):
                r = first.setdefault(lab[x], y)
                uf.union(r, y)
        out.append(tuple(uf.labels()[0]))
    return tuple(out)


@dataclass
class ProbeReport:
    schema: str
    bounds: dict
    universe_size: int
    survivors: list[dict]
    candidates_per_instance: list[int]
    scope: str = "finite-universe survival is necessary, not sufficient"

    def matches(self) -> list[list[str]]:
        return [s["matches"] for s in self.survivors]

    def to_dict(self) -> dict:
        return {"schema": self.schema, "bounds": self.bounds, "scope": self.scope,
                "universe_size": self.universe_size,
                "candidates_per_instance": self.candidates_per_instance,
                "survivors": self.survivors}


def canonicity_probe(schema: SchemaPresentation, bounds: Mapping[str, int],
                     known: Mapping[str, QuotientFunctor] | None = None) -> ProbeReport:
    """Every family of quotients ``q_G : G ->> Q_G`` over the universe that is
    natural for all universe homomorphisms and preserves every monic pushout
    that stays inside the universe.  Survivors are labelled with the names of
    ``known`` lassos whose restriction they equal.
    """
    universe = get_universe(schema, bounds)
    insts = universe.instances
    n = len(insts)
    sorts = schema.objects
    domains = [_congruences(x) for x in insts]

    nat = {}  # (i, j) -> list of component tuples, for i, j both in universe
    for i in range(n):
        for j in range(n):
            hs = universe.homs(i, j)
            if hs:
                nat[(i, j)] = [tuple(h.components[s] for s in sorts) for h in hs]

    span_constraints = []  # (a, b, r, maps a->r, b->r)
    for ms in universe.monic_spans():
        a = universe.index[ms.span.left.cod]
        b = universe.index[ms.span.right.cod]
        r, iso = universe.representative(ms.pushout)
        la = compose(iso, ms.left_leg)
        lb = compose(iso, ms.right_leg)
        span_constraints.append((a, b, r, tuple(la.components[s] for s in sorts),
                                 tuple(lb.components[s] for s in sorts)))
    sizes = [tuple(x.sizes[s] for s in sorts) for x in insts]

    # constraints become checkable once every index involved is assigned
    order = sorted(range(n), key=lambda i: (insts[i].total_size(), i))
    position = {v: k for k, v in enumerate(order)}
    nat_at = [[] for _ in range(n)]
    for (i, j), hs in nat.items():
        last = order[max(position[i], position[j])]
        nat_at[last].append((i, j, hs))
    span_at = [[] for _ in range(n)]
    for a, b, r, ma, mb in span_constraints:
        last = order[max(position[a], position[b], position[r])]
        span_at[last].append((a, b, r, ma, mb))

    assign: list = [None] * n
    survivors = []

    def ok_at(v: int) -> bool:
        for i, j, hs in nat_at[v]:
            for comps in hs:
                if not _respects(comps, assign[i], assign[j]):
                    return False
        for a, b, r, ma, mb in span_at[v]:
            if _generated(sizes[r], (ma, mb), (assign[a], assign[b])) != assign[r]:
                return False
        return True

    def rec(k: int):
        if k == n:
            survivors.append(list(assign))
            return
        v = order[k]
        for cand in domains[v]:
            assign[v] = cand
            if ok_at(v):
                rec(k + 1)
        assign[v] = None

    rec(0)

    known_tables = {}
    for name, lasso in (known or {}).items():
        known_tables[name] = [tuple(kernel_labels(lasso.eta(x))[s] for s in sorts) for x in insts]
    out = []
    for surv in survivors:
        names = [name for name, table in known_tables.items() if table == surv]
        merged = [i for i, (x, p) in enumerate(zip(insts, surv))
                  if any(len(set(lab)) < len(lab) for lab in p)]
        out.append({"matches": names, "nontrivial_on": merged,
                    "partitions": [[list(lab) for lab in p] for p in surv]})
    return ProbeReport(schema.name or "schema", dict(universe.bounds), n, out,
                       [len(dm) for dm in domains])
