"""JSON documents for schemas, instances, homomorphisms, decompositions and
results, plus DOT rendering."""

from __future__ import annotations

import json
from typing import Any

from .colimits import FiniteDiagram, Span
from .cset import Hom, Instance
from .decomposition import ShapeGraph, StructuredDecomposition
from .schema import SchemaPresentation, builtin_schema, schema_from_dict, schema_to_dict


class FormatError(ValueError):
    """A document does not have the expected structure."""


# -- schemas -----------------------------------------------------------------------

def _schema_ref(schema: SchemaPresentation):
    if schema.name:
        try:
            if builtin_schema(schema.name) == schema:
                return schema.name
        except ValueError:
            pass
    return schema_to_dict(schema)


def resolve_schema(ref) -> SchemaPresentation:
    if isinstance(ref, SchemaPresentation):
        return ref
    if isinstance(ref, str):
        return builtin_schema(ref)
    if isinstance(ref, dict):
        return schema_from_dict(ref, name=ref.get("name"))
    raise FormatError(f"cannot read a schema from {type(ref).__name__}")


# -- instances and homs --------------------------------------------------------------

def instance_to_dict(x: Instance) -> dict:
    return {
        "schema": _schema_ref(x.schema),
        "carriers": dict(x.sizes),
        "actions": {g: list(a) for g, a in x.actions.items()},
    }


def instance_from_dict(data: dict, schema: SchemaPresentation | None = None) -> Instance:
    try:
        sch = schema if schema is not None else resolve_schema(data["schema"])
        return Instance(sch, data["carriers"], data["actions"])
    except KeyError as exc:
        raise FormatError(f"instance document lacks {exc}") from exc


def hom_to_dict(h: Hom) -> dict:
    return {
        "dom": instance_to_dict(h.dom),
        "cod": instance_to_dict(h.cod),
        "components": {s: list(c) for s, c in h.components.items()},
    }


def hom_from_dict(data: dict, schema: SchemaPresentation | None = None) -> Hom:
    try:
        dom = instance_from_dict(data["dom"], schema)
        cod = instance_from_dict(data["cod"], schema or dom.schema)
        return Hom(dom, cod, data["components"], validate=True)
    except KeyError as exc:
        raise FormatError(f"hom document lacks {exc}") from exc


# -- decompositions ------------------------------------------------------------------

def decomposition_to_dict(d: StructuredDecomposition) -> dict:
    return {
        "schema": _schema_ref(d.schema),
        "shape": {"vertices": d.shape.n_vertices, "edges": [list(e) for e in d.shape.edges]},
        "bags": [instance_to_dict(b) for b in d.bags],
        "adhesions": [instance_to_dict(a) for a in d.adhesions],
        "legs": [[hom_to_dict(l), hom_to_dict(r)] for l, r in d.legs],
    }


def decomposition_from_dict(data: dict, schema: SchemaPresentation | None = None) -> StructuredDecomposition:
    try:
        if schema is None and "schema" in data:
            schema = resolve_schema(data["schema"])
        shape = ShapeGraph(data["shape"]["vertices"], [tuple(e) for e in data["shape"]["edges"]])
        bags = [instance_from_dict(b, schema) for b in data["bags"]]
        adhesions = [instance_from_dict(a, schema) for a in data["adhesions"]]
        legs = [(hom_from_dict(l, schema), hom_from_dict(r, schema)) for l, r in data["legs"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed decomposition document: {exc}") from exc
    return StructuredDecomposition(shape, bags, adhesions, legs, schema=schema)


# -- results ----------------------------------------------------------------------------

def contraction_to_dict(c) -> dict:
    return {
        "lasso": c.lasso.name,
        "base": instance_to_dict(c.base),
        "sub": hom_to_dict(c.sub),
        "result": instance_to_dict(c.result),
        "quotient": hom_to_dict(c.quotient),
        "co_leg": hom_to_dict(c.co_leg),
    }


def diagram_to_dict(d: FiniteDiagram) -> dict:
    return {"nodes": [instance_to_dict(x) for x in d.nodes],
            "arrows": [[i, j, hom_to_dict(h)] for i, j, h in d.arrows]}


def pushforward_to_dict(result, intermediates: bool = False) -> dict:
    out = {
        "method": result.method,
        "contraction": contraction_to_dict(result.contraction),
        "decomposition": decomposition_to_dict(result.output),
        "bag_epis": [hom_to_dict(e) for e in result.bag_epis],
        "checks": result.checks(),
    }
    if intermediates and result.method == "span":
        im = result.intermediates
        out["intermediates"] = {
            "x": decomposition_to_dict(im["x"]),
            "q": diagram_to_dict(im["q"]),
            "h": diagram_to_dict(im["h"]),
            "omega": [hom_to_dict(h) for h in im["omega"].legs],
        }
    return out


def witness_to_dict(w) -> Any:
    """Best-effort structured rendering of a failure witness."""
    if w is None:
        return None
    if isinstance(w, Instance):
        return {"instance": instance_to_dict(w)}
    if isinstance(w, Hom):
        return {"hom": hom_to_dict(w)}
    if isinstance(w, Span):
        return {"span": {"apex": instance_to_dict(w.apex), "left": hom_to_dict(w.left),
                         "right": hom_to_dict(w.right)}}
    if isinstance(w, FiniteDiagram):
        return {"diagram": diagram_to_dict(w)}
    if isinstance(w, (tuple, list)):
        return [witness_to_dict(x) for x in w]
    return repr(w)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


# -- DOT ----------------------------------------------------------------------------------

def _edge_sorts(schema: SchemaPresentation) -> list[tuple[str, str, str]]:
    """(edge sort, source generator, target generator) for graph-like schemas."""
    out = []
    for sort in schema.objects:
        gens = {g.name: g for g in schema.outgoing(sort)}
        for src in gens:
            tgt = "t" + src[1:] if src.startswith("s") else None
            if tgt in gens and gens[src].cod == gens[tgt].cod == "V":
                out.append((sort, src, tgt))
    return out


def _quote(s: str) -> str:
    return '"' + s.replace('"', r'\"') + '"'


def _instance_body(x: Instance, prefix: str, vlabels=None, indent="  ") -> list[str]:
    lines = []
    edge_sorts = _edge_sorts(x.schema)
    if edge_sorts:
        for v in range(x.sizes["V"]):
            label = vlabels[v] if vlabels else str(v)
            lines.append(f"{indent}{_quote(f'{prefix}V{v}')} [label={_quote(label)}];")
        loops = set()
        if "l" in x.actions:
            loops = set(x.actions["l"])
        for sort, s, t in edge_sorts:
            for e in range(x.sizes[sort]):
                attrs = f'label={_quote(f"{sort}{e}")}'
                if sort == "E" and e in loops:
                    attrs += ", style=dotted"
                lines.append(f"{indent}{_quote(f'{prefix}V{x.actions[s][e]}')} -> "
                             f"{_quote(f'{prefix}V{x.actions[t][e]}')} [{attrs}];")
        return lines
    for sort in x.schema.objects:
        for i in range(x.sizes[sort]):
            lines.append(f"{indent}{_quote(f'{prefix}{sort}{i}')} [label={_quote(f'{sort}{i}')}];")
    for g in x.schema.generators:
        for i, j in enumerate(x.actions[g.name]):
            lines.append(f"{indent}{_quote(f'{prefix}{g.dom}{i}')} -> {_quote(f'{prefix}{g.cod}{j}')} "
                         f"[label={_quote(g.name)}];")
    return lines


def instance_to_dot(x: Instance, name: str = "G") -> str:
    return "\n".join([f"digraph {name} {{", *_instance_body(x, ""), "}"]) + "\n"


def contraction_to_dot(c) -> str:
    """The contracted object; each vertex is labelled with the base vertices it merges."""
    labels = None
    if "V" in c.result.sizes:
        pre: dict[int, list[int]] = {}
        for v, w in enumerate(c.quotient.components["V"]):
            pre.setdefault(w, []).append(v)
        labels = ["{" + ",".join(map(str, pre.get(w, []))) + "}" for w in range(c.result.sizes["V"])]
    body = _instance_body(c.result, "", labels)
    return "\n".join(["digraph contraction {", *body, "}"]) + "\n"


def decomposition_to_dot(d: StructuredDecomposition) -> str:
    """Bags as clusters; adhesion elements as dashed links between their two images."""
    lines = ["digraph decomposition {", "  compound=true;"]
    for k, bag in enumerate(d.bags):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f"    label={_quote(f'bag {k}')};")
        lines.extend(_instance_body(bag, f"b{k}_", indent="    "))
        lines.append("  }")
    graphish = bool(_edge_sorts(d.schema))
    for e, ((s, t), (left, right)) in enumerate(zip(d.shape.edges, d.legs)):
        sorts = ["V"] if graphish else list(d.schema.objects)
        for sort in sorts:
            for a, b in zip(left.components[sort], right.components[sort]):
                lines.append(f"  {_quote(f'b{s}_{sort}{a}')} -> {_quote(f'b{t}_{sort}{b}')} "
                             f"[style=dashed, dir=none, label={_quote(f'adhesion {e}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
