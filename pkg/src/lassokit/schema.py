"""Finite schema presentations: sorts, generating morphisms and path equations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class SchemaError(ValueError):
    """Raised when a presentation fails validation; carries every violation."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Generator:
    name: str
    dom: str
    cod: str


@dataclass(frozen=True)
class SchemaPresentation:
    objects: tuple[str, ...]
    generators: tuple[Generator, ...]
    equations: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...] = ()
    name: str | None = field(default=None, compare=False)

    @classmethod
    def build(cls, objects: Iterable[str], generators: Iterable, equations: Iterable = (),
              name: str | None = None) -> "SchemaPresentation":
        """Build and validate.  Generators may be ``(name, dom, cod)`` triples."""
        gens = tuple(g if isinstance(g, Generator) else Generator(*g) for g in generators)
        eqs = tuple((tuple(p), tuple(q)) for p, q in equations)
        schema = cls(tuple(objects), gens, eqs, name)
        errors = validate_schema(schema)
        if errors:
            raise SchemaError(errors)
        return schema

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def outgoing(self, sort: str) -> list[Generator]:
        return [g for g in self.generators if g.dom == sort]

    def path_endpoints(self, path: Sequence[str]) -> tuple[str, str] | None:
        """(dom, cod) of a composable path in diagrammatic order, or None.

        A path lists generators in the order they are applied, so ``["l", "s"]``
        is ``s . l``.  The empty path has no endpoints of its own.
        """
        if not path:
            return None
        gens = [self.generator(n) for n in path]
        for a, b in zip(gens, gens[1:]):
            if a.cod != b.dom:
                raise ValueError(f"path {list(path)} is not composable at {a.name};{b.name}")
        return gens[0].dom, gens[-1].cod


def validate_schema(p: SchemaPresentation) -> list[str]:
    """Return the list of violations; an empty list means the presentation is valid."""
    errors: list[str] = []
    sorts = set(p.objects)
    if len(sorts) != len(p.objects):
        errors.append("duplicate sort name")
    seen: set[str] = set()
    for g in p.generators:
        if g.name in seen:
            errors.append(f"duplicate generator {g.name!r}")
        seen.add(g.name)
        for end in (g.dom, g.cod):
            if end not in sorts:
                errors.append(f"dangling sort {end!r} in generator {g.name!r}")
    if any(e.startswith("dangling") or e.startswith("duplicate generator") for e in errors):
        return errors
    by_name = {g.name: g for g in p.generators}
    for lhs, rhs in p.equations:
        ends = []
        for path in (lhs, rhs):
            missing = [n for n in path if n not in by_name]
            if missing:
                errors.append(f"equation {list(lhs)} = {list(rhs)} uses unknown generator {missing[0]!r}")
                break
            try:
                ends.append(p.path_endpoints(path))
            except ValueError as exc:
                errors.append(f"non-composable equation path: {exc}")
                break
        else:
            a, b = ends
            if a is None and b is None:
                continue
            if a is None:
                a = (b[0], b[0])
            if b is None:
                b = (a[0], a[0])
            if a != b:
                errors.append(f"equation {list(lhs)} = {list(rhs)} has mismatched endpoints {a} vs {b}")
    return errors


def _grph() -> SchemaPresentation:
    return SchemaPresentation.build(["V", "E"], [("s", "E", "V"), ("t", "E", "V")], name="Grph")


def _rgrph() -> SchemaPresentation:
    # s . l = id_V and t . l = id_V
    return SchemaPresentation.build(
        ["V", "E"],
        [("s", "E", "V"), ("t", "E", "V"), ("l", "V", "E")],
        [(("l", "s"), ()), (("l", "t"), ())],
        name="RGrph",
    )


def _cgr(k: int) -> SchemaPresentation:
    objects = ["V"] + [f"E{i}" for i in range(1, k + 1)]
    gens = []
    for i in range(1, k + 1):
        gens += [(f"s{i}", f"E{i}", "V"), (f"t{i}", f"E{i}", "V")]
    return SchemaPresentation.build(objects, gens, name=f"CGr_{k}")


def _petri() -> SchemaPresentation:
    return SchemaPresentation.build(
        ["Species", "Transition", "Input", "Output", "Token"],
        [
            ("is", "Input", "Species"),
            ("it", "Input", "Transition"),
            ("os", "Output", "Species"),
            ("ot", "Output", "Transition"),
            ("inv", "Token", "Species"),
        ],
        name="Petri",
    )


def builtin_schema(name: str, k: int | None = None) -> SchemaPresentation:
    """Look up a named schema: ``Grph``, ``RGrph``, ``Petri`` or ``CGr_k``.

    The colour count may be given either inline (``"CGr_3"``) or through ``k``.
    """
    if name == "Grph":
        return _grph()
    if name == "RGrph":
        return _rgrph()
    if name == "Petri":
        return _petri()
    if name.startswith("CGr"):
        if k is None:
            suffix = name[3:].lstrip("_")
            if not suffix.isdigit():
                raise ValueError(f"colour count missing in {name!r}")
            k = int(suffix)
        if k < 1:
            raise ValueError("CGr_k needs k >= 1")
        return _cgr(k)
    raise ValueError(f"unknown schema {name!r}")


def schema_to_dict(p: SchemaPresentation) -> dict:
    return {
        "objects": list(p.objects),
        "morphisms": [{"name": g.name, "dom": g.dom, "cod": g.cod} for g in p.generators],
        "equations": [[list(a), list(b)] for a, b in p.equations],
    }


def schema_from_dict(data: dict, name: str | None = None) -> SchemaPresentation:
    return SchemaPresentation.build(
        data["objects"],
        [(m["name"], m["dom"], m["cod"]) for m in data["morphisms"]],
        [(a, b) for a, b in data.get("equations", [])],
        name=name,
    )
