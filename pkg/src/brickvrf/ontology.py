"""Tag-based class definitions compiled into a Brick-style class graph.

Ships two definition sets: a minimal core subset (equipment, points,
locations, substances) and the VRF extension module covering refrigerant
substances, distribution parts, valves, and the indoor/outdoor units.
Definitions can also be loaded from a JSON document so the module stays
user-extensible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import BrickVrfError
from .rdf import (
    BRICK_NS,
    DEFAULT_NAMESPACES,
    OWL_CLASS,
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_SUBCLASSOF,
    SKOS_DEFINITION,
    TAG_NS,
    Graph,
    IRI,
    Literal,
    Triple,
)

HAS_ASSOCIATED_TAG = IRI(BRICK_NS + "hasAssociatedTag")

# Parent names that resolve even when the definition set does not define
# them itself (compiling the VRF module alone must work).
BUILTIN_ROOT_PARENTS = frozenset(
    {
        "Equipment",
        "HVAC_Equipment",
        "Point",
        "Sensor",
        "Command",
        "Setpoint",
        "Location",
        "Substance",
        "Fluid",
        "Liquid",
        "Gas",
        "System",
        "Valve",
    }
)


class DuplicateClass(BrickVrfError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"class {name!r} defined more than once")


class UnresolvedParent(BrickVrfError):
    def __init__(self, name: str, parent: str):
        self.name = name
        self.parent = parent
        super().__init__(f"class {name!r} names unknown parent {parent!r}")


class CyclicHierarchy(BrickVrfError):
    def __init__(self, path: list[str]):
        self.path = path
        super().__init__("subclass cycle: " + " -> ".join(path))


class InvalidDefinitionDocument(BrickVrfError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"invalid definition document: {detail}")


@dataclass(frozen=True)
class ClassDef:
    """One tag-based class definition; nested subclasses inherit the parent."""

    name: str
    tags: tuple[str, ...] = ()
    parent: str | None = None
    subclasses: tuple["ClassDef", ...] = ()
    definition: str | None = None


def brick_iri(local: str) -> IRI:
    return IRI(BRICK_NS + local)


def tag_iri(local: str) -> IRI:
    return IRI(TAG_NS + local)


def _flatten(defs: list[ClassDef] | tuple[ClassDef, ...]) -> list[ClassDef]:
    flat: list[ClassDef] = []

    def walk(d: ClassDef, enclosing: str | None) -> None:
        parent = d.parent
        if enclosing is not None:
            if parent is not None and parent != enclosing:
                raise ValueError(
                    f"subclass {d.name!r} nested under {enclosing!r} but declares parent {parent!r}"
                )
            parent = enclosing
        flat.append(ClassDef(d.name, d.tags, parent, (), d.definition))
        for sub in d.subclasses:
            walk(sub, d.name)

    for d in defs:
        walk(d, None)
    return flat


def _check_cycles(by_name: dict[str, ClassDef]) -> None:
    state: dict[str, int] = {}  # 1 = in progress, 2 = done

    def visit(name: str, path: list[str]) -> None:
        state[name] = 1
        parent = by_name[name].parent
        if parent in by_name:
            if state.get(parent) == 1:
                raise CyclicHierarchy(path + [name, parent])
            if state.get(parent) != 2:
                visit(parent, path + [name])
        state[name] = 2

    for name in by_name:
        if state.get(name) != 2:
            visit(name, [])


def compile_ontology(defs: list[ClassDef]) -> Graph:
    """Compile tag-based definitions into a class graph.

    Per class: an owl:Class typing triple, an rdfs:label with underscores
    turned into spaces, rdfs:subClassOf when a parent is declared, one
    hasAssociatedTag per tag, and skos:definition when prose is present.
    """
    flat = _flatten(list(defs))
    by_name: dict[str, ClassDef] = {}
    for d in flat:
        if d.name in by_name:
            raise DuplicateClass(d.name)
        by_name[d.name] = d
    for d in flat:
        if d.parent is not None and d.parent not in by_name and d.parent not in BUILTIN_ROOT_PARENTS:
            raise UnresolvedParent(d.name, d.parent)
    _check_cycles(by_name)

    triples: list[Triple] = []
    for d in flat:
        node = brick_iri(d.name)
        triples.append(Triple(node, RDF_TYPE, OWL_CLASS))
        triples.append(Triple(node, RDFS_LABEL, Literal(d.name.replace("_", " "))))
        if d.parent is not None:
            triples.append(Triple(node, RDFS_SUBCLASSOF, brick_iri(d.parent)))
        for tag in d.tags:
            triples.append(Triple(node, HAS_ASSOCIATED_TAG, tag_iri(tag)))
        if d.definition is not None:
            triples.append(Triple(node, SKOS_DEFINITION, Literal(d.definition, lang="en")))
    return Graph(triples, DEFAULT_NAMESPACES)


def vrf_module_defs() -> list[ClassDef]:
    """The VRF extension classes: refrigerants, distribution, valves, units."""
    return [
        ClassDef("Hydrofluorocarbon_System", ("Hydrofluorocarbon", "System"), "System"),
        ClassDef("Four_way_Valve", ("Gas", "Valve", "Equipment"), "Valve"),
        ClassDef(
            "Hydrofluorocarbon_Gas",
            ("Fluid", "Gas", "Hydrofluorocarbon_Gas"),
            "Gas",
            (ClassDef("R410A_Gas", ("Fluid", "Gas", "Hydrofluorocarbon_Gas", "R410A_Gas")),),
        ),
        ClassDef(
            "Hydrofluorocarbon",
            ("Fluid", "Liquid", "Hydrofluorocarbon"),
            "Liquid",
            (ClassDef("R410A", ("Fluid", "Liquid", "Hydrofluorocarbon", "R410A")),),
        ),
        ClassDef("Header", ("Gas", "Liquid", "Distribution", "Equipment"), "Equipment"),
        ClassDef("Separation_Tube", ("Gas", "Liquid", "Distribution", "Equipment"), "Equipment"),
        ClassDef(
            "VRF_Outdoor",
            (
                "Equipment",
                "VRF_Outdoor",
                "Heat_Exchange",
                "Fan",
                "Compressor",
                "Check_Valve",
                "Four_way_Valve",
                "Cool",
                "Heat",
                "Hydrofluorocarbon",
                "Supply",
                "Return",
                "Point",
                "Pressure",
                "Setpoint",
                "Electronic_Expansion_Valve",
                "Sensor",  # source list has lowercase "sensor"; normalized
            ),
            "HVAC_Equipment",
        ),
        ClassDef(
            "VRF_Indoor",
            (
                "Equipment",
                "VRF_Indoor",
                "Heat_Exchange",
                "Fan",
                "Cool",
                "Heat",
                "Hydrofluorocarbon",
                "Electromagnetic_Valve",
                "Volume",
                "Box",
                "Supply",
                "Return",
                "Setpoint",
                "Point",
                "Sensor",  # normalized as above
                "Electronic_Expansion_Valve",
            ),
            "HVAC_Equipment",
        ),
        ClassDef("Electronic_Expansion_Valve", ("Electronic_Expansion_Valve", "Valve", "Equipment"), "Valve"),
        ClassDef("Electromagnetic_Valve", ("Electromagnetic_Valve", "Valve", "Equipment"), "Valve"),
    ]


_CHILLER_DEFINITION = (
    "Refrigerating machine used to transfer heat between fluids. "
    "Chillers are either direct expansion with a compressor or absorption type."
)


def brick_core_defs() -> list[ClassDef]:
    """The core subset: enough equipment, point, location, and substance
    classes for the shipped building models to type-check."""
    return [
        ClassDef("Equipment", ("Equipment",)),
        ClassDef("HVAC_Equipment", ("HVAC", "Equipment"), "Equipment"),
        ClassDef("Chiller", ("Chiller", "Equipment"), "HVAC_Equipment", definition=_CHILLER_DEFINITION),
        ClassDef("Valve", ("Valve", "Equipment"), "Equipment"),
        ClassDef("Check_Valve", ("Check", "Valve", "Equipment"), "Valve"),
        ClassDef("Compressor", ("Compressor", "Equipment"), "HVAC_Equipment"),
        ClassDef("Fan", ("Fan", "Equipment"), "HVAC_Equipment"),
        ClassDef("Point", ("Point",)),
        ClassDef("Sensor", ("Sensor", "Point"), "Point"),
        ClassDef("Temperature_Sensor", ("Temperature", "Sensor", "Point"), "Sensor"),
        ClassDef(
            "Return_Air_Temperature_Sensor",
            ("Return", "Air", "Temperature", "Sensor", "Point"),
            "Temperature_Sensor",
        ),
        ClassDef(
            "Outside_Air_Temperature_Sensor",
            ("Outside", "Air", "Temperature", "Sensor", "Point"),
            "Temperature_Sensor",
        ),
        ClassDef("Energy_Sensor", ("Energy", "Sensor", "Point"), "Sensor"),
        ClassDef("Command", ("Command", "Point"), "Point"),
        ClassDef("On_Off_Command", ("On", "Off", "Command", "Point"), "Command"),
        ClassDef("Setpoint", ("Setpoint", "Point"), "Point"),
        ClassDef("Location", ("Location",)),
        ClassDef("Building", ("Building", "Location"), "Location"),
        ClassDef("Floor", ("Floor", "Location"), "Location"),
        ClassDef("Room", ("Room", "Location"), "Location"),
        ClassDef("Office", ("Office", "Room", "Location"), "Room"),
        ClassDef("HVAC_Zone", ("HVAC", "Zone", "Location"), "Location"),
        ClassDef("Lighting_Zone", ("Lighting", "Zone", "Location"), "Location"),
        ClassDef("Substance", ("Substance",)),
        ClassDef("Fluid", ("Fluid", "Substance"), "Substance"),
        ClassDef("Liquid", ("Liquid", "Fluid", "Substance"), "Fluid"),
        ClassDef("Gas", ("Gas", "Fluid", "Substance"), "Fluid"),
        ClassDef("System", ("System",)),
    ]


def default_ontology() -> Graph:
    """Core subset plus the VRF module, compiled."""
    return compile_ontology(brick_core_defs() + vrf_module_defs())


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str


def validate_ontology(graph: Graph) -> list[Violation]:
    """Check class-graph invariants; an empty report means valid.

    Reported kinds: missing_label, duplicate_label, dangling_parent,
    cycle, tag_outside_namespace.
    """
    violations: list[Violation] = []
    classes = {t.subject for t in graph.match(None, RDF_TYPE, OWL_CLASS)}
    for cls in sorted(classes, key=repr):
        labels = graph.objects(cls, RDFS_LABEL)
        if not labels:
            violations.append(Violation("missing_label", repr(cls), "class has no rdfs:label"))
        elif len(labels) > 1:
            violations.append(Violation("duplicate_label", repr(cls), f"{len(labels)} rdfs:label values"))

    parent_edges: dict[str, set[str]] = {}
    for t in graph.match(None, RDFS_SUBCLASSOF, None):
        parent_edges.setdefault(repr(t.subject), set()).add(repr(t.object))
        if t.object not in classes:
            violations.append(
                Violation("dangling_parent", repr(t.subject), f"subClassOf target {t.object!r} is not a class here")
            )

    state: dict[str, int] = {}

    def find_cycle(node: str, path: list[str]) -> None:
        state[node] = 1
        for parent in sorted(parent_edges.get(node, ())):
            if state.get(parent) == 1:
                cycle = path + [node, parent]
                violations.append(Violation("cycle", parent, " -> ".join(cycle)))
            elif state.get(parent) != 2:
                find_cycle(parent, path + [node])
        state[node] = 2

    for node in sorted(parent_edges):
        if state.get(node) != 2:
            find_cycle(node, [])

    for t in graph.match(None, HAS_ASSOCIATED_TAG, None):
        if not (isinstance(t.object, IRI) and t.object.value.startswith(TAG_NS)):
            violations.append(
                Violation("tag_outside_namespace", repr(t.subject), f"tag object {t.object!r} outside tag namespace")
            )
    return violations


@dataclass(frozen=True)
class DefinitionDocument:
    classes: tuple[ClassDef, ...]
    inverse_pairs: tuple[tuple[str, str], ...] = ()


def load_definition_document(text: str) -> DefinitionDocument:
    """Parse the JSON definition file format.

    Top-level keys are class names mapping to ``{"tags": [...], "parent":
    str, "subclasses": {...}, "definition": str}``; the reserved key
    ``inverse_pairs`` extends the relationship pair table.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidDefinitionDocument(str(exc)) from exc
    if not isinstance(doc, dict):
        raise InvalidDefinitionDocument("top level must be a JSON object")

    def to_def(name: str, body: dict, implied_parent: str | None) -> ClassDef:
        if not isinstance(body, dict):
            raise InvalidDefinitionDocument(f"definition of {name!r} must be an object")
        tags = tuple(str(t) for t in body.get("tags", []))
        parent = body.get("parent", implied_parent)
        subs = tuple(
            to_def(sub_name, sub_body, name)
            for sub_name, sub_body in body.get("subclasses", {}).items()
        )
        return ClassDef(name, tags, parent, subs, body.get("definition"))

    classes: list[ClassDef] = []
    pairs: list[tuple[str, str]] = []
    for key, value in doc.items():
        if key == "inverse_pairs":
            for entry in value:
                if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
                    raise InvalidDefinitionDocument(
                        "inverse_pairs entries must be [predicate, inverse] pairs"
                    )
                pairs.append((str(entry[0]), str(entry[1])))
        else:
            classes.append(to_def(key, value, None))
    return DefinitionDocument(tuple(classes), tuple(pairs))
