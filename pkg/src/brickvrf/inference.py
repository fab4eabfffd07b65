"""Entailment materialization: subclass closure and inverse relationships.

Queries here run over plain pattern matching, so implied facts are made
explicit up front: every entity typed with a class is also typed with the
class's ancestors, and every relationship with a known inverse is stated
in both directions.  Re-running materialization on its own output adds
nothing (fixpoint).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ontology import CyclicHierarchy
from .rdf import BRICK_NS, Graph, IRI, Literal, RDFS_SUBCLASSOF, RDF_TYPE, Triple

# Exactly the relations the shipped building models use.
DEFAULT_INVERSE_PAIRS: tuple[tuple[str, str], ...] = (
    ("feeds", "isFedBy"),
    ("hasPart", "isPartOf"),
    ("hasPoint", "isPointOf"),
    ("hasLocation", "isLocationOf"),
)


def inverse_pair_table(
    extra: tuple[tuple[str, str], ...] = (),
) -> dict[IRI, IRI]:
    """Symmetric lookup table over brick-namespace predicate pairs.

    Pair names without a scheme separator are taken as brick local names;
    absolute IRIs pass through unchanged.
    """
    table: dict[IRI, IRI] = {}
    for left, right in DEFAULT_INVERSE_PAIRS + tuple(extra):
        p = IRI(left if "://" in left else BRICK_NS + left)
        q = IRI(right if "://" in right else BRICK_NS + right)
        table[p] = q
        table[q] = p
    return table


def subclass_closure(ontology: Graph) -> dict[IRI, frozenset[IRI]]:
    """Reflexive-transitive ancestor sets for every class in the graph.

    Raises :class:`CyclicHierarchy` if the subclass edges loop (defensive;
    a validated ontology is a DAG).
    """
    parents: dict[IRI, list[IRI]] = {}
    for t in ontology.match(None, RDFS_SUBCLASSOF, None):
        if isinstance(t.subject, IRI) and isinstance(t.object, IRI):
            parents.setdefault(t.subject, []).append(t.object)
            parents.setdefault(t.object, [])

    closure: dict[IRI, frozenset[IRI]] = {}
    in_progress: set[IRI] = set()

    def ancestors(cls: IRI, path: list[IRI]) -> frozenset[IRI]:
        if cls in closure:
            return closure[cls]
        if cls in in_progress:
            raise CyclicHierarchy([c.value for c in path + [cls]])
        in_progress.add(cls)
        acc = {cls}
        for parent in parents.get(cls, ()):
            acc |= ancestors(parent, path + [cls])
        in_progress.discard(cls)
        closure[cls] = frozenset(acc)
        return closure[cls]

    for cls in parents:
        ancestors(cls, [])
    return closure


@dataclass(frozen=True)
class MaterializedModel:
    graph: Graph
    unresolved_classes: tuple[IRI, ...]  # rdf:type objects unknown to the ontology


def materialize(
    model: Graph,
    ontology: Graph,
    types: bool = True,
    inverses: bool = True,
    pairs: dict[IRI, IRI] | None = None,
) -> MaterializedModel:
    """Forward-chain type closure and inverse relations to fixpoint.

    The output graph is a superset of the input.  Entities typed with a
    class the ontology does not know pass through untouched and are listed
    in the report.
    """
    table = inverse_pair_table() if pairs is None else pairs
    closure = subclass_closure(ontology) if types else {}
    unresolved: set[IRI] = set()

    triples: set[Triple] = set(model.triples)
    frontier: set[Triple] = set(triples)
    while frontier:
        added: set[Triple] = set()
        for t in frontier:
            if types and t.predicate == RDF_TYPE and isinstance(t.object, IRI):
                ancestors = closure.get(t.object)
                if ancestors is None:
                    unresolved.add(t.object)
                else:
                    for ancestor in ancestors:
                        if ancestor != t.object:
                            added.add(Triple(t.subject, RDF_TYPE, ancestor))
            if inverses and t.predicate in table and not isinstance(t.object, Literal):
                added.add(Triple(t.object, table[t.predicate], t.subject))
        frontier = added - triples
        triples |= added

    graph = Graph(triples, model.namespaces, model.name)
    return MaterializedModel(graph, tuple(sorted(unresolved, key=lambda c: c.value)))
