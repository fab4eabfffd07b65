import random

import pytest
from hypothesis import given, strategies as st

from brickvrf.inference import (
    DEFAULT_INVERSE_PAIRS,
    inverse_pair_table,
    materialize,
    subclass_closure,
)
from brickvrf.ontology import CyclicHierarchy, brick_iri
from brickvrf.rdf import BRICK_NS, Graph, IRI, Literal, RDFS_SUBCLASSOF, RDF_TYPE, Triple


def test_closure_follows_tag_chain(ontology):
    closure = subclass_closure(ontology)
    names = {i.value.rsplit("#", 1)[1] for i in closure[brick_iri("R410A")]}
    assert {"R410A", "Hydrofluorocarbon", "Liquid", "Fluid", "Substance"} <= names
    gas_names = {i.value.rsplit("#", 1)[1] for i in closure[brick_iri("R410A_Gas")]}
    assert {"R410A_Gas", "Hydrofluorocarbon_Gas", "Gas", "Fluid", "Substance"} <= gas_names


def test_closure_is_reflexive_at_roots(ontology):
    closure = subclass_closure(ontology)
    assert closure[brick_iri("Substance")] == frozenset({brick_iri("Substance")})


def test_closure_rejects_cycles():
    a, b = IRI("http://e/A"), IRI("http://e/B")
    g = Graph([Triple(a, RDFS_SUBCLASSOF, b), Triple(b, RDFS_SUBCLASSOF, a)])
    with pytest.raises(CyclicHierarchy):
        subclass_closure(g)


def _random_dag(rng, nodes=50, max_parents=3):
    """Edges only point to lower indices, so acyclicity holds by construction."""
    names = [IRI(f"http://e/C{i}") for i in range(nodes)]
    edges = []
    for i in range(1, nodes):
        for parent in rng.sample(range(i), k=min(i, rng.randrange(max_parents + 1))):
            edges.append(Triple(names[i], RDFS_SUBCLASSOF, names[parent]))
    return names, Graph(edges)


def _reachability(names, graph):
    out = {}
    for start in names:
        seen = {start}
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for parent in graph.objects(node, RDFS_SUBCLASSOF):
                if parent not in seen:
                    seen.add(parent)
                    frontier.append(parent)
        out[start] = frozenset(seen)
    return out


@pytest.mark.parametrize("seed", range(5))
def test_closure_matches_reachability_oracle(seed):
    rng = random.Random(seed)
    names, graph = _random_dag(rng)
    closure = subclass_closure(graph)
    oracle = _reachability(names, graph)
    for name in names:
        assert closure.get(name, frozenset({name})) == oracle[name]


def test_inverse_pair_table_is_symmetric():
    table = inverse_pair_table()
    assert len(DEFAULT_INVERSE_PAIRS) == 4
    for p, q in DEFAULT_INVERSE_PAIRS:
        pi, qi = IRI(BRICK_NS + p), IRI(BRICK_NS + q)
        assert table[pi] == qi and table[qi] == pi


def test_inverse_pair_table_accepts_full_iris_and_bare_names():
    table = inverse_pair_table([("controls", "http://e/x#isControlledBy")])
    assert table[IRI(BRICK_NS + "controls")] == IRI("http://e/x#isControlledBy")
    assert table[IRI("http://e/x#isControlledBy")] == IRI(BRICK_NS + "controls")


def test_materialize_adds_supertypes_and_inverses(ontology):
    e = "http://e/"
    model = Graph(
        [
            Triple(IRI(e + "u"), RDF_TYPE, brick_iri("VRF_Indoor")),
            Triple(IRI(e + "out"), IRI(BRICK_NS + "feeds"), IRI(e + "u")),
        ]
    )
    result = materialize(model, ontology)
    g = result.graph
    assert Triple(IRI(e + "u"), RDF_TYPE, brick_iri("HVAC_Equipment")) in g
    assert Triple(IRI(e + "u"), RDF_TYPE, brick_iri("Equipment")) in g
    assert Triple(IRI(e + "u"), IRI(BRICK_NS + "isFedBy"), IRI(e + "out")) in g
    assert model.triples <= g.triples
    assert result.unresolved_classes == ()


def test_materialize_is_idempotent(ontology):
    e = "http://e/"
    model = Graph(
        [
            Triple(IRI(e + "a"), IRI(BRICK_NS + "hasPart"), IRI(e + "b")),
            Triple(IRI(e + "b"), IRI(BRICK_NS + "hasPoint"), IRI(e + "p")),
            Triple(IRI(e + "p"), RDF_TYPE, brick_iri("Return_Air_Temperature_Sensor")),
        ]
    )
    once = materialize(model, ontology).graph
    twice = materialize(once, ontology).graph
    assert once.triples == twice.triples


def test_materialize_reports_unresolved_classes(ontology):
    model = Graph([Triple(IRI("http://e/x"), RDF_TYPE, IRI(BRICK_NS + "No_Such_Class"))])
    result = materialize(model, ontology)
    assert result.unresolved_classes == (IRI(BRICK_NS + "No_Such_Class"),)
    assert model.triples <= result.graph.triples


def test_materialize_never_inverts_literal_objects(ontology):
    model = Graph([Triple(IRI("http://e/x"), IRI(BRICK_NS + "feeds"), Literal("oops"))])
    result = materialize(model, ontology)
    assert result.graph.triples == model.triples


def test_materialize_options_disable_stages(ontology):
    e = "http://e/"
    model = Graph(
        [
            Triple(IRI(e + "u"), RDF_TYPE, brick_iri("VRF_Indoor")),
            Triple(IRI(e + "out"), IRI(BRICK_NS + "feeds"), IRI(e + "u")),
        ]
    )
    no_types = materialize(model, ontology, types=False).graph
    assert Triple(IRI(e + "u"), RDF_TYPE, brick_iri("Equipment")) not in no_types
    assert Triple(IRI(e + "u"), IRI(BRICK_NS + "isFedBy"), IRI(e + "out")) in no_types
    no_inverses = materialize(model, ontology, inverses=False).graph
    assert Triple(IRI(e + "u"), IRI(BRICK_NS + "isFedBy"), IRI(e + "out")) not in no_inverses


def test_sector_excerpt_gains_fed_by_inverse(ontology, sector_excerpt_text):
    from brickvrf.rdf import parse_turtle

    model = parse_turtle(sector_excerpt_text)
    g = materialize(model, ontology).graph
    b6 = "http://example.com/b6#"
    # the excerpt's namespace slip puts the feeds target in the brick
    # namespace; the inverse lands on that same IRI, faithfully
    assert Triple(
        IRI(b6 + "Office_1_VRF_Indoor_3"), IRI(BRICK_NS + "feeds"), IRI(BRICK_NS + "Office_1_HVAC")
    ) in model
    assert Triple(
        IRI(BRICK_NS + "Office_1_HVAC"), IRI(BRICK_NS + "isFedBy"), IRI(b6 + "Office_1_VRF_Indoor_3")
    ) in g


_edge_lists = st.lists(
    st.tuples(st.integers(0, 12), st.integers(0, 12)).filter(lambda e: e[0] > e[1]),
    max_size=30,
)


@given(_edge_lists)
def test_closure_transitivity_property(edges):
    graph = Graph(
        [Triple(IRI(f"http://e/C{a}"), RDFS_SUBCLASSOF, IRI(f"http://e/C{b}")) for a, b in edges]
    )
    closure = subclass_closure(graph)
    for cls, ancestors in closure.items():
        assert cls in ancestors
        for mid in ancestors:
            assert closure.get(mid, frozenset({mid})) <= ancestors
