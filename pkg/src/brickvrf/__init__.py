"""Semantic building-metadata engine with a VRF module.

Layers, bottom up: an RDF triple store with a Turtle reader/writer
(`rdf`), a tag-based class compiler with the shipped core and VRF
vocabularies (`ontology`), subclass/inverse materialization
(`inference`), a SPARQL-subset engine (`query`), an embedded telemetry
store (`timeseries`), VRF mode logic and model generators (`vrf`),
per-zone baseline analytics (`analytics`), and the HTTP/CLI front doors
(`server`, `cli`).
"""

from .errors import BrickVrfError
from .rdf import (
    BRICK_NS,
    BlankNode,
    Graph,
    IRI,
    Literal,
    Triple,
    parse_turtle,
    serialize_turtle,
)
from .ontology import compile_ontology, default_ontology, validate_ontology
from .inference import materialize, subclass_closure
from .query import evaluate, parse_query, results_to_json
from .timeseries import Sample, TimeseriesStore
from .vrf import ModelParams, generate_application_model, generate_validation_model
from .analytics import align, analyze_zones, fit_changepoint, fit_linear
from .server import ServerConfig, create_app

__version__ = "0.1.0"

__all__ = [
    "BRICK_NS",
    "BlankNode",
    "BrickVrfError",
    "Graph",
    "IRI",
    "Literal",
    "ModelParams",
    "Sample",
    "ServerConfig",
    "TimeseriesStore",
    "Triple",
    "align",
    "analyze_zones",
    "compile_ontology",
    "create_app",
    "default_ontology",
    "evaluate",
    "fit_changepoint",
    "fit_linear",
    "generate_application_model",
    "generate_validation_model",
    "materialize",
    "parse_query",
    "parse_turtle",
    "results_to_json",
    "serialize_turtle",
    "subclass_closure",
    "validate_ontology",
]
