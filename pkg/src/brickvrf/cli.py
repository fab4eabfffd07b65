"""Command-line entry point.

Subcommands mirror the HTTP API over the same on-disk state, so a report
produced here matches the server's byte for byte.  Exit codes: 0 on
success, 1 on usage errors, 2 on data errors (unparseable input, unknown
graphs, corrupt files).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .analytics import baseline_report, render_report
from .errors import BrickVrfError
from .inference import inverse_pair_table, materialize
from .ontology import (
    brick_core_defs,
    compile_ontology,
    default_ontology,
    load_definition_document,
    validate_ontology,
)
from .query import UnknownGraph, evaluate, parse_query, results_to_json
from .rdf import parse_turtle, serialize_turtle
from .server import ServerConfig, ServerState
from .timeseries import parse_timestamp


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(text: str, out_path: str | None) -> None:
    if out_path is None or out_path == "-":
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _state(data_dir: str | None) -> ServerState:
    state = ServerState(ServerConfig.from_env(data_dir=data_dir))
    state.load()
    return state


_DATA_DIR_OPTION = click.option(
    "--data-dir",
    default=None,
    help="State directory shared with the server (default: $DATA_DIR or ./data).",
)


@click.group()
def cli() -> None:
    """Semantic building-metadata engine with a VRF module."""


@cli.command("compile")
@click.option("--defs", "defs_path", default=None, help="JSON class definitions compiled on top of the built-in core (replaces the built-in VRF module).")
@click.option("--out", "out_path", default=None, help="Output Turtle path (default: stdout).")
def compile_cmd(defs_path: str | None, out_path: str | None) -> None:
    """Compile class definitions into an ontology graph."""
    if defs_path is None:
        graph = default_ontology()
    else:
        document = load_definition_document(_read(defs_path))
        graph = compile_ontology(brick_core_defs() + list(document.classes))
    violations = validate_ontology(graph)
    if violations:
        raise BrickVrfError(
            "; ".join(f"{v.kind} on {v.subject}: {v.detail}" for v in violations)
        )
    _write(serialize_turtle(graph), out_path)


@cli.command()
@click.option("--model", "model_path", required=True, help="Model graph (Turtle).")
@click.option("--ontology", "ontology_path", default=None, help="Ontology Turtle (default: built-in).")
@click.option("--defs", "defs_path", default=None, help="JSON definitions contributing extra inverse pairs.")
@click.option("--out", "out_path", default=None, help="Output Turtle path (default: stdout).")
def infer(model_path: str, ontology_path: str | None, defs_path: str | None, out_path: str | None) -> None:
    """Materialize type closure and inverse relations in a model."""
    model = parse_turtle(_read(model_path))
    ontology = parse_turtle(_read(ontology_path)) if ontology_path else default_ontology()
    extra = ()
    if defs_path:
        extra = load_definition_document(_read(defs_path)).inverse_pairs
    result = materialize(model, ontology, pairs=inverse_pair_table(extra))
    for cls in result.unresolved_classes:
        click.echo(f"warning: unresolved class {cls}", err=True)
    _write(serialize_turtle(result.graph), out_path)


@cli.command("gen-model")
@click.option("--validation", "kind", flag_value="validation", default=True, help="Parameterized floors/offices/units building.")
@click.option("--application", "kind", flag_value="application", help="Fixed two-office sector.")
@click.option("--floors", default=1, show_default=True)
@click.option("--offices", default=5, show_default=True, help="Offices per floor.")
@click.option("--units", default=10, show_default=True, help="Indoor units per office.")
@click.option("--outdoor", default=1, show_default=True, help="Outdoor units per office.")
@click.option("--graph", default="http://example.com/b66#", show_default=True)
@click.option("--prefix", default="b66", show_default=True)
@click.option("--out", "out_path", default=None, help="Output Turtle path (default: stdout).")
def gen_model(
    kind: str,
    floors: int,
    offices: int,
    units: int,
    outdoor: int,
    graph: str,
    prefix: str,
    out_path: str | None,
) -> None:
    """Generate one of the two reference building models."""
    from .vrf import ModelParams, generate_application_model, generate_validation_model

    if kind == "application":
        built = generate_application_model()
    else:
        built = generate_validation_model(
            ModelParams(floors, offices, units, outdoor, graph, prefix)
        )
    _write(serialize_turtle(built), out_path)


@cli.command()
@click.option("--file", "file_path", required=True, help="CSV (id,time,value) or NDJSON rows.")
@click.option("--format", "fmt", type=click.Choice(["csv", "ndjson"]), default=None, help="Default: sniffed from content.")
@_DATA_DIR_OPTION
def ingest(file_path: str, fmt: str | None, data_dir: str | None) -> None:
    """Ingest telemetry rows into the shared series store."""
    state = _state(data_dir)
    report = state.ingest(_read(file_path), fmt)
    click.echo(
        json.dumps(
            {
                "accepted": report.accepted,
                "rejected": report.rejected,
                "errors": [
                    {"row": e.row, "kind": e.kind, "detail": e.detail} for e in report.errors
                ],
            },
            indent=2,
        )
    )


@cli.command()
@click.option("--graph", default=None, help="Default graph when the query has no from clause.")
@click.option("--file", "file_path", default=None, help="Query file (default: stdin).")
@_DATA_DIR_OPTION
def query(graph: str | None, file_path: str | None, data_dir: str | None) -> None:
    """Run a query against a stored model graph; prints SPARQL-JSON."""
    state = _state(data_dir)
    ast = parse_query(_read(file_path))
    try:
        table = evaluate(ast, lambda name: state.materialized(name if name is not None else graph))
    except UnknownGraph:
        effective = ast.dataset if ast.dataset is not None else graph
        raise BrickVrfError(f"no graph named {effective or '<default>'}") from None
    click.echo(results_to_json(table))


@cli.command()
@click.option("--graph", required=True, help="Model graph IRI.")
@click.option("--from", "t0", required=True, help="Window start (ISO 8601 or epoch seconds).")
@click.option("--to", "t1", required=True, help="Window end (ISO 8601 or epoch seconds).")
@click.option("--interval", default=3600, show_default=True, help="Alignment bucket seconds.")
@click.option("--method", type=click.Choice(["linear", "changepoint"]), default="linear", show_default=True)
@click.option("--grid", default=0.5, show_default=True, help="Change-point search step in °C.")
@_DATA_DIR_OPTION
def baseline(
    graph: str,
    t0: str,
    t1: str,
    interval: int,
    method: str,
    grid: float,
    data_dir: str | None,
) -> None:
    """Per-zone energy-baseline report (JSON, same bytes as the HTTP API)."""
    state = _state(data_dir)
    model = state.materialized(graph)
    if model is None:
        raise BrickVrfError(f"no graph named {graph}")
    try:
        window = (parse_timestamp(t0), parse_timestamp(t1))
    except ValueError as exc:
        raise BrickVrfError(str(exc)) from None
    report = baseline_report(model, state.store, window, interval, method, grid, graph_name=graph)
    click.echo(render_report(report))


@cli.command()
@click.option("--port", type=int, default=None, help="Default: $PORT or 8000.")
@click.option("--ontology", "ontology_path", default=None, help="Default: $ONTOLOGY_PATH or built-in.")
@click.option("--ui-dir", default=None, help="Static console bundle served under /ui.")
@click.option("--max-unresolved", type=int, default=None, help="Unresolved-class tolerance for model uploads.")
@_DATA_DIR_OPTION
def serve(
    port: int | None,
    ontology_path: str | None,
    ui_dir: str | None,
    max_unresolved: int | None,
    data_dir: str | None,
) -> None:
    """Run the HTTP server."""
    from .server import run

    run(
        ServerConfig.from_env(
            port=port,
            data_dir=data_dir,
            ontology_path=ontology_path,
            ui_dir=ui_dir,
            max_unresolved=max_unresolved,
        )
    )


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except BrickVrfError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
