"""HTTP service: model upload, semantic query, telemetry, baseline analysis.

State lives under a data directory (`graphs/<urlencoded-iri>.ttl` plus
`series.ndjson`) and is loaded on startup.  Model uploads swap the named
graph atomically, storing both the raw graph and its materialized
fixpoint; queries and analyses only ever see materialized snapshots, so a
concurrent upload never exposes a half-applied model.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, replace
from pathlib import Path
from urllib.parse import quote, unquote

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .analytics import NoOutsideTemperature, baseline_report, render_report
from .errors import BrickVrfError
from .inference import materialize
from .ontology import default_ontology
from .query import (
    QuerySyntaxError,
    UnboundProjection,
    UnknownGraph,
    UnsupportedFeature,
    evaluate,
    parse_query,
    results_to_json,
)
from .rdf import Graph, TurtleSyntaxError, UnknownPrefix, parse_turtle, serialize_turtle
from .timeseries import CorruptFile, IngestReport, InvertedRange, TimeseriesStore, ingest_text


class ModelRejected(BrickVrfError):
    def __init__(self, unresolved: tuple[str, ...], threshold: int):
        self.unresolved = unresolved
        self.threshold = threshold
        super().__init__(
            f"{len(unresolved)} unresolved classes exceed the threshold of {threshold}"
        )


@dataclass(frozen=True)
class ServerConfig:
    port: int = 8000
    data_dir: str = "data"
    ontology_path: str | None = None
    ui_dir: str | None = None
    max_unresolved: int = 0

    @classmethod
    def from_env(cls, **overrides) -> "ServerConfig":
        env = os.environ
        config = cls(
            port=int(env.get("PORT", "8000")),
            data_dir=env.get("DATA_DIR", "data"),
            ontology_path=env.get("ONTOLOGY_PATH"),
            ui_dir=env.get("UI_DIR"),
            max_unresolved=int(env.get("MAX_UNRESOLVED", "0")),
        )
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(config, **overrides)


@dataclass(frozen=True)
class GraphEntry:
    raw: Graph
    materialized: Graph
    unresolved: tuple[str, ...]


class ServerState:
    """Ontology, named model graphs, and the telemetry store.

    Writers (model upload, ingest) serialize per resource; readers work
    on immutable Graph objects and store snapshots, no read lock needed.
    """

    def __init__(self, config: ServerConfig):
        self.config = config
        if config.ontology_path:
            self.ontology = parse_turtle(Path(config.ontology_path).read_text(encoding="utf-8"))
        else:
            self.ontology = default_ontology()
        self.graphs: dict[str, GraphEntry] = {}
        self.store = TimeseriesStore()
        self._model_lock = threading.Lock()
        self._series_lock = threading.Lock()

    # -- persistence layout ---------------------------------------------

    @property
    def _graphs_dir(self) -> Path:
        return Path(self.config.data_dir) / "graphs"

    @property
    def _series_path(self) -> Path:
        return Path(self.config.data_dir) / "series.ndjson"

    def _graph_path(self, iri: str) -> Path:
        return self._graphs_dir / (quote(iri, safe="") + ".ttl")

    def load(self) -> None:
        if self._graphs_dir.is_dir():
            for path in sorted(self._graphs_dir.glob("*.ttl")):
                iri = unquote(path.stem)
                raw = parse_turtle(path.read_text(encoding="utf-8"), name=iri)
                result = materialize(raw, self.ontology)
                unresolved = tuple(c.value for c in result.unresolved_classes)
                self.graphs[iri] = GraphEntry(raw, result.graph, unresolved)
        if self._series_path.is_file():
            self.store = TimeseriesStore.load(str(self._series_path))

    # -- writes ----------------------------------------------------------

    def put_model(self, iri: str, text: str) -> GraphEntry:
        raw = parse_turtle(text, name=iri)
        result = materialize(raw, self.ontology)
        unresolved = tuple(c.value for c in result.unresolved_classes)
        if len(unresolved) > self.config.max_unresolved:
            raise ModelRejected(unresolved, self.config.max_unresolved)
        entry = GraphEntry(raw, result.graph, unresolved)
        with self._model_lock:
            self.graphs[iri] = entry
            self._graphs_dir.mkdir(parents=True, exist_ok=True)
            self._graph_path(iri).write_text(serialize_turtle(raw), encoding="utf-8")
        return entry

    def ingest(self, text: str, fmt: str | None = None) -> IngestReport:
        with self._series_lock:
            report = ingest_text(self.store, text, fmt)
            if report.accepted:
                Path(self.config.data_dir).mkdir(parents=True, exist_ok=True)
                self.store.persist(str(self._series_path))
        return report

    # -- reads -----------------------------------------------------------

    def materialized(self, name: str | None) -> Graph | None:
        if name is None:
            return None
        entry = self.graphs.get(name)
        return entry.materialized if entry else None


def _error(status: int, kind: str, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": kind, "message": message, **extra}, status_code=status)


def create_app(config: ServerConfig | None = None) -> FastAPI:
    state = ServerState(config or ServerConfig.from_env())
    state.load()
    app = FastAPI(title="brickvrf")
    app.state.engine = state

    @app.get("/healthz")
    def healthz() -> dict:
        return {
            "status": "ok",
            "graphs": len(state.graphs),
            "triples": sum(len(e.materialized) for e in state.graphs.values()),
            "samples": state.store.total_samples,
        }

    @app.post("/model")
    async def post_model(request: Request, graph: str) -> Response:
        text = (await request.body()).decode("utf-8")
        try:
            entry = state.put_model(graph, text)
        except TurtleSyntaxError as exc:
            return _error(400, "TurtleSyntaxError", exc.message, line=exc.line, column=exc.column)
        except UnknownPrefix as exc:
            return _error(400, "UnknownPrefix", str(exc), line=exc.line, column=exc.column)
        except ModelRejected as exc:
            return _error(422, "UnresolvedClasses", str(exc), unresolved=list(exc.unresolved))
        return JSONResponse(
            {
                "triples": len(entry.raw),
                "entailed": len(entry.materialized),
                "warnings": [f"unresolved class {c}" for c in entry.unresolved],
            }
        )

    @app.post("/query")
    async def post_query(request: Request) -> Response:
        text = (await request.body()).decode("utf-8")
        default_graph = request.headers.get("X-Graph")
        try:
            ast = parse_query(text)
        except UnsupportedFeature as exc:
            return _error(400, "UnsupportedFeature", str(exc), keyword=exc.keyword)
        except QuerySyntaxError as exc:
            return _error(400, "QuerySyntaxError", exc.message, line=exc.line, column=exc.column)
        except UnknownPrefix as exc:
            return _error(400, "UnknownPrefix", str(exc), line=exc.line, column=exc.column)
        except UnboundProjection as exc:
            return _error(400, "UnboundProjection", str(exc), var=exc.var)
        try:
            table = evaluate(ast, lambda name: state.materialized(name if name is not None else default_graph))
        except UnknownGraph:
            effective = ast.dataset if ast.dataset is not None else default_graph
            if effective is None:
                message = "no graph specified: set an X-Graph header or a FROM clause"
            else:
                message = f"no graph named {effective}"
            return _error(404, "UnknownGraph", message, graph=effective)
        return Response(results_to_json(table), media_type="application/sparql-results+json")

    @app.post("/data")
    async def post_data(request: Request) -> Response:
        text = (await request.body()).decode("utf-8")
        content_type = request.headers.get("content-type", "")
        fmt = None
        if "csv" in content_type:
            fmt = "csv"
        elif "ndjson" in content_type or "json" in content_type:
            fmt = "ndjson"
        try:
            report = state.ingest(text, fmt)
        except CorruptFile as exc:
            return _error(400, "CorruptFile", str(exc), line=exc.line)
        body = {
            "accepted": report.accepted,
            "rejected": report.rejected,
            "errors": [
                {"row": e.row, "kind": e.kind, "detail": e.detail} for e in report.errors
            ],
        }
        return JSONResponse(body, status_code=207 if report.rejected else 200)

    @app.get("/series")
    def get_series(id: str, start: int = 0, end: int = 2**62) -> Response:
        try:
            samples = state.store.range([id], start, end)[id]
        except InvertedRange as exc:
            return _error(400, "InvertedRange", str(exc))
        return JSONResponse({"id": id, "samples": [[s.timestamp, s.value] for s in samples]})

    @app.post("/analysis/baseline")
    async def post_baseline(request: Request) -> Response:
        try:
            doc = await request.json()
        except Exception:
            return _error(400, "BadRequest", "body must be JSON")
        graph = doc.get("graph")
        window = doc.get("window")
        if not isinstance(graph, str):
            return _error(400, "BadRequest", "missing graph")
        if not (isinstance(window, list) and len(window) == 2):
            return _error(400, "BadRequest", "window must be [t0, t1]")
        model = state.materialized(graph)
        if model is None:
            return _error(404, "UnknownGraph", f"no graph named {graph}", graph=graph)
        try:
            report = baseline_report(
                model,
                state.store,
                (int(window[0]), int(window[1])),
                int(doc.get("interval", 3600)),
                doc.get("method", "linear"),
                float(doc.get("grid", 0.5)),
                graph_name=graph,
            )
        except NoOutsideTemperature as exc:
            return _error(422, "NoOutsideTemperature", str(exc))
        except ValueError as exc:
            return _error(400, "BadRequest", str(exc))
        return Response(render_report(report), media_type="application/json")

    ui_dir = state.config.ui_dir
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def run(config: ServerConfig) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host="0.0.0.0", port=config.port)
