import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore", DeprecationWarning)
    from fastapi.testclient import TestClient

from brickvrf.rdf import serialize_turtle
from brickvrf.server import ServerConfig, create_app
from brickvrf.vrf import APPLICATION_GRAPH, generate_application_model

MODEL_TTL = serialize_turtle(generate_application_model())

CSV = "id,time,value\n" + "\n".join(
    f"{APPLICATION_GRAPH}Office_1_meter,{t * 3600},{5.0 + t}" for t in range(6)
)


@pytest.fixture()
def client(tmp_path):
    app = create_app(ServerConfig(data_dir=str(tmp_path / "data")))
    with TestClient(app) as c:
        yield c


def put_model(client, graph=APPLICATION_GRAPH, body=MODEL_TTL):
    return client.post(
        "/model", params={"graph": graph}, content=body,
        headers={"content-type": "text/turtle"},
    )


def test_healthz(client):
    doc = client.get("/healthz").json()
    assert doc == {"status": "ok", "graphs": 0, "triples": 0, "samples": 0}


def test_model_upload_reports_sizes(client):
    res = put_model(client)
    assert res.status_code == 200
    doc = res.json()
    assert doc["triples"] == 97
    assert doc["entailed"] > doc["triples"]
    assert doc["warnings"] == []


def test_model_syntax_error_gives_400_with_position(client):
    res = put_model(client, body="@prefix broken\n")
    assert res.status_code == 400
    doc = res.json()
    assert doc["error"] == "TurtleSyntaxError"
    assert doc["line"] >= 1 and doc["column"] >= 1


def test_model_unresolved_classes_gives_422(client):
    body = f"<{APPLICATION_GRAPH}x> a <https://brickschema.org/schema/Brick#Nope> ."
    res = put_model(client, body=body)
    assert res.status_code == 422
    doc = res.json()
    assert doc["error"] == "UnresolvedClasses"
    assert doc["unresolved"] == ["https://brickschema.org/schema/Brick#Nope"]


def test_model_unresolved_threshold_can_be_raised(tmp_path):
    app = create_app(ServerConfig(data_dir=str(tmp_path / "d"), max_unresolved=5))
    with TestClient(app) as client:
        body = f"<{APPLICATION_GRAPH}x> a <https://brickschema.org/schema/Brick#Nope> ."
        res = put_model(client, body=body)
        assert res.status_code == 200
        warnings_out = res.json()["warnings"]
        assert len(warnings_out) == 1
        assert "https://brickschema.org/schema/Brick#Nope" in warnings_out[0]


def test_query_endpoint_runs_against_named_graph(client):
    put_model(client)
    query = (
        "PREFIX brick: <https://brickschema.org/schema/Brick#> "
        "SELECT ?z WHERE { ?z a brick:HVAC_Zone . }"
    )
    res = client.post("/query", content=query, headers={"X-Graph": APPLICATION_GRAPH})
    assert res.status_code == 200
    doc = res.json()
    assert doc["head"]["vars"] == ["z"]
    values = [b["z"]["value"] for b in doc["results"]["bindings"]]
    assert values == [
        APPLICATION_GRAPH + "Office_1_HVAC",
        APPLICATION_GRAPH + "Office_2_HVAC",
    ]


def test_query_uses_from_clause_and_404s_on_unknown_graph(client):
    put_model(client)
    ok = client.post(
        "/query",
        content=f"SELECT ?z from <{APPLICATION_GRAPH}> WHERE {{ ?z a ?t . }}",
    )
    assert ok.status_code == 200
    named = client.post(
        "/query", content="SELECT ?z WHERE { ?z a ?t . }", headers={"X-Graph": "http://no/"}
    )
    assert named.status_code == 404
    assert named.json()["graph"] == "http://no/"
    anonymous = client.post("/query", content="SELECT ?z WHERE { ?z a ?t . }")
    assert anonymous.status_code == 404
    assert "X-Graph" in anonymous.json()["message"]


def test_query_error_codes(client):
    put_model(client)
    headers = {"X-Graph": APPLICATION_GRAPH}
    syntax = client.post("/query", content="SELECT WHERE", headers=headers)
    assert syntax.status_code == 400
    assert syntax.json()["error"] == "QuerySyntaxError"
    assert syntax.json()["line"] == 1
    unsupported = client.post(
        "/query", content="SELECT ?x WHERE { ?x a ?y . FILTER }", headers=headers
    )
    assert unsupported.status_code == 400
    assert unsupported.json()["error"] == "UnsupportedFeature"
    assert unsupported.json()["keyword"] == "FILTER"
    unbound = client.post("/query", content="SELECT ?q WHERE { ?x a ?y . }", headers=headers)
    assert unbound.status_code == 400
    assert unbound.json()["error"] == "UnboundProjection"
    assert unbound.json()["var"] == "q"


def test_data_ingest_and_series_roundtrip(client):
    res = client.post("/data", content=CSV, headers={"content-type": "text/csv"})
    assert res.status_code == 200
    assert res.json() == {"accepted": 6, "rejected": 0, "errors": []}
    series = client.get(
        "/series",
        params={"id": APPLICATION_GRAPH + "Office_1_meter", "start": 3600, "end": 7200},
    ).json()
    assert series == {
        "id": APPLICATION_GRAPH + "Office_1_meter",
        "samples": [[3600, 6.0], [7200, 7.0]],
    }


def test_series_end_defaults_to_open(client):
    client.post("/data", content=CSV, headers={"content-type": "text/csv"})
    doc = client.get(
        "/series", params={"id": APPLICATION_GRAPH + "Office_1_meter", "start": 0}
    ).json()
    assert len(doc["samples"]) == 6


def test_series_inverted_range_is_400(client):
    res = client.get("/series", params={"id": "x", "start": 9, "end": 1})
    assert res.status_code == 400


def test_data_partial_reject_gives_207(client):
    bad = CSV + "\nbadid,notatime,1.0"
    res = client.post("/data", content=bad, headers={"content-type": "text/csv"})
    assert res.status_code == 207
    doc = res.json()
    assert doc["accepted"] == 6 and doc["rejected"] == 1
    assert doc["errors"][0]["kind"] == "MalformedTimestamp"


def test_data_sniffs_ndjson_without_content_type(client):
    line = json.dumps({"id": "s", "t": 5, "v": 1.25})
    res = client.post("/data", content=line)
    assert res.status_code == 200 and res.json()["accepted"] == 1


def test_data_corrupt_csv_is_400(client):
    res = client.post("/data", content="not,a,header\n1,2,3", headers={"content-type": "text/csv"})
    assert res.status_code == 400


def ingest_fixture(client):
    from brickvrf.fixtures import application_fixture_csv

    put_model(client)
    res = client.post(
        "/data", content=application_fixture_csv(), headers={"content-type": "text/csv"}
    )
    assert res.status_code == 200


def test_baseline_endpoint_returns_rendered_report(client):
    ingest_fixture(client)
    body = {
        "graph": APPLICATION_GRAPH,
        "window": [0, 96 * 3600],
        "interval": 3600,
        "method": "changepoint",
    }
    res = client.post("/analysis/baseline", json=body)
    assert res.status_code == 200
    doc = json.loads(res.text)
    assert res.text == json.dumps(doc, indent=2, sort_keys=True)
    fits = {k: v["fit"] for k, v in doc["zones"].items()}
    assert len(fits) == 2
    assert all(f["kind"] == "changepoint" for f in fits.values())
    # repeated identical requests return byte-identical bodies
    again = client.post("/analysis/baseline", json=body)
    assert again.text == res.text


def test_baseline_validates_request_body(client):
    ingest_fixture(client)
    res = client.post(
        "/analysis/baseline",
        json={"graph": APPLICATION_GRAPH, "window": [0], "interval": 3600, "method": "linear"},
    )
    assert res.status_code == 400
    res = client.post(
        "/analysis/baseline",
        json={"graph": APPLICATION_GRAPH, "window": [0, 10], "interval": 3600, "method": "x"},
    )
    assert res.status_code == 400
    res = client.post(
        "/analysis/baseline",
        json={"graph": "http://nope/", "window": [0, 10], "interval": 3600, "method": "linear"},
    )
    assert res.status_code == 404


def test_state_survives_restart(tmp_path):
    data_dir = str(tmp_path / "data")
    body = {
        "graph": APPLICATION_GRAPH,
        "window": [0, 96 * 3600],
        "interval": 3600,
        "method": "changepoint",
    }
    with TestClient(create_app(ServerConfig(data_dir=data_dir))) as client:
        ingest_fixture(client)
        first = client.post("/analysis/baseline", json=body).text
        health = client.get("/healthz").json()
    with TestClient(create_app(ServerConfig(data_dir=data_dir))) as client:
        assert client.get("/healthz").json() == health
        assert client.post("/analysis/baseline", json=body).text == first


def test_graph_files_land_under_data_dir(tmp_path):
    data_dir = tmp_path / "data"
    with TestClient(create_app(ServerConfig(data_dir=str(data_dir)))) as client:
        put_model(client)
    files = list((data_dir / "graphs").iterdir())
    assert len(files) == 1 and files[0].suffix == ".ttl"
    assert "%3A" in files[0].name  # IRI is urlencoded into the filename
