/**
 * End-to-end checks against a live backend started by the global setup,
 * exercising the console exactly through the HTTP surface it deploys
 * against: query, series, baseline analysis, and the static bundle mount.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { beforeAll, describe, expect, inject, it } from "vitest";

import { ApiError, Client, type BaselineReport } from "../../src/api.js";
import { fitCards, scatterGeometry } from "../../src/analysis.js";
import { countLine, tableModel } from "../../src/results.js";
import { countNodes, findNode, loadTree, TREE_QUERIES, type TreeNode } from "../../src/tree.js";
import { loadWeather } from "../../src/weather.js";

const base = inject("baseUrl");
const validationGraph = inject("validationGraph");
const applicationGraph = inject("applicationGraph");
const client = new Client(base);

const HOURS = 96;

describe("server health", () => {
  it("reports both seeded graphs and the telemetry", async () => {
    const health = await client.health();
    expect(health.status).toBe("ok");
    expect(health.graphs).toBe(2);
    expect(health.triples).toBeGreaterThan(0);
    // One outside-temperature row and two meter rows per fixture hour.
    expect(health.samples).toBe(HOURS * 3);
  });
});

describe("query panel", () => {
  it("answers the catalogued floor-units query with the full unit list", async () => {
    const here = dirname(fileURLToPath(import.meta.url));
    const text = readFileSync(
      join(here, "..", "..", "..", "tests", "data", "floor_units_query.rq"),
      "utf8",
    );
    const result = await client.query(text);
    const table = tableModel(result);
    expect(table.columns).toEqual(["VRF_Indoor"]);
    expect(table.rows).toHaveLength(50);
    expect(table.countLine).toBe("Showing 1 to 50 of 50 entries");
    const values = table.rows.map(([cell]) => cell);
    expect(values).toContain(`<${validationGraph}Floor_1_Office_1_VRF_Indoor_2>`);
    expect(new Set(values).size).toBe(50);
  });

  it("surfaces syntax errors with their position", async () => {
    const failure = await client.query("SELECT ?x WHERE {", applicationGraph).then(
      () => null,
      (error: unknown) => error,
    );
    expect(failure).toBeInstanceOf(ApiError);
    const apiError = failure as ApiError;
    expect(apiError.status).toBe(400);
    expect(apiError.body.error).toBe("QuerySyntaxError");
    expect(typeof apiError.body.line).toBe("number");
    expect(typeof apiError.body.column).toBe("number");
    expect(apiError.message).toMatch(/line \d+, column \d+/);
  });

  it("reports an unknown graph as a 404", async () => {
    const failure = await client
      .query("SELECT ?s WHERE { ?s ?p ?o . }", "http://nowhere#")
      .then(
        () => null,
        (error: unknown) => error,
      );
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).status).toBe(404);
    expect((failure as ApiError).body.error).toBe("UnknownGraph");
  });

  it("renders the zero form for an empty result", async () => {
    const result = await client.query(
      "PREFIX brick: <https://brickschema.org/schema/Brick#>\n" +
        "SELECT ?s WHERE { ?s a brick:Chiller . }",
      applicationGraph,
    );
    expect(tableModel(result).countLine).toBe("Showing 0 to 0 of 0 entries");
    expect(countLine(result.results.bindings.length)).toBe("Showing 0 to 0 of 0 entries");
  });
});

describe("entity explorer", () => {
  let roots: TreeNode[];

  beforeAll(async () => {
    roots = await loadTree(client, applicationGraph);
  });

  it("shows three indoor units inside Office_1", () => {
    const office = findNode(roots, applicationGraph + "Office_1");
    expect(office).toBeDefined();
    const units = office!.children.filter((child) => child.kind === "VRF_Indoor");
    expect(units.map((u) => u.label)).toEqual([
      "Office_1_VRF_Indoor_1",
      "Office_1_VRF_Indoor_2",
      "Office_1_VRF_Indoor_3",
    ]);
  });

  it("nests zone points as chartable leaves", () => {
    const zone = findNode(roots, applicationGraph + "Office_1_HVAC");
    expect(zone).toBeDefined();
    expect(zone!.kind).toBe("HVAC_Zone");
    const meter = zone!.children.find((c) => c.label === "Office_1_meter");
    expect(meter).toBeDefined();
    expect(meter!.isPoint).toBe(true);
    expect(meter!.children).toEqual([]);
  });

  it("renders every containment-connected entity exactly once", async () => {
    // Independent count: distinct entities mentioned by the same queries the
    // tree is built from. The sector model is single-parented, so the tree
    // must contain each exactly once.
    const everyone = new Set<string>();
    const typed = await client.query(TREE_QUERIES.types, applicationGraph);
    for (const row of typed.results.bindings) {
      everyone.add(row.s!.value);
    }
    for (const queryText of [
      TREE_QUERIES.partOf,
      TREE_QUERIES.locationOf,
      TREE_QUERIES.hasPoint,
    ]) {
      const result = await client.query(queryText, applicationGraph);
      for (const row of result.results.bindings) {
        everyone.add(row.parent!.value);
        everyone.add(row.child!.value);
      }
    }
    expect(countNodes(roots)).toBe(everyone.size);
  });
});

describe("analysis panel", () => {
  let report: BaselineReport;

  beforeAll(async () => {
    report = await client.baseline({
      graph: applicationGraph,
      window: [0, HOURS * 3600],
      interval: 3600,
      method: "changepoint",
    });
  });

  it("produces one fit card per zone with coefficients verbatim", () => {
    const cards = fitCards(report);
    expect(cards).toHaveLength(2);
    expect(cards.map((c) => c.title)).toEqual(["Office_1_HVAC", "Office_2_HVAC"]);
    for (const card of cards) {
      expect(card.kind).toBe("changepoint");
      expect(card.error).toBeUndefined();
      const fit = report.zones[card.zone]!.fit!;
      const byLabel = new Map(card.fields);
      expect(Object.is(byLabel.get("Base load"), (fit as { base_load: number }).base_load)).toBe(
        true,
      );
      expect(
        Object.is(
          byLabel.get("Breakpoint temp"),
          (fit as { breakpoint_temp: number }).breakpoint_temp,
        ),
      ).toBe(true);
      expect(
        Object.is(byLabel.get("Cooling slope"), (fit as { cooling_slope: number }).cooling_slope),
      ).toBe(true);
      expect(byLabel.get("Samples")).toBe(fit.n);
    }
  });

  it("recovers the generating baselines from the noiseless telemetry", () => {
    const office1 = report.zones[applicationGraph + "Office_1_HVAC"]!.fit!;
    const office2 = report.zones[applicationGraph + "Office_2_HVAC"]!.fit!;
    expect(office1.kind).toBe("changepoint");
    if (office1.kind === "changepoint" && office2.kind === "changepoint") {
      expect(office1.base_load).toBeCloseTo(3.0, 9);
      expect(office1.breakpoint_temp).toBeCloseTo(18.0, 9);
      expect(office1.cooling_slope).toBeCloseTo(0.8, 9);
      expect(office2.base_load).toBeCloseTo(5.0, 9);
      expect(office2.breakpoint_temp).toBeCloseTo(16.0, 9);
      expect(office2.cooling_slope).toBeCloseTo(1.2, 9);
    }
  });

  it("lists the energy meter and outside-temperature points it used", () => {
    const entry = report.zones[applicationGraph + "Office_1_HVAC"]!;
    expect(entry.points[0]).toBe(applicationGraph + "Office_1_meter");
    expect(entry.points[1]).toBe(applicationGraph + "Outside_Air_Temperature");
  });

  it("builds a plottable scatter from the reported pairs", () => {
    const entry = report.zones[applicationGraph + "Office_1_HVAC"]!;
    const geometry = scatterGeometry(entry.pairs!, entry.fit);
    expect(geometry.dots.length).toBe(entry.pairs!.length);
    expect(geometry.curve.split(" ").length).toBe(3);
    for (const dot of geometry.dots) {
      expect(dot.x).toBeGreaterThanOrEqual(0);
      expect(dot.y).toBeLessThanOrEqual(geometry.height);
    }
  });

  it("turns an empty window into per-zone guidance, not a crash", async () => {
    const narrow = await client.baseline({
      graph: applicationGraph,
      window: [0, 0],
      interval: 3600,
      method: "changepoint",
    });
    const cards = fitCards(narrow);
    expect(cards).toHaveLength(2);
    for (const card of cards) {
      expect(card.error).toMatch(/^DegenerateInput/);
      expect(card.guidance).toContain("Widen the analysis window");
    }
  });

  it("rejects a malformed request with a clear error", async () => {
    const failure = await client
      .baseline({ graph: applicationGraph, window: [0] as unknown as [number, number] })
      .then(
        () => null,
        (error: unknown) => error,
      );
    expect(failure).toBeInstanceOf(ApiError);
    expect((failure as ApiError).status).toBe(400);
  });
});

describe("weather panel", () => {
  it("charts the outside-air temperature stream", async () => {
    const weather = await loadWeather(client, applicationGraph);
    expect(weather).toBeDefined();
    expect(weather!.pointIri).toBe(applicationGraph + "Outside_Air_Temperature");
    expect(weather!.sampleCount).toBe(HOURS);

    // The newest displayed reading is the newest stored sample.
    const series = await client.series(weather!.pointIri);
    const last = series.samples[series.samples.length - 1]!;
    expect(weather!.latest).toEqual({ timestamp: last[0], value: last[1] });
    expect(weather!.sparkline.split(" ")).toHaveLength(HOURS);
  });

  it("has no weather for a graph without an outside-temperature point", async () => {
    const weather = await loadWeather(client, validationGraph);
    expect(weather).toBeUndefined();
  });
});

describe("static bundle", () => {
  it("serves the console shell under /ui", async () => {
    const page = await fetch(`${base}/ui/`);
    expect(page.status).toBe(200);
    const html = await page.text();
    expect(html).toContain("<title>Building Console</title>");
    expect(html).toContain("assets/main.js");
  });

  it("serves the compiled entry module", async () => {
    const script = await fetch(`${base}/ui/assets/main.js`);
    expect(script.status).toBe(200);
    const body = await script.text();
    expect(body).toContain("initConsole");
  });
});
