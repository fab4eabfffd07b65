/** Console bootstrap: wires the panels to the HTTP client. */

import { Client, SequenceGate } from "./api.js";
import { fitCards, scatterGeometry } from "./analysis.js";
import { tableModel } from "./results.js";
import { loadTree } from "./tree.js";
import { defaultSession } from "./session.js";
import {
  renderError,
  renderFitCards,
  renderHealth,
  renderPointChart,
  renderRawJson,
  renderResultTable,
  renderTree,
  renderWeather,
} from "./ui.js";
import { loadWeather } from "./weather.js";

const APPLICATION_GRAPH = "http://example.com/b6#";

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

function initConsole(): void {
  const client = new Client("");
  const session = defaultSession(APPLICATION_GRAPH);

  const graphInput = must("graph-input") as HTMLInputElement;
  const queryText = must("query-text") as HTMLTextAreaElement;
  const rawToggle = must("raw-toggle") as HTMLInputElement;
  const windowStart = must("window-start") as HTMLInputElement;
  const windowEnd = must("window-end") as HTMLInputElement;
  const intervalInput = must("interval-input") as HTMLInputElement;
  const methodSelect = must("method-select") as HTMLSelectElement;

  graphInput.value = session.graph;
  queryText.value = session.queryText;
  windowStart.value = String(session.analysis.windowStart);
  windowEnd.value = String(session.analysis.windowEnd);
  intervalInput.value = String(session.analysis.interval);
  methodSelect.value = session.analysis.method;

  const queryGate = new SequenceGate();
  const treeGate = new SequenceGate();
  const analysisGate = new SequenceGate();
  let lastQueryPayload: unknown = null;

  const refreshHealth = async () => {
    try {
      renderHealth(must("health"), await client.health());
    } catch {
      renderHealth(must("health"), undefined);
    }
  };

  const refreshTree = async () => {
    const ticket = treeGate.next();
    try {
      const roots = await loadTree(client, session.graph);
      if (treeGate.isCurrent(ticket)) {
        renderTree(must("tree"), roots, showPoint);
        renderError(must("tree-error"), null);
      }
    } catch (error) {
      if (treeGate.isCurrent(ticket)) {
        renderTree(must("tree"), [], showPoint);
        renderError(must("tree-error"), error);
      }
    }
  };

  const refreshWeather = async () => {
    try {
      renderWeather(must("weather"), await loadWeather(client, session.graph));
    } catch {
      renderWeather(must("weather"), undefined);
    }
  };

  const showPoint = async (iri: string) => {
    try {
      const series = await client.series(iri);
      renderPointChart(must("point-chart"), iri, series.samples);
    } catch (error) {
      renderError(must("point-error"), error);
    }
  };

  const runQuery = async () => {
    session.queryText = queryText.value;
    session.showRawJson = rawToggle.checked;
    const ticket = queryGate.next();
    try {
      const result = await client.query(session.queryText, session.graph);
      if (!queryGate.isCurrent(ticket)) {
        return;
      }
      lastQueryPayload = result;
      renderError(must("query-error"), null);
      if (session.showRawJson) {
        must("query-count").textContent = "";
        renderRawJson(must("query-results"), result);
      } else {
        renderResultTable(must("query-results"), must("query-count"), tableModel(result));
      }
    } catch (error) {
      if (queryGate.isCurrent(ticket)) {
        renderError(must("query-error"), error);
      }
    }
  };

  const runAnalysis = async () => {
    session.analysis = {
      windowStart: Number(windowStart.value),
      windowEnd: Number(windowEnd.value),
      interval: Number(intervalInput.value),
      method: methodSelect.value as typeof session.analysis.method,
    };
    const ticket = analysisGate.next();
    try {
      const report = await client.baseline({
        graph: session.graph,
        window: [session.analysis.windowStart, session.analysis.windowEnd],
        interval: session.analysis.interval,
        method: session.analysis.method,
      });
      if (!analysisGate.isCurrent(ticket)) {
        return;
      }
      renderError(must("analysis-error"), null);
      renderFitCards(
        must("fit-cards"),
        fitCards(report).map((card) => ({
          card,
          geometry:
            card.error === undefined
              ? scatterGeometry(report.zones[card.zone]?.pairs ?? [], report.zones[card.zone]?.fit)
              : undefined,
        })),
      );
    } catch (error) {
      if (analysisGate.isCurrent(ticket)) {
        renderError(must("analysis-error"), error);
      }
    }
  };

  must("run-query").addEventListener("click", () => void runQuery());
  must("run-analysis").addEventListener("click", () => void runAnalysis());
  rawToggle.addEventListener("change", () => {
    session.showRawJson = rawToggle.checked;
    if (lastQueryPayload !== null) {
      if (session.showRawJson) {
        must("query-count").textContent = "";
        renderRawJson(must("query-results"), lastQueryPayload);
      } else {
        renderResultTable(
          must("query-results"),
          must("query-count"),
          tableModel(lastQueryPayload as Parameters<typeof tableModel>[0]),
        );
      }
    }
  });
  must("load-graph").addEventListener("click", () => {
    session.graph = graphInput.value.trim();
    void refreshTree();
    void refreshWeather();
  });

  void refreshHealth();
  void refreshTree();
  void refreshWeather();
  setInterval(() => void refreshHealth(), 15000);
}

initConsole();
