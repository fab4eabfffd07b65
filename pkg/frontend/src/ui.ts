/**
 * DOM rendering for the console. Each function replaces the contents of a
 * container with markup built from a view-model; no business values are
 * computed here.
 */

import { ApiError, type Health } from "./api.js";
import type { FitCard, ScatterGeometry } from "./analysis.js";
import type { ResultTable } from "./results.js";
import type { TreeNode } from "./tree.js";
import type { WeatherModel } from "./weather.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function clear(container: Element): void {
  container.replaceChildren();
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderHealth(container: Element, health: Health | undefined): void {
  clear(container);
  if (health === undefined) {
    container.append(el("span", "health bad", "server unreachable"));
    return;
  }
  container.append(
    el(
      "span",
      "health ok",
      `${health.status} · ${health.graphs} graphs · ${health.triples} triples · ${health.samples} samples`,
    ),
  );
}

export function renderTree(
  container: Element,
  roots: TreeNode[],
  onPoint: (iri: string) => void,
): void {
  clear(container);
  if (roots.length === 0) {
    container.append(
      el(
        "p",
        "empty-state",
        "No entities yet. Load a model into this graph to populate the explorer.",
      ),
    );
    return;
  }
  const list = (nodes: TreeNode[]): HTMLUListElement => {
    const ul = el("ul", "tree-list");
    for (const node of nodes) {
      const li = el("li", node.isPoint ? "tree-node point" : "tree-node");
      const label = el("span", "tree-label", node.label);
      label.title = node.iri;
      if (node.isPoint) {
        label.tabIndex = 0;
        label.addEventListener("click", () => onPoint(node.iri));
      }
      li.append(label);
      if (node.kind) {
        li.append(el("span", "tree-kind", node.kind));
      }
      if (node.children.length > 0) {
        li.append(list(node.children));
      }
      ul.append(li);
    }
    return ul;
  };
  container.append(list(roots));
}

export function renderError(container: HTMLElement, error: unknown): void {
  clear(container);
  if (error == null) {
    container.hidden = true;
    return;
  }
  container.hidden = false;
  if (error instanceof ApiError) {
    container.append(el("strong", "", `HTTP ${error.status}`), el("span", "", ` ${error.message}`));
  } else {
    container.append(el("span", "", String(error)));
  }
}

export function renderResultTable(
  container: Element,
  countEl: Element,
  table: ResultTable,
): void {
  clear(container);
  countEl.textContent = table.countLine;
  const tbl = el("table", "results-table");
  const head = el("thead");
  const headRow = el("tr");
  for (const column of table.columns) {
    headRow.append(el("th", "", column));
  }
  head.append(headRow);
  tbl.append(head);
  const body = el("tbody");
  for (const row of table.rows) {
    const tr = el("tr");
    for (const cell of row) {
      tr.append(el("td", "", cell));
    }
    body.append(tr);
  }
  tbl.append(body);
  container.append(tbl);
}

export function renderRawJson(container: Element, payload: unknown): void {
  clear(container);
  container.append(el("pre", "raw-json", JSON.stringify(payload, null, 2)));
}

function scatterSvg(geometry: ScatterGeometry): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${geometry.width} ${geometry.height}`);
  svg.setAttribute("class", "scatter");
  for (const dot of geometry.dots) {
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", dot.x.toFixed(2));
    circle.setAttribute("cy", dot.y.toFixed(2));
    circle.setAttribute("r", "2.5");
    circle.setAttribute("class", "scatter-dot");
    svg.append(circle);
  }
  if (geometry.curve) {
    const line = document.createElementNS(SVG_NS, "polyline");
    line.setAttribute("points", geometry.curve);
    line.setAttribute("class", "scatter-curve");
    line.setAttribute("fill", "none");
    svg.append(line);
  }
  return svg;
}

export function renderFitCards(
  container: Element,
  cards: { card: FitCard; geometry?: ScatterGeometry }[],
): void {
  clear(container);
  if (cards.length === 0) {
    container.append(el("p", "empty-state", "No zones found in this graph."));
    return;
  }
  for (const { card, geometry } of cards) {
    const box = el("article", "fit-card");
    const header = el("header");
    header.append(el("h3", "", card.title));
    if (card.kind) {
      header.append(el("span", "fit-kind", card.kind));
    }
    box.append(header);
    if (card.error !== undefined) {
      box.append(el("p", "fit-error", card.error));
      if (card.guidance) {
        box.append(el("p", "fit-guidance", card.guidance));
      }
    } else {
      const dl = el("dl", "fit-fields");
      for (const [label, value] of card.fields) {
        dl.append(el("dt", "", label), el("dd", "", String(value)));
      }
      box.append(dl);
      if (geometry) {
        box.append(scatterSvg(geometry));
      }
    }
    const points = el("p", "fit-points", `Points: ${card.points.map(shortIri).join(", ")}`);
    points.title = card.points.join("\n");
    box.append(points);
    container.append(box);
  }
}

function shortIri(iri: string): string {
  const cut = Math.max(iri.lastIndexOf("#"), iri.lastIndexOf("/"));
  return cut >= 0 ? iri.slice(cut + 1) : iri;
}

export function renderWeather(container: Element, model: WeatherModel | undefined): void {
  clear(container);
  if (model === undefined) {
    container.append(
      el("p", "empty-state", "No outside-air temperature point in this graph."),
    );
    return;
  }
  if (model.latest === undefined) {
    container.append(el("p", "empty-state", `No readings yet for ${model.pointLabel}.`));
    return;
  }
  const current = el("div", "weather-current");
  current.append(el("span", "weather-value", model.latest.value.toString()));
  current.append(el("span", "weather-unit", "°"));
  container.append(current);
  container.append(
    el(
      "p",
      "weather-range",
      `low ${model.low} · high ${model.high} · ${model.sampleCount} readings`,
    ),
  );
  if (model.sparkline) {
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", "0 0 280 60");
    svg.setAttribute("class", "sparkline");
    const line = document.createElementNS(SVG_NS, "polyline");
    line.setAttribute("points", model.sparkline);
    line.setAttribute("fill", "none");
    svg.append(line);
    container.append(svg);
  }
}

export function renderPointChart(
  container: Element,
  iri: string,
  samples: [number, number][],
): void {
  clear(container);
  container.append(el("h3", "", shortIri(iri)));
  if (samples.length === 0) {
    container.append(el("p", "empty-state", "No stored readings for this point."));
    return;
  }
  const values = samples.map(([, v]) => v);
  const low = Math.min(...values);
  const high = Math.max(...values);
  const t0 = samples[0]![0];
  const t1 = samples[samples.length - 1]![0];
  const spanT = t1 - t0 || 1;
  const spanV = high - low || 1;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", "0 0 320 120");
  svg.setAttribute("class", "point-chart");
  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute(
    "points",
    samples
      .map(([t, v]) => {
        const x = 8 + ((t - t0) / spanT) * 304;
        const y = 112 - ((v - low) / spanV) * 104;
        return `${x.toFixed(2)},${y.toFixed(2)}`;
      })
      .join(" "),
  );
  line.setAttribute("fill", "none");
  svg.append(line);
  container.append(svg);
  container.append(
    el("p", "point-stats", `${samples.length} readings · min ${low} · max ${high}`),
  );
}
