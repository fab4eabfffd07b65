/**
 * Pure view-model for the weather panel.
 *
 * The panel shows the building's outside-air temperature stream: the point
 * is discovered with a catalogued query and its readings come straight from
 * the series endpoint. Displayed numbers are the stored samples themselves.
 */

import type { Client } from "./api.js";
import { BRICK, localName } from "./tree.js";

export const OUTSIDE_TEMPERATURE_QUERY =
  `PREFIX brick: <${BRICK}>\n` +
  `SELECT ?point WHERE { ?point a brick:Outside_Air_Temperature_Sensor . }`;

export interface WeatherModel {
  pointIri: string;
  pointLabel: string;
  /** Newest reading, straight from the series response. */
  latest?: { timestamp: number; value: number };
  low?: number;
  high?: number;
  sampleCount: number;
  /** SVG polyline for the sparkline; screen geometry only. */
  sparkline: string;
}

export function weatherModel(
  pointIri: string,
  samples: [number, number][],
  width = 280,
  height = 60,
  pad = 4,
): WeatherModel {
  const model: WeatherModel = {
    pointIri,
    pointLabel: localName(pointIri),
    sampleCount: samples.length,
    sparkline: "",
  };
  if (samples.length === 0) {
    return model;
  }
  const last = samples[samples.length - 1]!;
  model.latest = { timestamp: last[0], value: last[1] };
  const values = samples.map(([, v]) => v);
  model.low = Math.min(...values);
  model.high = Math.max(...values);

  const t0 = samples[0]![0];
  const t1 = last[0];
  const spanT = t1 - t0 || 1;
  const spanV = model.high - model.low || 1;
  model.sparkline = samples
    .map(([t, v]) => {
      const x = pad + ((t - t0) / spanT) * (width - 2 * pad);
      const y = height - pad - ((v - model.low!) / spanV) * (height - 2 * pad);
      return `${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
  return model;
}

/** Find the outside-temperature point in a graph and fetch its readings. */
export async function loadWeather(
  client: Client,
  graph: string,
): Promise<WeatherModel | undefined> {
  const result = await client.query(OUTSIDE_TEMPERATURE_QUERY, graph);
  const first = result.results.bindings[0]?.point;
  if (first === undefined) {
    return undefined;
  }
  const series = await client.series(first.value);
  return weatherModel(first.value, series.samples);
}
