/**
 * Pure view-model for the baseline-analysis panel.
 *
 * Fit cards carry the server's coefficients through verbatim: each value is
 * the JSON number from the response, never recomputed. The only arithmetic
 * here maps data coordinates onto SVG pixels for the scatter plot.
 */

import type { BaselineReport, Fit, ZoneEntry } from "./api.js";
import { localName } from "./tree.js";

export interface FitCard {
  zone: string;
  title: string;
  points: string[];
  /** Label/value pairs in display order; values are response numbers verbatim. */
  fields: [string, number][];
  kind?: Fit["kind"];
  error?: string;
  guidance?: string;
}

const FIELD_ORDER: Record<Fit["kind"], [string, keyof LinearLike | keyof ChangeLike][]> = {
  linear: [
    ["Intercept", "intercept"],
    ["Slope", "slope"],
    ["Samples", "n"],
    ["SSE", "sse"],
    ["R²", "r_squared"],
  ],
  changepoint: [
    ["Base load", "base_load"],
    ["Breakpoint temp", "breakpoint_temp"],
    ["Cooling slope", "cooling_slope"],
    ["Samples", "n"],
    ["SSE", "sse"],
    ["R²", "r_squared"],
  ],
};

interface LinearLike {
  intercept: number;
  slope: number;
  n: number;
  sse: number;
  r_squared: number;
}

interface ChangeLike {
  base_load: number;
  breakpoint_temp: number;
  cooling_slope: number;
  n: number;
  sse: number;
  r_squared: number;
}

export function guidanceFor(error: string): string {
  if (error.startsWith("DegenerateInput")) {
    return (
      "Too little variation in the aligned data to fit a model. " +
      "Widen the analysis window or choose a shorter interval so more " +
      "energy and temperature readings line up."
    );
  }
  if (error === "NoEnergyMeter") {
    return "This zone has no energy meter point in the model, so there is nothing to fit.";
  }
  return "The server could not fit this zone.";
}

export function fitCard(zone: string, entry: ZoneEntry): FitCard {
  const card: FitCard = {
    zone,
    title: localName(zone),
    points: entry.points,
    fields: [],
  };
  if (entry.fit !== undefined) {
    const fit = entry.fit;
    card.kind = fit.kind;
    card.fields = FIELD_ORDER[fit.kind].map(([label, key]) => [
      label,
      (fit as unknown as Record<string, number>)[key]!,
    ]);
  } else {
    card.error = entry.error ?? "unknown error";
    card.guidance = guidanceFor(card.error);
  }
  return card;
}

export function fitCards(report: BaselineReport): FitCard[] {
  return Object.entries(report.zones)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([zone, entry]) => fitCard(zone, entry));
}

/** Evaluate the fitted curve at one temperature, for plotting only. */
export function fitValue(fit: Fit, temp: number): number {
  if (fit.kind === "linear") {
    return fit.intercept + fit.slope * temp;
  }
  return fit.base_load + fit.cooling_slope * Math.max(0, temp - fit.breakpoint_temp);
}

export interface ScatterGeometry {
  width: number;
  height: number;
  /** Screen positions of the (temperature, energy) pairs. */
  dots: { x: number; y: number }[];
  /** SVG polyline points for the fitted curve, "" without a fit. */
  curve: string;
  xDomain: [number, number];
  yDomain: [number, number];
}

/**
 * Map (temperature, energy) pairs into an SVG viewport. The fitted curve is
 * sampled at the domain edges plus the breakpoint so a changepoint model
 * renders as its two straight segments.
 */
export function scatterGeometry(
  pairs: [number, number][],
  fit: Fit | undefined,
  width = 320,
  height = 180,
  pad = 12,
): ScatterGeometry {
  const xs = pairs.map(([t]) => t);
  const ys = pairs.map(([, e]) => e);
  if (fit !== undefined) {
    for (const x of xs.length > 0 ? [Math.min(...xs), Math.max(...xs)] : []) {
      ys.push(fitValue(fit, x));
    }
  }
  const xDomain: [number, number] =
    xs.length > 0 ? [Math.min(...xs), Math.max(...xs)] : [0, 1];
  const yDomain: [number, number] =
    ys.length > 0 ? [Math.min(...ys), Math.max(...ys)] : [0, 1];
  const spanX = xDomain[1] - xDomain[0] || 1;
  const spanY = yDomain[1] - yDomain[0] || 1;
  const toX = (t: number) => pad + ((t - xDomain[0]) / spanX) * (width - 2 * pad);
  const toY = (e: number) => height - pad - ((e - yDomain[0]) / spanY) * (height - 2 * pad);

  const dots = pairs.map(([t, e]) => ({ x: toX(t), y: toY(e) }));

  let curve = "";
  if (fit !== undefined && xs.length > 0) {
    const stops = [xDomain[0], xDomain[1]];
    if (
      fit.kind === "changepoint" &&
      fit.breakpoint_temp > xDomain[0] &&
      fit.breakpoint_temp < xDomain[1]
    ) {
      stops.splice(1, 0, fit.breakpoint_temp);
    }
    curve = stops
      .map((t) => `${toX(t).toFixed(2)},${toY(fitValue(fit, t)).toFixed(2)}`)
      .join(" ");
  }

  return { width, height, dots, curve, xDomain, yDomain };
}
