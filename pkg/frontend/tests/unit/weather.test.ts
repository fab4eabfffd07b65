import { describe, expect, it } from "vitest";

import { weatherModel } from "../../src/weather.js";

const POINT = "http://x#Outside_Air_Temperature";

describe("weatherModel", () => {
  it("reports an empty stream without readings", () => {
    const model = weatherModel(POINT, []);
    expect(model.pointLabel).toBe("Outside_Air_Temperature");
    expect(model.latest).toBeUndefined();
    expect(model.sampleCount).toBe(0);
    expect(model.sparkline).toBe("");
  });

  it("shows the newest reading and the observed range verbatim", () => {
    const model = weatherModel(POINT, [
      [0, 12.5],
      [3600, 10.0],
      [7200, 17.5],
    ]);
    expect(model.latest).toEqual({ timestamp: 7200, value: 17.5 });
    expect(model.low).toBe(10.0);
    expect(model.high).toBe(17.5);
    expect(model.sampleCount).toBe(3);
  });

  it("draws one sparkline vertex per sample inside the box", () => {
    const samples: [number, number][] = [
      [0, 1],
      [60, 2],
      [120, 3],
      [180, 2],
    ];
    const model = weatherModel(POINT, samples, 280, 60, 4);
    const vertices = model.sparkline.split(" ").map((pair) => {
      const [x, y] = pair.split(",").map(Number);
      return { x: x!, y: y! };
    });
    expect(vertices).toHaveLength(samples.length);
    for (const { x, y } of vertices) {
      expect(x).toBeGreaterThanOrEqual(4);
      expect(x).toBeLessThanOrEqual(276);
      expect(y).toBeGreaterThanOrEqual(4);
      expect(y).toBeLessThanOrEqual(56);
    }
  });

  it("handles a flat series without dividing by zero", () => {
    const model = weatherModel(POINT, [
      [0, 20],
      [60, 20],
    ]);
    expect(model.sparkline).not.toContain("NaN");
    expect(model.low).toBe(20);
    expect(model.high).toBe(20);
  });
});
