import { describe, expect, it } from "vitest";

import { firstLowFitness, fitnessBand, fitnessThresholds } from "../src/colors.js";

describe("fitnessThresholds", () => {
  it("anchors the bands to the upper quartile", () => {
    const fitness = [-3, -3, -3, -3, -3, -3, -8, -8];
    const t = fitnessThresholds(fitness);
    expect(t.high).toBeCloseTo(-3.5, 5);
    expect(t.low).toBeCloseTo(-4.5, 5);
  });

  it("handles empty input", () => {
    const t = fitnessThresholds([]);
    expect(t.low).toBeLessThan(t.high);
  });
});

describe("fitnessBand", () => {
  it("buckets values by the thresholds", () => {
    const t = { low: -4.5, high: -3.5 };
    expect(fitnessBand(-3.0, t)).toBe("good");
    expect(fitnessBand(-4.0, t)).toBe("warn");
    expect(fitnessBand(-6.0, t)).toBe("bad");
  });
});

describe("firstLowFitness", () => {
  it("prefers the server's changepoint estimate", () => {
    expect(firstLowFitness([-3, -9, -9], 2)).toBe(2);
  });

  it("falls back to the first bad-band position", () => {
    const fitness = [-3, -3, -3, -3, -3, -3, -9, -9, -9, -9];
    expect(firstLowFitness(fitness, null)).toBe(6);
  });

  it("returns null when everything reads clean", () => {
    expect(firstLowFitness([-3.1, -3.0, -3.2, -3.1], null)).toBeNull();
  });
});
