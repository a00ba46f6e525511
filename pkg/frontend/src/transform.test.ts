import { describe, expect, it } from "vitest";
import { fitBounds, toScreen, toWorld } from "./transform.js";

describe("viewport transform", () => {
  const bounds: [number, number, number, number] = [0, 0, 10, 8];
  const view = fitBounds(bounds, 840, 640, 10);

  it("maps world corners inside the canvas", () => {
    for (const [x, y] of [
      [0, 0],
      [10, 0],
      [0, 8],
      [10, 8],
    ]) {
      const [sx, sy] = toScreen(view, x, y);
      expect(sx).toBeGreaterThanOrEqual(0);
      expect(sx).toBeLessThanOrEqual(840);
      expect(sy).toBeGreaterThanOrEqual(0);
      expect(sy).toBeLessThanOrEqual(640);
    }
  });

  it("keeps the aspect ratio uniform", () => {
    const [x0] = toScreen(view, 0, 0);
    const [x1] = toScreen(view, 1, 0);
    const [, y0] = toScreen(view, 0, 0);
    const [, y1] = toScreen(view, 0, 1);
    expect(Math.abs(x1 - x0)).toBeCloseTo(Math.abs(y1 - y0), 10);
  });

  it("points y up in world space", () => {
    const [, yLow] = toScreen(view, 5, 0);
    const [, yHigh] = toScreen(view, 5, 8);
    expect(yHigh).toBeLessThan(yLow);
  });

  it("round-trips", () => {
    for (const [x, y] of [
      [0.3, 0.7],
      [9.9, 7.2],
      [5, 4],
    ]) {
      const [sx, sy] = toScreen(view, x, y);
      const [wx, wy] = toWorld(view, sx, sy);
      expect(wx).toBeCloseTo(x, 9);
      expect(wy).toBeCloseTo(y, 9);
    }
  });

  it("rejects empty bounds", () => {
    expect(() => fitBounds([0, 0, 0, 5], 100, 100)).toThrow();
  });
});
