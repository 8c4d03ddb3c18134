import { describe, expect, it } from "vitest";

import { MaskGrid } from "./maskGrid.js";

/** Reference enumeration of the parametric axis-notch rule (the same rule
 * the server generator implements): attenuation 0 where the sample sits in
 * the horizontal band |v - cv| <= halfWidth and beyond the guard disc. */
function axisNotchReference(width: number, height: number, halfWidth: number, guard: number): Uint8Array {
  const cu = Math.floor(width / 2);
  const cv = Math.floor(height / 2);
  const out = new Uint8Array(width * height);
  for (let v = 0; v < height; v++) {
    for (let u = 0; u < width; u++) {
      const inBand = Math.abs(v - cv) <= halfWidth;
      const beyondGuard = Math.hypot(u - cu, v - cv) > guard;
      out[v * width + u] = inBand && beyondGuard ? 0 : 255;
    }
  }
  return out;
}

describe("MaskGrid", () => {
  it("starts as the identity mask", () => {
    const grid = new MaskGrid(16, 8);
    expect(grid.data.every((v) => v === 1)).toBe(true);
    expect(grid.toBytes().every((b) => b === 255)).toBe(true);
  });

  it("erasing the whole canvas back to white restores the identity mask", () => {
    const grid = new MaskGrid(8, 8);
    grid.applyAxisNotch(1, 2);
    grid.reset(1);
    expect(grid.toBytes().every((b) => b === 255)).toBe(true);
  });

  it("symmetric stamp also writes the point-reflected twin", () => {
    const grid = new MaskGrid(32, 32);
    grid.stamp(20, 10, { radius: 0, value: 0, symmetric: true });
    expect(grid.get(20, 10)).toBe(0);
    expect(grid.get((32 - 20) % 32, (32 - 10) % 32)).toBe(0);
    // only the stamp and its twin were touched
    let zeros = 0;
    for (const v of grid.data) if (v === 0) zeros++;
    expect(zeros).toBe(2);
  });

  it("keeps point symmetry across arbitrary symmetric strokes", () => {
    const grid = new MaskGrid(24, 18);
    const brush = { radius: 1.5, value: 0, symmetric: true };
    grid.stroke(2, 3, 20, 5, brush);
    grid.stroke(7, 15, 9, 1, brush);
    grid.stamp(0, 0, brush); // Nyquist row/column self-mirrors
    expect(grid.isPointSymmetric()).toBe(true);
  });

  it("asymmetric painting is possible when symmetry is off", () => {
    const grid = new MaskGrid(8, 8);
    grid.stamp(1, 2, { radius: 0, value: 0, symmetric: false });
    expect(grid.isPointSymmetric()).toBe(false);
  });

  // acceptance: a painted axis band serializes to the same 8-bit mask the
  // parametric notch generator produces (within 1/255; here exactly)
  it("painted axis band matches the notch generator sample for sample", () => {
    for (const [w, h, halfWidth, guard] of [
      [32, 32, 1, 4],
      [48, 32, 2, 3],
      [18, 20, 0, 0],
    ] as const) {
      const grid = new MaskGrid(w, h);
      grid.applyAxisNotch(halfWidth, guard);
      expect(grid.isPointSymmetric()).toBe(true);
      const painted = grid.toBytes();
      const reference = axisNotchReference(w, h, halfWidth, guard);
      expect(painted).toEqual(reference);
    }
  });

  it("serialization roundtrips losslessly at 8-bit resolution", () => {
    const grid = new MaskGrid(16, 12);
    grid.stroke(0, 6, 15, 6, { radius: 1.2, value: 0.25, symmetric: true });
    grid.stamp(4, 2, { radius: 2, value: 0.6, symmetric: false });
    // quantize once, then roundtrip must be exact
    const quantized = MaskGrid.fromBytes(16, 12, grid.toBytes());
    const again = MaskGrid.fromBytes(16, 12, quantized.toBytes());
    expect(again.toBytes()).toEqual(quantized.toBytes());
    expect(again.data).toEqual(quantized.data);
  });

  it("stroke covers every step along the segment", () => {
    const grid = new MaskGrid(16, 16);
    grid.stroke(2, 8, 13, 8, { radius: 0, value: 0, symmetric: false });
    for (let u = 2; u <= 13; u++) expect(grid.get(u, 8)).toBe(0);
  });

  it("out-of-bounds stamps are clipped, values clamped", () => {
    const grid = new MaskGrid(4, 4);
    grid.stamp(-3, -3, { radius: 1, value: 0, symmetric: false });
    grid.set(1, 1, 7);
    expect(grid.get(1, 1)).toBe(1);
    grid.set(1, 1, -2);
    expect(grid.get(1, 1)).toBe(0);
  });

  it("rejects byte buffers of the wrong size", () => {
    expect(() => MaskGrid.fromBytes(4, 4, new Uint8Array(3))).toThrow(/16 samples/);
  });

  it("renders grayscale RGBA pixels", () => {
    const grid = new MaskGrid(2, 1);
    grid.set(0, 0, 0);
    const rgba = grid.toRGBA();
    expect(Array.from(rgba)).toEqual([0, 0, 0, 255, 255, 255, 255, 255]);
  });
});
