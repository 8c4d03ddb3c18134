/** Geometry and pixel math for the before/after comparison pane. */

export interface ClipRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

/** Split a pane at a divider fraction: left shows "before", right "after". */
export function splitAtDivider(
  width: number,
  height: number,
  fraction: number,
): { before: ClipRect; after: ClipRect } {
  const f = Math.min(1, Math.max(0, fraction));
  const cut = Math.round(width * f);
  return {
    before: { x: 0, y: 0, width: cut, height },
    after: { x: cut, y: 0, width: width - cut, height },
  };
}

/** Largest per-pixel gray difference between two RGBA buffers, in [0, 1]. */
export function maxAbsDiff(a: Uint8ClampedArray, b: Uint8ClampedArray): number {
  if (a.length !== b.length) {
    throw new Error(`buffer sizes differ: ${a.length} vs ${b.length}`);
  }
  let worst = 0;
  for (let i = 0; i < a.length; i += 4) {
    const diff = Math.abs(a[i] - b[i]);
    if (diff > worst) worst = diff;
  }
  return worst / 255;
}

/** Mean per-pixel gray difference between two RGBA buffers, in [0, 1]. */
export function meanAbsDiff(a: Uint8ClampedArray, b: Uint8ClampedArray): number {
  if (a.length !== b.length) {
    throw new Error(`buffer sizes differ: ${a.length} vs ${b.length}`);
  }
  let total = 0;
  for (let i = 0; i < a.length; i += 4) {
    total += Math.abs(a[i] - b[i]);
  }
  return total / (a.length / 4) / 255;
}
