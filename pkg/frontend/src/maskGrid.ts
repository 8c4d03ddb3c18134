/**
 * Editable attenuation grid for spectrum mask painting.
 *
 * The grid mirrors the server's DC-centered mask layout: sample (u, v) with
 * u = floor(width / 2), v = floor(height / 2) is DC. Values are attenuation
 * in [0, 1] (1 = keep, 0 = remove). With symmetric painting enabled every
 * write also lands on the point-reflected sample ((W - u) % W, (H - v) % H),
 * which keeps the filtered image real.
 */

export interface Brush {
  radius: number;
  value: number;
  symmetric: boolean;
}

export class MaskGrid {
  readonly width: number;
  readonly height: number;
  readonly data: Float64Array;

  constructor(width: number, height: number, fill = 1) {
    if (width < 1 || height < 1) {
      throw new Error(`mask dimensions must be positive, got ${width}x${height}`);
    }
    this.width = width;
    this.height = height;
    this.data = new Float64Array(width * height).fill(clamp01(fill));
  }

  get centerU(): number {
    return Math.floor(this.width / 2);
  }

  get centerV(): number {
    return Math.floor(this.height / 2);
  }

  clone(): MaskGrid {
    const copy = new MaskGrid(this.width, this.height);
    copy.data.set(this.data);
    return copy;
  }

  get(u: number, v: number): number {
    return this.data[v * this.width + u];
  }

  set(u: number, v: number, value: number, symmetric = false): void {
    if (u < 0 || u >= this.width || v < 0 || v >= this.height) return;
    const clamped = clamp01(value);
    this.data[v * this.width + u] = clamped;
    if (symmetric) {
      const mu = (this.width - u) % this.width;
      const mv = (this.height - v) % this.height;
      this.data[mv * this.width + mu] = clamped;
    }
  }

  reset(value = 1): void {
    this.data.fill(clamp01(value));
  }

  /** Stamp a round brush footprint centered on (u, v). */
  stamp(u: number, v: number, brush: Brush): void {
    const r = Math.max(0, brush.radius);
    const ri = Math.ceil(r);
    for (let dv = -ri; dv <= ri; dv++) {
      for (let du = -ri; du <= ri; du++) {
        if (du * du + dv * dv <= r * r) {
          this.set(u + du, v + dv, brush.value, brush.symmetric);
        }
      }
    }
  }

  /** Stamp along the segment (u0, v0) -> (u1, v1), one stamp per grid step. */
  stroke(u0: number, v0: number, u1: number, v1: number, brush: Brush): void {
    const steps = Math.max(Math.abs(u1 - u0), Math.abs(v1 - v0), 1);
    for (let i = 0; i <= steps; i++) {
      const t = i / steps;
      this.stamp(Math.round(u0 + (u1 - u0) * t), Math.round(v0 + (v1 - v0) * t), brush);
    }
  }

  /**
   * Paint the horizontal-axis notch band: attenuation 0 where
   * |v - centerV| <= halfWidth and the distance from DC exceeds guardRadius.
   * Matches the server-side parametric generator sample for sample.
   */
  applyAxisNotch(halfWidth: number, guardRadius: number): void {
    const cu = this.centerU;
    const cv = this.centerV;
    for (let v = 0; v < this.height; v++) {
      if (Math.abs(v - cv) > halfWidth) continue;
      for (let u = 0; u < this.width; u++) {
        const dist = Math.hypot(u - cu, v - cv);
        if (dist > guardRadius) {
          this.set(u, v, 0, true);
        }
      }
    }
  }

  isPointSymmetric(): boolean {
    for (let v = 0; v < this.height; v++) {
      for (let u = 0; u < this.width; u++) {
        const mu = (this.width - u) % this.width;
        const mv = (this.height - v) % this.height;
        if (this.get(u, v) !== this.get(mu, mv)) return false;
      }
    }
    return true;
  }

  /** Quantize to 8-bit samples (round half away from zero, like the server). */
  toBytes(): Uint8Array {
    const out = new Uint8Array(this.data.length);
    for (let i = 0; i < this.data.length; i++) {
      out[i] = Math.floor(this.data[i] * 255 + 0.5);
    }
    return out;
  }

  static fromBytes(width: number, height: number, bytes: Uint8Array): MaskGrid {
    if (bytes.length !== width * height) {
      throw new Error(`expected ${width * height} samples, got ${bytes.length}`);
    }
    const grid = new MaskGrid(width, height);
    for (let i = 0; i < bytes.length; i++) {
      grid.data[i] = bytes[i] / 255;
    }
    return grid;
  }

  /** Grayscale RGBA pixels for drawing onto a canvas. */
  toRGBA(): Uint8ClampedArray<ArrayBuffer> {
    const bytes = this.toBytes();
    const rgba = new Uint8ClampedArray(new ArrayBuffer(bytes.length * 4));
    for (let i = 0; i < bytes.length; i++) {
      rgba[i * 4] = bytes[i];
      rgba[i * 4 + 1] = bytes[i];
      rgba[i * 4 + 2] = bytes[i];
      rgba[i * 4 + 3] = 255;
    }
    return rgba;
  }
}

function clamp01(value: number): number {
  return Math.min(1, Math.max(0, value));
}
