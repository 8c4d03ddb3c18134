/** Workbench UI wiring: upload, spectrum mask painting, parameter panel,
 * before/after comparison, history, and pipeline export. All pixel work
 * happens server-side; this file only moves bytes and draws them. */

import { ApiError, WorkbenchClient } from "./apiClient.js";
import type { PipelineDocument } from "./apiClient.js";
import { maxAbsDiff, splitAtDivider } from "./compare.js";
import { MaskGrid } from "./maskGrid.js";
import { SessionHistory } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function canvasContext(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas context unavailable");
  return ctx;
}

class WorkbenchApp {
  private readonly client = new WorkbenchClient("");
  private readonly history = new SessionHistory();
  private mask: MaskGrid | null = null;
  private spectrumBitmap: ImageBitmap | null = null;
  private beforeBitmap: ImageBitmap | null = null;
  private afterBitmap: ImageBitmap | null = null;
  private dividerFraction = 0.5;
  private painting = false;
  private lastPaint: { u: number; v: number } | null = null;
  private queue: Promise<void> = Promise.resolve();

  private readonly compareCanvas = el<HTMLCanvasElement>("compare-canvas");
  private readonly maskCanvas = el<HTMLCanvasElement>("mask-canvas");
  private readonly status = el<HTMLSpanElement>("status");
  private readonly diffReadout = el<HTMLDivElement>("diff-readout");
  private readonly historyList = el<HTMLOListElement>("history");

  constructor() {
    this.bindHeader();
    this.bindMaskPanel();
    this.bindParamPanel();
  }

  /** Serialize actions so at most one request is in flight. */
  private enqueue(action: () => Promise<void>): void {
    this.queue = this.queue.then(action).catch((err) => this.report(err));
  }

  private report(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.status.textContent = message;
    if (err instanceof ApiError && (err.status === 400 || err.status === 413)) {
      window.alert(message);
    }
  }

  private bindHeader(): void {
    el<HTMLInputElement>("file-input").addEventListener("change", (event) => {
      const file = (event.target as HTMLInputElement).files?.[0];
      if (file) this.enqueue(() => this.loadSession(file));
    });
    el<HTMLButtonElement>("export-btn").addEventListener("click", () => {
      this.enqueue(() => this.exportPipeline());
    });
    el<HTMLInputElement>("divider").addEventListener("input", (event) => {
      this.dividerFraction = Number((event.target as HTMLInputElement).value) / 100;
      this.renderCompare();
    });
  }

  private bindMaskPanel(): void {
    this.maskCanvas.addEventListener("pointerdown", (event) => {
      this.painting = true;
      this.lastPaint = null;
      this.paintAt(event);
    });
    this.maskCanvas.addEventListener("pointermove", (event) => {
      if (this.painting) this.paintAt(event);
    });
    window.addEventListener("pointerup", () => {
      this.painting = false;
      this.lastPaint = null;
    });
    el<HTMLButtonElement>("apply-notch").addEventListener("click", () => {
      if (!this.mask) return;
      this.mask.applyAxisNotch(
        Number(el<HTMLInputElement>("notch-halfwidth").value),
        Number(el<HTMLInputElement>("notch-guard").value),
      );
      this.renderMask();
    });
    el<HTMLButtonElement>("clear-mask").addEventListener("click", () => {
      this.mask?.reset(1);
      this.renderMask();
    });
    el<HTMLButtonElement>("apply-filter").addEventListener("click", () => {
      this.enqueue(() => this.applyFilter());
    });
  }

  private bindParamPanel(): void {
    const run = (op: string, params: Record<string, unknown>) =>
      this.enqueue(() => this.applyOp(op, params));

    el<HTMLButtonElement>("op-threshold").addEventListener("click", () => {
      const auto = el<HTMLInputElement>("threshold-auto").checked;
      if (auto) run("otsu", {});
      else run("threshold_binary", { t: Number(el<HTMLInputElement>("threshold-value").value) });
    });
    el<HTMLButtonElement>("op-edges").addEventListener("click", () => {
      run("dipole_edge_map", { radius: Number(el<HTMLInputElement>("edge-radius").value) });
    });
    el<HTMLButtonElement>("op-overlay").addEventListener("click", () => {
      this.enqueue(() => this.applyEdgeOverlay());
    });
    el<HTMLButtonElement>("op-enhance").addEventListener("click", () => {
      const auto = el<HTMLInputElement>("threshold-auto").checked;
      run("enhance_text", {
        t: auto ? null : Number(el<HTMLInputElement>("threshold-value").value),
        radius: Number(el<HTMLInputElement>("edge-radius").value),
        edge_gain: Number(el<HTMLInputElement>("edge-gain").value),
        mix: Number(el<HTMLInputElement>("mix-weight").value),
      });
    });
    el<HTMLButtonElement>("op-basrelief").addEventListener("click", () => run("bas_relief", {}));
    el<HTMLButtonElement>("op-highpass").addEventListener("click", () => {
      run("highpass", {
        cutoff: Number(el<HTMLInputElement>("highpass-cutoff").value),
        softness: Number(el<HTMLInputElement>("highpass-softness").value),
      });
    });
    el<HTMLButtonElement>("op-notch").addEventListener("click", () => {
      run("notch", {
        half_width: Number(el<HTMLInputElement>("notch-halfwidth").value),
        guard_radius: Number(el<HTMLInputElement>("notch-guard").value),
      });
    });
    el<HTMLButtonElement>("op-normalize").addEventListener("click", () => run("normalize", {}));
  }

  private async loadSession(file: File): Promise<void> {
    this.status.textContent = "uploading...";
    const uploaded = await this.client.uploadImage(file);
    this.history.start(uploaded.id);
    this.beforeBitmap = this.afterBitmap = await createImageBitmap(
      await this.client.fetchImage(uploaded.id),
    );
    await this.loadSpectrum();
    el<HTMLButtonElement>("export-btn").disabled = false;
    this.status.textContent = `loaded ${uploaded.width}x${uploaded.height}`;
    this.renderAll();
  }

  private async loadSpectrum(): Promise<void> {
    const id = this.history.currentId;
    if (!id) return;
    const spectrum = await this.client.fetchSpectrum(id, true);
    this.spectrumBitmap = await createImageBitmap(spectrum.blob);
    if (!this.mask || this.mask.width !== spectrum.width || this.mask.height !== spectrum.height) {
      this.mask = new MaskGrid(spectrum.width, spectrum.height);
    }
    this.maskCanvas.width = spectrum.width;
    this.maskCanvas.height = spectrum.height;
    this.renderMask();
  }

  private paintAt(event: PointerEvent): void {
    if (!this.mask) return;
    const rect = this.maskCanvas.getBoundingClientRect();
    const u = Math.round(((event.clientX - rect.left) / rect.width) * this.mask.width);
    const v = Math.round(((event.clientY - rect.top) / rect.height) * this.mask.height);
    const brush = {
      radius: Number(el<HTMLInputElement>("brush-radius").value),
      value: el<HTMLInputElement>("brush-erase").checked ? 0 : 1,
      symmetric: el<HTMLInputElement>("brush-symmetric").checked,
    };
    if (this.lastPaint) {
      this.mask.stroke(this.lastPaint.u, this.lastPaint.v, u, v, brush);
    } else {
      this.mask.stamp(u, v, brush);
    }
    this.lastPaint = { u, v };
    this.renderMask();
  }

  private renderMask(): void {
    if (!this.mask) return;
    const ctx = canvasContext(this.maskCanvas);
    ctx.clearRect(0, 0, this.maskCanvas.width, this.maskCanvas.height);
    if (this.spectrumBitmap) ctx.drawImage(this.spectrumBitmap, 0, 0);
    // tint removed samples red on top of the spectrum view
    const overlay = ctx.getImageData(0, 0, this.mask.width, this.mask.height);
    for (let i = 0; i < this.mask.data.length; i++) {
      const keep = this.mask.data[i];
      if (keep < 1) {
        overlay.data[i * 4] = Math.round(160 + 95 * (1 - keep));
        overlay.data[i * 4 + 1] = Math.round(overlay.data[i * 4 + 1] * keep * 0.5);
        overlay.data[i * 4 + 2] = Math.round(overlay.data[i * 4 + 2] * keep * 0.5);
      }
    }
    ctx.putImageData(overlay, 0, 0);
  }

  private async maskToPng(): Promise<Blob> {
    if (!this.mask) throw new Error("no mask canvas loaded");
    const canvas = document.createElement("canvas");
    canvas.width = this.mask.width;
    canvas.height = this.mask.height;
    const ctx = canvasContext(canvas);
    ctx.putImageData(new ImageData(this.mask.toRGBA(), this.mask.width, this.mask.height), 0, 0);
    return new Promise<Blob>((resolve, reject) => {
      canvas.toBlob((blob) => (blob ? resolve(blob) : reject(new Error("PNG export failed"))), "image/png");
    });
  }

  private async applyFilter(): Promise<void> {
    const id = this.history.currentId;
    if (!id || !this.mask) return;
    this.status.textContent = "filtering...";
    try {
      const result = await this.client.fourierFilter(id, await this.maskToPng());
      await this.advance("fourier_filter", {}, result.id);
    } catch (err) {
      if (err instanceof ApiError && err.status === 422 && /spectrum/.test(err.message)) {
        // canvas out of date: resize to the served dimensions and tell the user
        await this.loadSpectrum();
        this.status.textContent = `mask canvas resized: ${err.message}`;
        return;
      }
      throw err;
    }
  }

  private async applyOp(op: string, params: Record<string, unknown>): Promise<void> {
    const id = this.history.currentId;
    if (!id) return;
    this.status.textContent = `${op}...`;
    const result = await this.client.applyOp(id, op, params);
    await this.advance(op, params, result.id);
  }

  /** Edge overlay needs two inputs: derive the edge map, then darken. */
  private async applyEdgeOverlay(): Promise<void> {
    const id = this.history.currentId;
    if (!id) return;
    const radius = Number(el<HTMLInputElement>("edge-radius").value);
    const gain = Number(el<HTMLInputElement>("edge-gain").value);
    const edges = await this.client.applyOp(id, "dipole_edge_map", { radius });
    this.history.push({ op: "dipole_edge_map", params: { radius }, resultId: edges.id });
    const result = await this.client.applyOp(id, "overlay_edges", { gain }, { edges: edges.id });
    await this.advance("overlay_edges", { gain }, result.id);
  }

  private async advance(op: string, params: Record<string, unknown>, resultId: string): Promise<void> {
    this.history.push({ op, params, resultId });
    this.beforeBitmap = this.afterBitmap;
    this.afterBitmap = await createImageBitmap(await this.client.fetchImage(resultId));
    await this.loadSpectrum();
    this.status.textContent = `${op} done`;
    this.renderAll();
  }

  private renderAll(): void {
    this.renderCompare();
    this.renderHistory();
    void this.renderDiffReadout();
  }

  private renderCompare(): void {
    if (!this.afterBitmap) return;
    const before = this.beforeBitmap ?? this.afterBitmap;
    const width = this.afterBitmap.width;
    const height = this.afterBitmap.height;
    this.compareCanvas.width = width;
    this.compareCanvas.height = height;
    const ctx = canvasContext(this.compareCanvas);
    const { before: left, after: right } = splitAtDivider(width, height, this.dividerFraction);
    if (left.width > 0) {
      ctx.drawImage(before, left.x, left.y, left.width, left.height, left.x, left.y, left.width, left.height);
    }
    if (right.width > 0) {
      ctx.drawImage(this.afterBitmap, right.x, right.y, right.width, right.height, right.x, right.y, right.width, right.height);
    }
    ctx.fillStyle = "#e33";
    ctx.fillRect(left.width - 1, 0, 2, height);
  }

  private async renderDiffReadout(): Promise<void> {
    if (!this.beforeBitmap || !this.afterBitmap) {
      this.diffReadout.textContent = "";
      return;
    }
    if (
      this.beforeBitmap.width !== this.afterBitmap.width ||
      this.beforeBitmap.height !== this.afterBitmap.height
    ) {
      this.diffReadout.textContent = "dimensions changed";
      return;
    }
    const read = (bitmap: ImageBitmap) => {
      const canvas = document.createElement("canvas");
      canvas.width = bitmap.width;
      canvas.height = bitmap.height;
      const ctx = canvasContext(canvas);
      ctx.drawImage(bitmap, 0, 0);
      return ctx.getImageData(0, 0, bitmap.width, bitmap.height).data;
    };
    const diff = maxAbsDiff(read(this.beforeBitmap), read(this.afterBitmap));
    this.diffReadout.textContent = `max |before - after| = ${(diff * 255).toFixed(0)}/255`;
  }

  private renderHistory(): void {
    this.historyList.replaceChildren(
      ...this.history.steps.map((step, index) => {
        const item = document.createElement("li");
        const params = JSON.stringify(step.params);
        item.textContent = `${index + 1}. ${step.op} ${params === "{}" ? "" : params}`;
        return item;
      }),
    );
  }

  private async exportPipeline(): Promise<void> {
    const id = this.history.currentId;
    if (!id) return;
    const doc: PipelineDocument = await this.client.exportPipeline(id);
    if (!this.history.matchesExport(doc)) {
      this.status.textContent = "warning: exported steps differ from the local history";
    }
    const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "pipeline.json";
    link.click();
    URL.revokeObjectURL(link.href);
  }
}

new WorkbenchApp();
