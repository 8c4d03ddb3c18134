/** Local mirror of the session's step history. The authoritative chain
 * lives server-side; this list only drives the history panel and is checked
 * against the exported pipeline before download. */

import type { PipelineDocument } from "./apiClient.js";

export interface SessionStep {
  op: string;
  params: Record<string, unknown>;
  resultId: string;
}

export class SessionHistory {
  private rootId: string | null = null;
  readonly steps: SessionStep[] = [];

  get currentId(): string | null {
    if (this.steps.length > 0) return this.steps[this.steps.length - 1].resultId;
    return this.rootId;
  }

  get empty(): boolean {
    return this.rootId === null;
  }

  start(rootId: string): void {
    this.rootId = rootId;
    this.steps.length = 0;
  }

  push(step: SessionStep): void {
    if (this.rootId === null) {
      throw new Error("no session root loaded");
    }
    this.steps.push(step);
  }

  /**
   * True when an exported pipeline lists exactly this history's operations,
   * in order, ending at the current image.
   */
  matchesExport(doc: PipelineDocument): boolean {
    if (doc.steps.length !== this.steps.length) return false;
    return doc.steps.every((step, i) => step.op === this.steps[i].op);
  }
}
