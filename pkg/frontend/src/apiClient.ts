/** Typed client for the workbench HTTP API. The UI never computes pixels
 * itself: every displayed result comes from these endpoints. */

export interface UploadResult {
  id: string;
  width: number;
  height: number;
}

export interface SpectrumResult {
  blob: Blob;
  width: number;
  height: number;
}

export interface PipelineStepDoc {
  op: string;
  in: string | string[];
  out: string;
  params: Record<string, unknown>;
}

export interface PipelineDocument {
  version: number;
  inputs: Record<string, string>;
  steps: PipelineStepDoc[];
  outputs: Record<string, string>;
}

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class WorkbenchClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async raise(response: Response): Promise<never> {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, detail);
  }

  async health(): Promise<boolean> {
    const response = await this.fetchFn(`${this.base}/api/v1/health`);
    return response.ok;
  }

  async uploadImage(data: Blob | ArrayBuffer | Uint8Array): Promise<UploadResult> {
    const response = await this.fetchFn(`${this.base}/api/v1/images`, {
      method: "POST",
      headers: { "content-type": "application/octet-stream" },
      body: data as BodyInit,
    });
    if (!response.ok) await this.raise(response);
    return response.json();
  }

  imageUrl(id: string): string {
    return `${this.base}/api/v1/images/${id}`;
  }

  async fetchImage(id: string): Promise<Blob> {
    const response = await this.fetchFn(this.imageUrl(id));
    if (!response.ok) await this.raise(response);
    return response.blob();
  }

  async fetchSpectrum(id: string, log = true): Promise<SpectrumResult> {
    const response = await this.fetchFn(`${this.imageUrl(id)}/spectrum?log=${log ? 1 : 0}`);
    if (!response.ok) await this.raise(response);
    return {
      blob: await response.blob(),
      width: Number(response.headers.get("X-Spectrum-Width")),
      height: Number(response.headers.get("X-Spectrum-Height")),
    };
  }

  async applyOp(
    id: string,
    op: string,
    params: Record<string, unknown> = {},
    inputs: Record<string, string> = {},
  ): Promise<{ id: string }> {
    const response = await this.fetchFn(`${this.imageUrl(id)}/ops`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ op, params, inputs }),
    });
    if (!response.ok) await this.raise(response);
    return response.json();
  }

  async fourierFilter(id: string, maskPng: Blob, renormalize = true): Promise<{ id: string }> {
    const form = new FormData();
    form.append("mask", maskPng, "mask.png");
    const response = await this.fetchFn(
      `${this.imageUrl(id)}/fourier-filter?renormalize=${renormalize}`,
      { method: "POST", body: form },
    );
    if (!response.ok) await this.raise(response);
    return response.json();
  }

  async exportPipeline(id: string): Promise<PipelineDocument> {
    const response = await this.fetchFn(`${this.imageUrl(id)}/pipeline`);
    if (!response.ok) await this.raise(response);
    return response.json();
  }
}
