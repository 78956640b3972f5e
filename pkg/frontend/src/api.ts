import type {
  CampaignWire,
  CompareWire,
  DensityWire,
  ParticipantWire,
  SessionWire,
  StepWire,
  SubmitResultWire,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** What a session runner needs from the API. */
export interface StepApi {
  nextStep(sessionId: string): Promise<StepWire>;
  submitStep(sessionId: string, stepId: string, text: string): Promise<SubmitResultWire>;
}

/** What the researcher dashboard needs from the API. */
export interface FrameApi {
  samplesCsv(campaignId: string, frameIndex: number): Promise<string>;
  heatmapUrl(campaignId: string, frameIndex: number, downsample?: number): string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function fail(res: Response): Promise<never> {
  let detail = res.statusText || "request failed";
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
    // validation errors carry structured detail; keep it readable
    else if (body.detail !== undefined) detail = JSON.stringify(body.detail);
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(res.status, detail);
}

/** Thin typed client; one method per route, no state beyond the base URL. */
export class GazeApi {
  constructor(
    private base: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.base = base.replace(/\/$/, "");
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.base + path, init);
    if (!res.ok) await fail(res);
    return (await res.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.json<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createCampaign(definition: unknown): Promise<CampaignWire> {
    return this.post("/campaigns", definition);
  }

  admitParticipant(screenWidth: number, screenHeight: number): Promise<ParticipantWire> {
    return this.post("/participants", {
      screen_width: screenWidth,
      screen_height: screenHeight,
    });
  }

  openSession(campaignId: string, participantId: string, seed?: number): Promise<SessionWire> {
    const body: Record<string, unknown> = {
      campaign_id: campaignId,
      participant_id: participantId,
    };
    if (seed !== undefined) body.seed = seed;
    return this.post("/sessions", body);
  }

  nextStep(sessionId: string): Promise<StepWire> {
    return this.json(`/sessions/${encodeURIComponent(sessionId)}/next`);
  }

  submitStep(sessionId: string, stepId: string, text: string): Promise<SubmitResultWire> {
    const sid = encodeURIComponent(sessionId);
    const step = encodeURIComponent(stepId);
    return this.post(`/sessions/${sid}/steps/${step}/response`, { text });
  }

  async samplesCsv(campaignId: string, frameIndex: number): Promise<string> {
    const res = await this.fetchFn(
      `${this.base}/campaigns/${encodeURIComponent(campaignId)}/frames/${frameIndex}/samples.csv`,
    );
    if (!res.ok) await fail(res);
    return res.text();
  }

  density(campaignId: string, frameIndex: number, downsample = 1): Promise<DensityWire> {
    const cid = encodeURIComponent(campaignId);
    return this.json(`/campaigns/${cid}/frames/${frameIndex}/density.json?downsample=${downsample}`);
  }

  /** URL for an <img>/fetch of the rendered heatmap; no request is made here. */
  heatmapUrl(campaignId: string, frameIndex: number, downsample = 1): string {
    const cid = encodeURIComponent(campaignId);
    return `${this.base}/campaigns/${cid}/frames/${frameIndex}/heatmap.pgm?downsample=${downsample}`;
  }

  compare(
    campaignId: string,
    frameIndex: number,
    referenceCsv: string,
    downsample = 1,
  ): Promise<CompareWire> {
    const form = new FormData();
    form.append("file", new Blob([referenceCsv], { type: "text/csv" }), "reference.csv");
    const cid = encodeURIComponent(campaignId);
    return this.json(`/campaigns/${cid}/frames/${frameIndex}/compare?downsample=${downsample}`, {
      method: "POST",
      body: form,
    });
  }
}
